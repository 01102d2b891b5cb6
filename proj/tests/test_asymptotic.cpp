// SPDX-License-Identifier: Apache-2.0
//
// rtri-mimo: training-based MIMO links with residual transmit RF impairments
// Copyright (C) 2026 The rtri-mimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rtri/asymptotic.hpp"
#include "rtri/montecarlo.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace rtri;
using Catch::Approx;

namespace {

constexpr ReceiverKind kAll[] = {ReceiverKind::ZF, ReceiverKind::MRC, ReceiverKind::MMSE};

// Mean per-stream SINR over Gaussian normalized estimates, i.e. exactly the
// random-matrix model the deterministic equivalents describe.
double gaussian_mean_sinr(ReceiverKind r, int nt, int nr, double c1, double delta, int trials, RandomStream rs)
{
    ComplexMatrix hbar(nr, nt);
    std::vector<double> out(static_cast<std::size_t>(nt));
    double acc = 0.0;
    for (int i = 0; i < trials; ++i) {
        rs.fill_complex_normal(hbar);
        sinr_from_estimate(r, hbar, c1 * nt, delta, out);
        for (double v : out) acc += v;
    }
    return acc / (static_cast<double>(trials) * nt);
}

} // namespace

TEST_CASE("deterministic SINR reference values", "[asymptotic]")
{
    const AsymptoticParams ap = asymptotic_params(2.0, 0.21, 0.0);
    CHECK(ap.d == Approx(-0.79).epsilon(1e-14));
    CHECK(det_sinr(ReceiverKind::ZF, ap, 0.0) == Approx(1 / 0.21).epsilon(1e-14));
    CHECK(det_sinr(ReceiverKind::ZF, ap, 0.0) == Approx(4.7619).margin(1e-4));
    CHECK(det_sinr(ReceiverKind::MRC, ap, 0.0) == Approx(2 / 1.21).epsilon(1e-14));
    CHECK(det_sinr(ReceiverKind::MRC, ap, 0.0) == Approx(1.6529).margin(1e-4));
    CHECK(det_sinr(ReceiverKind::MMSE, ap, 0.0) == Approx((0.79 + std::sqrt(0.6241 + 1.68)) / 0.42).epsilon(1e-14));
    // The four-decimal reference was produced with sqrt(2.3041) rounded to 1.51796.
    CHECK(det_sinr(ReceiverKind::MMSE, ap, 0.0) == Approx(5.4952).margin(2e-4));

    const SystemConfig cfg{32, 64, 500, 32, 10.0, 0.0};
    const AsymptoticParams from_cfg = asymptotic_params(cfg);
    CHECK(from_cfg.beta == 2.0);
    CHECK(from_cfg.c1 == Approx(0.21).epsilon(1e-14));
    CHECK(from_cfg.epsilon_bar == Approx(10.0).epsilon(1e-14));
    CHECK(det_rate(ReceiverKind::ZF, cfg) == Approx((1 - 32.0 / 500) * 32 * std::log2(1 + 1 / 0.21)).epsilon(1e-14));
    CHECK(det_rate(ReceiverKind::ZF, cfg) == Approx(75.67).margin(0.01));
}

TEST_CASE("ZF boundary at unit antenna ratio", "[asymptotic]")
{
    CHECK(det_sinr(ReceiverKind::ZF, asymptotic_params(1.0 + 1e-9, 0.3, 0.0), 0.0) <= 1e-8);
    try {
        det_sinr(ReceiverKind::ZF, asymptotic_params(1.0, 0.3, 0.0), 0.0);
        FAIL("expected zf-beta-one");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZfBetaOne);
    }
    CHECK_NOTHROW(det_sinr(ReceiverKind::MMSE, asymptotic_params(1.0, 0.3, 0.1), 0.1));
}

TEST_CASE("large antenna ratio limit", "[asymptotic]")
{
    const double delta = 0.1;
    const double c1 = derive_params({8, 8, 500, 8, 10.0, delta}).c1;
    for (ReceiverKind r : kAll)
        CHECK(std::abs(det_sinr(r, asymptotic_params(1e6, c1, delta), delta) / 100.0 - 1.0) <= 1e-3);
    CHECK(det_sinr_limit(0.1) == Approx(100.0).epsilon(1e-14));
    CHECK(det_sinr_limit(0.05) == Approx(400.0).epsilon(1e-14));
    CHECK(std::log2(1 + det_sinr_limit(0.1)) == Approx(6.658).margin(1e-3));
    CHECK_THROWS_AS(det_sinr_limit(0.0), Error);
}

TEST_CASE("MMSE closed root solves the fixed point", "[asymptotic][property]")
{
    RandomStream rs(21, 0);
    for (int i = 0; i < 200; ++i) {
        const double beta = 1.0 + 10 * rs.uniform();
        const double c1 = std::exp(std::log(1e-3) + rs.uniform() * std::log(1e5));
        const double delta = 0.2 * rs.uniform();
        const AsymptoticParams ap = asymptotic_params(beta, c1, delta);
        const double m = mmse_fixed_point(ap, delta);
        const double d2 = delta * delta;
        REQUIRE(m / (1 + d2 + d2 * m) == Approx(det_sinr(ReceiverKind::MMSE, ap, delta)).epsilon(1e-8));
    }
}

TEST_CASE("MMSE equivalent matches Gaussian random-matrix simulation", "[asymptotic]")
{
    const int nt = 64, nr = 128;
    for (double delta : {0.0, 0.1, 0.3}) {
        const SystemConfig cfg{nt, nr, 500, nt, 10.0, delta};
        const AsymptoticParams ap = asymptotic_params(cfg);
        const double mc = gaussian_mean_sinr(ReceiverKind::MMSE, nt, nr, ap.c1, delta, 300, RandomStream(22, 0));
        CHECK(std::abs(det_sinr(ReceiverKind::MMSE, ap, delta) / mc - 1.0) <= 0.01);
    }
    // The root with q = c1 in the denominator but not under the square root
    // misses the simulation once delta is large.
    const SystemConfig cfg{nt, nr, 500, nt, 10.0, 0.3};
    const AsymptoticParams ap = asymptotic_params(cfg);
    const double d2 = 0.09;
    const double m = (-ap.d + std::sqrt(ap.d * ap.d + 4 * ap.beta * ap.c1 / (1 + d2))) / (2 * ap.c1);
    const double literal = m / (1 + d2 + d2 * m);
    const double mc = gaussian_mean_sinr(ReceiverKind::MMSE, nt, nr, ap.c1, 0.3, 300, RandomStream(22, 1));
    CHECK(std::abs(literal / mc - 1.0) > 0.03);
}

TEST_CASE("ZF and MRC equivalents match Gaussian random-matrix simulation", "[asymptotic]")
{
    // Finite-size bias is O(1/nt) (e.g. E[1/[G^-1]_kk] = nr - nt + 1 for ZF), so use a larger array.
    const SystemConfig cfg{128, 256, 500, 128, 10.0, 0.1};
    const AsymptoticParams ap = asymptotic_params(cfg);
    for (ReceiverKind r : {ReceiverKind::ZF, ReceiverKind::MRC}) {
        const double mc = gaussian_mean_sinr(r, 128, 256, ap.c1, 0.1, 100, RandomStream(23, 0));
        CHECK(std::abs(det_sinr(r, ap, 0.1) / mc - 1.0) <= 0.02);
    }
}

TEST_CASE("receiver ordering and the wall", "[asymptotic][property]")
{
    RandomStream rs(24, 0);
    for (int i = 0; i < 500; ++i) {
        const double beta = 1.0 + 1e-6 + 20 * rs.uniform();
        const double c1 = std::exp(std::log(1e-3) + rs.uniform() * std::log(1e4));
        const double delta = 0.01 + 0.2 * rs.uniform();
        const AsymptoticParams ap = asymptotic_params(beta, c1, delta);
        const double zf = det_sinr(ReceiverKind::ZF, ap, delta);
        const double mrc = det_sinr(ReceiverKind::MRC, ap, delta);
        const double mmse = det_sinr(ReceiverKind::MMSE, ap, delta);
        REQUIRE(zf >= 0.0);
        REQUIRE(mmse >= zf * (1 - 1e-12));
        REQUIRE(mmse >= mrc * (1 - 1e-12));
        REQUIRE(mmse < 1.0 / (delta * delta));
        REQUIRE(zf < 1.0 / (delta * delta));
        REQUIRE(mrc < 1.0 / (delta * delta));
    }
}

TEST_CASE("deterministic rate in the training length", "[asymptotic]")
{
    for (ReceiverKind r : kAll)
        for (double delta : {0.0, 0.1}) {
            SystemConfig cfg{8, 32, 500, 8, 100.0, delta};
            std::vector<double> v;
            for (int tp = 8; tp < 500; ++tp) {
                cfg.tp = tp;
                v.push_back(det_rate(r, cfg));
            }
            for (std::size_t i = 1; i + 1 < v.size(); ++i)
                REQUIRE(v[i + 1] - 2 * v[i] + v[i - 1] <= 1e-9 * v[i]);
            cfg.tp = 500;
            CHECK(det_rate(r, cfg) == 0.0);
        }
}

TEST_CASE("random-matrix lemma harness", "[asymptotic]")
{
    CHECK(rmt_lemma_check(Lemma::Inversion, 8, RandomStream(25, 0)).max_deviation <= 1e-10);
    CHECK(rmt_lemma_check(Lemma::Inversion, 256, RandomStream(25, 1), 5).max_deviation <= 1e-10);
    CHECK(rmt_lemma_check(Lemma::Stieltjes, 32, RandomStream(25, 2)).max_deviation <= 1e-10);
    CHECK(rmt_lemma_check(Lemma::Stieltjes, 256, RandomStream(25, 3), 3).max_deviation <= 1e-10);
    const LemmaReport trace = rmt_lemma_check(Lemma::Trace, 256, RandomStream(25, 4), 100);
    CHECK(trace.max_deviation <= 0.2);
    CHECK(trace.draws == 100);
    const LemmaReport rank1 = rmt_lemma_check(Lemma::Rank1, 64, RandomStream(25, 5), 1000);
    CHECK(rank1.violations == 0);
    CHECK(rank1.draws == 1000);
    CHECK(rank1.max_deviation <= 1.0);

    for (Lemma l : {Lemma::Inversion, Lemma::Trace, Lemma::Rank1, Lemma::Stieltjes})
        CHECK(lemma_from_string(to_string(l)) == l);
    CHECK_THROWS_AS(lemma_from_string("wishart"), Error);
    CHECK_THROWS_AS(rmt_lemma_check(Lemma::Trace, 1, RandomStream(1, 1)), Error);
}
