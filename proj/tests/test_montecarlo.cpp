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

#include "rtri/analytic.hpp"
#include "rtri/montecarlo.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

using namespace rtri;
using Catch::Approx;

namespace {

constexpr ReceiverKind kAll[] = {ReceiverKind::ZF, ReceiverKind::MRC, ReceiverKind::MMSE};

// SINR samples from the explicit training chain: draw, estimate, normalize, combine.
std::vector<double> explicit_chain_sinr(const SystemConfig& cfg, ReceiverKind r, long trials, RandomStream rs)
{
    const DerivedParams p = derive_params(cfg);
    const ComplexMatrix sp = gen_pilot_matrix(cfg.nt, cfg.tp);
    std::vector<double> out(static_cast<std::size_t>(trials * cfg.nt));
    for (long i = 0; i < trials; ++i) {
        const TrainingDraw d = simulate_training(cfg, rs);
        const ComplexMatrix hbar = lmmse_estimate(d.yp, sp, cfg) / std::sqrt(p.sigma2_est);
        sinr_from_estimate(r, hbar, p.c0, cfg.delta, std::span<double>(out.data() + i * cfg.nt, cfg.nt));
    }
    return out;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

} // namespace

TEST_CASE("pilot matrices are orthogonal", "[montecarlo]")
{
    for (auto [nt, tp] : {std::pair{4, 4}, {1, 8}, {4, 6}, {8, 13}, {32, 500}}) {
        const ComplexMatrix sp = gen_pilot_matrix(nt, tp);
        REQUIRE(sp.rows() == nt);
        REQUIRE(sp.cols() == tp);
        CHECK((sp * sp.adjoint() - tp * ComplexMatrix::Identity(nt, nt)).norm() <= 1e-12 * std::max(1, tp / 8));
    }
    const ComplexMatrix row = gen_pilot_matrix(1, 8);
    for (int j = 0; j < 8; ++j) CHECK(std::abs(row(0, j)) == Approx(1.0).epsilon(1e-15));
    try {
        gen_pilot_matrix(4, 3);
        FAIL("expected infeasible-pilot");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfeasiblePilot);
    }
}

TEST_CASE("noiseless ideal training", "[montecarlo]")
{
    const SystemConfig cfg{3, 5, 50, 6, 20.0, 0.0};
    RandomStream rs(1, 0);
    const TrainingDraw d = simulate_training(cfg, rs, {.zero_noise = true});
    CHECK((d.yp - std::sqrt(cfg.rho / cfg.nt) * d.h * d.sp).norm() <= 1e-12);
    CHECK(d.delta_p.norm() == 0.0);

    SystemConfig hi{4, 4, 50, 4, 1e10, 0.0};
    RandomStream rs2(2, 0);
    const TrainingDraw e = simulate_training(hi, rs2, {.zero_noise = true});
    const ComplexMatrix est = lmmse_estimate(e.yp, e.sp, hi);
    CHECK((est - e.h).norm() / e.h.norm() <= 1e-8);
}

TEST_CASE("impairment draws have the model statistics", "[montecarlo]")
{
    const double delta = 0.15;
    const SystemConfig cfg{4, 1, 251, 250, 10.0, delta};
    RandomStream rs(3, 0);
    double power = 0.0;
    cdouble lag = 0.0;
    long n = 0, m = 0;
    while (n < 1000000) {
        const TrainingDraw d = simulate_training(cfg, rs);
        power += d.delta_p.squaredNorm();
        n += d.delta_p.size();
        for (int t = 0; t + 1 < cfg.tp; ++t) {
            lag += d.delta_p.col(t).dot(d.delta_p.col(t + 1));
            m += cfg.nt;
        }
    }
    const double d2 = delta * delta;
    CHECK(std::abs(power / n - d2) <= 3 * d2 / 1e3);
    CHECK(std::abs(lag) / m / d2 <= 3.0 / 1e3);
}

TEST_CASE("LMMSE estimator matches the explicit formula", "[montecarlo]")
{
    const SystemConfig cfg{3, 4, 40, 5, 7.0, 0.12};
    RandomStream rs(4, 0);
    const TrainingDraw d = simulate_training(cfg, rs);
    const double a2 = cfg.rho / cfg.nt;
    const ComplexMatrix sys = a2 * d.sp.adjoint() * d.sp +
                              (cfg.delta * cfg.delta * cfg.rho + 1) * ComplexMatrix::Identity(cfg.tp, cfg.tp);
    const ComplexMatrix direct = std::sqrt(a2) * d.yp * sys.inverse() * d.sp.adjoint();
    CHECK((lmmse_estimate(d.yp, d.sp, cfg) - direct).norm() <= 1e-12 * direct.norm());
}

TEST_CASE("empirical NMSE matches the analytic value", "[montecarlo]")
{
    const RandomStream rs(5, 0);
    const double a = empirical_nmse({4, 4, 100, 4, 10.0, 0.0}, 100000, rs);
    CHECK(std::abs(a - 1.0 / 11) <= 0.01 / 11);
    const double b = empirical_nmse({4, 4, 100, 4, 1e6, 0.1}, 100000, rs);
    CHECK(std::abs(b - 1.0 / 101) <= 0.02 / 101);
}

TEST_CASE("empirical NMSE decreases with training length", "[montecarlo][property]")
{
    const long trials = 100000;
    double prev = 1.0;
    for (int tp = 4; tp <= 16; ++tp) {
        const SystemConfig cfg{4, 4, 100, tp, 10.0, 0.1};
        const double v = empirical_nmse(cfg, trials, RandomStream(6, static_cast<std::uint64_t>(tp)));
        // Per-entry errors are Gaussian, so the NMSE estimate has relative sd 1 / sqrt(entries).
        const double sigma = v / std::sqrt(static_cast<double>(trials) * cfg.nt * cfg.nr);
        CHECK(v < prev + 3 * sigma);
        prev = v;
    }
}

TEST_CASE("fast sampler matches the explicit training chain", "[montecarlo]")
{
    for (double delta : {0.0, 0.1}) {
        const SystemConfig cfg{4, 6, 200, 5, 30.0, delta};
        for (ReceiverKind r : kAll) {
            const auto fast = sample_sinr(cfg, r, 20000, RandomStream(7, 0));
            const auto slow = explicit_chain_sinr(cfg, r, 20000, RandomStream(7, 1));
            CHECK(two_sample_ks(fast.samples, slow) <= 0.02);
        }
    }
}

TEST_CASE("SINR samples respect the wall", "[montecarlo]")
{
    const SystemConfig cfg{4, 8, 200, 4, 1e4, 0.1};
    const ReceiverKind rx[] = {ReceiverKind::ZF, ReceiverKind::MRC, ReceiverKind::MMSE};
    const auto sets = sample_sinr_multi(cfg, rx, 25000, RandomStream(8, 0));
    for (const auto& s : sets) {
        REQUIRE(s.samples.size() == 100000);
        CHECK(*std::max_element(s.samples.begin(), s.samples.end()) < 100.0);
        CHECK(*std::min_element(s.samples.begin(), s.samples.end()) >= 0.0);
    }
}

TEST_CASE("ZF empirical CDF at 1/c0", "[montecarlo]")
{
    const SystemConfig cfg{5, 5, 200, 5, 1e3, 0.0};
    const auto s = sample_sinr(cfg, ReceiverKind::ZF, 20000, RandomStream(9, 0));
    const double c0 = derive_params(cfg).c0;
    CHECK(std::abs(empirical_outage(s, 1.0 / c0) - (1 - std::exp(-1.0))) <= 0.01);
}

TEST_CASE("MMSE SINR dominates ZF on every draw", "[montecarlo]")
{
    for (double delta : {0.0, 0.1}) {
        const SystemConfig cfg{4, 6, 200, 4, 100.0, delta};
        const ReceiverKind rx[] = {ReceiverKind::ZF, ReceiverKind::MMSE};
        const auto sets = sample_sinr_multi(cfg, rx, 5000, RandomStream(10, 0));
        for (std::size_t i = 0; i < sets[0].samples.size(); ++i)
            REQUIRE(sets[1].samples[i] >= sets[0].samples[i] * (1 - 1e-12));
    }
}

TEST_CASE("SINR closed forms equal the quadratic-form definition", "[montecarlo]")
{
    CHECK(validate_sinr_end_to_end({4, 6, 200, 5, 10.0, 0.1}, ReceiverKind::MMSE, 200, RandomStream(11, 0)) <= 1e-8);
    CHECK(validate_sinr_end_to_end({3, 3, 200, 3, 100.0, 0.175}, ReceiverKind::MMSE, 200, RandomStream(11, 1)) <= 1e-8);
    CHECK(validate_sinr_end_to_end({2, 2, 200, 2, 10.0, 0.0}, ReceiverKind::ZF, 200, RandomStream(11, 2)) <= 1e-8);
    CHECK(validate_sinr_end_to_end({1, 4, 200, 1, 10.0, 0.1}, ReceiverKind::MRC, 200, RandomStream(11, 3)) <= 1e-10);
    CHECK(validate_sinr_end_to_end({4, 6, 200, 5, 10.0, 0.1}, ReceiverKind::ZF, 200, RandomStream(11, 4)) <= 1e-8);
    CHECK(validate_sinr_end_to_end({4, 6, 200, 5, 10.0, 0.1}, ReceiverKind::MRC, 200, RandomStream(11, 5)) <= 1e-8);
}

TEST_CASE("sampling is reproducible and thread-count independent", "[montecarlo][property]")
{
    const SystemConfig cfg{4, 4, 200, 4, 10.0, 0.05};
    const RandomStream rs(12, 3);
    const auto a = sample_sinr(cfg, ReceiverKind::MMSE, 9000, rs, {.threads = 1});
    const auto b = sample_sinr(cfg, ReceiverKind::MMSE, 9000, rs, {.threads = 4});
    const auto c = sample_sinr(cfg, ReceiverKind::MMSE, 9000, RandomStream(13, 3), {.threads = 1});
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
    CHECK(a.seed == 12);
    CHECK(a.stream_id == 3);
    CHECK(a.trials == 9000);

    const ReceiverKind rx[] = {ReceiverKind::ZF, ReceiverKind::MMSE};
    const auto multi = sample_sinr_multi(cfg, rx, 9000, rs, {.threads = 2});
    CHECK(multi[1].samples == a.samples);
    CHECK(empirical_nmse(cfg, 9000, rs, {.threads = 1}) == empirical_nmse(cfg, 9000, rs, {.threads = 3}));
    CHECK(empirical_rate(cfg, ReceiverKind::ZF, 9000, rs, {.threads = 1}) ==
          empirical_rate(cfg, ReceiverKind::ZF, 9000, rs, {.threads = 3}));
}

TEST_CASE("empirical rates", "[montecarlo]")
{
    const SystemConfig wall{4, 4, 200, 4, 1e5, 0.1};
    for (ReceiverKind r : kAll)
        CHECK(empirical_rate(wall, r, 5000, RandomStream(14, 0)) < (196.0 / 200) * 4 * std::log2(101.0));

    const SystemConfig cfg{4, 4, 200, 4, 10.0, 0.05};
    const double emp = empirical_rate(cfg, ReceiverKind::MMSE, 100000, RandomStream(15, 0));
    const double ana = rate_closed_form(ReceiverKind::MMSE, cfg).rate;
    CHECK(std::abs(emp - ana) <= 0.02 * ana);

    // Minimum training at -20 dB: the rate is within 10% of its low-SNR limit.
    for (ReceiverKind r : kAll) {
        const SystemConfig low{4, 4, 200, 4, 0.01, 0.05};
        const double ratio = empirical_rate(low, r, 20000, RandomStream(16, 0)) / rate_low_snr(r, low);
        CHECK(std::abs(ratio - 1.0) <= 0.1);
    }
    // Half-coherence training: at -20 dB the second-order term still costs about 20%,
    // so the simulator is held to the exact rate there and to the limit at -30 dB.
    for (ReceiverKind r : kAll) {
        const SystemConfig mid{4, 4, 200, 100, 0.01, 0.05};
        const double mc = empirical_rate(mid, r, 20000, RandomStream(16, 1));
        CHECK(std::abs(mc - rate_quadrature(r, mid)) <= 0.03 * rate_quadrature(r, mid));
        const SystemConfig low{4, 4, 200, 100, 0.001, 0.05};
        const double ratio = empirical_rate(low, r, 20000, RandomStream(16, 2)) / rate_low_snr(r, low);
        CHECK(std::abs(ratio - 1.0) <= 0.1);
    }
}

TEST_CASE("empirical outage", "[montecarlo]")
{
    const SystemConfig cfg{5, 5, 200, 5, 1e3, 0.1};
    const auto zf = sample_sinr(cfg, ReceiverKind::ZF, 100000, RandomStream(17, 0));
    CHECK(empirical_outage(zf, 0.0) == 0.0);
    CHECK(empirical_outage(zf, 100.0) == 1.0);
    CHECK(empirical_outage(zf, 1e9) == 1.0);
    CHECK(std::abs(empirical_outage(zf, 50.0) - outage(ReceiverKind::ZF, cfg, 50.0)) <= 0.01);

    const auto mmse = sample_sinr(cfg, ReceiverKind::MMSE, 20000, RandomStream(17, 1));
    CHECK(std::abs(empirical_outage(mmse, 30.0) - outage(ReceiverKind::MMSE, cfg, 30.0)) <= 0.01);
}

TEST_CASE("sampling errors", "[montecarlo][errors]")
{
    try {
        sample_sinr({4, 2, 200, 4, 10.0, 0.0}, ReceiverKind::ZF, 10, RandomStream(1, 1));
        FAIL("expected zf-requires-tall-channel");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZfRequiresTallChannel);
    }
    CHECK_NOTHROW(sample_sinr({4, 2, 200, 4, 10.0, 0.0}, ReceiverKind::MRC, 10, RandomStream(1, 1)));
    CHECK_THROWS_AS(sample_sinr({4, 4, 200, 4, 10.0, 0.0}, ReceiverKind::MMSE, 0, RandomStream(1, 1)), Error);
}
