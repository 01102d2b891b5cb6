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

#include "rtri/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace rtri {

namespace {

int resolve_threads(const SamplingOptions& opt, long batches)
{
    long n = opt.threads > 0 ? opt.threads : static_cast<long>(std::thread::hardware_concurrency());
    n = std::clamp(n, 1L, std::max(1L, batches));
    return static_cast<int>(n);
}

// Runs fn(b) for b in [0, batches). Each batch writes only its own output
// slots, so the result does not depend on the thread count.
template <class Fn>
void for_each_batch(long batches, int threads, Fn&& fn)
{
    if (threads <= 1) {
        for (long b = 0; b < batches; ++b) fn(b);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (int i = 0; i < threads; ++i) {
        pool.emplace_back([&] {
            for (long b = next++; b < batches && !failed; b = next++) {
                try {
                    fn(b);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

long batch_count(long trials) { return (trials + kBatchSize - 1) / kBatchSize; }

void check_trials(long trials)
{
    if (trials < 1) throw Error(ErrorCode::DomainError, "trial count must be >= 1");
}

void check_receivers(const SystemConfig& cfg, std::span<const ReceiverKind> receivers)
{
    for (ReceiverKind r : receivers)
        if (r == ReceiverKind::ZF && cfg.nr < cfg.nt)
            throw Error(ErrorCode::ZfRequiresTallChannel, "ZF receiver requires nr >= nt");
}

void draw_training(const SystemConfig& cfg, const ComplexMatrix& sp, RandomStream& rs, const TrainingOptions& opt,
                   TrainingDraw& out)
{
    const double a = std::sqrt(cfg.rho / cfg.nt);
    out.h.resize(cfg.nr, cfg.nt);
    rs.fill_complex_normal(out.h);
    out.delta_p = ComplexMatrix::Zero(cfg.nt, cfg.tp);
    if (!opt.zero_impairment && cfg.delta > 0.0) rs.fill_complex_normal(out.delta_p, cfg.delta * cfg.delta);
    out.yp.noalias() = a * out.h * (sp + out.delta_p);
    if (!opt.zero_noise) {
        ComplexMatrix vp(cfg.nr, cfg.tp);
        rs.fill_complex_normal(vp);
        out.yp += vp;
    }
    out.sp = sp;
}

// Kahan-Babuska style running sum.
struct Accumulator {
    double sum = 0.0, comp = 0.0;
    void add(double v)
    {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace

ComplexMatrix gen_pilot_matrix(int nt, int tp)
{
    if (nt < 1 || tp < nt) throw Error(ErrorCode::InfeasiblePilot, "pilot matrix requires tp >= nt >= 1");
    ComplexMatrix sp(nt, tp);
    for (int i = 0; i < nt; ++i)
        for (int t = 0; t < tp; ++t) {
            const long phase = (static_cast<long>(i) * t) % tp;
            sp(i, t) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(phase) / tp);
        }
    return sp;
}

TrainingDraw simulate_training(const SystemConfig& cfg, RandomStream& rs, const TrainingOptions& opt)
{
    validate(cfg);
    TrainingDraw out;
    draw_training(cfg, gen_pilot_matrix(cfg.nt, cfg.tp), rs, opt, out);
    return out;
}

LmmseEstimator::LmmseEstimator(const ComplexMatrix& sp, const SystemConfig& cfg)
{
    validate(cfg);
    if (sp.rows() != cfg.nt || sp.cols() != cfg.tp)
        throw Error(ErrorCode::DomainError, "LMMSE: pilot matrix must be nt x tp");
    const double a2 = cfg.rho / cfg.nt;
    ComplexMatrix sys = a2 * sp.adjoint() * sp;
    sys.diagonal().array() += cfg.delta * cfg.delta * cfg.rho + 1.0;
    Eigen::LLT<ComplexMatrix> llt(sys);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "LMMSE: training system is singular");
    right_ = std::sqrt(a2) * llt.solve(sp.adjoint());
}

ComplexMatrix LmmseEstimator::apply(const ComplexMatrix& yp) const
{
    if (yp.cols() != right_.rows()) throw Error(ErrorCode::DomainError, "LMMSE: yp must have tp columns");
    return yp * right_;
}

ComplexMatrix lmmse_estimate(const ComplexMatrix& yp, const ComplexMatrix& sp, const SystemConfig& cfg)
{
    if (yp.rows() != cfg.nr) throw Error(ErrorCode::DomainError, "LMMSE: yp must have nr rows");
    return LmmseEstimator(sp, cfg).apply(yp);
}

void sinr_from_estimate(ReceiverKind receiver, const ComplexMatrix& hbar, double c0, double delta,
                        std::span<double> out)
{
    const Eigen::Index nt = hbar.cols();
    const double d2 = delta * delta;
    ComplexMatrix g(nt, nt);
    g.noalias() = hbar.adjoint() * hbar;

    switch (receiver) {
    case ReceiverKind::ZF: {
        Eigen::LLT<ComplexMatrix> llt(g);
        if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "ZF: Gram matrix is singular");
        const ComplexMatrix ginv = llt.solve(ComplexMatrix::Identity(nt, nt));
        for (Eigen::Index k = 0; k < nt; ++k) out[static_cast<std::size_t>(k)] = 1.0 / (d2 + c0 * ginv(k, k).real());
        break;
    }
    case ReceiverKind::MRC:
        for (Eigen::Index k = 0; k < nt; ++k) {
            const double gkk = g(k, k).real();
            double others = 0.0;
            for (Eigen::Index i = 0; i < nt; ++i)
                if (i != k) others += std::norm(g(i, k));
            out[static_cast<std::size_t>(k)] = gkk * gkk / (others + d2 * (others + gkk * gkk) + c0 * gkk);
        }
        break;
    case ReceiverKind::MMSE: {
        const ComplexMatrix a = ((1.0 + d2) / c0) * g;
        ComplexMatrix ia = a;
        ia.diagonal().array() += 1.0;
        Eigen::LLT<ComplexMatrix> llt(ia);
        if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularMatrix, "MMSE: system is singular");
        const ComplexMatrix m = llt.solve(ComplexMatrix::Identity(nt, nt));
        for (Eigen::Index k = 0; k < nt; ++k) {
            const double nkk = (m.row(k) * a.col(k)).value().real();
            out[static_cast<std::size_t>(k)] = nkk / (m(k, k).real() + d2);
        }
        break;
    }
    }
}

std::vector<SinrSampleSet> sample_sinr_multi(const SystemConfig& cfg, std::span<const ReceiverKind> receivers,
                                             long trials, const RandomStream& rs, const SamplingOptions& opt)
{
    validate(cfg);
    check_trials(trials);
    check_receivers(cfg, receivers);

    const DerivedParams dp = derive_params(cfg);
    const int nt = cfg.nt, nr = cfg.nr;
    const double a = std::sqrt(cfg.rho / nt);
    const double denom = a * a * cfg.tp + cfg.delta * cfg.delta * cfg.rho + 1.0;
    // Hbar = Hhat / sigma_Hhat, where with orthogonal pilots
    // Hhat = (a / denom) (a H (tp I + E) + W), E = Delta_p Sp^H, W = Vp Sp^H.
    const double scale = a / denom / std::sqrt(dp.sigma2_est);
    const double var_e = cfg.delta * cfg.delta * cfg.tp;

    std::vector<SinrSampleSet> sets(receivers.size());
    for (std::size_t r = 0; r < receivers.size(); ++r) {
        sets[r].receiver = receivers[r];
        sets[r].samples.resize(static_cast<std::size_t>(trials) * nt);
        sets[r].cfg = cfg;
        sets[r].trials = trials;
        sets[r].seed = rs.seed();
        sets[r].stream_id = rs.stream_id();
    }

    const long batches = batch_count(trials);
    for_each_batch(batches, resolve_threads(opt, batches), [&](long b) {
        RandomStream local = rs.substream(static_cast<std::uint64_t>(b));
        const long first = b * kBatchSize;
        const long last = std::min(trials, first + kBatchSize);
        ComplexMatrix h(nr, nt), e = ComplexMatrix::Zero(nt, nt), w(nr, nt), mix(nt, nt), hbar(nr, nt);
        for (long trial = first; trial < last; ++trial) {
            local.fill_complex_normal(h);
            if (var_e > 0.0) local.fill_complex_normal(e, var_e);
            local.fill_complex_normal(w, static_cast<double>(cfg.tp));
            mix = e;
            mix.diagonal().array() += static_cast<double>(cfg.tp);
            hbar.noalias() = a * h * mix;
            hbar += w;
            hbar *= scale;
            for (std::size_t r = 0; r < receivers.size(); ++r) {
                std::span<double> out(sets[r].samples.data() + trial * nt, static_cast<std::size_t>(nt));
                sinr_from_estimate(receivers[r], hbar, dp.c0, cfg.delta, out);
            }
        }
    });
    return sets;
}

SinrSampleSet sample_sinr(const SystemConfig& cfg, ReceiverKind receiver, long trials, const RandomStream& rs,
                          const SamplingOptions& opt)
{
    const ReceiverKind one[] = {receiver};
    return std::move(sample_sinr_multi(cfg, one, trials, rs, opt).front());
}

double validate_sinr_end_to_end(const SystemConfig& cfg, ReceiverKind receiver, long trials, RandomStream rs)
{
    validate(cfg);
    check_trials(trials);
    const ReceiverKind one[] = {receiver};
    check_receivers(cfg, one);

    const DerivedParams dp = derive_params(cfg);
    const double a2 = cfg.rho / cfg.nt;
    const double d2 = cfg.delta * cfg.delta;
    const double noise = (cfg.rho + cfg.rho * d2 + 1.0 + dp.epsilon) / (1.0 + dp.epsilon);
    const ComplexMatrix sp = gen_pilot_matrix(cfg.nt, cfg.tp);
    const LmmseEstimator est(sp, cfg);
    const Eigen::Index nt = cfg.nt;

    TrainingDraw draw;
    std::vector<double> closed(static_cast<std::size_t>(nt));
    double worst = 0.0;
    for (long trial = 0; trial < trials; ++trial) {
        draw_training(cfg, sp, rs, {}, draw);
        const ComplexMatrix hhat = est.apply(draw.yp);
        sinr_from_estimate(receiver, hhat / std::sqrt(dp.sigma2_est), dp.c0, cfg.delta, closed);

        const ComplexMatrix outer = hhat * hhat.adjoint();
        ComplexMatrix pinv;
        if (receiver == ReceiverKind::ZF) pinv = hhat * (hhat.adjoint() * hhat).inverse();
        for (Eigen::Index k = 0; k < nt; ++k) {
            const ComplexVector hk = hhat.col(k);
            ComplexMatrix rz = a2 * (1.0 + d2) * outer - a2 * hk * hk.adjoint();
            rz.diagonal().array() += noise;
            ComplexVector w;
            switch (receiver) {
            case ReceiverKind::ZF: w = pinv.col(k); break;
            case ReceiverKind::MRC: w = hk; break;
            case ReceiverKind::MMSE: w = rz.llt().solve(hk); break;
            }
            const double signal = a2 * std::norm(w.dot(hk));
            const double interference = w.dot(rz * w).real();
            const double direct = signal / interference;
            const double ref = closed[static_cast<std::size_t>(k)];
            worst = std::max(worst, std::abs(direct - ref) / std::abs(ref));
        }
    }
    return worst;
}

double rate_from_samples(const SinrSampleSet& set)
{
    if (set.samples.empty()) throw Error(ErrorCode::DomainError, "empty sample set");
    Accumulator acc;
    for (double g : set.samples) acc.add(std::log1p(g));
    const double mean = acc.value() / static_cast<double>(set.samples.size()) / std::numbers::ln2;
    return static_cast<double>(set.cfg.td()) / set.cfg.t * set.cfg.nt * mean;
}

double empirical_rate(const SystemConfig& cfg, ReceiverKind receiver, long trials, const RandomStream& rs,
                      const SamplingOptions& opt)
{
    return rate_from_samples(sample_sinr(cfg, receiver, trials, rs, opt));
}

double empirical_outage(const SinrSampleSet& set, double threshold)
{
    if (!(threshold >= 0.0)) throw Error(ErrorCode::DomainError, "outage threshold must be >= 0");
    if (set.samples.empty()) throw Error(ErrorCode::DomainError, "empty sample set");
    const auto below = std::count_if(set.samples.begin(), set.samples.end(), [&](double g) { return g <= threshold; });
    return static_cast<double>(below) / static_cast<double>(set.samples.size());
}

double mean_sinr(const SinrSampleSet& set)
{
    if (set.samples.empty()) throw Error(ErrorCode::DomainError, "empty sample set");
    Accumulator acc;
    for (double g : set.samples) acc.add(g);
    return acc.value() / static_cast<double>(set.samples.size());
}

double ks_distance(const SinrSampleSet& set, const SinrDistribution& dist)
{
    if (set.samples.empty()) throw Error(ErrorCode::DomainError, "empty sample set");
    std::vector<double> x = set.samples;
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = dist.cdf(x[i]);
        worst = std::max({worst, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return worst;
}

double empirical_nmse(const SystemConfig& cfg, long trials, const RandomStream& rs, const SamplingOptions& opt)
{
    validate(cfg);
    check_trials(trials);
    const ComplexMatrix sp = gen_pilot_matrix(cfg.nt, cfg.tp);
    const LmmseEstimator est(sp, cfg);
    const long batches = batch_count(trials);
    std::vector<double> partial(static_cast<std::size_t>(batches), 0.0);
    for_each_batch(batches, resolve_threads(opt, batches), [&](long b) {
        RandomStream local = rs.substream(static_cast<std::uint64_t>(b));
        const long count = std::min(trials, (b + 1) * kBatchSize) - b * kBatchSize;
        TrainingDraw draw;
        Accumulator acc;
        for (long i = 0; i < count; ++i) {
            draw_training(cfg, sp, local, {}, draw);
            acc.add((draw.h - est.apply(draw.yp)).squaredNorm());
        }
        partial[static_cast<std::size_t>(b)] = acc.value();
    });
    Accumulator total;
    for (double v : partial) total.add(v);
    return total.value() / (static_cast<double>(trials) * cfg.nr * cfg.nt);
}

} // namespace rtri
