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

#include "rtri/quadrature.hpp"
#include "rtri/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace rtri {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming log-sum-exp accumulator.
struct LogSum {
    double max = kNegInf;
    double scaled = 0.0;
    void add(double v)
    {
        if (v == kNegInf) return;
        if (v > max) {
            scaled = scaled * std::exp(max - v) + 1.0;
            max = v;
        } else {
            scaled += std::exp(v - max);
        }
    }
    double value() const { return max == kNegInf ? kNegInf : max + std::log(scaled); }
};

// Neumaier-compensated sum that also records the magnitudes it has seen.
struct SeriesSum {
    double sum = 0.0;
    double comp = 0.0;
    double abs_sum = 0.0;
    double max_abs = 0.0;
    void add(double v)
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
        abs_sum += std::abs(v);
        max_abs = std::max(max_abs, std::abs(v));
    }
    double value() const { return sum + comp; }
};

double log_add(double a, double b)
{
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Adds the terms of a unimodal positive series in log space, term(n) for n >= first,
// until a term past the peak falls 40 e-folds below the running total.
template <class Term>
double log_series_tail(int first, Term term)
{
    LogSum acc;
    double prev = kNegInf;
    for (int n = first; n < first + 1000000; ++n) {
        const double v = term(n);
        acc.add(v);
        if (v < prev && v < acc.value() - 40.0) break;
        prev = v;
    }
    return acc.value();
}

// ln sum_{j >= m} e^{-x} x^j / j!
double log_poisson_upper(int m, double x, double log_x)
{
    if (m <= 0) return 0.0;
    return log_series_tail(m, [&](int j) { return j * log_x - x - std::lgamma(j + 1.0); });
}

double rate_prefactor(int nt, int t, int tp) { return static_cast<double>(t - tp) * nt / (std::numbers::ln2 * t); }

void check_receiver(ReceiverKind receiver, int nt, int nr)
{
    if (receiver == ReceiverKind::ZF && nr < nt)
        throw Error(ErrorCode::ZfRequiresTallChannel, "ZF receiver requires nr >= nt");
}

void check_gamma(double gamma)
{
    if (!(gamma >= 0.0)) throw Error(ErrorCode::DomainError, "SINR threshold must be >= 0");
}

} // namespace

double sinr_wall(double delta) noexcept
{
    return delta > 0.0 ? 1.0 / (delta * delta) : std::numeric_limits<double>::infinity();
}

SinrDistribution::SinrDistribution(ReceiverKind receiver, int nt, int nr, double c0, double delta)
    : receiver_(receiver), nt_(nt), nr_(nr), c0_(c0), delta_(delta)
{
    check_receiver(receiver, nt, nr);
    if (!(c0 > 0.0) || !(delta >= 0.0)) throw Error(ErrorCode::DomainError, "SinrDistribution: need c0 > 0, delta >= 0");
    if (receiver == ReceiverKind::MMSE) table_.emplace(nt, nr, c0, delta);
    log_factorial_.resize(static_cast<std::size_t>(nr) + 1);
    for (int k = 0; k <= nr; ++k) log_factorial_[static_cast<std::size_t>(k)] = std::lgamma(k + 1.0);
    if (receiver == ReceiverKind::MRC) {
        log_binom_.resize(static_cast<std::size_t>(nr));
        for (int p = 0; p < nr; ++p) log_binom_[static_cast<std::size_t>(p)] = log_binomial(nt + p - 2, p);
    }
}

double SinrDistribution::log_survival(double gamma) const
{
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    check_gamma(gamma);
    if (gamma == 0.0) return 0.0;
    if (gamma >= sinr_wall(delta_)) return ninf;
    const double d2 = delta_ * delta_;
    const double den = 1.0 - d2 * gamma;
    if (den <= 0.0) return ninf;
    const double x = c0_ * gamma / den;
    if (!std::isfinite(x)) return ninf;
    const double log_x = std::log(x);

    LogSum acc;
    double log_prefix = -x;
    switch (receiver_) {
    case ReceiverKind::ZF:
        for (int k = 0; k <= nr_ - nt_; ++k) acc.add(k * log_x - log_factorial_[static_cast<std::size_t>(k)]);
        break;
    case ReceiverKind::MRC: {
        // Summing over p first: sum_p C(nt+p-2, p) w^p e^{-x} sum_{j < nr-p} x^j / j!,
        // with w = (1+delta^2) gamma / (1+gamma) bounded by 1+delta^2.
        const double log_u = std::log1p(gamma) - std::log1p(-d2 * gamma);
        const double log_w = std::log1p(d2) + std::log(gamma) - std::log1p(gamma);
        log_prefix -= (nt_ - 1) * log_u;
        LogSum partial;
        for (int j = 0; j < nr_; ++j) {
            partial.add(j * log_x - log_factorial_[static_cast<std::size_t>(j)]);
            const int p = nr_ - 1 - j;
            acc.add(log_binom_[static_cast<std::size_t>(p)] + p * log_w + partial.value());
        }
        break;
    }
    case ReceiverKind::MMSE: {
        const double log_u = std::log1p(gamma) - std::log1p(-d2 * gamma);
        log_prefix -= (nt_ - 1) * log_u;
        for (int k = 0; k < nr_; ++k) acc.add(table_->log_beta(k) + k * log_x);
        break;
    }
    }
    return std::min(log_prefix + acc.value(), 0.0);
}

double SinrDistribution::survival(double gamma) const { return std::exp(log_survival(gamma)); }

// The truncated sums in the survival function are partial sums of series whose full
// value is exactly 1, so the CDF is the corresponding tail of positive terms.
double SinrDistribution::log_lower_tail(double gamma) const
{
    check_gamma(gamma);
    if (gamma == 0.0) return kNegInf;
    if (gamma >= sinr_wall(delta_)) return 0.0;
    const double d2 = delta_ * delta_;
    const double x = c0_ * gamma / (1.0 - d2 * gamma);
    const double log_x = std::log(x);
    const double log_u = std::log1p(gamma) - std::log1p(-d2 * gamma);
    switch (receiver_) {
    case ReceiverKind::ZF:
        return log_poisson_upper(nr_ - nt_ + 1, x, log_x);
    case ReceiverKind::MRC: {
        // Negative-binomial weights C(nt+p-2, p) w^p u^{-(nt-1)} mixed with Poisson tails.
        const double log_w = std::log1p(d2) + std::log(gamma) - std::log1p(gamma);
        auto log_c = [&](int p) { return log_binomial(nt_ + p - 2, p) + p * log_w; };
        double total = nt_ == 1 ? kNegInf : log_series_tail(nr_, log_c);
        std::vector<double> q(static_cast<std::size_t>(nr_) + 1, 0.0);
        q[static_cast<std::size_t>(nr_)] = log_poisson_upper(nr_, x, log_x);
        for (int m = nr_ - 1; m >= 1; --m)
            q[static_cast<std::size_t>(m)] =
                log_add(q[static_cast<std::size_t>(m) + 1], m * log_x - x - log_factorial_[static_cast<std::size_t>(m)]);
        for (int p = 0; p < nr_; ++p) total = log_add(total, log_c(p) + q[static_cast<std::size_t>(nr_ - p)]);
        return std::min(total - (nt_ - 1) * log_u, 0.0);
    }
    case ReceiverKind::MMSE: {
        const double log_r = std::log1p(d2) - std::log(c0_);
        auto log_beta = [&](int k) {
            LogSum b;
            for (int p = std::max(0, k - nt_ + 1); p <= k; ++p)
                b.add(log_binomial(nt_ - 1, k - p) + (k - p) * log_r - std::lgamma(p + 1.0));
            return b.value();
        };
        const double tail = log_series_tail(nr_, [&](int k) { return log_beta(k) + k * log_x; });
        return std::min(tail - x - (nt_ - 1) * log_u, 0.0);
    }
    }
    return kNegInf;
}

double SinrDistribution::cdf(double gamma) const
{
    check_gamma(gamma);
    if (gamma >= sinr_wall(delta_)) return 1.0;
    const double ls = log_survival(gamma);
    if (ls < -std::numbers::ln2) return std::clamp(-std::expm1(ls), 0.0, 1.0);
    return std::clamp(std::exp(log_lower_tail(gamma)), 0.0, 1.0);
}

double sinr_cdf(ReceiverKind receiver, const SystemConfig& cfg, double gamma)
{
    check_gamma(gamma);
    validate(cfg);
    check_receiver(receiver, cfg.nt, cfg.nr);
    if (gamma >= sinr_wall(cfg.delta)) return 1.0;
    const double c0 = noise_factor_c0(cfg.nt, cfg.tp, cfg.rho, cfg.delta);
    return SinrDistribution(receiver, cfg.nt, cfg.nr, c0, cfg.delta).cdf(gamma);
}

double sinr_survival(ReceiverKind receiver, const SystemConfig& cfg, double gamma)
{
    validate(cfg);
    const double c0 = noise_factor_c0(cfg.nt, cfg.tp, cfg.rho, cfg.delta);
    return SinrDistribution(receiver, cfg.nt, cfg.nr, c0, cfg.delta).survival(gamma);
}

double outage(ReceiverKind receiver, const SystemConfig& cfg, double threshold)
{
    return sinr_cdf(receiver, cfg, threshold);
}

double rate_quadrature_c0(ReceiverKind receiver, int nt, int nr, int t, int tp, double c0, double delta)
{
    const SinrDistribution dist(receiver, nt, nr, c0, delta);
    auto integrand = [&](double g) { return dist.survival(g) / (1.0 + g); };
    const double d2 = delta * delta;

    quad::Options opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-11;
    opt.max_intervals = 20000;

    // Split points where the survival function changes character: x-space
    // landmarks around the chi-square bulk and half-decades in gamma.
    const double n_eff = nr;
    auto gamma_of_x = [&](double x) { return x / (c0 + d2 * x); };
    const double x_max = 8.0 * n_eff + 60.0;
    const double upper = delta > 0.0 ? sinr_wall(delta) : gamma_of_x(x_max);

    std::vector<double> bp;
    for (double x : {0.25, 0.5 * n_eff, n_eff, 2.0 * n_eff, 4.0 * n_eff + 20.0}) bp.push_back(gamma_of_x(x));
    for (double e = -6.0; e <= 12.0; e += 0.5) bp.push_back(std::pow(10.0, e));
    if (delta > 0.0)
        for (double e = 1.0; e <= 8.0; e += 1.0) bp.push_back(upper * (1.0 - std::pow(10.0, -e)));
    std::erase_if(bp, [&](double v) { return !(v > 0.0 && v < upper); });
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    double integral = quad::integrate(integrand, 0.0, upper, opt, bp).value;
    if (delta == 0.0) integral += quad::integrate_to_infinity(integrand, upper, 1.0 / c0, opt).value;
    return rate_prefactor(nt, t, tp) * integral;
}

double rate_quadrature(ReceiverKind receiver, const SystemConfig& cfg)
{
    validate(cfg);
    check_receiver(receiver, cfg.nt, cfg.nr);
    const double c0 = noise_factor_c0(cfg.nt, cfg.tp, cfg.rho, cfg.delta);
    return rate_quadrature_c0(receiver, cfg.nt, cfg.nr, cfg.t, cfg.tp, c0, cfg.delta);
}

RateResult rate_series_c0(ReceiverKind receiver, int nt, int nr, int t, int tp, double c0, double delta)
{
    check_receiver(receiver, nt, nr);
    RateResult out;
    if (delta == 0.0) {
        out.method = RateMethod::Quadrature;
        out.rate = rate_quadrature_c0(receiver, nt, nr, t, tp, c0, delta);
        return out;
    }

    const double d2 = delta * delta;
    const double b1 = c0 / (1.0 + d2);
    const double b2 = c0 / d2;
    SeriesSum series;

    if (receiver == ReceiverKind::ZF) {
        for (int k = 0; k <= nr - nt; ++k) {
            series.add(exp_integral_en_scaled(k + 1, b1));
            series.add(-exp_integral_en_scaled(k + 1, b2));
        }
    } else {
        const int max_n = receiver == ReceiverKind::MRC ? nr - 1 + nt : nt;
        const CoefficientTable table(nt, nr, c0, delta);
        const double log_d2 = std::log(d2);
        const double log_ratio = std::log(b1) - log_d2; // ln(b1 / delta^2)

        // ln U(1, 1-k; b2) = ln(e^{b2} E_{k+1}(b2)) and ln U(j+1, j+1-k; b1), cached per (j, k).
        std::vector<double> log_u_b2(static_cast<std::size_t>(nr));
        for (int k = 0; k < nr; ++k) log_u_b2[static_cast<std::size_t>(k)] = std::log(exp_integral_en_scaled(k + 1, b2));
        std::vector<double> log_u_b1(static_cast<std::size_t>(max_n) * nr, std::numeric_limits<double>::quiet_NaN());
        auto log_u1 = [&](int j, int k) {
            double& slot = log_u_b1[static_cast<std::size_t>(j) * nr + k];
            if (std::isnan(slot)) slot = tricomi_u_log(j + 1, j + 1 - k, b1);
            return slot;
        };

        auto add_block = [&](int k, int n, double log_coef) {
            // (-1)^n coef delta^{2(n-1)} k! [U(1,1-k;b2) - sum_{j=0}^{n-1} (-b1/delta^2)^j U(j+1, j+1-k; b1)]
            if (log_coef == kNegInf) return;
            const double base = log_coef + (n - 1) * log_d2 + std::lgamma(k + 1.0);
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            series.add(sign * std::exp(base + log_u_b2[static_cast<std::size_t>(k)]));
            for (int j = 0; j < n; ++j) {
                const double sj = (j % 2 == 0) ? -sign : sign;
                series.add(sj * std::exp(base + j * log_ratio + log_u1(j, k)));
            }
        };

        if (receiver == ReceiverKind::MRC) {
            for (int k = 0; k < nr; ++k)
                for (int p = 0; p <= k; ++p) add_block(k, p + nt, table.log_alpha(p, k));
        } else {
            for (int k = 0; k < nr; ++k) add_block(k, nt, table.log_beta(k));
        }
    }

    const double s = series.value();
    out.max_term = series.max_abs;
    out.cancellation = s != 0.0 ? series.abs_sum / std::abs(s) : std::numeric_limits<double>::infinity();
    if (!(s > 0.0) || !std::isfinite(s) || !(out.cancellation <= kCancellationLimit)) {
        out.fallback = true;
        out.method = RateMethod::Quadrature;
        out.rate = rate_quadrature_c0(receiver, nt, nr, t, tp, c0, delta);
        return out;
    }
    out.method = RateMethod::ClosedForm;
    out.rate = rate_prefactor(nt, t, tp) * s;
    return out;
}

RateResult rate_closed_form(ReceiverKind receiver, const SystemConfig& cfg)
{
    validate(cfg);
    const double c0 = noise_factor_c0(cfg.nt, cfg.tp, cfg.rho, cfg.delta);
    return rate_series_c0(receiver, cfg.nt, cfg.nr, cfg.t, cfg.tp, c0, cfg.delta);
}

double rate_low_snr(ReceiverKind receiver, const SystemConfig& cfg)
{
    const double diversity = receiver == ReceiverKind::ZF ? cfg.nr - cfg.nt + 1.0 : static_cast<double>(cfg.nr);
    return static_cast<double>(cfg.tp) * (cfg.t - cfg.tp) * diversity * cfg.rho * cfg.rho /
           (std::numbers::ln2 * cfg.t * cfg.nt);
}

RateResult rate_ceiling(ReceiverKind receiver, const SystemConfig& cfg)
{
    validate(cfg);
    if (cfg.delta == 0.0) throw Error(ErrorCode::DomainError, "rate_ceiling: no ceiling exists for delta = 0");
    const double c0_bar = noise_factor_c0_bar(cfg.nt, cfg.tp, cfg.delta);
    return rate_series_c0(receiver, cfg.nt, cfg.nr, cfg.t, cfg.tp, c0_bar, cfg.delta);
}

double nmse_analytic(const SystemConfig& cfg)
{
    return 1.0 / (1.0 + estimation_quality(cfg.nt, cfg.tp, cfg.rho, cfg.delta));
}

std::string_view to_string(CurveProvenance p) noexcept
{
    switch (p) {
    case CurveProvenance::Analytic: return "analytic";
    case CurveProvenance::Quadrature: return "quadrature";
    case CurveProvenance::Simulated: return "simulated";
    case CurveProvenance::Asymptotic: return "asymptotic";
    }
    return "?";
}

void RateCurve::add(double x, double rate)
{
    auto it = std::lower_bound(points.begin(), points.end(), x, [](const auto& pt, double v) { return pt.first < v; });
    if (it != points.end() && it->first == x)
        it->second = rate;
    else
        points.insert(it, {x, rate});
}

bool RateCurve::valid() const
{
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].second >= 0.0)) return false;
        if (i > 0 && !(points[i - 1].first < points[i].first)) return false;
    }
    return true;
}

} // namespace rtri
