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

#include "rtri/specialfn.hpp"

#include "rtri/core.hpp"
#include "rtri/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace rtri {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIter = 100000;

[[noreturn]] void domain_fail(const char* fn, double a, double z)
{
    std::ostringstream os;
    os << fn << ": argument outside the supported domain (" << a << ", " << z << ")";
    throw Error(ErrorCode::DomainError, os.str());
}

// Lentz continued fraction for e^z E_n(z), z > 1.
double en_scaled_continued_fraction(int n, double z)
{
    double b = z + n;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double a = -static_cast<double>(i) * (n - 1 + i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) return h;
    }
    throw Error(ErrorCode::AccuracyError, "exp_integral_en: continued fraction did not converge");
}

// Power series for E_n(z), 0 < z <= 1.
double en_series(int n, double z)
{
    const int nm1 = n - 1;
    double ans = nm1 != 0 ? 1.0 / nm1 : -std::log(z) - std::numbers::egamma;
    double fact = 1.0;
    for (int i = 1; i <= kMaxIter; ++i) {
        fact *= -z / i;
        double del;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -std::numbers::egamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(z) + psi);
        }
        ans += del;
        if (std::abs(del) < std::abs(ans) * kEps * 0.5) return ans;
    }
    throw Error(ErrorCode::AccuracyError, "exp_integral_en: series did not converge");
}

double log_sum_exp_pair(double a, double b)
{
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

} // namespace

double exp_integral_en(int n, double z)
{
    if (n < 1 || !(z > 0.0) || !std::isfinite(z)) domain_fail("exp_integral_en", n, z);
    if (z > 1.0) return en_scaled_continued_fraction(n, z) * std::exp(-z);
    return en_series(n, z);
}

double exp_integral_en_scaled(int n, double z)
{
    if (n < 1 || !(z > 0.0) || !std::isfinite(z)) domain_fail("exp_integral_en_scaled", n, z);
    if (z > 1.0) return en_scaled_continued_fraction(n, z);
    return en_series(n, z) * std::exp(z);
}

std::vector<double> exp_integral_en_sequence(int nmax, double z)
{
    if (nmax < 1 || !(z > 0.0) || !std::isfinite(z)) domain_fail("exp_integral_en_sequence", nmax, z);
    std::vector<double> out(static_cast<std::size_t>(nmax));
    out[0] = exp_integral_en(1, z);
    const double ez = std::exp(-z);
    for (int n = 1; n < nmax; ++n) {
        // Errors are multiplied by z/n per upward step.
        out[static_cast<std::size_t>(n)] =
            z <= n ? (ez - z * out[static_cast<std::size_t>(n - 1)]) / n : exp_integral_en(n + 1, z);
    }
    return out;
}

double tricomi_u_log(int a, int b, double z)
{
    if (a < 1 || !(z > 0.0) || !std::isfinite(z)) domain_fail("tricomi_u", a, z);

    const double am1 = a - 1.0;
    const double c = static_cast<double>(b) - a - 1.0; // exponent of (1 + t)
    auto g = [&](double t) {
        double v = -z * t + c * std::log1p(t);
        if (am1 != 0.0) v += am1 * std::log(t);
        return v;
    };

    // Mode of the integrand: z t^2 - (b - 2 - z) t - (a - 1) = 0.
    const double lin = static_cast<double>(b) - 2.0 - z;
    const double disc = std::sqrt(lin * lin + 4.0 * z * am1);
    double mode = 0.0;
    if (lin >= 0.0)
        mode = (lin + disc) / (2.0 * z);
    else if (am1 > 0.0)
        mode = 2.0 * am1 / (disc - lin);

    double width;
    if (mode > 0.0) {
        const double curv = am1 / (mode * mode) + c / ((1.0 + mode) * (1.0 + mode));
        width = curv > 0.0 ? 1.0 / std::sqrt(curv) : 1.0 / z;
    } else {
        const double slope = z - c; // -g'(0) when a == 1
        width = slope > 0.0 ? 1.0 / slope : 1.0 / std::sqrt(std::max(std::abs(c), z));
    }

    const double g_peak = mode > 0.0 ? g(mode) : 0.0;
    auto h = [&](double t) {
        if (t <= 0.0) return am1 > 0.0 ? 0.0 : std::exp(-g_peak);
        return std::exp(g(t) - g_peak);
    };

    quad::Options opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 2e-14;
    opt.max_depth = 20;

    double integral = 0.0;
    if (mode > 0.0) {
        std::array<double, 3> bp{};
        int nbp = 0;
        for (double k : {8.0, 3.0, 1.0}) {
            const double x = mode - k * width;
            if (x > 0.0) bp[static_cast<std::size_t>(nbp++)] = x;
        }
        const auto left = quad::integrate(h, 0.0, mode, opt, std::span<const double>(bp.data(), static_cast<std::size_t>(nbp)));
        integral += left.value;
    }
    const auto right = quad::integrate_to_infinity(h, mode, width, opt);
    integral += right.value;

    return g_peak + std::log(integral) - std::lgamma(static_cast<double>(a));
}

double tricomi_u(int a, int b, double z) { return std::exp(tricomi_u_log(a, b, z)); }

double upper_incomplete_gamma(int n, double z)
{
    if (n < 1 || !(z >= 0.0)) domain_fail("upper_incomplete_gamma", n, z);
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < n; ++m) {
        term *= z / m;
        sum += term;
    }
    return std::tgamma(static_cast<double>(n)) * std::exp(-z) * sum;
}

double log_binomial(int n, int k)
{
    if (k == 0) return 0.0;
    if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

CoefficientTable::CoefficientTable(int nt, int nr, double c0, double delta)
    : nt_(nt), nr_(nr), c0_(c0), delta_(delta)
{
    if (nt < 1 || nr < 1 || !(c0 > 0.0) || !(delta >= 0.0))
        throw Error(ErrorCode::DomainError, "build_coefficients: need nt >= 1, nr >= 1, c0 > 0, delta >= 0");
    const double ninf = -std::numeric_limits<double>::infinity();
    const double log_ratio = std::log1p(delta * delta) - std::log(c0); // ln((1 + delta^2) / c0)

    log_alpha_.assign(static_cast<std::size_t>(nr) * nr, ninf);
    for (int k = 0; k < nr; ++k)
        for (int p = 0; p <= k; ++p) {
            const double lb = log_binomial(nt + p - 2, p);
            log_alpha_[static_cast<std::size_t>(k) * nr + p] =
                lb == ninf ? ninf : lb + p * log_ratio - std::lgamma(k - p + 1.0);
        }

    log_beta_.assign(static_cast<std::size_t>(nr), ninf);
    for (int k = 0; k < nr; ++k) {
        double acc = ninf;
        for (int p = std::max(0, k - nt + 1); p <= k; ++p)
            acc = log_sum_exp_pair(acc, log_binomial(nt - 1, k - p) + (k - p) * log_ratio - std::lgamma(p + 1.0));
        log_beta_[static_cast<std::size_t>(k)] = acc;
    }
}

double CoefficientTable::alpha(int p, int k) const { return std::exp(log_alpha(p, k)); }
double CoefficientTable::beta(int k) const { return std::exp(log_beta(k)); }

CoefficientTable build_coefficients(int nt, int nr, double c0, double delta) { return {nt, nr, c0, delta}; }

} // namespace rtri
