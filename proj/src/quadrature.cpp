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

#include "rtri/quadrature.hpp"

#include "rtri/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace rtri::quad {

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452, 0.930157491355708226001207180059508,
    0.865063366688984510732096688423493, 0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784, 0.294392862701460198131126603103866,
    0.148874338981631210884826001129720, 0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390, 0.054755896574351996031381300244580,
    0.075039674810919952767043140916190, 0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600508106624, 0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821};
constexpr double kWg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                           0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                           0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Panel {
    double a, b;
    double value, error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

} // namespace

Result gauss_kronrod21(const Integrand& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double abs_half = std::abs(half);

    double fv1[10], fv2[10];
    const double fc = f(center);
    double resg = 0.0;
    double resk = fc * kWgk[10];
    double resabs = std::abs(resk);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    Result r;
    r.value = resk * half;
    resabs *= abs_half;
    resasc *= abs_half;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    r.error = err;
    r.evaluations = 21;
    r.intervals = 1;
    return r;
}

Result integrate(const Integrand& f, double a, double b, const Options& opt, std::span<const double> breakpoints)
{
    if (a == b) return {};
    std::priority_queue<Panel> live;
    std::vector<Panel> frozen;
    Result total;

    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > std::min(a, b) && x < std::max(a, b)) edges.push_back(x);
    edges.push_back(b);

    double value = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const Result r = gauss_kronrod21(f, edges[i], edges[i + 1]);
        total.evaluations += r.evaluations;
        value += r.value;
        error += r.error;
        live.push({edges[i], edges[i + 1], r.value, r.error, 0});
    }

    auto sums = [&](double& value, double& error) {
        // Fixed summation order keeps the result independent of queue layout.
        std::vector<Panel> all;
        all.reserve(live.size() + frozen.size());
        auto copy = live;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        all.insert(all.end(), frozen.begin(), frozen.end());
        std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
        value = 0.0;
        error = 0.0;
        for (const Panel& p : all) {
            value += p.value;
            error += p.error;
        }
    };

    while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
        if (live.empty() || static_cast<int>(live.size() + frozen.size()) >= opt.max_intervals) {
            std::ostringstream os;
            os << "adaptive quadrature on [" << a << ", " << b << "] did not converge: value=" << value
               << " error=" << error << " after " << total.evaluations << " evaluations";
            throw Error(ErrorCode::AccuracyError, os.str());
        }
        const Panel worst = live.top();
        live.pop();
        if (worst.depth >= opt.max_depth) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Result left = gauss_kronrod21(f, worst.a, mid);
        const Result right = gauss_kronrod21(f, mid, worst.b);
        total.evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        live.push({worst.a, mid, left.value, left.error, worst.depth + 1});
        live.push({mid, worst.b, right.value, right.error, worst.depth + 1});
    }

    sums(value, error);
    total.value = value;
    total.error = error;
    total.intervals = static_cast<int>(live.size() + frozen.size());
    return total;
}

Result integrate_to_infinity(const Integrand& f, double a, double scale, const Options& opt)
{
    auto mapped = [&](double s) {
        if (s >= 1.0) return 0.0;
        const double one_minus = 1.0 - s;
        const double t = a + scale * s / one_minus;
        const double v = f(t);
        if (v == 0.0) return 0.0;
        return v * scale / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, opt);
}

} // namespace rtri::quad
