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

#pragma once

#include <functional>
#include <span>

namespace rtri::quad {

struct Options {
    double abs_tol = 1e-14;
    double rel_tol = 1e-12;
    int max_depth = 20;       ///< bisection levels below an initial subinterval
    int max_intervals = 4000; ///< total live subintervals
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    int intervals = 0;
};

using Integrand = std::function<double(double)>;

/// One 21-point Gauss-Kronrod panel on [a, b] with the QUADPACK error estimate.
Result gauss_kronrod21(const Integrand& f, double a, double b);

/// Globally adaptive Gauss-Kronrod quadrature on [a, b].
///
/// `breakpoints` (sorted, strictly inside (a, b)) seed the initial partition.
/// Throws rtri::Error(AccuracyError) when the tolerance cannot be met within
/// the depth and interval budget.
Result integrate(const Integrand& f, double a, double b, const Options& opt = {},
                 std::span<const double> breakpoints = {});

/// Integral of f over [a, inf), mapped onto [0, 1) via t = a + scale * s / (1 - s).
/// `scale` should be of the order of the integrand's decay length.
Result integrate_to_infinity(const Integrand& f, double a, double scale, const Options& opt = {});

} // namespace rtri::quad
