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

#include <vector>

namespace rtri {

/// Generalized exponential integral E_n(z) = int_1^inf e^{-z t} / t^n dt, n >= 1, z > 0.
double exp_integral_en(int n, double z);

/// e^z E_n(z); stays finite where E_n underflows.
double exp_integral_en_scaled(int n, double z);

/// E_1(z) ... E_nmax(z). Upward recurrence E_{n+1} = (e^{-z} - z E_n) / n where it is
/// stable (z <= n), direct evaluation otherwise.
std::vector<double> exp_integral_en_sequence(int nmax, double z);

/// Tricomi confluent hypergeometric function of the second kind U(a, b; z),
/// written Psi(a, b; z) in the rate formulas. Evaluated from the Laplace
/// representation (1/Gamma(a)) int_0^inf e^{-z t} t^{a-1} (1+t)^{b-a-1} dt, which is
/// valid for a >= 1, z > 0 and any integer b (including b <= 0).
double tricomi_u(int a, int b, double z);

/// ln U(a, b; z). U is strictly positive on the supported domain.
double tricomi_u_log(int a, int b, double z);

/// Upper incomplete gamma Gamma(n, z) for integer n >= 1 (finite-sum form).
double upper_incomplete_gamma(int n, double z);

/// Combinatorial weights of the MRC and MMSE SINR distributions, stored as
/// natural logarithms so that large antenna counts and small c0 stay finite.
/// A weight that is exactly zero is stored as -infinity.
class CoefficientTable {
public:
    CoefficientTable(int nt, int nr, double c0, double delta);

    int nt() const noexcept { return nt_; }
    int nr() const noexcept { return nr_; }
    double c0() const noexcept { return c0_; }
    double delta() const noexcept { return delta_; }

    /// ln alpha_{p,k}, 0 <= p <= k <= nr-1.
    double log_alpha(int p, int k) const { return log_alpha_[static_cast<std::size_t>(k) * nr_ + p]; }
    /// ln beta_k, 0 <= k <= nr-1.
    double log_beta(int k) const { return log_beta_[static_cast<std::size_t>(k)]; }

    double alpha(int p, int k) const;
    double beta(int k) const;

private:
    int nt_, nr_;
    double c0_, delta_;
    std::vector<double> log_alpha_;
    std::vector<double> log_beta_;
};

CoefficientTable build_coefficients(int nt, int nr, double c0, double delta);

/// ln C(n, k) for integers n >= k >= 0; -infinity for k < 0 or k > n, except C(-1, 0) = 1.
double log_binomial(int n, int k);

} // namespace rtri
