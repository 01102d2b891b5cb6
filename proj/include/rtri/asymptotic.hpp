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

#include "rtri/core.hpp"
#include "rtri/random.hpp"

namespace rtri {

/// Large-system parameters at a fixed antenna ratio beta = nr / nt.
struct AsymptoticParams {
    double beta = 1.0;
    double c1 = 0.0;
    double epsilon_bar = 0.0;
    double d = 0.0; ///< c1 / (1 + delta^2) + 1 - beta
};

AsymptoticParams asymptotic_params(const SystemConfig& cfg);
/// Parameters from (beta, c1) directly; epsilon_bar is left at 0.
AsymptoticParams asymptotic_params(double beta, double c1, double delta);

/// Deterministic equivalent of the per-stream SINR.
/// MMSE uses m = (-d + sqrt(d^2 + 4 beta q)) / (2 q), q = c1 / (1 + delta^2),
/// the positive root of the resolvent fixed point, and returns m / (1 + delta^2 + delta^2 m).
double det_sinr(ReceiverKind receiver, const AsymptoticParams& ap, double delta);

/// 1 / delta^2, the common limit of every receiver as beta grows.
double det_sinr_limit(double delta);

/// (1 - tp/t) nt log2(1 + det_sinr). Accepts tp == t, where it is 0.
double det_rate(ReceiverKind receiver, const SystemConfig& cfg);

/// The MMSE auxiliary m obtained by iterating m <- s (beta - 1) + s / (1 + m),
/// s = (1 + delta^2) / c1. Independent of the closed-form root.
double mmse_fixed_point(const AsymptoticParams& ap, double delta, double tol = 1e-14, int max_iter = 100000);

enum class Lemma { Inversion, Trace, Rank1, Stieltjes };

std::string_view to_string(Lemma lemma) noexcept;
Lemma lemma_from_string(std::string_view name);

struct LemmaReport {
    double max_deviation = 0.0; ///< largest deviation seen (rank1: largest lhs / bound ratio)
    long violations = 0;        ///< rank1 only: draws where the bound failed
    long draws = 0;
};

/// Draws random instances of a random-matrix identity or bound at dimension n.
///   inversion: x^H (A + tau x x^H)^{-1} vs x^H A^{-1} / (1 + tau x^H A^{-1} x)
///   trace:     |x^H A x - tr(A) / n| with x ~ CN(0, I/n), ||A||_2 <= 1
///   rank1:     |tr[((B - zI)^{-1} - (B + v v^H - zI)^{-1}) A]| <= ||A||_2 / |z|, z = -1
///   stieltjes: (n/N) m_{A^H A}(z) - m_{A A^H}(z) - ((N-n)/N)(1/z) for A of size N x n, N > n
LemmaReport rmt_lemma_check(Lemma lemma, int n, RandomStream rs, long draws = 100);

} // namespace rtri
