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
#include "rtri/specialfn.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rtri {

/// SINR wall 1/delta^2 (infinite for delta = 0).
double sinr_wall(double delta) noexcept;

/// Per-stream SINR distribution of one receiver for a given effective noise
/// factor c0. The coefficient table is built once; evaluation is cheap.
class SinrDistribution {
public:
    SinrDistribution(ReceiverKind receiver, int nt, int nr, double c0, double delta);

    ReceiverKind receiver() const noexcept { return receiver_; }
    double c0() const noexcept { return c0_; }
    double delta() const noexcept { return delta_; }

    /// Pr{SINR > gamma}; exactly 0 at and beyond the wall.
    double survival(double gamma) const;
    /// Pr{SINR <= gamma}, clamped to [0, 1].
    double cdf(double gamma) const;
    /// ln(1 - F(gamma)); -infinity at and beyond the wall.
    double log_survival(double gamma) const;
    /// ln F(gamma), summed as a positive tail series (accurate where F is tiny).
    double log_lower_tail(double gamma) const;

private:
    ReceiverKind receiver_;
    int nt_, nr_;
    double c0_, delta_;
    std::optional<CoefficientTable> table_;
    std::vector<double> log_factorial_;
    std::vector<double> log_binom_;
};

double sinr_cdf(ReceiverKind receiver, const SystemConfig& cfg, double gamma);
double sinr_survival(ReceiverKind receiver, const SystemConfig& cfg, double gamma);

/// Outage probability Pr{SINR <= threshold}; identical to sinr_cdf.
double outage(ReceiverKind receiver, const SystemConfig& cfg, double threshold);

enum class RateMethod { ClosedForm, Quadrature };

struct RateResult {
    double rate = 0.0;              ///< bits per channel use
    RateMethod method = RateMethod::ClosedForm;
    bool fallback = false;          ///< closed form rejected by the cancellation guard
    double cancellation = 1.0;      ///< sum |terms| / |sum| of the alternating series
    double max_term = 0.0;          ///< largest |term| seen in the series
};

/// Cancellation factor above which the alternating series is abandoned for quadrature.
inline constexpr double kCancellationLimit = 1e6;

/// Ergodic rate from the closed-form special-function series. delta = 0 is
/// served by quadrature of the delta = 0 distribution.
RateResult rate_closed_form(ReceiverKind receiver, const SystemConfig& cfg);

/// Ergodic rate by adaptive quadrature of the SINR survival function.
double rate_quadrature(ReceiverKind receiver, const SystemConfig& cfg);

/// Low-SNR Taylor limit; independent of delta.
double rate_low_snr(ReceiverKind receiver, const SystemConfig& cfg);

/// High-SNR rate ceiling (closed form at c0 = c0_bar). Requires delta > 0.
RateResult rate_ceiling(ReceiverKind receiver, const SystemConfig& cfg);

// Lower-level entry points with an explicit noise factor c0.
RateResult rate_series_c0(ReceiverKind receiver, int nt, int nr, int t, int tp, double c0, double delta);
double rate_quadrature_c0(ReceiverKind receiver, int nt, int nr, int t, int tp, double c0, double delta);

/// Analytic NMSE 1/(1+epsilon).
double nmse_analytic(const SystemConfig& cfg);

enum class CurveProvenance { Analytic, Quadrature, Simulated, Asymptotic };
std::string_view to_string(CurveProvenance p) noexcept;

/// A rate curve over one axis (SNR in dB, training length, or antenna count).
/// Points are kept sorted by x with no duplicates; rates are non-negative.
struct RateCurve {
    std::string axis;
    std::vector<std::pair<double, double>> points;
    CurveProvenance provenance = CurveProvenance::Analytic;
    ReceiverKind receiver = ReceiverKind::MMSE;
    SystemConfig cfg;

    /// Inserts a point, replacing an existing one at the same x.
    void add(double x, double rate);
    bool valid() const;
};

} // namespace rtri
