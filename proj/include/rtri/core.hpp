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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rtri {

using cdouble = std::complex<double>;

// Dense complex matrix shared by every module (channels, pilots, signals, weights).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class ReceiverKind { ZF, MRC, MMSE };

std::string_view to_string(ReceiverKind kind) noexcept;
ReceiverKind receiver_from_string(std::string_view name);

enum class ErrorCode {
    InvalidConfig = 1,
    InfeasiblePilot,
    ZfRequiresTallChannel,
    ZfBetaOne,
    DomainError,
    AccuracyError,
    SingularMatrix,
    UsageError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying one of the library error categories.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parameter tuple of one training-based link.
///
/// `rho` is the average SNR per receive antenna in linear units and `delta`
/// the residual transmit impairment level (equal to the EVM). The feasible
/// training range is nt <= tp < t.
struct SystemConfig {
    int nt = 4;
    int nr = 4;
    int t = 200;
    int tp = 4;
    double rho = 10.0;
    double delta = 0.0;

    int td() const noexcept { return t - tp; }
    bool operator==(const SystemConfig&) const = default;
};

/// Throws Error(InvalidConfig) when the config violates nt <= tp < t, rho > 0, delta >= 0.
void validate(const SystemConfig& cfg);

/// Scalars derived from a SystemConfig.
struct DerivedParams {
    double epsilon = 0.0;     ///< estimation quality factor
    double sigma2_err = 0.0;  ///< per-entry NMSE of the channel estimate
    double sigma2_est = 0.0;  ///< per-entry variance of the channel estimate
    double c0 = 0.0;          ///< finite-dimension effective noise factor
    double c0_bar = 0.0;      ///< high-SNR limit of c0
    double epsilon_bar = 0.0; ///< large-system estimation quality factor
    double c1 = 0.0;          ///< large-system noise factor, c0 / nt
    double beta = 0.0;        ///< nr / nt
    double d = 0.0;           ///< auxiliary of the large-system MMSE solution
};

DerivedParams derive_params(const SystemConfig& cfg);

// Closed-form pieces of derive_params, exposed for reuse by the analytic modules.
double estimation_quality(int nt, int tp, double rho, double delta) noexcept;
double noise_factor_c0(int nt, int tp, double rho, double delta) noexcept;
double noise_factor_c0_bar(int nt, int tp, double delta) noexcept;

/// NMSE floor reached as rho grows without bound: 1 / (1 + tp / (nt delta^2)).
double nmse_floor(int nt, int tp, double delta) noexcept;

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) noexcept { return 10.0 * std::log10(lin); }

} // namespace rtri
