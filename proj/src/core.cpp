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

#include "rtri/core.hpp"

#include <cmath>
#include <sstream>

namespace rtri {

std::string_view to_string(ReceiverKind kind) noexcept
{
    switch (kind) {
    case ReceiverKind::ZF: return "zf";
    case ReceiverKind::MRC: return "mrc";
    case ReceiverKind::MMSE: return "mmse";
    }
    return "?";
}

ReceiverKind receiver_from_string(std::string_view name)
{
    if (name == "zf" || name == "ZF") return ReceiverKind::ZF;
    if (name == "mrc" || name == "MRC") return ReceiverKind::MRC;
    if (name == "mmse" || name == "MMSE") return ReceiverKind::MMSE;
    throw Error(ErrorCode::UsageError, "unknown receiver '" + std::string(name) + "'");
}

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::InfeasiblePilot: return "infeasible-pilot";
    case ErrorCode::ZfRequiresTallChannel: return "zf-requires-tall-channel";
    case ErrorCode::ZfBetaOne: return "zf-beta-one";
    case ErrorCode::DomainError: return "domain-error";
    case ErrorCode::AccuracyError: return "accuracy-error";
    case ErrorCode::SingularMatrix: return "singular-matrix";
    case ErrorCode::UsageError: return "usage-error";
    }
    return "unknown-error";
}

void validate(const SystemConfig& cfg)
{
    auto fail = [&](const char* why) {
        std::ostringstream os;
        os << "invalid config (nt=" << cfg.nt << ", nr=" << cfg.nr << ", t=" << cfg.t << ", tp=" << cfg.tp
           << ", rho=" << cfg.rho << ", delta=" << cfg.delta << "): " << why;
        throw Error(ErrorCode::InvalidConfig, os.str());
    };
    if (cfg.nt < 1) fail("nt must be >= 1");
    if (cfg.nr < 1) fail("nr must be >= 1");
    if (cfg.nt > cfg.tp) fail("training length must satisfy tp >= nt");
    if (cfg.tp >= cfg.t) fail("training length must satisfy tp < t");
    if (!(cfg.rho > 0.0) || !std::isfinite(cfg.rho)) fail("rho must be positive and finite");
    if (!(cfg.delta >= 0.0) || !std::isfinite(cfg.delta)) fail("delta must be >= 0");
}

double estimation_quality(int nt, int tp, double rho, double delta) noexcept
{
    return rho * tp / (nt * (rho * delta * delta + 1.0));
}

double noise_factor_c0(int nt, int tp, double rho, double delta) noexcept
{
    const double eps = estimation_quality(nt, tp, rho, delta);
    const double d2 = delta * delta;
    return nt * (rho + rho * d2 + 1.0 + eps) / (rho * eps);
}

double noise_factor_c0_bar(int nt, int tp, double delta) noexcept
{
    const double d2 = delta * delta;
    return d2 * (1.0 + d2) * nt * nt / tp;
}

double nmse_floor(int nt, int tp, double delta) noexcept
{
    if (delta == 0.0) return 0.0;
    return 1.0 / (1.0 + tp / (nt * delta * delta));
}

DerivedParams derive_params(const SystemConfig& cfg)
{
    validate(cfg);
    DerivedParams p;
    p.epsilon = estimation_quality(cfg.nt, cfg.tp, cfg.rho, cfg.delta);
    p.sigma2_err = 1.0 / (1.0 + p.epsilon);
    p.sigma2_est = p.epsilon / (1.0 + p.epsilon);
    p.c0 = noise_factor_c0(cfg.nt, cfg.tp, cfg.rho, cfg.delta);
    p.c0_bar = noise_factor_c0_bar(cfg.nt, cfg.tp, cfg.delta);
    p.epsilon_bar = p.epsilon;
    const double d2 = cfg.delta * cfg.delta;
    p.c1 = (cfg.rho + cfg.rho * d2 + 1.0 + p.epsilon_bar) / (cfg.rho * p.epsilon_bar);
    p.beta = static_cast<double>(cfg.nr) / cfg.nt;
    p.d = p.c1 / (1.0 + d2) + 1.0 - p.beta;
    return p;
}

} // namespace rtri
