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

#include "rtri/asymptotic.hpp"

#include <cmath>
#include <limits>

namespace rtri {

namespace {

void check_zf_beta(ReceiverKind receiver, double beta)
{
    if (receiver == ReceiverKind::ZF && !(beta > 1.0))
        throw Error(ErrorCode::ZfBetaOne, "large-system ZF requires beta = nr/nt > 1");
}

ComplexMatrix gaussian(Eigen::Index rows, Eigen::Index cols, RandomStream& rs, double variance = 1.0)
{
    ComplexMatrix m(rows, cols);
    rs.fill_complex_normal(m, variance);
    return m;
}

ComplexMatrix haar_unitary(int n, RandomStream& rs)
{
    Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(n, n, rs));
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const cdouble d = r(j, j);
        q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : cdouble(1.0);
    }
    return q;
}

cdouble stieltjes(const ComplexMatrix& x, cdouble z)
{
    ComplexMatrix shifted = x;
    shifted.diagonal().array() -= z;
    return shifted.partialPivLu().inverse().trace() / static_cast<double>(x.rows());
}

} // namespace

AsymptoticParams asymptotic_params(double beta, double c1, double delta)
{
    AsymptoticParams ap;
    ap.beta = beta;
    ap.c1 = c1;
    ap.d = c1 / (1.0 + delta * delta) + 1.0 - beta;
    return ap;
}

AsymptoticParams asymptotic_params(const SystemConfig& cfg)
{
    if (cfg.nt < 1 || cfg.nr < 1 || cfg.tp < cfg.nt || cfg.tp > cfg.t || !(cfg.rho > 0.0) || !(cfg.delta >= 0.0))
        throw Error(ErrorCode::InvalidConfig, "asymptotic parameters need nt <= tp <= t, rho > 0, delta >= 0");
    const double c0 = noise_factor_c0(cfg.nt, cfg.tp, cfg.rho, cfg.delta);
    AsymptoticParams ap = asymptotic_params(static_cast<double>(cfg.nr) / cfg.nt, c0 / cfg.nt, cfg.delta);
    ap.epsilon_bar = estimation_quality(cfg.nt, cfg.tp, cfg.rho, cfg.delta);
    return ap;
}

double det_sinr(ReceiverKind receiver, const AsymptoticParams& ap, double delta)
{
    check_zf_beta(receiver, ap.beta);
    if (!(ap.c1 > 0.0) || !(delta >= 0.0)) throw Error(ErrorCode::DomainError, "det_sinr: need c1 > 0, delta >= 0");
    const double d2 = delta * delta;
    const double beta = ap.beta;
    switch (receiver) {
    case ReceiverKind::ZF:
        return (beta - 1.0) / (d2 * (beta - 1.0) + ap.c1);
    case ReceiverKind::MRC:
        return beta / (1.0 + d2 + ap.c1 + d2 * beta);
    case ReceiverKind::MMSE: {
        const double q = ap.c1 / (1.0 + d2);
        const double disc = std::sqrt(ap.d * ap.d + 4.0 * beta * q);
        // Both branches give the positive root; the second avoids cancellation when d > 0.
        const double m = ap.d <= 0.0 ? (disc - ap.d) / (2.0 * q) : 2.0 * beta / (disc + ap.d);
        return m / (1.0 + d2 + d2 * m);
    }
    }
    return 0.0;
}

double det_sinr_limit(double delta)
{
    if (!(delta > 0.0)) throw Error(ErrorCode::DomainError, "det_sinr_limit: delta must be > 0");
    return 1.0 / (delta * delta);
}

double det_rate(ReceiverKind receiver, const SystemConfig& cfg)
{
    const AsymptoticParams ap = asymptotic_params(cfg);
    if (cfg.tp == cfg.t) {
        check_zf_beta(receiver, ap.beta);
        return 0.0;
    }
    const double g = det_sinr(receiver, ap, cfg.delta);
    return (1.0 - static_cast<double>(cfg.tp) / cfg.t) * cfg.nt * std::log2(1.0 + g);
}

double mmse_fixed_point(const AsymptoticParams& ap, double delta, double tol, int max_iter)
{
    const double s = (1.0 + delta * delta) / ap.c1;
    double m = s * ap.beta;
    for (int i = 0; i < max_iter; ++i) {
        // Damped, since the slope -s/(1+m)^2 of the plain map can exceed 1 in magnitude.
        const double next = s * (ap.beta - 1.0) + s / (1.0 + m);
        const double blended = 0.5 * (m + next);
        if (std::abs(blended - m) <= tol * std::abs(m)) return blended;
        m = blended;
    }
    throw Error(ErrorCode::AccuracyError, "mmse_fixed_point: iteration did not converge");
}

std::string_view to_string(Lemma lemma) noexcept
{
    switch (lemma) {
    case Lemma::Inversion: return "inversion";
    case Lemma::Trace: return "trace";
    case Lemma::Rank1: return "rank1";
    case Lemma::Stieltjes: return "stieltjes";
    }
    return "?";
}

Lemma lemma_from_string(std::string_view name)
{
    for (Lemma l : {Lemma::Inversion, Lemma::Trace, Lemma::Rank1, Lemma::Stieltjes})
        if (to_string(l) == name) return l;
    throw Error(ErrorCode::UsageError, "unknown lemma '" + std::string(name) + "'");
}

LemmaReport rmt_lemma_check(Lemma lemma, int n, RandomStream rs, long draws)
{
    if (n < 2) throw Error(ErrorCode::DomainError, "rmt_lemma_check: n must be >= 2");
    if (draws < 1) throw Error(ErrorCode::DomainError, "rmt_lemma_check: draws must be >= 1");
    LemmaReport rep;
    rep.draws = draws;
    const double dn = n;

    for (long i = 0; i < draws; ++i) {
        double dev = 0.0;
        switch (lemma) {
        case Lemma::Inversion: {
            const ComplexMatrix g = gaussian(n, n, rs);
            ComplexMatrix a = g * g.adjoint() / dn;
            a.diagonal().array() += 1.0;
            const ComplexVector x = gaussian(n, 1, rs);
            const double tau = rs.uniform() * 2.0;
            const ComplexMatrix perturbed = a + tau * x * x.adjoint();
            const Eigen::RowVectorXcd lhs = x.adjoint() * perturbed.llt().solve(ComplexMatrix::Identity(n, n));
            const ComplexVector ainv_x = a.llt().solve(x);
            const Eigen::RowVectorXcd rhs = ainv_x.adjoint() / (1.0 + tau * x.dot(ainv_x).real());
            dev = (lhs - rhs).norm() / rhs.norm();
            break;
        }
        case Lemma::Trace: {
            Eigen::VectorXd lambda(n);
            for (int k = 0; k < n; ++k) lambda(k) = 2.0 * rs.uniform() - 1.0;
            const ComplexMatrix u = haar_unitary(n, rs);
            const ComplexMatrix a = u * lambda.cast<cdouble>().asDiagonal() * u.adjoint();
            const ComplexVector x = gaussian(n, 1, rs, 1.0 / dn);
            dev = std::abs(x.dot(a * x) - a.trace() / dn);
            break;
        }
        case Lemma::Rank1: {
            const double z = -1.0;
            const ComplexMatrix g = gaussian(n, n, rs);
            ComplexMatrix b = g * g.adjoint() / dn;
            const ComplexVector v = gaussian(n, 1, rs, 1.0 / dn);
            const ComplexMatrix h = gaussian(n, n, rs);
            const ComplexMatrix a = (h + h.adjoint()) / 2.0;
            b.diagonal().array() -= z;
            const ComplexMatrix r1 = b.llt().solve(ComplexMatrix::Identity(n, n));
            const ComplexMatrix r2 = (b + v * v.adjoint()).llt().solve(ComplexMatrix::Identity(n, n));
            const double lhs = std::abs(((r1 - r2) * a).trace());
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
            const double norm_a = es.eigenvalues().cwiseAbs().maxCoeff();
            dev = lhs / (norm_a / std::abs(z));
            if (dev > 1.0) ++rep.violations;
            break;
        }
        case Lemma::Stieltjes: {
            const int big = n + std::max(1, n / 2);
            const cdouble z(-1.0, 0.5);
            const ComplexMatrix a = gaussian(big, n, rs, 1.0 / big);
            const cdouble small_m = stieltjes(a.adjoint() * a, z);
            const cdouble big_m = stieltjes(a * a.adjoint(), z);
            const double ratio = dn / big;
            dev = std::abs(ratio * small_m - big_m - (1.0 - ratio) / z);
            break;
        }
        }
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

} // namespace rtri
