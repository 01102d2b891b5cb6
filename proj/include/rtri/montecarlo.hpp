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

#include "rtri/analytic.hpp"
#include "rtri/core.hpp"
#include "rtri/random.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rtri {

/// Trials per Monte Carlo batch. Batch b draws from rs.substream(b), so the
/// partition is part of the reproducibility contract.
inline constexpr long kBatchSize = 4096;

/// nt x tp pilot matrix with Sp Sp^H = tp I: the first nt rows of a tp-point DFT.
ComplexMatrix gen_pilot_matrix(int nt, int tp);

/// Test hooks for the training simulator.
struct TrainingOptions {
    bool zero_noise = false;      ///< force Vp = 0
    bool zero_impairment = false; ///< force Delta_p = 0 regardless of delta
};

struct TrainingDraw {
    ComplexMatrix h;       ///< nr x nt channel
    ComplexMatrix yp;      ///< nr x tp received pilots
    ComplexMatrix delta_p; ///< nt x tp transmit impairment on the pilots
    ComplexMatrix sp;      ///< nt x tp pilot matrix used
};

/// One training phase: Yp = sqrt(rho/nt) H (Sp + Delta_p) + Vp.
TrainingDraw simulate_training(const SystemConfig& cfg, RandomStream& rs, const TrainingOptions& opt = {});

/// LMMSE estimator sqrt(rho/nt) Yp ((rho/nt) Sp^H Sp + (delta^2 rho + 1) I)^{-1} Sp^H,
/// with the tp x nt right factor computed once per (cfg, Sp).
class LmmseEstimator {
public:
    LmmseEstimator(const ComplexMatrix& sp, const SystemConfig& cfg);
    ComplexMatrix apply(const ComplexMatrix& yp) const;
    const ComplexMatrix& right_factor() const noexcept { return right_; }

private:
    ComplexMatrix right_;
};

ComplexMatrix lmmse_estimate(const ComplexMatrix& yp, const ComplexMatrix& sp, const SystemConfig& cfg);

/// Per-stream SINR values computed from a normalized estimate Hbar (nr x nt).
/// Writes nt values into `out`.
void sinr_from_estimate(ReceiverKind receiver, const ComplexMatrix& hbar, double c0, double delta,
                        std::span<double> out);

/// Monte Carlo SINR realizations; nt samples per trial, trial-major order.
struct SinrSampleSet {
    ReceiverKind receiver = ReceiverKind::MMSE;
    std::vector<double> samples;
    SystemConfig cfg;
    long trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

struct SamplingOptions {
    int threads = 0; ///< 0 selects std::thread::hardware_concurrency()
};

/// SINR samples for one receiver.
SinrSampleSet sample_sinr(const SystemConfig& cfg, ReceiverKind receiver, long trials, const RandomStream& rs,
                          const SamplingOptions& opt = {});

/// SINR samples for several receivers evaluated on the same channel and
/// estimate draws. Entry i of the result belongs to receivers[i]; every entry
/// is identical to what sample_sinr would return for that receiver.
std::vector<SinrSampleSet> sample_sinr_multi(const SystemConfig& cfg, std::span<const ReceiverKind> receivers,
                                             long trials, const RandomStream& rs, const SamplingOptions& opt = {});

/// Runs the full training + estimation chain, forms receiver weights from the
/// estimate and the conditional interference covariance, and returns the
/// largest relative deviation between the quadratic-form SINR and the
/// closed-form per-stream SINR.
double validate_sinr_end_to_end(const SystemConfig& cfg, ReceiverKind receiver, long trials, RandomStream rs);

/// (td/t) nt mean(log2(1 + gamma)).
double rate_from_samples(const SinrSampleSet& set);
double empirical_rate(const SystemConfig& cfg, ReceiverKind receiver, long trials, const RandomStream& rs,
                      const SamplingOptions& opt = {});

/// Fraction of samples <= threshold.
double empirical_outage(const SinrSampleSet& set, double threshold);

double mean_sinr(const SinrSampleSet& set);

/// Kolmogorov-Smirnov distance between the empirical CDF of the samples and `dist`.
double ks_distance(const SinrSampleSet& set, const SinrDistribution& dist);

/// Mean of ||H - Hhat||_F^2 / (nr nt) over explicit training + LMMSE estimation.
double empirical_nmse(const SystemConfig& cfg, long trials, const RandomStream& rs, const SamplingOptions& opt = {});

} // namespace rtri
