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

#include <array>
#include <cstdint>

namespace rtri {

/// Counter-based random stream (Philox-4x32-10).
///
/// The key is the 64-bit seed and the upper counter half is the 64-bit stream
/// id, so every (seed, stream_id) pair addresses its own 2^64-block sequence.
/// Identical pairs reproduce identical draws.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    /// Independent child stream; used to give each Monte Carlo batch its own stream.
    RandomStream substream(std::uint64_t index) const noexcept;

    /// Uniform double in the open interval (0, 1).
    double uniform() noexcept;
    /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
    cdouble complex_normal() noexcept;
    /// Fills `m` with i.i.d. CN(0, variance) entries (column-major order).
    void fill_complex_normal(ComplexMatrix& m, double variance = 1.0) noexcept;

private:
    std::array<std::uint32_t, 4> next_block() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;
};

/// Raw Philox-4x32-10 bijection, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

} // namespace rtri
