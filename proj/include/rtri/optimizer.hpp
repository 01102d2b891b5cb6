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

#include <functional>
#include <utility>
#include <vector>

namespace rtri {

enum class SearchMethod { Exhaustive, ConcaveBisection };
std::string_view to_string(SearchMethod m) noexcept;

/// Search strategy request. Auto picks the concave bisection for t >= kConcaveSearchMinT.
enum class SearchMode { Auto, Exhaustive, ConcaveBisection };

inline constexpr int kConcaveSearchMinT = 10000;

struct TpSearchResult {
    int tp_star = 0;
    double rate_at_star = 0.0;
    std::vector<std::pair<int, double>> trace; ///< evaluated (tp, rate), sorted by tp
    SearchMethod method = SearchMethod::Exhaustive;
    int fallbacks = 0; ///< closed-form evaluations that fell back to quadrature
};

struct SearchOptions {
    SearchMode mode = SearchMode::Auto;
    int threads = 0; ///< exhaustive scan workers; 0 selects hardware concurrency
};

/// Maximizes objective(tp) over integer tp in [lo, hi] with smallest-tp tie-break.
TpSearchResult maximize_over_tp(const std::function<double(int)>& objective, int lo, int hi, SearchMethod method,
                                int threads = 1);

/// Training length maximizing the closed-form ergodic rate; the tp field of
/// `tmpl` is ignored. Always an exhaustive scan over [nt, t-1].
TpSearchResult optimize_tp_exact(const SystemConfig& tmpl, ReceiverKind receiver, const SearchOptions& opt = {});

/// Training length maximizing the deterministic-equivalent rate.
TpSearchResult optimize_tp_asymptotic(const SystemConfig& tmpl, ReceiverKind receiver, const SearchOptions& opt = {});

} // namespace rtri
