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

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAccuracy = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fully resolved parameters of one run. Serialized into the manifest and
/// read back by `verify`.
struct RunOptions {
    std::string command;
    std::string preset;
    std::vector<int> nt;
    std::vector<int> nr;
    int t = 200;
    int tp = 0; ///< 0: per-command choice (nt, or optimized)
    std::vector<double> deltas;
    double snr_db_min = 0.0;
    double snr_db_max = 0.0;
    double snr_db_step = 2.0;
    double x_db_min = -10.0; ///< outage thresholds
    double x_db_max = 30.0;
    double x_db_step = 2.0;
    long trials = 100000;
    std::uint64_t seed = 1;
    std::string receiver = "all";
    std::string format = "csv";
    std::string table = "both"; ///< asymptotic: deviation | tp | both
    std::string out = ".";
    int threads = 0;
    bool plot_script = false;

    std::vector<std::pair<int, int>> antenna_pairs() const;
    std::vector<double> snr_grid() const;
    std::vector<double> threshold_grid() const;
    std::vector<std::string> receivers() const;
};

/// Flags given explicitly on the command line; unset fields fall back to the
/// preset, then to the command defaults.
struct ExplicitArgs {
    std::optional<std::vector<int>> nt, nr;
    std::optional<int> t, tp;
    std::optional<std::vector<double>> deltas;
    std::optional<double> snr_db_min, snr_db_max, snr_db_step;
    std::optional<double> x_db_min, x_db_max, x_db_step;
    std::optional<long> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> receiver, format, table, preset;
    std::string out = ".";
    int threads = 0;
    bool plot_script = false;
};

RunOptions resolve(const std::string& command, const ExplicitArgs& args);
void check(const RunOptions& opt);

/// Names of the figure presets and the subcommand each belongs to.
std::string preset_command(const std::string& preset);

nlohmann::json to_json(const RunOptions& opt);
RunOptions run_options_from_json(const nlohmann::json& j);

std::vector<double> grid(double lo, double hi, double step);

} // namespace cli
