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

#include "options.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cli {

namespace {

struct Defaults {
    std::vector<int> nt, nr;
    int t;
    std::vector<double> deltas;
    double snr_min, snr_max;
    std::optional<long> trials;
    std::optional<std::string> table;
};

Defaults command_defaults(const std::string& command)
{
    if (command == "nmse") return {{4}, {4}, 100, {0.0, 0.05, 0.1, 0.15}, -10.0, 60.0, {}, {}};
    if (command == "outage") return {{5}, {5, 30}, 200, {0.0, 0.1, 0.175}, 30.0, 30.0, {}, {}};
    if (command == "rates") return {{4}, {4}, 200, {0.0, 0.05, 0.15}, -10.0, 40.0, {}, {}};
    if (command == "opt-tp") return {{4}, {4}, 200, {0.0, 0.05, 0.15}, -30.0, 40.0, {}, {}};
    if (command == "asymptotic") return {{8, 16, 32}, {16, 32, 64}, 500, {0.0, 0.1}, -10.0, 30.0, {}, {}};
    throw UsageError("unknown subcommand '" + command + "'");
}

// Presets mirror the figure setups; only fields that differ from the command defaults appear here.
Defaults preset_defaults(const std::string& preset)
{
    if (preset == "fig5") {
        Defaults d = command_defaults("asymptotic");
        d.trials = 2000;
        d.table = "deviation";
        return d;
    }
    if (preset == "fig6") return {{8, 8}, {16, 256}, 500, {0.0, 0.15}, -10.0, 40.0, {}, std::string("tp")};
    return command_defaults(preset_command(preset));
}

template <class T>
T pick(const std::optional<T>& given, const std::optional<T>& fallback, const T& base)
{
    if (given) return *given;
    if (fallback) return *fallback;
    return base;
}

} // namespace

std::string preset_command(const std::string& preset)
{
    static const std::map<std::string, std::string> table = {
        {"fig1", "nmse"}, {"fig2", "outage"}, {"fig3", "rates"},
        {"fig4", "opt-tp"}, {"fig5", "asymptotic"}, {"fig6", "asymptotic"},
    };
    auto it = table.find(preset);
    if (it == table.end()) throw UsageError("unknown preset '" + preset + "' (expected fig1 ... fig6)");
    return it->second;
}

std::vector<double> grid(double lo, double hi, double step)
{
    if (!(step > 0.0)) throw UsageError("grid step must be > 0");
    if (hi < lo) throw UsageError("grid maximum is below its minimum");
    std::vector<double> out;
    const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

std::vector<std::pair<int, int>> RunOptions::antenna_pairs() const
{
    const std::size_t n = std::max(nt.size(), nr.size());
    if ((nt.size() != n && nt.size() != 1) || (nr.size() != n && nr.size() != 1))
        throw UsageError("--nt and --nr must have equal counts, or one of them a single value");
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(nt[nt.size() == 1 ? 0 : i], nr[nr.size() == 1 ? 0 : i]);
    return out;
}

std::vector<double> RunOptions::snr_grid() const { return grid(snr_db_min, snr_db_max, snr_db_step); }

std::vector<double> RunOptions::threshold_grid() const { return grid(x_db_min, x_db_max, x_db_step); }

std::vector<std::string> RunOptions::receivers() const
{
    if (receiver == "all") return {"zf", "mrc", "mmse"};
    return {receiver};
}

RunOptions resolve(const std::string& command, const ExplicitArgs& a)
{
    const Defaults base = command_defaults(command);
    std::optional<Defaults> pre;
    if (a.preset) {
        if (preset_command(*a.preset) != command)
            throw UsageError("preset " + *a.preset + " belongs to the '" + preset_command(*a.preset) + "' subcommand");
        pre = preset_defaults(*a.preset);
    }
    const Defaults& d = pre ? *pre : base;

    RunOptions o;
    o.command = command;
    o.preset = a.preset.value_or("");
    o.nt = a.nt.value_or(d.nt);
    o.nr = a.nr.value_or(d.nr);
    o.t = a.t.value_or(d.t);
    o.tp = a.tp.value_or(0);
    o.deltas = a.deltas.value_or(d.deltas);
    o.snr_db_min = a.snr_db_min.value_or(d.snr_min);
    o.snr_db_max = a.snr_db_max.value_or(std::max(d.snr_max, o.snr_db_min));
    o.snr_db_step = a.snr_db_step.value_or(2.0);
    o.x_db_min = a.x_db_min.value_or(-10.0);
    o.x_db_max = a.x_db_max.value_or(30.0);
    o.x_db_step = a.x_db_step.value_or(2.0);
    o.trials = pick<long>(a.trials, d.trials, 100000);
    o.seed = a.seed.value_or(1);
    o.receiver = a.receiver.value_or("all");
    o.format = a.format.value_or("csv");
    o.table = pick<std::string>(a.table, d.table, "both");
    o.out = a.out;
    o.threads = a.threads;
    o.plot_script = a.plot_script;
    check(o);
    return o;
}

void check(const RunOptions& o)
{
    command_defaults(o.command);
    if (o.nt.empty() || o.nr.empty()) throw UsageError("--nt and --nr need at least one value");
    for (int v : o.nt)
        if (v < 1) throw UsageError("--nt must be >= 1");
    for (int v : o.nr)
        if (v < 1) throw UsageError("--nr must be >= 1");
    o.antenna_pairs();
    if (o.t < 2) throw UsageError("--t must be >= 2");
    if (o.tp < 0) throw UsageError("--tp must be >= 1");
    if (o.deltas.empty()) throw UsageError("--delta needs at least one value");
    for (double d : o.deltas)
        if (!(d >= 0.0)) throw UsageError("--delta must be >= 0");
    o.snr_grid();
    o.threshold_grid();
    if (o.trials < 1) throw UsageError("--trials must be >= 1");
    if (o.receiver != "all" && o.receiver != "zf" && o.receiver != "mrc" && o.receiver != "mmse")
        throw UsageError("--receiver must be one of zf, mrc, mmse, all");
    if (o.format != "csv" && o.format != "json") throw UsageError("--format must be csv or json");
    if (o.table != "deviation" && o.table != "tp" && o.table != "both")
        throw UsageError("--table must be deviation, tp or both");
}

nlohmann::json to_json(const RunOptions& o)
{
    return {
        {"command", o.command},
        {"preset", o.preset},
        {"nt", o.nt},
        {"nr", o.nr},
        {"t", o.t},
        {"tp", o.tp},
        {"delta", o.deltas},
        {"snr_db_min", o.snr_db_min},
        {"snr_db_max", o.snr_db_max},
        {"snr_db_step", o.snr_db_step},
        {"x_db_min", o.x_db_min},
        {"x_db_max", o.x_db_max},
        {"x_db_step", o.x_db_step},
        {"trials", o.trials},
        {"seed", o.seed},
        {"receiver", o.receiver},
        {"format", o.format},
        {"table", o.table},
        {"plot_script", o.plot_script},
    };
}

RunOptions run_options_from_json(const nlohmann::json& j)
{
    try {
        RunOptions o;
        o.command = j.at("command").get<std::string>();
        o.preset = j.value("preset", "");
        o.nt = j.at("nt").get<std::vector<int>>();
        o.nr = j.at("nr").get<std::vector<int>>();
        o.t = j.at("t").get<int>();
        o.tp = j.at("tp").get<int>();
        o.deltas = j.at("delta").get<std::vector<double>>();
        o.snr_db_min = j.at("snr_db_min").get<double>();
        o.snr_db_max = j.at("snr_db_max").get<double>();
        o.snr_db_step = j.at("snr_db_step").get<double>();
        o.x_db_min = j.at("x_db_min").get<double>();
        o.x_db_max = j.at("x_db_max").get<double>();
        o.x_db_step = j.at("x_db_step").get<double>();
        o.trials = j.at("trials").get<long>();
        o.seed = j.at("seed").get<std::uint64_t>();
        o.receiver = j.at("receiver").get<std::string>();
        o.format = j.at("format").get<std::string>();
        o.table = j.at("table").get<std::string>();
        o.plot_script = j.value("plot_script", false);
        check(o);
        return o;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed manifest parameters: ") + e.what());
    }
}

} // namespace cli
