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

#include "commands.hpp"
#include "manifest.hpp"
#include "options.hpp"
#include "table.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;

namespace {

using cli::ExplicitArgs;
using cli::RunOptions;

// Raw flag storage; presence is read back from the CLI11 option counts.
struct RawFlags {
    std::vector<int> nt, nr;
    int t = 0, tp = 0;
    std::vector<double> deltas;
    double snr_min = 0, snr_max = 0, snr_step = 0, x_min = 0, x_max = 0, x_step = 0;
    long trials = 0;
    std::uint64_t seed = 0;
    std::string receiver, format, table, preset;
    std::string out = ".";
    int threads = 0;
    bool plot_script = false;
};

void add_run_flags(CLI::App* sub, RawFlags& f, bool with_table, bool with_thresholds)
{
    sub->add_option("--nt", f.nt, "transmit antennas (repeatable; paired with --nr)");
    sub->add_option("--nr", f.nr, "receive antennas (repeatable; paired with --nt)");
    sub->add_option("--t", f.t, "coherence block length");
    sub->add_option("--tp", f.tp, "training length (default: nt, or optimized where the command optimizes it)");
    sub->add_option("--delta", f.deltas, "impairment level (repeatable)");
    sub->add_option("--snr-db-min", f.snr_min, "first SNR grid point [dB]");
    sub->add_option("--snr-db-max", f.snr_max, "last SNR grid point [dB]");
    sub->add_option("--snr-db-step", f.snr_step, "SNR grid step [dB]");
    if (with_thresholds) {
        sub->add_option("--x-db-min", f.x_min, "first outage threshold [dB]");
        sub->add_option("--x-db-max", f.x_max, "last outage threshold [dB]");
        sub->add_option("--x-db-step", f.x_step, "outage threshold step [dB]");
    }
    sub->add_option("--trials", f.trials, "Monte Carlo trials per point (default 100000)");
    sub->add_option("--seed", f.seed, "random seed (default 1)");
    sub->add_option("--receiver", f.receiver, "zf, mrc, mmse or all")
        ->check(CLI::IsMember({"zf", "mrc", "mmse", "all"}));
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (with_table)
        sub->add_option("--table", f.table, "deviation, tp or both")
            ->check(CLI::IsMember({"deviation", "tp", "both"}));
    sub->add_option("--preset", f.preset, "figure preset fig1 ... fig6");
    sub->add_option("--out", f.out, "output directory (default .)");
    sub->add_option("--threads", f.threads, "worker threads (default: all cores; results do not depend on it)");
    sub->add_flag("--plot-script", f.plot_script, "also write a matplotlib script per table");
}

template <class T>
std::optional<T> given(const CLI::App* sub, const char* name, const T& value)
{
    if (sub->count(name) == 0) return std::nullopt;
    return value;
}

ExplicitArgs collect(const CLI::App* sub, const RawFlags& f)
{
    ExplicitArgs a;
    a.nt = given(sub, "--nt", f.nt);
    a.nr = given(sub, "--nr", f.nr);
    a.t = given(sub, "--t", f.t);
    a.tp = given(sub, "--tp", f.tp);
    a.deltas = given(sub, "--delta", f.deltas);
    a.snr_db_min = given(sub, "--snr-db-min", f.snr_min);
    a.snr_db_max = given(sub, "--snr-db-max", f.snr_max);
    a.snr_db_step = given(sub, "--snr-db-step", f.snr_step);
    if (sub->get_option_no_throw("--x-db-min")) {
        a.x_db_min = given(sub, "--x-db-min", f.x_min);
        a.x_db_max = given(sub, "--x-db-max", f.x_max);
        a.x_db_step = given(sub, "--x-db-step", f.x_step);
    }
    a.trials = given(sub, "--trials", f.trials);
    a.seed = given(sub, "--seed", f.seed);
    a.receiver = given(sub, "--receiver", f.receiver);
    a.format = given(sub, "--format", f.format);
    if (sub->get_option_no_throw("--table")) a.table = given(sub, "--table", f.table);
    a.preset = given(sub, "--preset", f.preset);
    a.out = f.out;
    a.threads = f.threads;
    a.plot_script = f.plot_script;
    if (a.tp && *a.tp < 1) throw cli::UsageError("--tp must be >= 1");
    return a;
}

void write_file(const fs::path& path, const std::string& data)
{
    std::ofstream os(path, std::ios::binary);
    os << data;
    if (!os) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Runs the command and writes tables plus the manifest into opt.out.
fs::path execute(const RunOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    nlohmann::json notes;
    const std::vector<cli::Table> tables = cli::run_command(opt, notes);

    const fs::path dir(opt.out);
    fs::create_directories(dir);
    std::vector<cli::OutputFile> outputs;
    auto emit = [&](const std::string& name, const std::string& data) {
        write_file(dir / name, data);
        outputs.push_back({name, cli::sha256_hex(data), data.size()});
    };
    for (const auto& t : tables) {
        const std::string name = t.name + "." + opt.format;
        emit(name, opt.format == "csv" ? cli::render_csv(t) : cli::render_json(t));
        if (opt.plot_script && opt.format == "csv") emit(t.name + "_plot.py", cli::render_plot_script(t, name));
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path manifest = dir / cli::manifest_name(opt.command);
    write_file(manifest, cli::make_manifest(opt, outputs, wall, notes).dump(2) + "\n");
    return manifest;
}

int verify(const std::string& manifest_path, const std::string& out_dir, int threads)
{
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw cli::UsageError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!manifest.contains("parameters") || !manifest.contains("outputs"))
        throw cli::UsageError("manifest lacks parameters or outputs");
    RunOptions opt = cli::run_options_from_json(manifest["parameters"]);
    opt.threads = threads;
    const fs::path original_dir = fs::path(manifest_path).parent_path();
    fs::path rerun_dir = out_dir.empty() ? fs::temp_directory_path() / ("rtri-verify-" + std::to_string(::getpid()))
                                         : fs::path(out_dir);
    if (fs::exists(rerun_dir) && fs::equivalent(original_dir.empty() ? fs::path(".") : original_dir, rerun_dir))
        throw cli::UsageError("verify output directory must differ from the manifest directory");
    opt.out = rerun_dir.string();
    const fs::path new_manifest = execute(opt);
    const nlohmann::json fresh = nlohmann::json::parse(read_file(new_manifest));

    int mismatches = 0;
    const auto& expected = manifest["outputs"];
    for (const auto& entry : expected) {
        const std::string file = entry.at("file").get<std::string>();
        std::string digest;
        for (const auto& f : fresh["outputs"])
            if (f.at("file") == file) digest = f.at("sha256").get<std::string>();
        if (digest == entry.at("sha256").get<std::string>()) {
            std::cout << "identical  " << file << "\n";
            continue;
        }
        ++mismatches;
        std::cout << "DIFFERENT  " << file << "\n";
        if (digest.empty()) continue;
        std::istringstream a(fs::exists(original_dir / file) ? read_file(original_dir / file) : std::string());
        std::istringstream b(read_file(rerun_dir / file));
        std::string la, lb;
        for (int line = 1; std::getline(b, lb); ++line) {
            if (!std::getline(a, la) || la != lb) {
                std::cout << "  first difference at line " << line << "\n  - " << la << "\n  + " << lb << "\n";
                break;
            }
        }
    }
    if (fresh["outputs"].size() != expected.size()) ++mismatches;
    std::cout << "verify: " << (expected.size() - std::min<std::size_t>(mismatches, expected.size())) << "/"
              << expected.size() << " outputs reproduced; re-run written to " << rerun_dir.string() << "\n";
    return mismatches == 0 ? cli::kExitOk : cli::kExitFailure;
}

int exit_code_for(rtri_status s)
{
    switch (s) {
    case RTRI_ERR_ACCURACY: return cli::kExitAccuracy;
    case RTRI_ERR_INVALID_CONFIG:
    case RTRI_ERR_INFEASIBLE_PILOT:
    case RTRI_ERR_ZF_REQUIRES_TALL_CHANNEL:
    case RTRI_ERR_ZF_BETA_ONE:
    case RTRI_ERR_DOMAIN:
    case RTRI_ERR_USAGE: return cli::kExitUsage;
    default: return cli::kExitFailure;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Training-based MIMO links with residual transmit impairments: estimation error, SINR "
                 "distributions, ergodic rates, large-system limits and training-length optimization."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("rtri-mimo 1.0.0 (library ") + rtri_version() + ")");

    const std::vector<std::pair<std::string, std::string>> runs = {
        {"nmse", "channel-estimation NMSE versus SNR (analytic, floor, simulated)"},
        {"outage", "SINR outage probability versus threshold (analytic, simulated)"},
        {"rates", "ergodic rates at the optimal training length (analytic, simulated, ceiling)"},
        {"opt-tp", "optimal training length versus SNR"},
        {"asymptotic", "large-system deterministic equivalents: rate deviation and optimal training"},
    };
    std::map<std::string, RawFlags> flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : runs) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_run_flags(sub, flags[name], name == "asymptotic", name == "outage");
        subs[name] = sub;
    }
    std::string manifest_path, verify_out;
    int verify_threads = 0;
    CLI::App* verify_cmd = app.add_subcommand("verify", "re-run a manifest and compare outputs byte by byte");
    verify_cmd->add_option("manifest", manifest_path, "manifest JSON written by a previous run")
        ->required()
        ->check(CLI::ExistingFile);
    verify_cmd->add_option("--out", verify_out, "directory for the re-run (default: a temporary directory)");
    verify_cmd->add_option("--threads", verify_threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kExitOk : cli::kExitUsage;
    }

    try {
        if (verify_cmd->parsed()) return verify(manifest_path, verify_out, verify_threads);
        for (const auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            const RunOptions opt = cli::resolve(name, collect(sub, flags[name]));
            const fs::path manifest = execute(opt);
            std::cout << "wrote " << manifest.string() << "\n";
            return cli::kExitOk;
        }
    } catch (const cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return cli::kExitUsage;
    } catch (const cli::LibraryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.status());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitFailure;
    }
    return cli::kExitUsage;
}
