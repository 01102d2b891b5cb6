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

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace cli {

namespace {

void ok(rtri_status s)
{
    if (s != RTRI_OK) throw LibraryError(s, std::string(rtri_status_name(s)) + ": " + rtri_last_error_message());
}

struct SampleSetDeleter {
    void operator()(rtri_sample_set* s) const { rtri_sample_set_free(s); }
};
struct TpSearchDeleter {
    void operator()(rtri_tp_search* s) const { rtri_tp_search_free(s); }
};
using SampleSet = std::unique_ptr<rtri_sample_set, SampleSetDeleter>;
using TpSearch = std::unique_ptr<rtri_tp_search, TpSearchDeleter>;

rtri_receiver receiver_code(const std::string& name)
{
    if (name == "zf") return RTRI_ZF;
    if (name == "mrc") return RTRI_MRC;
    return RTRI_MMSE;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

rtri_config make_config(int nt, int nr, int t, int tp, double snr_db, double delta)
{
    return {nt, nr, t, tp, db_to_linear(snr_db), delta};
}

// Stream ids are handed out in loop order, so every Monte Carlo call of a run
// draws from its own reproducible stream.
class StreamCounter {
public:
    std::uint64_t next() { return ++id_; }

private:
    std::uint64_t id_ = 0;
};

std::vector<SampleSet> sample_multi(const rtri_config& cfg, const std::vector<rtri_receiver>& receivers,
                                    const RunOptions& opt, std::uint64_t stream)
{
    std::vector<rtri_sample_set*> raw(receivers.size(), nullptr);
    ok(rtri_sample_sinr_multi(&cfg, receivers.data(), receivers.size(), opt.trials, opt.seed, stream, opt.threads,
                              raw.data()));
    std::vector<SampleSet> out;
    for (auto* p : raw) out.emplace_back(p);
    return out;
}

void note_skip(nlohmann::json& notes, const std::string& why, int nt, int nr, const std::string& receiver)
{
    notes["skipped"].push_back({{"receiver", receiver}, {"nt", nt}, {"nr", nr}, {"reason", why}});
}

Table cmd_nmse(const RunOptions& opt)
{
    Table t{"nmse", {"snr_dB", "delta", "nmse_analytic", "nmse_floor", "nmse_empirical", "nt", "nr", "tp"}, {},
            {"snr_dB", {"nmse_analytic", "nmse_empirical", "nmse_floor"}, {"delta"}, true}};
    StreamCounter streams;
    for (auto [nt, nr] : opt.antenna_pairs()) {
        const int tp = opt.tp > 0 ? opt.tp : nt;
        for (double delta : opt.deltas)
            for (double snr : opt.snr_grid()) {
                const rtri_config cfg = make_config(nt, nr, opt.t, tp, snr, delta);
                double analytic = 0.0, floor = 0.0, empirical = 0.0;
                ok(rtri_nmse_analytic(&cfg, &analytic));
                ok(rtri_nmse_floor(nt, tp, delta, &floor));
                ok(rtri_nmse_empirical(&cfg, opt.trials, opt.seed, streams.next(), &empirical));
                t.add({snr, delta, analytic, floor, empirical, long(nt), long(nr), long(tp)});
            }
    }
    return t;
}

Table cmd_outage(const RunOptions& opt, nlohmann::json& notes)
{
    Table t{"outage",
            {"threshold", "receiver", "delta", "outage_analytic", "outage_empirical", "threshold_dB", "snr_dB", "nt",
             "nr"},
            {},
            {"threshold_dB", {"outage_analytic", "outage_empirical"}, {"nr", "receiver", "delta"}, true}};
    StreamCounter streams;
    for (auto [nt, nr] : opt.antenna_pairs()) {
        const int tp = opt.tp > 0 ? opt.tp : nt;
        std::vector<std::string> names;
        std::vector<rtri_receiver> codes;
        for (const auto& r : opt.receivers()) {
            if (r == "zf" && nr < nt) {
                note_skip(notes, "zf-requires-tall-channel", nt, nr, r);
                continue;
            }
            names.push_back(r);
            codes.push_back(receiver_code(r));
        }
        for (double snr : opt.snr_grid())
            for (double delta : opt.deltas) {
                const std::uint64_t stream = streams.next();
                if (codes.empty()) continue;
                const rtri_config cfg = make_config(nt, nr, opt.t, tp, snr, delta);
                const auto sets = sample_multi(cfg, codes, opt, stream);

                std::vector<double> thresholds;
                for (double x_db : opt.threshold_grid()) thresholds.push_back(db_to_linear(x_db));
                if (delta > 0.0) {
                    double wall = 0.0;
                    ok(rtri_det_sinr_limit(delta, &wall));
                    thresholds.push_back(wall);
                    std::sort(thresholds.begin(), thresholds.end());
                }
                for (std::size_t r = 0; r < codes.size(); ++r) {
                    double ks = 0.0;
                    ok(rtri_sample_set_ks(sets[r].get(), &ks));
                    notes["ks_distance"].push_back(
                        {{"nt", nt}, {"nr", nr}, {"snr_dB", snr}, {"delta", delta}, {"receiver", names[r]}, {"ks", ks}});
                    for (double x : thresholds) {
                        double analytic = 0.0, empirical = 0.0;
                        ok(rtri_sinr_cdf(codes[r], &cfg, x, &analytic));
                        ok(rtri_sample_set_outage(sets[r].get(), x, &empirical));
                        t.add({x, names[r], delta, analytic, empirical, 10.0 * std::log10(x), snr, long(nt), long(nr)});
                    }
                }
            }
    }
    return t;
}

Table cmd_rates(const RunOptions& opt, nlohmann::json& notes)
{
    Table t{"rates",
            {"snr_dB", "receiver", "delta", "rate_analytic", "rate_empirical", "rate_ceiling", "tp_star", "nt", "nr"},
            {},
            {"snr_dB", {"rate_analytic", "rate_empirical", "rate_ceiling"}, {"receiver", "delta"}, false}};
    StreamCounter streams;
    for (auto [nt, nr] : opt.antenna_pairs())
        for (const auto& r : opt.receivers()) {
            if (r == "zf" && nr < nt) {
                note_skip(notes, "zf-requires-tall-channel", nt, nr, r);
                continue;
            }
            const rtri_receiver code = receiver_code(r);
            for (double delta : opt.deltas)
                for (double snr : opt.snr_grid()) {
                    rtri_config cfg = make_config(nt, nr, opt.t, nt, snr, delta);
                    double analytic = 0.0;
                    if (opt.tp > 0) {
                        cfg.tp = opt.tp;
                        rtri_rate_info info{};
                        ok(rtri_rate_closed_form(code, &cfg, &info));
                        analytic = info.rate;
                    } else {
                        rtri_tp_search* raw = nullptr;
                        ok(rtri_optimize_tp_exact(&cfg, code, &raw));
                        TpSearch search(raw);
                        cfg.tp = rtri_tp_search_star(search.get());
                        analytic = rtri_tp_search_rate(search.get());
                    }
                    rtri_sample_set* raw_set = nullptr;
                    ok(rtri_sample_sinr(&cfg, code, opt.trials, opt.seed, streams.next(), opt.threads, &raw_set));
                    SampleSet set(raw_set);
                    double empirical = 0.0;
                    ok(rtri_sample_set_rate(set.get(), &empirical));
                    Cell ceiling;
                    if (delta > 0.0) {
                        rtri_rate_info info{};
                        ok(rtri_rate_ceiling(code, &cfg, &info));
                        ceiling = info.rate;
                    }
                    t.add({snr, r, delta, analytic, empirical, ceiling, long(cfg.tp), long(nt), long(nr)});
                }
        }
    return t;
}

Table cmd_opt_tp(const RunOptions& opt, nlohmann::json& notes)
{
    Table t{"opt_tp", {"snr_dB", "receiver", "delta", "tp_star", "rate_at_star", "nt", "nr", "t"}, {},
            {"snr_dB", {"tp_star"}, {"receiver", "delta"}, false}};
    for (auto [nt, nr] : opt.antenna_pairs())
        for (const auto& r : opt.receivers()) {
            if (r == "zf" && nr < nt) {
                note_skip(notes, "zf-requires-tall-channel", nt, nr, r);
                continue;
            }
            for (double delta : opt.deltas)
                for (double snr : opt.snr_grid()) {
                    const rtri_config cfg = make_config(nt, nr, opt.t, nt, snr, delta);
                    rtri_tp_search* raw = nullptr;
                    ok(rtri_optimize_tp_exact(&cfg, receiver_code(r), &raw));
                    TpSearch search(raw);
                    t.add({snr, r, delta, long(rtri_tp_search_star(search.get())), rtri_tp_search_rate(search.get()),
                           long(nt), long(nr), long(opt.t)});
                }
        }
    return t;
}

std::vector<Table> cmd_asymptotic(const RunOptions& opt, nlohmann::json& notes)
{
    std::vector<Table> tables;
    auto usable = [&](int nt, int nr) {
        std::vector<std::string> names;
        for (const auto& r : opt.receivers()) {
            if (r == "zf" && nr <= nt) {
                note_skip(notes, "zf-beta-one", nt, nr, r);
                continue;
            }
            names.push_back(r);
        }
        return names;
    };

    if (opt.table != "tp") {
        Table t{"asymptotic_deviation",
                {"snr_dB", "receiver", "delta", "nt", "nr", "tp", "rate_det", "rate_empirical", "rel_deviation"},
                {},
                {"snr_dB", {"rel_deviation"}, {"receiver", "delta", "nr"}, false}};
        StreamCounter streams;
        for (auto [nt, nr] : opt.antenna_pairs()) {
            const int tp = opt.tp > 0 ? opt.tp : nt;
            const auto names = usable(nt, nr);
            std::vector<rtri_receiver> codes;
            for (const auto& n : names) codes.push_back(receiver_code(n));
            for (double delta : opt.deltas)
                for (double snr : opt.snr_grid()) {
                    const std::uint64_t stream = streams.next();
                    if (codes.empty()) continue;
                    const rtri_config cfg = make_config(nt, nr, opt.t, tp, snr, delta);
                    const auto sets = sample_multi(cfg, codes, opt, stream);
                    for (std::size_t r = 0; r < codes.size(); ++r) {
                        double det = 0.0, emp = 0.0;
                        ok(rtri_det_rate(codes[r], &cfg, &det));
                        ok(rtri_sample_set_rate(sets[r].get(), &emp));
                        t.add({snr, names[r], delta, long(nt), long(nr), long(tp), det, emp, std::abs(det - emp) / emp});
                    }
                }
        }
        tables.push_back(std::move(t));
    }
    if (opt.table != "deviation") {
        Table t{"asymptotic_tp", {"snr_dB", "receiver", "delta", "nt", "nr", "tp_star_asymptotic", "rate_det_at_star"},
                {},
                {"snr_dB", {"tp_star_asymptotic"}, {"receiver", "delta", "nr"}, false}};
        for (auto [nt, nr] : opt.antenna_pairs()) {
            const auto names = usable(nt, nr);
            for (const auto& r : names)
                for (double delta : opt.deltas)
                    for (double snr : opt.snr_grid()) {
                        const rtri_config cfg = make_config(nt, nr, opt.t, nt, snr, delta);
                        rtri_tp_search* raw = nullptr;
                        ok(rtri_optimize_tp_asymptotic(&cfg, receiver_code(r), RTRI_SEARCH_AUTO, &raw));
                        TpSearch search(raw);
                        t.add({snr, r, delta, long(nt), long(nr), long(rtri_tp_search_star(search.get())),
                               rtri_tp_search_rate(search.get())});
                    }
        }
        tables.push_back(std::move(t));
    }
    return tables;
}

} // namespace

std::vector<Table> run_command(const RunOptions& opt, nlohmann::json& notes)
{
    notes = nlohmann::json::object();
    if (opt.command == "nmse") return {cmd_nmse(opt)};
    if (opt.command == "outage") return {cmd_outage(opt, notes)};
    if (opt.command == "rates") return {cmd_rates(opt, notes)};
    if (opt.command == "opt-tp") return {cmd_opt_tp(opt, notes)};
    if (opt.command == "asymptotic") return cmd_asymptotic(opt, notes);
    throw UsageError("unknown subcommand '" + opt.command + "'");
}

} // namespace cli
