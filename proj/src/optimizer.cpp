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

#include "rtri/optimizer.hpp"

#include "rtri/analytic.hpp"
#include "rtri/asymptotic.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace rtri {

namespace {

void check_template(const SystemConfig& tmpl)
{
    SystemConfig probe = tmpl;
    probe.tp = tmpl.nt;
    validate(probe);
}

int resolve_threads(int requested, int work)
{
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(n, 1, std::max(1, work));
}

} // namespace

std::string_view to_string(SearchMethod m) noexcept
{
    return m == SearchMethod::Exhaustive ? "exhaustive" : "concave-bisection";
}

TpSearchResult maximize_over_tp(const std::function<double(int)>& objective, int lo, int hi, SearchMethod method,
                                int threads)
{
    if (lo > hi) throw Error(ErrorCode::InvalidConfig, "empty training-length range");
    TpSearchResult res;
    res.method = method;

    if (method == SearchMethod::Exhaustive) {
        const int n = hi - lo + 1;
        std::vector<double> values(static_cast<std::size_t>(n));
        const int workers = resolve_threads(threads, n);
        if (workers == 1) {
            for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = objective(lo + i);
        } else {
            std::atomic<int> next{0};
            std::exception_ptr failure;
            std::atomic<bool> failed{false};
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (int i = next++; i < n && !failed; i = next++) {
                        try {
                            values[static_cast<std::size_t>(i)] = objective(lo + i);
                        } catch (...) {
                            if (!failed.exchange(true)) failure = std::current_exception();
                        }
                    }
                });
            for (auto& th : pool) th.join();
            if (failure) std::rethrow_exception(failure);
        }
        res.trace.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) res.trace.emplace_back(lo + i, values[static_cast<std::size_t>(i)]);
    } else {
        // First tp whose forward difference is <= 0; a concave objective peaks there.
        std::map<int, double> seen;
        auto eval = [&](int tp) {
            auto it = seen.find(tp);
            if (it != seen.end()) return it->second;
            return seen[tp] = objective(tp);
        };
        int a = lo, b = hi;
        while (a < b) {
            const int mid = a + (b - a) / 2;
            if (eval(mid + 1) - eval(mid) <= 0.0)
                b = mid;
            else
                a = mid + 1;
        }
        eval(a);
        res.trace.assign(seen.begin(), seen.end());
    }

    res.tp_star = res.trace.front().first;
    res.rate_at_star = res.trace.front().second;
    for (const auto& [tp, rate] : res.trace)
        if (rate > res.rate_at_star) {
            res.tp_star = tp;
            res.rate_at_star = rate;
        }
    return res;
}

TpSearchResult optimize_tp_exact(const SystemConfig& tmpl, ReceiverKind receiver, const SearchOptions& opt)
{
    check_template(tmpl);
    if (receiver == ReceiverKind::ZF && tmpl.nr < tmpl.nt)
        throw Error(ErrorCode::ZfRequiresTallChannel, "ZF receiver requires nr >= nt");
    std::atomic<int> fallbacks{0};
    auto objective = [&](int tp) {
        SystemConfig cfg = tmpl;
        cfg.tp = tp;
        const RateResult r = rate_closed_form(receiver, cfg);
        if (r.fallback) ++fallbacks;
        return r.rate;
    };
    const SearchMethod method =
        opt.mode == SearchMode::ConcaveBisection ? SearchMethod::ConcaveBisection : SearchMethod::Exhaustive;
    TpSearchResult res = maximize_over_tp(objective, tmpl.nt, tmpl.t - 1, method, opt.threads);
    res.fallbacks = fallbacks;
    return res;
}

TpSearchResult optimize_tp_asymptotic(const SystemConfig& tmpl, ReceiverKind receiver, const SearchOptions& opt)
{
    check_template(tmpl);
    auto objective = [&](int tp) {
        SystemConfig cfg = tmpl;
        cfg.tp = tp;
        return det_rate(receiver, cfg);
    };
    objective(tmpl.nt); // surfaces ZF beta errors before any search
    SearchMethod method = SearchMethod::Exhaustive;
    if (opt.mode == SearchMode::ConcaveBisection || (opt.mode == SearchMode::Auto && tmpl.t >= kConcaveSearchMinT))
        method = SearchMethod::ConcaveBisection;
    return maximize_over_tp(objective, tmpl.nt, tmpl.t - 1, method, opt.threads);
}

} // namespace rtri
