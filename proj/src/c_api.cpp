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

#include "rtri/rtri.h"

#include "rtri/analytic.hpp"
#include "rtri/asymptotic.hpp"
#include "rtri/montecarlo.hpp"
#include "rtri/optimizer.hpp"

#include <new>
#include <vector>
#include <string>

struct rtri_sample_set {
    rtri::SinrSampleSet set;
};

struct rtri_tp_search {
    rtri::TpSearchResult result;
};

namespace {

thread_local std::string g_last_error;

rtri_status status_of(rtri::ErrorCode code)
{
    using rtri::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidConfig: return RTRI_ERR_INVALID_CONFIG;
    case ErrorCode::InfeasiblePilot: return RTRI_ERR_INFEASIBLE_PILOT;
    case ErrorCode::ZfRequiresTallChannel: return RTRI_ERR_ZF_REQUIRES_TALL_CHANNEL;
    case ErrorCode::ZfBetaOne: return RTRI_ERR_ZF_BETA_ONE;
    case ErrorCode::DomainError: return RTRI_ERR_DOMAIN;
    case ErrorCode::AccuracyError: return RTRI_ERR_ACCURACY;
    case ErrorCode::SingularMatrix: return RTRI_ERR_SINGULAR_MATRIX;
    case ErrorCode::UsageError: return RTRI_ERR_USAGE;
    }
    return RTRI_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes and the thread-local message.
template <class Fn>
rtri_status guarded(Fn&& fn)
{
    try {
        fn();
        g_last_error.clear();
        return RTRI_OK;
    } catch (const rtri::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return RTRI_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RTRI_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return RTRI_ERR_INTERNAL;
    }
}

rtri_status null_arg(const char* what)
{
    g_last_error = std::string("null argument: ") + what;
    return RTRI_ERR_NULL_ARGUMENT;
}

rtri::SystemConfig to_cpp(const rtri_config& c) { return {c.nt, c.nr, c.t, c.tp, c.rho, c.delta}; }

rtri::ReceiverKind to_cpp(rtri_receiver r)
{
    switch (r) {
    case RTRI_ZF: return rtri::ReceiverKind::ZF;
    case RTRI_MRC: return rtri::ReceiverKind::MRC;
    case RTRI_MMSE: return rtri::ReceiverKind::MMSE;
    }
    throw rtri::Error(rtri::ErrorCode::UsageError, "unknown receiver code");
}

void fill(const rtri::RateResult& r, rtri_rate_info* out)
{
    out->rate = r.rate;
    out->used_quadrature = r.method == rtri::RateMethod::Quadrature ? 1 : 0;
    out->fallback = r.fallback ? 1 : 0;
    out->cancellation = r.cancellation;
}

} // namespace

extern "C" {

const char* rtri_version(void) { return "1.0.0"; }

const char* rtri_last_error_message(void) { return g_last_error.c_str(); }

const char* rtri_status_name(rtri_status status)
{
    switch (status) {
    case RTRI_OK: return "ok";
    case RTRI_ERR_INVALID_CONFIG: return "invalid-config";
    case RTRI_ERR_INFEASIBLE_PILOT: return "infeasible-pilot";
    case RTRI_ERR_ZF_REQUIRES_TALL_CHANNEL: return "zf-requires-tall-channel";
    case RTRI_ERR_ZF_BETA_ONE: return "zf-beta-one";
    case RTRI_ERR_DOMAIN: return "domain-error";
    case RTRI_ERR_ACCURACY: return "accuracy-error";
    case RTRI_ERR_SINGULAR_MATRIX: return "singular-matrix";
    case RTRI_ERR_USAGE: return "usage-error";
    case RTRI_ERR_NULL_ARGUMENT: return "null-argument";
    case RTRI_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

rtri_status rtri_derive_params(const rtri_config* cfg, rtri_derived* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] {
        const rtri::DerivedParams p = rtri::derive_params(to_cpp(*cfg));
        *out = {p.epsilon, p.sigma2_err, p.sigma2_est, p.c0, p.c0_bar, p.epsilon_bar, p.c1, p.beta, p.d};
    });
}

rtri_status rtri_nmse_analytic(const rtri_config* cfg, double* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] {
        const rtri::SystemConfig c = to_cpp(*cfg);
        rtri::validate(c);
        *out = rtri::nmse_analytic(c);
    });
}

rtri_status rtri_nmse_floor(int nt, int tp, double delta, double* out)
{
    if (!out) return null_arg("out");
    return guarded([&] {
        if (nt < 1 || tp < nt || !(delta >= 0.0))
            throw rtri::Error(rtri::ErrorCode::InvalidConfig, "nmse floor needs 1 <= nt <= tp, delta >= 0");
        *out = rtri::nmse_floor(nt, tp, delta);
    });
}

rtri_status rtri_nmse_empirical(const rtri_config* cfg, long trials, uint64_t seed, uint64_t stream, double* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] { *out = rtri::empirical_nmse(to_cpp(*cfg), trials, rtri::RandomStream(seed, stream)); });
}

rtri_status rtri_sinr_cdf(rtri_receiver receiver, const rtri_config* cfg, double gamma, double* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] { *out = rtri::sinr_cdf(to_cpp(receiver), to_cpp(*cfg), gamma); });
}

rtri_status rtri_rate_closed_form(rtri_receiver receiver, const rtri_config* cfg, rtri_rate_info* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] { fill(rtri::rate_closed_form(to_cpp(receiver), to_cpp(*cfg)), out); });
}

rtri_status rtri_rate_quadrature(rtri_receiver receiver, const rtri_config* cfg, double* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] { *out = rtri::rate_quadrature(to_cpp(receiver), to_cpp(*cfg)); });
}

rtri_status rtri_rate_low_snr(rtri_receiver receiver, const rtri_config* cfg, double* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] {
        const rtri::SystemConfig c = to_cpp(*cfg);
        rtri::validate(c);
        *out = rtri::rate_low_snr(to_cpp(receiver), c);
    });
}

rtri_status rtri_rate_ceiling(rtri_receiver receiver, const rtri_config* cfg, rtri_rate_info* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] { fill(rtri::rate_ceiling(to_cpp(receiver), to_cpp(*cfg)), out); });
}

rtri_status rtri_det_sinr(rtri_receiver receiver, const rtri_config* cfg, double* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] {
        const rtri::SystemConfig c = to_cpp(*cfg);
        *out = rtri::det_sinr(to_cpp(receiver), rtri::asymptotic_params(c), c.delta);
    });
}

rtri_status rtri_det_sinr_beta(rtri_receiver receiver, double beta, double c1, double delta, double* out)
{
    if (!out) return null_arg("out");
    return guarded([&] { *out = rtri::det_sinr(to_cpp(receiver), rtri::asymptotic_params(beta, c1, delta), delta); });
}

rtri_status rtri_det_sinr_limit(double delta, double* out)
{
    if (!out) return null_arg("out");
    return guarded([&] { *out = rtri::det_sinr_limit(delta); });
}

rtri_status rtri_det_rate(rtri_receiver receiver, const rtri_config* cfg, double* out)
{
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] { *out = rtri::det_rate(to_cpp(receiver), to_cpp(*cfg)); });
}

rtri_status rtri_rmt_check(rtri_lemma lemma, int n, uint64_t seed, long draws, rtri_lemma_report* out)
{
    if (!out) return null_arg("out");
    return guarded([&] {
        rtri::Lemma l;
        switch (lemma) {
        case RTRI_LEMMA_INVERSION: l = rtri::Lemma::Inversion; break;
        case RTRI_LEMMA_TRACE: l = rtri::Lemma::Trace; break;
        case RTRI_LEMMA_RANK1: l = rtri::Lemma::Rank1; break;
        case RTRI_LEMMA_STIELTJES: l = rtri::Lemma::Stieltjes; break;
        default: throw rtri::Error(rtri::ErrorCode::UsageError, "unknown lemma code");
        }
        const rtri::LemmaReport r = rtri::rmt_lemma_check(l, n, rtri::RandomStream(seed, 0), draws);
        *out = {r.max_deviation, r.violations, r.draws};
    });
}

rtri_status rtri_sample_sinr(const rtri_config* cfg, rtri_receiver receiver, long trials, uint64_t seed,
                             uint64_t stream, int threads, rtri_sample_set** out)
{
    return rtri_sample_sinr_multi(cfg, &receiver, 1, trials, seed, stream, threads, out);
}

rtri_status rtri_sample_sinr_multi(const rtri_config* cfg, const rtri_receiver* receivers, size_t count, long trials,
                                   uint64_t seed, uint64_t stream, int threads, rtri_sample_set** out)
{
    if (!cfg || !receivers || !out) return null_arg("cfg/receivers/out");
    return guarded([&] {
        std::vector<rtri::ReceiverKind> kinds;
        for (size_t i = 0; i < count; ++i) kinds.push_back(to_cpp(receivers[i]));
        rtri::SamplingOptions opt;
        opt.threads = threads > 0 ? threads : 0;
        auto sets = rtri::sample_sinr_multi(to_cpp(*cfg), kinds, trials, rtri::RandomStream(seed, stream), opt);
        std::vector<rtri_sample_set*> made;
        try {
            for (auto& s : sets) made.push_back(new rtri_sample_set{std::move(s)});
        } catch (...) {
            for (auto* p : made) delete p;
            throw;
        }
        for (size_t i = 0; i < count; ++i) out[i] = made[i];
    });
}

size_t rtri_sample_set_size(const rtri_sample_set* set) { return set ? set->set.samples.size() : 0; }

const double* rtri_sample_set_data(const rtri_sample_set* set) { return set ? set->set.samples.data() : nullptr; }

rtri_status rtri_sample_set_outage(const rtri_sample_set* set, double threshold, double* out)
{
    if (!set || !out) return null_arg("set/out");
    return guarded([&] { *out = rtri::empirical_outage(set->set, threshold); });
}

rtri_status rtri_sample_set_rate(const rtri_sample_set* set, double* out)
{
    if (!set || !out) return null_arg("set/out");
    return guarded([&] { *out = rtri::rate_from_samples(set->set); });
}

rtri_status rtri_sample_set_mean(const rtri_sample_set* set, double* out)
{
    if (!set || !out) return null_arg("set/out");
    return guarded([&] { *out = rtri::mean_sinr(set->set); });
}

rtri_status rtri_sample_set_ks(const rtri_sample_set* set, double* out)
{
    if (!set || !out) return null_arg("set/out");
    return guarded([&] {
        const rtri::SystemConfig& c = set->set.cfg;
        const rtri::SinrDistribution dist(set->set.receiver, c.nt, c.nr,
                                          rtri::noise_factor_c0(c.nt, c.tp, c.rho, c.delta), c.delta);
        *out = rtri::ks_distance(set->set, dist);
    });
}

void rtri_sample_set_free(rtri_sample_set* set) { delete set; }

rtri_status rtri_optimize_tp_exact(const rtri_config* tmpl, rtri_receiver receiver, rtri_tp_search** out)
{
    if (!tmpl || !out) return null_arg("tmpl/out");
    return guarded([&] { *out = new rtri_tp_search{rtri::optimize_tp_exact(to_cpp(*tmpl), to_cpp(receiver))}; });
}

rtri_status rtri_optimize_tp_asymptotic(const rtri_config* tmpl, rtri_receiver receiver, rtri_search_mode mode,
                                        rtri_tp_search** out)
{
    if (!tmpl || !out) return null_arg("tmpl/out");
    return guarded([&] {
        rtri::SearchOptions opt;
        switch (mode) {
        case RTRI_SEARCH_AUTO: opt.mode = rtri::SearchMode::Auto; break;
        case RTRI_SEARCH_EXHAUSTIVE: opt.mode = rtri::SearchMode::Exhaustive; break;
        case RTRI_SEARCH_CONCAVE: opt.mode = rtri::SearchMode::ConcaveBisection; break;
        default: throw rtri::Error(rtri::ErrorCode::UsageError, "unknown search mode");
        }
        *out = new rtri_tp_search{rtri::optimize_tp_asymptotic(to_cpp(*tmpl), to_cpp(receiver), opt)};
    });
}

int rtri_tp_search_star(const rtri_tp_search* s) { return s ? s->result.tp_star : 0; }
double rtri_tp_search_rate(const rtri_tp_search* s) { return s ? s->result.rate_at_star : 0.0; }
int rtri_tp_search_fallbacks(const rtri_tp_search* s) { return s ? s->result.fallbacks : 0; }
int rtri_tp_search_used_bisection(const rtri_tp_search* s)
{
    return s && s->result.method == rtri::SearchMethod::ConcaveBisection ? 1 : 0;
}
size_t rtri_tp_search_trace_size(const rtri_tp_search* s) { return s ? s->result.trace.size() : 0; }

rtri_status rtri_tp_search_trace(const rtri_tp_search* s, size_t i, int* tp, double* rate)
{
    if (!s || !tp || !rate) return null_arg("search/tp/rate");
    if (i >= s->result.trace.size()) {
        g_last_error = "trace index out of range";
        return RTRI_ERR_DOMAIN;
    }
    *tp = s->result.trace[i].first;
    *rate = s->result.trace[i].second;
    return RTRI_OK;
}

void rtri_tp_search_free(rtri_tp_search* s) { delete s; }

} // extern "C"
