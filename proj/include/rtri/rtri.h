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

/* Stable C interface of the rtri library. */
#ifndef RTRI_RTRI_H
#define RTRI_RTRI_H

#include <stddef.h>
#include <stdint.h>

#if defined(RTRI_BUILDING_LIBRARY)
#define RTRI_API __attribute__((visibility("default")))
#else
#define RTRI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rtri_status {
    RTRI_OK = 0,
    RTRI_ERR_INVALID_CONFIG = 1,
    RTRI_ERR_INFEASIBLE_PILOT = 2,
    RTRI_ERR_ZF_REQUIRES_TALL_CHANNEL = 3,
    RTRI_ERR_ZF_BETA_ONE = 4,
    RTRI_ERR_DOMAIN = 5,
    RTRI_ERR_ACCURACY = 6,
    RTRI_ERR_SINGULAR_MATRIX = 7,
    RTRI_ERR_USAGE = 8,
    RTRI_ERR_NULL_ARGUMENT = 9,
    RTRI_ERR_INTERNAL = 10
} rtri_status;

typedef enum rtri_receiver { RTRI_ZF = 0, RTRI_MRC = 1, RTRI_MMSE = 2 } rtri_receiver;

typedef enum rtri_lemma {
    RTRI_LEMMA_INVERSION = 0,
    RTRI_LEMMA_TRACE = 1,
    RTRI_LEMMA_RANK1 = 2,
    RTRI_LEMMA_STIELTJES = 3
} rtri_lemma;

typedef enum rtri_search_mode {
    RTRI_SEARCH_AUTO = 0,
    RTRI_SEARCH_EXHAUSTIVE = 1,
    RTRI_SEARCH_CONCAVE = 2
} rtri_search_mode;

typedef struct rtri_config {
    int nt;
    int nr;
    int t;
    int tp;
    double rho;   /* linear SNR per receive antenna */
    double delta; /* impairment level (EVM) */
} rtri_config;

typedef struct rtri_derived {
    double epsilon;
    double sigma2_err;
    double sigma2_est;
    double c0;
    double c0_bar;
    double epsilon_bar;
    double c1;
    double beta;
    double d;
} rtri_derived;

typedef struct rtri_rate_info {
    double rate;
    int used_quadrature; /* 1 when the value came from quadrature */
    int fallback;        /* 1 when the closed form was rejected by the cancellation guard */
    double cancellation;
} rtri_rate_info;

typedef struct rtri_lemma_report {
    double max_deviation;
    long violations;
    long draws;
} rtri_lemma_report;

typedef struct rtri_sample_set rtri_sample_set;
typedef struct rtri_tp_search rtri_tp_search;

RTRI_API const char* rtri_version(void);
/* Message of the last failing call on this thread ("" if none). */
RTRI_API const char* rtri_last_error_message(void);
RTRI_API const char* rtri_status_name(rtri_status status);

RTRI_API rtri_status rtri_derive_params(const rtri_config* cfg, rtri_derived* out);

RTRI_API rtri_status rtri_nmse_analytic(const rtri_config* cfg, double* out);
RTRI_API rtri_status rtri_nmse_floor(int nt, int tp, double delta, double* out);
RTRI_API rtri_status rtri_nmse_empirical(const rtri_config* cfg, long trials, uint64_t seed, uint64_t stream,
                                            double* out);

RTRI_API rtri_status rtri_sinr_cdf(rtri_receiver receiver, const rtri_config* cfg, double gamma, double* out);
RTRI_API rtri_status rtri_rate_closed_form(rtri_receiver receiver, const rtri_config* cfg, rtri_rate_info* out);
RTRI_API rtri_status rtri_rate_quadrature(rtri_receiver receiver, const rtri_config* cfg, double* out);
RTRI_API rtri_status rtri_rate_low_snr(rtri_receiver receiver, const rtri_config* cfg, double* out);
RTRI_API rtri_status rtri_rate_ceiling(rtri_receiver receiver, const rtri_config* cfg, rtri_rate_info* out);

/* Deterministic equivalents; tp == t is accepted by rtri_det_rate. */
RTRI_API rtri_status rtri_det_sinr(rtri_receiver receiver, const rtri_config* cfg, double* out);
RTRI_API rtri_status rtri_det_sinr_beta(rtri_receiver receiver, double beta, double c1, double delta, double* out);
RTRI_API rtri_status rtri_det_sinr_limit(double delta, double* out);
RTRI_API rtri_status rtri_det_rate(rtri_receiver receiver, const rtri_config* cfg, double* out);

RTRI_API rtri_status rtri_rmt_check(rtri_lemma lemma, int n, uint64_t seed, long draws, rtri_lemma_report* out);

/* Monte Carlo SINR samples (nt per trial) from the random stream (seed, stream).
   `threads` <= 0 selects all cores; the result does not depend on it. */
RTRI_API rtri_status rtri_sample_sinr(const rtri_config* cfg, rtri_receiver receiver, long trials, uint64_t seed,
                                      uint64_t stream, int threads, rtri_sample_set** out);
/* Samples for `count` receivers drawn on shared channel realizations; out[i] belongs to receivers[i]. */
RTRI_API rtri_status rtri_sample_sinr_multi(const rtri_config* cfg, const rtri_receiver* receivers, size_t count,
                                            long trials, uint64_t seed, uint64_t stream, int threads,
                                            rtri_sample_set** out);
RTRI_API size_t rtri_sample_set_size(const rtri_sample_set* set);
RTRI_API const double* rtri_sample_set_data(const rtri_sample_set* set);
RTRI_API rtri_status rtri_sample_set_outage(const rtri_sample_set* set, double threshold, double* out);
RTRI_API rtri_status rtri_sample_set_rate(const rtri_sample_set* set, double* out);
RTRI_API rtri_status rtri_sample_set_mean(const rtri_sample_set* set, double* out);
/* KS distance between the samples and the closed-form CDF of the set's receiver and config. */
RTRI_API rtri_status rtri_sample_set_ks(const rtri_sample_set* set, double* out);
RTRI_API void rtri_sample_set_free(rtri_sample_set* set);

/* Training-length search; the tp field of `tmpl` is ignored. */
RTRI_API rtri_status rtri_optimize_tp_exact(const rtri_config* tmpl, rtri_receiver receiver, rtri_tp_search** out);
RTRI_API rtri_status rtri_optimize_tp_asymptotic(const rtri_config* tmpl, rtri_receiver receiver,
                                                 rtri_search_mode mode, rtri_tp_search** out);
RTRI_API int rtri_tp_search_star(const rtri_tp_search* s);
RTRI_API double rtri_tp_search_rate(const rtri_tp_search* s);
RTRI_API int rtri_tp_search_fallbacks(const rtri_tp_search* s);
RTRI_API int rtri_tp_search_used_bisection(const rtri_tp_search* s);
RTRI_API size_t rtri_tp_search_trace_size(const rtri_tp_search* s);
/* Copies trace entry i; returns RTRI_ERR_DOMAIN when i is out of range. */
RTRI_API rtri_status rtri_tp_search_trace(const rtri_tp_search* s, size_t i, int* tp, double* rate);
RTRI_API void rtri_tp_search_free(rtri_tp_search* s);

#ifdef __cplusplus
}
#endif

#endif
