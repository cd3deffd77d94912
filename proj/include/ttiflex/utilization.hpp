// ttiflex - control-overhead and airlink-utilization analytics for mmWave TDD MAC frame design
// Copyright 2026 the ttiflex authors
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

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "ttiflex/channel.hpp"
#include "ttiflex/frame.hpp"
#include "ttiflex/traffic.hpp"

// Airlink utilization factor (eta): minimum time needed to transmit a PDU
// divided by the airlink time actually allocated for it, for fixed and
// flexible TTI designs.

namespace ttiflex {

struct UtilizationReport {
    double eta = 0.0;      // utilization factor in (0, 1]
    TtiMode mode = TtiMode::Fixed;
    TrafficKind traffic = TrafficKind::FullBufferTcp;
    std::size_t n_samples = 0; // Monte Carlo draws (0 for closed forms)
    double ci95 = 0.0;         // 95% CI half-width (Monte Carlo paths only)
    double mean_alloc_s = 0.0; // mean allocated time per PDU (or per TCP cycle)
    double mean_tmin_s = 0.0;  // mean minimum transmission time per PDU
    double mean_tti_s = 0.0;   // mean duration of a single TTI
};

// Number of TCP segments (fractional) that fit in one maximum-length TTI.
inline double tcp_segments_per_tti(const FrameParams& fp, double rho_dl, double w_tot, double l_data)
{
    if (rho_dl < 0.0 || !(w_tot > 0.0) || !(l_data > 0.0))
        throw std::invalid_argument("tcp_segments_per_tti: invalid rate or size");
    return fp.t_tti_max * rho_dl * w_tot / l_data;
}

// Minimum uplink time needed to acknowledge s_n segments.
inline double tcp_ack_time_min(double s_n, double l_ack, double rho_ul, double w_tot)
{
    if (s_n < 0.0 || l_ack < 0.0)
        throw std::invalid_argument("tcp_ack_time_min: negative input");
    if (!(rho_ul > 0.0) || !(w_tot > 0.0))
        throw std::invalid_argument("tcp_ack_time_min: rho_ul and w_tot must be > 0");
    return s_n * l_ack / (rho_ul * w_tot);
}

// Saturated-TCP utilization.  One downlink data TTI of length t_tti_max
// is followed by the uplink time needed to acknowledge its segments:
//   fixed:    (T + T_ack) / (2 T)          (the ACK stream gets a full TTI)
//   flexible: (T + T_ack) / (T + Q(T_ack))
// The bandwidth cancels between the segment count and the ACK time, so
// none is taken.  Throws if the ACK stream cannot be drained within one
// reverse TTI (the alternating-slot model breaks down).
inline UtilizationReport util_tcp(const FrameParams& fp, double rho_dl, double rho_ul,
                                  double l_data, double l_ack)
{
    fp.validate();
    if (!(rho_dl > 0.0))
        throw std::invalid_argument("util_tcp: rho_dl must be > 0");
    const double w = 1.0; // cancels exactly
    const double s_n = tcp_segments_per_tti(fp, rho_dl, w, l_data);
    const double t_ack = tcp_ack_time_min(s_n, l_ack, rho_ul, w);
    const double t = fp.t_tti_max;
    if (t_ack > t)
        throw std::runtime_error("util_tcp: ACK stream saturates the reverse slot (t_ack > t_tti_max)");

    UtilizationReport r;
    r.mode = fp.tti_mode;
    r.traffic = TrafficKind::FullBufferTcp;
    r.mean_tmin_s = t + t_ack;
    if (fp.tti_mode == TtiMode::Fixed) {
        r.eta = (t + t_ack) / (2.0 * t);
        r.mean_alloc_s = 2.0 * t;
        r.mean_tti_s = t;
    } else {
        const double q_ack = round_to_symbols(t_ack, fp.t_sym);
        r.eta = (t + t_ack) / (t + q_ack);
        r.mean_alloc_s = t + q_ack;
        r.mean_tti_s = 0.5 * (t + q_ack); // two TTIs per cycle
    }
    return r;
}

namespace detail {

// Shared Monte Carlo core for the bursty estimators.  Draws (PDU size,
// SNR atom) pairs, maps each to its minimum transmission time and its
// allocated time under the frame mode, and returns the ratio-of-means
// estimator with a delta-method 95% CI.
inline UtilizationReport util_bursty(const TrafficModel& traffic, const FrameParams& fp,
                                     const SnrDistribution& snr_dist, const LinkContext& ctx,
                                     std::size_t n_samples, std::uint64_t seed)
{
    fp.validate();
    if (traffic.kind != TrafficKind::BurstyLogNormal)
        throw std::invalid_argument("util_bursty: traffic model is not bursty");
    if (n_samples < 10000)
        throw std::invalid_argument("util_bursty: need at least 1e4 Monte Carlo samples");
    if (snr_dist.empty())
        throw std::invalid_argument("util_bursty: empty SNR distribution");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, snr_dist.size() - 1);

    double sum_t = 0.0, sum_a = 0.0;
    std::int64_t sum_ttis = 0;
    std::vector<double> tmin(n_samples), alloc(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const SnrSample& s = snr_dist.samples[pick(rng)];
        const double rho = ctx.rho(s, traffic.direction);
        const double b = sample_pdu_size_bits(traffic, rng);
        const double t = b / (rho * ctx.w_tot);
        const double a = allocation_time(t, fp);
        tmin[i] = t;
        alloc[i] = a;
        sum_t += t;
        sum_a += a;
        sum_ttis += std::max<std::int64_t>(1, symbols_for(a, fp.t_tti_max));
    }

    UtilizationReport r;
    r.mode = fp.tti_mode;
    r.traffic = TrafficKind::BurstyLogNormal;
    r.n_samples = n_samples;
    r.eta = sum_t / sum_a;
    r.mean_tmin_s = sum_t / static_cast<double>(n_samples);
    r.mean_alloc_s = sum_a / static_cast<double>(n_samples);
    r.mean_tti_s = sum_a / static_cast<double>(sum_ttis);

    // Delta-method variance of the ratio estimator.
    const double abar = r.mean_alloc_s;
    double acc = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double d = (tmin[i] - r.eta * alloc[i]) / abar;
        acc += d * d;
    }
    r.ci95 = 1.96 * std::sqrt(acc / static_cast<double>(n_samples)) /
             std::sqrt(static_cast<double>(n_samples));
    return r;
}

} // namespace detail

// Steady-state bursty utilization under fixed TTIs: each PDU is charged
// whole TTIs, eta = E[T_min] / E[ceil(T_min / T) * T] over paired
// (size, SNR) draws.  The SNR distribution should already be restricted
// to the served population.
inline UtilizationReport util_bursty_fixed(const TrafficModel& traffic, const FrameParams& fp,
                                           const SnrDistribution& snr_dist, const LinkContext& ctx,
                                           std::size_t n_samples, std::uint64_t seed)
{
    FrameParams f = fp;
    f.tti_mode = TtiMode::Fixed;
    return detail::util_bursty(traffic, f, snr_dist, ctx, n_samples, seed);
}

// Steady-state bursty utilization under flexible TTIs:
// eta = E[T_min] / E[Q(T_min)], numerator and denominator sharing draws.
inline UtilizationReport util_bursty_flexible(const TrafficModel& traffic, const FrameParams& fp,
                                              const SnrDistribution& snr_dist, const LinkContext& ctx,
                                              std::size_t n_samples, std::uint64_t seed)
{
    FrameParams f = fp;
    f.tti_mode = TtiMode::Flexible;
    return detail::util_bursty(traffic, f, snr_dist, ctx, n_samples, seed);
}

} // namespace ttiflex
