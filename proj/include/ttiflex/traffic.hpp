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
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttiflex/channel.hpp" // Direction

// Traffic models feeding the utilization analytics and the simulator:
// a saturated ("full buffer") TCP flow described by its segment/ACK sizes,
// and a bursty model with Poisson arrivals and truncated-lognormal PDU
// sizes specified by their post-truncation moments.

namespace ttiflex {

enum class TrafficKind { FullBufferTcp, BurstyLogNormal };

inline const char* to_string(TrafficKind k)
{
    return k == TrafficKind::FullBufferTcp ? "full_buffer_tcp" : "bursty_lognormal";
}

struct TrafficModel {
    TrafficKind kind = TrafficKind::FullBufferTcp;

    // FullBufferTcp: sizes include all per-segment overhead.
    double l_data_bits = 12000.0; // 1500-byte TCP segment
    double l_ack_bits = 592.0;    // 74-byte TCP ACK
    double ack_coalescing = 1.0;  // >1 divides the ACK stream (1 = every segment ACKed)

    // BurstyLogNormal. Sizes are configured in bytes (external convention);
    // samples are returned in bits.
    double arrival_rate_per_ue = 1.0; // Poisson rate [PDUs/s per UE]
    double size_min_bytes = 100.0;
    double size_max_bytes = 2e6;
    double mean_size_bytes = 10710.0; // post-truncation mean
    double std_size_bytes = 25032.0;  // post-truncation standard deviation
    Direction direction = Direction::Dl;

    // Underlying lognormal parameters in log-bytes, filled in by
    // fit_bursty_model(). NaN until fitted.
    double mu_log = std::numeric_limits<double>::quiet_NaN();
    double sigma_log = std::numeric_limits<double>::quiet_NaN();

    bool fitted() const { return std::isfinite(mu_log) && std::isfinite(sigma_log); }
    bool degenerate() const { return size_min_bytes == size_max_bytes; }
};

// ----------------------------------------------- truncated-lognormal fit

namespace detail {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// k-th moment of LN(mu, sigma) truncated to [lo, hi].
inline double trunc_ln_moment(double mu, double sigma, double lo, double hi, int k)
{
    const double a = (std::log(lo) - mu) / sigma;
    const double b = (std::log(hi) - mu) / sigma;
    const double z = normal_cdf(b) - normal_cdf(a);
    if (z <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    const double kk = static_cast<double>(k);
    return std::exp(kk * mu + 0.5 * kk * kk * sigma * sigma) *
           (normal_cdf(b - kk * sigma) - normal_cdf(a - kk * sigma)) / z;
}

inline double trunc_ln_mean(double mu, double sigma, double lo, double hi)
{
    return trunc_ln_moment(mu, sigma, lo, hi, 1);
}

inline double trunc_ln_std(double mu, double sigma, double lo, double hi)
{
    const double m1 = trunc_ln_moment(mu, sigma, lo, hi, 1);
    const double m2 = trunc_ln_moment(mu, sigma, lo, hi, 2);
    const double var = m2 - m1 * m1;
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

} // namespace detail

struct TruncLogNormalFit {
    double mu = 0.0;    // underlying location (log scale)
    double sigma = 0.0; // underlying scale (log scale)
};

// Solve for the underlying (mu, sigma) of a lognormal such that, after
// truncation to [lo, hi], the mean and standard deviation equal the
// requested values.  Damped Newton on (mu, log sigma) with a numeric
// Jacobian; throws std::runtime_error if no parameterization reproduces
// the requested moments.
inline TruncLogNormalFit fit_truncated_lognormal(double lo, double hi, double mean, double sd)
{
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("traffic fit: bounds must satisfy 0 < min < max");
    if (!(mean > lo) || !(mean < hi))
        throw std::invalid_argument("traffic fit: mean must lie strictly inside the bounds");
    if (!(sd > 0.0))
        throw std::invalid_argument("traffic fit: std must be > 0");

    // Start from the untruncated closed form.
    const double cv2 = (sd / mean) * (sd / mean);
    double ls = 0.5 * std::log(std::log1p(cv2)); // log sigma
    double mu = std::log(mean) - 0.5 * std::exp(2.0 * ls);

    auto residual = [&](double m, double lsig, double& r0, double& r1) {
        const double sig = std::exp(lsig);
        const double em = detail::trunc_ln_mean(m, sig, lo, hi);
        const double es = detail::trunc_ln_std(m, sig, lo, hi);
        if (!std::isfinite(em) || !std::isfinite(es))
            return false;
        r0 = em / mean - 1.0;
        r1 = es / sd - 1.0;
        return true;
    };

    double r0, r1;
    if (!residual(mu, ls, r0, r1))
        throw std::runtime_error("traffic fit: initial point is degenerate");

    for (int it = 0; it < 200; ++it) {
        const double err = std::hypot(r0, r1);
        if (err < 1e-12)
            break;
        const double h = 1e-6;
        double a0, a1, b0, b1;
        if (!residual(mu + h, ls, a0, a1) || !residual(mu, ls + h, b0, b1))
            throw std::runtime_error("traffic fit: Jacobian evaluation failed");
        const double j00 = (a0 - r0) / h, j01 = (b0 - r0) / h;
        const double j10 = (a1 - r1) / h, j11 = (b1 - r1) / h;
        const double det = j00 * j11 - j01 * j10;
        if (std::fabs(det) < 1e-30)
            throw std::runtime_error("traffic fit: singular Jacobian (moments not reachable)");
        double dmu = -(j11 * r0 - j01 * r1) / det;
        double dls = -(-j10 * r0 + j00 * r1) / det;

        // Damped step: halve until the residual norm decreases.
        double step = 1.0;
        bool ok = false;
        for (int half = 0; half < 40; ++half) {
            double n0, n1;
            if (residual(mu + step * dmu, ls + step * dls, n0, n1) && std::hypot(n0, n1) < err) {
                mu += step * dmu;
                ls += step * dls;
                r0 = n0;
                r1 = n1;
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok)
            throw std::runtime_error("traffic fit: no underlying lognormal reproduces the requested truncated moments");
    }

    if (std::hypot(r0, r1) > 1e-8)
        throw std::runtime_error("traffic fit: root finding did not converge");
    return {mu, std::exp(ls)};
}

// Populate model.mu_log / model.sigma_log for a bursty model (no-op for
// other kinds and for degenerate point-mass models).
inline void fit_bursty_model(TrafficModel& model)
{
    if (model.kind != TrafficKind::BurstyLogNormal || model.degenerate())
        return;
    const TruncLogNormalFit f = fit_truncated_lognormal(model.size_min_bytes, model.size_max_bytes,
                                                        model.mean_size_bytes, model.std_size_bytes);
    model.mu_log = f.mu;
    model.sigma_log = f.sigma;
}

// ------------------------------------------------------------- sampling

// One PDU size draw in bits.  Rejection sampling from the fitted
// underlying lognormal, truncated to [size_min, size_max].
inline double sample_pdu_size_bits(const TrafficModel& model, std::mt19937_64& rng)
{
    if (model.kind != TrafficKind::BurstyLogNormal)
        throw std::invalid_argument("sample_pdu_size_bits: model is not bursty");
    if (model.degenerate())
        return 8.0 * model.size_min_bytes;
    if (!model.fitted())
        throw std::runtime_error("sample_pdu_size_bits: call fit_bursty_model first");

    std::lognormal_distribution<double> ln(model.mu_log, model.sigma_log);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double bytes = ln(rng);
        if (bytes >= model.size_min_bytes && bytes <= model.size_max_bytes)
            return 8.0 * bytes;
    }
    throw std::runtime_error("sample_pdu_size_bits: rejection sampling failed (acceptance region too small)");
}

// Homogeneous Poisson arrival times over [0, horizon), strictly increasing.
inline std::vector<double> sample_arrival_times(double rate, double horizon, std::mt19937_64& rng)
{
    if (!(rate > 0.0))
        throw std::invalid_argument("sample_arrival_times: rate must be > 0");
    if (!(horizon > 0.0))
        throw std::invalid_argument("sample_arrival_times: horizon must be > 0");
    std::exponential_distribution<double> gap(rate);
    std::vector<double> t;
    double now = gap(rng);
    while (now < horizon) {
        t.push_back(now);
        now += gap(rng);
    }
    return t;
}

// Uplink bits generated by acknowledging n_segments TCP segments
// (uncombined ACK bound: one ACK per segment).
inline double tcp_ack_bits(double n_segments, double l_ack)
{
    if (n_segments < 0.0)
        throw std::invalid_argument("tcp_ack_bits: negative segment count");
    return n_segments * l_ack;
}

} // namespace ttiflex
