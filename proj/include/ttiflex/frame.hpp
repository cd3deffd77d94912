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
#include <stdexcept>

// Symbol-level time arithmetic shared by all analytics and the simulator.
// Every airlink allocation in this toolkit is an integer number of OFDM
// symbols; all durations are held in seconds internally.

namespace ttiflex {

enum class TtiMode { Fixed, Flexible };

inline const char* to_string(TtiMode m) { return m == TtiMode::Fixed ? "fixed" : "flexible"; }

// Number of whole symbols needed to cover a duration t (>= 0).
// Uses a small relative tolerance so durations that are exact grid
// multiples (up to double rounding) are not bumped to the next symbol;
// any positive duration still costs at least one symbol.
inline std::int64_t symbols_for(double t, double t_sym)
{
    if (t_sym <= 0.0)
        throw std::invalid_argument("symbols_for: t_sym must be > 0");
    if (t < 0.0)
        throw std::invalid_argument("symbols_for: negative duration");
    if (t == 0.0)
        return 0;
    const double r = t / t_sym;
    const auto n = static_cast<std::int64_t>(std::ceil(r - 1e-9 * std::fmax(1.0, r)));
    return n < 1 ? 1 : n;
}

// Quantize a duration up to the OFDM symbol grid: the smallest integer
// multiple of t_sym that is >= t.  round_to_symbols(0) = 0.
inline double round_to_symbols(double t, double t_sym)
{
    return static_cast<double>(symbols_for(t, t_sym)) * t_sym;
}

// Frame-level timing parameters.  t_tti_max must be an exact positive
// integer multiple of t_sym (validated; a small relative tolerance covers
// binary rounding of decimal inputs).
struct FrameParams {
    double t_sym = 4.16e-6;      // OFDM symbol duration incl. cyclic prefix [s]
    double t_tti_max = 1.248e-4; // maximum TTI duration [s]
    TtiMode tti_mode = TtiMode::Fixed;

    std::int64_t n_sym_tti_max() const
    {
        return static_cast<std::int64_t>(std::llround(t_tti_max / t_sym));
    }

    void validate() const
    {
        if (!(t_sym > 0.0))
            throw std::invalid_argument("frame.t_sym must be > 0");
        if (!(t_tti_max > 0.0))
            throw std::invalid_argument("frame.t_tti_max must be > 0");
        const double ratio = t_tti_max / t_sym;
        const double nearest = std::round(ratio);
        if (nearest < 1.0 || std::fabs(ratio - nearest) > 1e-6 * nearest)
            throw std::invalid_argument("frame.t_tti_max must be an exact integer multiple of t_sym");
    }
};

// Airlink time charged for a transmission whose minimum (unrounded)
// duration is t_min.
//   Fixed mode:    ceil(t_min / t_tti_max) whole TTIs (one full TTI per
//                  started TTI; multi-TTI for payloads longer than one).
//   Flexible mode: t_min rounded up to the symbol grid, with no TTI cap.
// allocation_time(0) = 0 in both modes.
inline double allocation_time(double t_min, const FrameParams& fp)
{
    if (t_min < 0.0)
        throw std::invalid_argument("allocation_time: negative duration");
    if (t_min == 0.0)
        return 0.0;
    if (fp.tti_mode == TtiMode::Fixed) {
        const double n = std::ceil(t_min / fp.t_tti_max - 1e-9 * std::fmax(1.0, t_min / fp.t_tti_max));
        return std::fmax(1.0, n) * fp.t_tti_max;
    }
    return round_to_symbols(t_min, fp.t_sym);
}

} // namespace ttiflex
