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
#include <stdexcept>
#include <string>

#include "ttiflex/channel.hpp"
#include "ttiflex/frame.hpp"

// Closed-form control-overhead fractions per control channel and
// beamforming architecture.
//
// Two denominators appear.  Periodic channels (SR, CQI) occupy dedicated
// slots and are charged against their own period, realized on the symbol
// grid.  Per-TTI channels (grants, HARQ ACKs) are charged against the
// mean TTI duration E[T_TTI]; their SNR-dependent transmission times are
// averaged over an empirical distribution of served UEs, which makes the
// expectations exact finite sums.

namespace ttiflex {

enum class SrMode { Tdma, Fdma, Auto };

inline const char* to_string(SrMode m)
{
    switch (m) {
        case SrMode::Tdma: return "tdma";
        case SrMode::Fdma: return "fdma";
        case SrMode::Auto: return "auto";
    }
    return "?";
}

// A control message type: payload size, required Eb/N0 (linear), and the
// repetition period for semi-static channels (0 = aperiodic or disabled).
struct ControlMsg {
    double bits = 0.0;
    double gamma_b = 1.0;  // linear Eb/N0 target
    double period_s = 0.0; // SR/CQI only

    void validate(const char* name) const
    {
        if (bits < 1.0)
            throw std::invalid_argument(std::string("control.") + name + ": bits must be >= 1");
        if (!(gamma_b > 0.0))
            throw std::invalid_argument(std::string("control.") + name + ": gamma_b must be > 0");
        if (period_s < 0.0)
            throw std::invalid_argument(std::string("control.") + name + ": period must be >= 0");
    }
};

struct OverheadReport {
    double sr = 0.0;
    double cqi = 0.0;
    double ul_grant = 0.0;
    double dl_grant = 0.0;
    double dl_ack = 0.0;
    double ul_ack = 0.0;
    double total = 0.0;
    ArchKind arch = ArchKind::Analog;
    SrMode sr_mode_used = SrMode::Tdma;
};

namespace detail {

// Period realized on the symbol grid: slots can only recur at whole-symbol
// boundaries, so a nominal period is floored to its symbol count.
inline double realized_period(double period_s, double t_sym)
{
    const auto n = static_cast<std::int64_t>(std::floor(period_s / t_sym + 1e-9));
    if (n < 1)
        throw std::invalid_argument("control period shorter than one symbol");
    return static_cast<double>(n) * t_sym;
}

// Airtime needed to deliver `bits` at Eb/N0 target gamma_b over a link
// with the given total gain product and SNR (all linear).
inline double control_time(double bits, double gamma_b, double gain_product, double w_tot, double gamma)
{
    return bits * gamma_b / (gain_product * w_tot * gamma);
}

inline void check_fraction(double f, const char* what)
{
    if (f >= 1.0)
        throw std::runtime_error(std::string(what) + ": overhead fraction >= 1 (infeasible configuration)");
}

} // namespace detail

// Overhead of a periodic dedicated-opportunity channel (the SR; the CQI
// uses the identical formula with its own message parameters).
//
//   TDMA: every served UE gets its own full-gain slot; K simultaneous
//         beams serve K UEs per slot, so the per-period cost is
//         (n_ue / K) * Q(t_full_gain).  The n_ue/K factor is kept
//         fractional (K beams share each slot).
//   FDMA: all UEs transmit simultaneously; the BS listens without
//         beamforming, so the slot is dimensioned for omni gain K.
//   Auto: min(TDMA, FDMA) for analog/hybrid.
// The fully digital BS receives every UE simultaneously at full gain:
// one full-gain slot per period regardless of n_ue and of `mode`.
// Slot sizes are dimensioned for the cell-edge SNR target gamma_min_ul
// (unquantized: control detection targets, not data-plane ADC models).
inline double sr_overhead(const ControlMsg& msg, int n_ue, const BeamformingArch& arch, SrMode mode,
                          const AntennaConfig& ant, double w_tot, double gamma_min_ul,
                          const FrameParams& fp)
{
    msg.validate("sr");
    if (n_ue < 1)
        throw std::invalid_argument("sr_overhead: n_ue must be >= 1");
    if (!(gamma_min_ul > 0.0))
        throw std::invalid_argument("sr_overhead: gamma_min_ul must be > 0");

    const double t_per = detail::realized_period(msg.period_s, fp.t_sym);
    const double g_full = bf_gain(ant.n_ant_bs) * bf_gain(ant.n_ant_ue);
    const double t_full = detail::control_time(msg.bits, msg.gamma_b, g_full, w_tot, gamma_min_ul);

    double frac = 0.0;
    if (arch.kind == ArchKind::Digital) {
        frac = round_to_symbols(t_full, fp.t_sym) / t_per;
    } else {
        const double tdma = (static_cast<double>(n_ue) / arch.k()) *
                            round_to_symbols(t_full, fp.t_sym) / t_per;
        const double g_omni = omni_gain(arch) * bf_gain(ant.n_ant_ue);
        const double t_omni = detail::control_time(msg.bits, msg.gamma_b, g_omni, w_tot, gamma_min_ul);
        const double fdma = round_to_symbols(t_omni, fp.t_sym) / t_per;
        switch (mode) {
            case SrMode::Tdma: frac = tdma; break;
            case SrMode::Fdma: frac = fdma; break;
            case SrMode::Auto: frac = std::fmin(tdma, fdma); break;
        }
    }
    detail::check_fraction(frac, "sr_overhead");
    return frac;
}

// Which SR multiplexing a given mode resolves to (reporting aid).
inline SrMode sr_mode_resolved(const ControlMsg& msg, int n_ue, const BeamformingArch& arch,
                               SrMode mode, const AntennaConfig& ant, double w_tot,
                               double gamma_min_ul, const FrameParams& fp)
{
    if (arch.kind == ArchKind::Digital || mode != SrMode::Auto)
        return mode == SrMode::Auto ? SrMode::Tdma : mode;
    const double tdma = sr_overhead(msg, n_ue, arch, SrMode::Tdma, ant, w_tot, gamma_min_ul, fp);
    const double fdma = sr_overhead(msg, n_ue, arch, SrMode::Fdma, ant, w_tot, gamma_min_ul, fp);
    return tdma <= fdma ? SrMode::Tdma : SrMode::Fdma;
}

// CQI reports use dedicated periodic slots exactly like the SR.
// A period of 0 disables the channel.
inline double cqi_overhead(const ControlMsg& msg, int n_ue, const BeamformingArch& arch, SrMode mode,
                           const AntennaConfig& ant, double w_tot, double gamma_min_ul,
                           const FrameParams& fp)
{
    if (msg.period_s == 0.0)
        return 0.0;
    return sr_overhead(msg, n_ue, arch, mode, ant, w_tot, gamma_min_ul, fp);
}

// Uplink grants are sent on the downlink before each uplink TTI.
//   Analog: the grant cannot share the beam with anything else, so it is
//     rounded up to whole symbols per recipient:
//     p_ul / E[T_TTI] * E[Q(b gamma_b / (G_bs G_ue W gamma_dl))].
//   Hybrid/digital: grants for different UEs are frequency-multiplexed, so
//     no rounding applies:
//     p_ul * b gamma_b / (G_bs G_ue W E[T_TTI]) * E[1 / gamma_dl].
// The expectation runs over the served-UE SNR distribution; digital front
// ends with quantizer_alpha > 0 see the quantized effective SNR.
inline double ul_grant_overhead(const ControlMsg& msg, const BeamformingArch& arch,
                                const AntennaConfig& ant, const SnrDistribution& dist,
                                double p_ul, double e_tti, double w_tot, const FrameParams& fp)
{
    msg.validate("grant");
    if (p_ul < 0.0 || p_ul > 1.0)
        throw std::invalid_argument("ul_grant_overhead: p_ul must be in [0, 1]");
    if (!(e_tti > 0.0))
        throw std::invalid_argument("ul_grant_overhead: e_tti must be > 0");

    LinkContext ctx{ant, arch, {}, w_tot};
    double frac = 0.0;
    if (arch.kind == ArchKind::Analog) {
        frac = p_ul / e_tti * dist.expect([&](const SnrSample& s) {
            const double t = msg.bits * msg.gamma_b / (w_tot * ctx.eff_snr(s, Direction::Dl));
            return round_to_symbols(t, fp.t_sym);
        });
    } else {
        frac = p_ul * msg.bits * msg.gamma_b / (w_tot * e_tti) *
               dist.expect([&](const SnrSample& s) { return 1.0 / ctx.eff_snr(s, Direction::Dl); });
    }
    detail::check_fraction(frac, "ul_grant_overhead");
    return frac;
}

// Downlink grants ride in-band with the downlink data they schedule, for
// every architecture, so no symbol rounding applies:
//   (1 - p_ul) * b gamma_b / (G_bs G_ue W E[T_TTI]) * E[1 / gamma_dl].
inline double dl_grant_overhead(const ControlMsg& msg, const BeamformingArch& arch,
                                const AntennaConfig& ant, const SnrDistribution& dist,
                                double p_ul, double e_tti, double w_tot)
{
    msg.validate("grant");
    if (p_ul < 0.0 || p_ul > 1.0)
        throw std::invalid_argument("dl_grant_overhead: p_ul must be in [0, 1]");
    if (!(e_tti > 0.0))
        throw std::invalid_argument("dl_grant_overhead: e_tti must be > 0");

    LinkContext ctx{ant, arch, {}, w_tot};
    const double frac = (1.0 - p_ul) * msg.bits * msg.gamma_b / (w_tot * e_tti) *
                        dist.expect([&](const SnrSample& s) { return 1.0 / ctx.eff_snr(s, Direction::Dl); });
    detail::check_fraction(frac, "dl_grant_overhead");
    return frac;
}

// BS -> UE acknowledgement of uplink data, one per uplink TTI, sent on the
// downlink.  Analog: dedicated whole symbols; hybrid/digital: in-band.
inline double dl_ack_overhead(const ControlMsg& msg, const BeamformingArch& arch,
                              const AntennaConfig& ant, const SnrDistribution& dist,
                              double p_ul, double e_tti, double w_tot, const FrameParams& fp)
{
    if (msg.bits == 0.0)
        return 0.0; // channel disabled
    msg.validate("ack");
    if (p_ul < 0.0 || p_ul > 1.0)
        throw std::invalid_argument("dl_ack_overhead: p_ul must be in [0, 1]");
    if (!(e_tti > 0.0))
        throw std::invalid_argument("dl_ack_overhead: e_tti must be > 0");

    LinkContext ctx{ant, arch, {}, w_tot};
    double frac = 0.0;
    if (arch.kind == ArchKind::Analog) {
        frac = p_ul / e_tti * dist.expect([&](const SnrSample& s) {
            const double t = msg.bits * msg.gamma_b / (w_tot * ctx.eff_snr(s, Direction::Dl));
            return round_to_symbols(t, fp.t_sym);
        });
    } else {
        frac = p_ul * msg.bits * msg.gamma_b / (w_tot * e_tti) *
               dist.expect([&](const SnrSample& s) { return 1.0 / ctx.eff_snr(s, Direction::Dl); });
    }
    detail::check_fraction(frac, "dl_ack_overhead");
    return frac;
}

// UE -> BS acknowledgement of downlink data, one per downlink TTI, sent on
// the uplink.  Analog: the ACK must be sent by itself across the band, so
// whole symbols are charged against the uplink SNR.  Hybrid/digital: the
// ACK is carried at a fixed robust code rate rho_ack and multiplexed with
// other uplink transmissions:
//   (1 - p_ul) * b_ack / (rho_ack * E[T_TTI] * W).
inline double ul_ack_overhead(const ControlMsg& msg, const BeamformingArch& arch,
                              const AntennaConfig& ant, const SnrDistribution& dist,
                              double p_ul, double e_tti, double rho_ack, double w_tot,
                              const FrameParams& fp)
{
    if (msg.bits == 0.0)
        return 0.0; // channel disabled
    msg.validate("ack");
    if (p_ul < 0.0 || p_ul > 1.0)
        throw std::invalid_argument("ul_ack_overhead: p_ul must be in [0, 1]");
    if (!(e_tti > 0.0))
        throw std::invalid_argument("ul_ack_overhead: e_tti must be > 0");

    double frac = 0.0;
    if (arch.kind == ArchKind::Analog) {
        LinkContext ctx{ant, arch, {}, w_tot};
        frac = (1.0 - p_ul) / e_tti * dist.expect([&](const SnrSample& s) {
            const double t = msg.bits * msg.gamma_b / (w_tot * ctx.eff_snr(s, Direction::Ul));
            return round_to_symbols(t, fp.t_sym);
        });
    } else {
        if (!(rho_ack > 0.0))
            throw std::invalid_argument("ul_ack_overhead: rho_ack must be > 0");
        frac = (1.0 - p_ul) * msg.bits / (rho_ack * e_tti * w_tot);
    }
    detail::check_fraction(frac, "ul_ack_overhead");
    return frac;
}

// Bundle of everything the aggregate needs; built from a scenario by the
// reporting layer.
struct OverheadInputs {
    AntennaConfig ant;
    BeamformingArch arch;
    FrameParams fp;
    double w_tot = 1e9;
    ControlMsg sr;       // active SR payload variant
    ControlMsg cqi;      // period 0 = disabled
    ControlMsg ul_grant; // grant size for the active TTI mode
    ControlMsg dl_grant;
    ControlMsg dl_ack;
    ControlMsg ul_ack;
    SrMode sr_mode = SrMode::Auto;
    double rho_ack = 0.125;
    int n_ue = 8;
    double p_ul = 0.5;
    double gamma_min_ul = 1.0; // linear cell-edge targets
    double gamma_min_dl = 1.0;
    const SnrDistribution* dist = nullptr; // served-UE distribution
    double e_tti = 1.248e-4;               // mean TTI duration [s]
};

// Sum of all control channels for one architecture (the reference-table
// aggregator).  Component errors propagate.
inline OverheadReport total_overhead(const OverheadInputs& in)
{
    if (in.dist == nullptr)
        throw std::invalid_argument("total_overhead: SNR distribution required");
    OverheadReport r;
    r.arch = in.arch.kind;
    r.sr = sr_overhead(in.sr, in.n_ue, in.arch, in.sr_mode, in.ant, in.w_tot, in.gamma_min_ul, in.fp);
    r.sr_mode_used = sr_mode_resolved(in.sr, in.n_ue, in.arch, in.sr_mode, in.ant, in.w_tot,
                                      in.gamma_min_ul, in.fp);
    r.cqi = cqi_overhead(in.cqi, in.n_ue, in.arch, in.sr_mode, in.ant, in.w_tot, in.gamma_min_ul, in.fp);
    r.ul_grant = ul_grant_overhead(in.ul_grant, in.arch, in.ant, *in.dist, in.p_ul, in.e_tti, in.w_tot, in.fp);
    r.dl_grant = dl_grant_overhead(in.dl_grant, in.arch, in.ant, *in.dist, in.p_ul, in.e_tti, in.w_tot);
    r.dl_ack = dl_ack_overhead(in.dl_ack, in.arch, in.ant, *in.dist, in.p_ul, in.e_tti, in.w_tot, in.fp);
    r.ul_ack = ul_ack_overhead(in.ul_ack, in.arch, in.ant, *in.dist, in.p_ul, in.e_tti, in.rho_ack,
                               in.w_tot, in.fp);
    r.total = r.sr + r.cqi + r.ul_grant + r.dl_grant + r.dl_ack + r.ul_ack;
    return r;
}

} // namespace ttiflex
