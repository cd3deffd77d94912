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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttiflex/scenario.hpp"

// Discrete-event simulator of the TDD frame timeline on an OFDM symbol
// grid.  It executes the request/grant/data/ACK pipelines symbol by
// symbol and measures utilization, per-channel control overhead, per-UE
// goodput, and round-trip latency, providing an independent check of the
// closed-form analytics.
//
// Resource model
//   * Semi-static SR/CQI slots are reserved on a fixed grid; data TTIs
//     skip over them.
//   * Analog beamforming: every control message occupies whole symbols
//     across the full band (single beam).
//   * Digital/hybrid: standalone control messages occupy a frequency
//     share t/t_sym of a symbol and different messages of equal direction
//     are multiplexed into the same symbol when they fit.
//   * DL grants ride inside the DL data TTI they schedule (all
//     architectures); they consume TTI slack, and the TTI is grown only
//     when the slack cannot hold them.
//   * One guard period (configurable, default 1 symbol) is inserted
//     between consecutively scheduled runs of opposite direction.
//     Reserved slots do not participate in guard insertion.

namespace ttiflex {

enum class EventKind {
    PacketArrival,
    SrSlot,
    CqiSlot,
    UlGrantTx,
    DlGrantDataTx,
    UlDataTx,
    DlAckTx,
    UlAckTx,
    GuardSymbol,
};

inline const char* to_string(EventKind k)
{
    switch (k) {
        case EventKind::PacketArrival: return "packet_arrival";
        case EventKind::SrSlot: return "sr_slot";
        case EventKind::CqiSlot: return "cqi_slot";
        case EventKind::UlGrantTx: return "ul_grant_tx";
        case EventKind::DlGrantDataTx: return "dl_grant_data_tx";
        case EventKind::UlDataTx: return "ul_data_tx";
        case EventKind::DlAckTx: return "dl_ack_tx";
        case EventKind::UlAckTx: return "ul_ack_tx";
        case EventKind::GuardSymbol: return "guard";
    }
    return "?";
}

enum class SymDir : std::uint8_t { Idle, Ul, Dl, Guard };

inline const char* to_string(SymDir d)
{
    switch (d) {
        case SymDir::Idle: return "idle";
        case SymDir::Ul: return "ul";
        case SymDir::Dl: return "dl";
        case SymDir::Guard: return "guard";
    }
    return "?";
}

// Per-symbol channel classification in the ledger.
enum class Channel : std::uint8_t {
    Unset,
    Idle,
    Guard,
    Sr,
    Cqi,
    UlData,
    DlData,
    UlGrant,
    DlGrant,
    DlAck,
    UlAck,
    Rrc,
};

inline const char* to_string(Channel c)
{
    switch (c) {
        case Channel::Unset: return "unset";
        case Channel::Idle: return "idle";
        case Channel::Guard: return "guard";
        case Channel::Sr: return "sr";
        case Channel::Cqi: return "cqi";
        case Channel::UlData: return "ul_data";
        case Channel::DlData: return "dl_data";
        case Channel::UlGrant: return "ul_grant";
        case Channel::DlGrant: return "dl_grant";
        case Channel::DlAck: return "dl_ack";
        case Channel::UlAck: return "ul_ack";
        case Channel::Rrc: return "rrc";
    }
    return "?";
}

struct HarqProcess {
    long id = 0;
    int redundancy = 0;   // 0 = first transmission, 1 = retransmission
    double ack_time_s = 0; // ACK position signaled with the grant
};

struct UeState {
    double buffer_ul = 0.0; // bits awaiting an UL grant
    double buffer_dl = 0.0; // bits awaiting a DL allocation
    SnrSample snr;
    std::vector<HarqProcess> harq;
    double rho_dl = 0.0; // static MCS for the run
    double rho_ul = 0.0;
    bool ul_active = false; // an UL transfer pipeline is in flight
    bool dl_active = false;
    std::vector<double> ul_arrivals; // arrival stamps riding the next UL transfer
    std::vector<double> dl_arrivals;
    double goodput_bits = 0.0;
};

// Per-symbol trace of the whole run plus the aggregate resource-time
// accounting.  `used_share` is the summed frequency share of all
// occupants of a symbol; the online invariant is share <= 1.
struct SymbolLedger {
    double t_sym = 0.0;
    std::vector<SymDir> dir;
    std::vector<Channel> ch;
    std::vector<float> used_share;

    void ensure(long n)
    {
        if (n > static_cast<long>(dir.size())) {
            dir.resize(n, SymDir::Idle);
            ch.resize(n, Channel::Unset);
            used_share.resize(n, 0.0f);
        }
    }
    void add_share(long sym, double share)
    {
        ensure(sym + 1);
        used_share[sym] += static_cast<float>(share);
        if (used_share[sym] > 1.0f + 1e-4f)
            throw std::runtime_error("symbol ledger: frequency shares exceed 1 at symbol " +
                                     std::to_string(sym));
    }
};

struct Assignment {
    long sym = 0;
    int n_sym = 0;
    SymDir dir = SymDir::Idle;
    Channel channel = Channel::Idle;
    int ue = -1;
    double freq_share = 1.0;
};

struct RttStats {
    double p50_us = std::numeric_limits<double>::quiet_NaN();
    double p95_us = std::numeric_limits<double>::quiet_NaN();
    double p99_us = std::numeric_limits<double>::quiet_NaN();
    double mean_us = std::numeric_limits<double>::quiet_NaN();
    std::size_t n = 0;
};

// One completed data transfer (payload only; retransmissions and control
// excluded).  Lets analytics re-derive closed-form costs on the exact
// workload a run realized instead of a fresh random one.
struct TransferRecord {
    int ue = 0;
    double bits = 0.0;
};

struct SimReport {
    // airlink efficiency of the data plane; absent when no data was sent
    std::optional<double> utilization;
    // control fractions: semi-static slots over elapsed time, dynamic
    // channels over data-TTI time (the analytic normalization)
    double sr_frac = 0.0;
    double cqi_frac = 0.0;
    double ul_grant_frac = 0.0;
    double dl_grant_frac = 0.0;
    double dl_ack_frac = 0.0;
    double ul_ack_frac = 0.0;
    double control_overhead = 0.0;   // sum of the six fractions above
    double guard_frac = 0.0;         // guard symbols over elapsed time
    double overhead_with_guard = 0.0;
    double rrc_frac = 0.0;           // RRC messages over elapsed time
    double idle_frac = 0.0;

    RttStats rtt;
    std::vector<double> per_ue_goodput_bps;
    double realized_p_ul = std::numeric_limits<double>::quiet_NaN();
    double mean_tti_s = std::numeric_limits<double>::quiet_NaN();

    double elapsed_s = 0.0;
    long n_symbols = 0;
    long n_ul_ttis = 0;
    long n_dl_ttis = 0;
    long n_ul_grants = 0;
    long n_dl_grants = 0;
    long n_dl_acks = 0;
    long n_ul_acks = 0;
    long n_harq_retx_ttis = 0;
    long n_transfers = 0;

    double useful_time_s = 0.0;
    double data_alloc_s = 0.0;
    double ul_data_alloc_s = 0.0;
    double guard_time_s = 0.0;
    double sr_time_s = 0.0;
    double cqi_time_s = 0.0;
    double rrc_time_s = 0.0;
    double delivered_bits = 0.0;

    std::vector<SnrSample> ue_snr; // the UE population the run used
    std::vector<long> per_ue_ul_ttis;
    std::vector<long> per_ue_dl_ttis;
    std::vector<TransferRecord> transfers; // completed data transfers in order

    // realized semi-static grid (symbols)
    long sr_period_sym = 0;
    long sr_block_sym = 0;
    long cqi_period_sym = 0;
    long cqi_block_sym = 0;

    std::uint64_t trace_hash = 0;
    std::uint64_t seed = 0;
};

struct SimConfig {
    double duration_s = 1.0;
    std::uint64_t seed = 1;
    std::ostream* trace = nullptr; // per-symbol CSV sink (optional)
};

class Simulator {
  public:
    Simulator(const PreparedScenario& ps, const SimConfig& cfg)
        : ps_(ps), cfg_(cfg), ctx_(ps.link()), rng_(cfg.seed ^ 0x6d73696d756c6174ull)
    {
        const Scenario& sc = ps_.sc;
        t_sym_ = sc.frame.t_sym;
        n_sym_tti_ = sc.frame.n_sym_tti_max();
        ledger_.t_sym = t_sym_;

        const double realized_sr = detail::realized_period(sc.control.sr_period_s, t_sym_);
        if (cfg_.duration_s < 100.0 * realized_sr)
            throw std::invalid_argument(
                "simulate: duration must cover at least 100 scheduling-request periods (" +
                std::to_string(100.0 * realized_sr) + " s here)");
        duration_sym_ = static_cast<long>(std::llround(realized_sr / t_sym_)) *
                        static_cast<long>(cfg_.duration_s / realized_sr + 1e-9);
        duration_sym_ = std::max<long>(duration_sym_, 1);

        sr_period_sym_ = static_cast<long>(std::llround(realized_sr / t_sym_));
        sr_block_sym_ = sr_block_symbols();
        if (sc.control.cqi_period_s > 0.0) {
            cqi_period_sym_ = static_cast<long>(
                std::llround(detail::realized_period(sc.control.cqi_period_s, t_sym_) / t_sym_));
            cqi_block_sym_ = cqi_block_symbols();
        }
        const double reserved_frac =
            static_cast<double>(sr_block_sym_) / sr_period_sym_ +
            (cqi_period_sym_ > 0 ? static_cast<double>(cqi_block_sym_) / cqi_period_sym_ : 0.0);
        if (reserved_frac >= 1.0)
            throw std::runtime_error(
                "scheduler deadlock: semi-static control slots fill the whole frame (fraction " +
                std::to_string(reserved_frac) + ")");

        init_ues();
        seed_traffic();
        if (trace_on())
            *cfg_.trace << "t_symbol_index,direction,channel,ue_id,freq_share\n";
    }

    bool done() const { return queue_.empty(); }

    // Execute the next queued event; returns the symbol assignments it made.
    std::vector<Assignment> step()
    {
        assignments_.clear();
        if (queue_.empty())
            return assignments_;
        Event ev = queue_.top();
        queue_.pop();
        cursor_ = std::max(cursor_, ev.ready_sym);
        dispatch(ev);
        return assignments_;
    }

    SimReport run()
    {
        while (!done())
            step();
        return report();
    }

  private:
    struct Event {
        long ready_sym = 0;
        long seq = 0;
        EventKind kind = EventKind::PacketArrival;
        int ue = 0;
        double bits = 0.0;
        int n_ttis = 0;    // burst size for grant/ACK events
        int ack_ttis = 0;  // TTIs awaiting the final ACK burst of a transfer
        bool is_retx = false;
        bool is_rrc = false;
        bool is_tcp = false;
        bool is_ackdata = false; // TCP ACK stream riding the UL data plane
        long period_index = 0;   // for SrSlot events
        std::vector<double> pkt_arrivals;
    };
    struct EventOrder {
        bool operator()(const Event& a, const Event& b) const
        {
            if (a.ready_sym != b.ready_sym)
                return a.ready_sym > b.ready_sym;
            return a.seq > b.seq;
        }
    };

    // ---------------------------------------------------------- setup

    // Symbols per SR block for the configured architecture and SR mode
    // (sized for the cell-edge target, like the analytic provisioning).
    long ctrl_block_symbols(double bits) const
    {
        const Scenario& sc = ps_.sc;
        const double g_bf = bf_gain(sc.antennas.n_ant_bs) * bf_gain(sc.antennas.n_ant_ue);
        const double t_full =
            bits * sc.control.gamma_b / (g_bf * sc.budget.bandwidth_hz * ps_.gamma_min_ul);
        const long per_ue = symbols_for(t_full, t_sym_);
        if (sc.arch.kind == ArchKind::Digital)
            return per_ue;
        const long k = sc.arch.k();
        const long tdma = ((sc.n_ue + k - 1) / k) * per_ue;
        const double t_omni = bits * sc.control.gamma_b /
                              (omni_gain(sc.arch) * bf_gain(sc.antennas.n_ant_ue) *
                               sc.budget.bandwidth_hz * ps_.gamma_min_ul);
        const long fdma = symbols_for(t_omni, t_sym_);
        switch (sc.control.sr_mode) {
            case SrMode::Tdma: return tdma;
            case SrMode::Fdma: return fdma;
            case SrMode::Auto: return std::min(tdma, fdma);
        }
        return tdma;
    }
    long sr_block_symbols() const
    {
        return ctrl_block_symbols(ps_.sc.control.sr_bits(ps_.sc.control.sr_payload));
    }
    long cqi_block_symbols() const { return ctrl_block_symbols(ps_.sc.control.cqi_bits); }

    bool in_sr_block(long sym) const { return sym % sr_period_sym_ < sr_block_sym_; }
    bool in_cqi_block(long sym) const
    {
        if (cqi_period_sym_ <= 0)
            return false;
        // CQI blocks are phase-shifted past the SR block of an aligned period
        const long phase = sym % cqi_period_sym_;
        return phase >= sr_block_sym_ && phase < sr_block_sym_ + cqi_block_sym_;
    }
    bool reserved(long sym) const { return in_sr_block(sym) || in_cqi_block(sym); }

    void init_ues()
    {
        const Scenario& sc = ps_.sc;
        ues_.resize(sc.n_ue);
        per_ue_ul_ttis_.assign(sc.n_ue, 0);
        per_ue_dl_ttis_.assign(sc.n_ue, 0);
        std::uniform_int_distribution<std::size_t> pick(0, ps_.dist_served.samples.size() - 1);
        for (int u = 0; u < sc.n_ue; ++u) {
            UeState& ue = ues_[u];
            ue.snr = ps_.dist_served.samples[pick(rng_)];
            ue.rho_dl = ctx_.rho(ue.snr, Direction::Dl);
            ue.rho_ul = ctx_.rho(ue.snr, Direction::Ul);
        }
    }

    void seed_traffic()
    {
        const Scenario& sc = ps_.sc;
        const double horizon = cfg_.duration_s;
        std::mt19937_64 rng_arr(cfg_.seed ^ 0x6172726976616c73ull);
        std::mt19937_64 rng_size(cfg_.seed ^ 0x7064755f73697a65ull);

        // SR service opportunities, one per realized period
        for (long k = 0; k * sr_period_sym_ < duration_sym_; ++k)
            push({k * sr_period_sym_ + sr_block_sym_, next_seq(), EventKind::SrSlot, 0, 0.0, 0, 0,
                  false, false, false, false, k, {}});

        if (sc.traffic.kind == TrafficKind::FullBufferTcp) {
            for (int u = 0; u < sc.n_ue; ++u) {
                Event ev;
                ev.ready_sym = 0;
                ev.seq = next_seq();
                ev.kind = EventKind::DlGrantDataTx;
                ev.ue = u;
                ev.is_tcp = true;
                push(ev);
            }
        } else if (sc.traffic.arrival_rate_per_ue > 0.0) {
            struct Arr {
                double t;
                int ue;
                double bits;
            };
            std::vector<Arr> all;
            for (int u = 0; u < sc.n_ue; ++u) {
                const auto times =
                    sample_arrival_times(sc.traffic.arrival_rate_per_ue, horizon, rng_arr);
                for (double t : times)
                    all.push_back({t, u, sample_pdu_size_bits(sc.traffic, rng_size)});
            }
            std::stable_sort(all.begin(), all.end(), [](const Arr& a, const Arr& b) {
                if (a.t != b.t)
                    return a.t < b.t;
                return a.ue < b.ue;
            });
            for (const Arr& a : all) {
                Event ev;
                ev.ready_sym = static_cast<long>(std::ceil(a.t / t_sym_ - 1e-9));
                ev.seq = next_seq();
                ev.kind = EventKind::PacketArrival;
                ev.ue = a.ue;
                ev.bits = a.bits;
                push(ev);
            }
        }

        if (sc.sim.rrc_rate_per_ue > 0.0) {
            std::mt19937_64 rng_rrc(cfg_.seed ^ 0x7272635f6d736773ull);
            for (int u = 0; u < sc.n_ue; ++u) {
                const auto times = sample_arrival_times(sc.sim.rrc_rate_per_ue, horizon, rng_rrc);
                for (double t : times) {
                    Event ev;
                    ev.ready_sym = static_cast<long>(std::ceil(t / t_sym_ - 1e-9));
                    ev.seq = next_seq();
                    ev.kind = EventKind::DlGrantDataTx;
                    ev.ue = u;
                    ev.bits = sc.sim.rrc_bits;
                    ev.is_rrc = true;
                    push(ev);
                }
            }
        }
    }

    // ------------------------------------------------------ allocation

    // Claim `n` whole non-reserved symbols starting at the cursor,
    // inserting guard symbols first if the direction flips.
    long allocate_whole(long n, SymDir dir, Channel ch, int ue, double share = 1.0)
    {
        maybe_guard(dir);
        long placed = 0;
        while (placed < n) {
            const long s = next_free_symbol();
            mark(s, dir, ch, ue, share);
            cursor_ = s + 1;
            ++placed;
        }
        last_dir_ = dir;
        open_sym_ = -1;
        return cursor_;
    }

    // Claim `t_res` seconds of band resource for a control message in
    // digital/hybrid mode: frequency-multiplex into the currently open
    // control symbol when direction matches, else open new symbols.
    long allocate_share(double t_res, SymDir dir, Channel ch, int ue)
    {
        if (t_res <= 0.0)
            return cursor_;
        // subtraction dust threshold relative to the request, so even a
        // femtosecond-scale message claims a sliver of a symbol
        const double dust = 1e-9 * t_res;
        double remaining = t_res;
        if (open_sym_ >= 0 && open_dir_ == dir && open_sym_ == cursor_ - 1 &&
            open_used_ < 1.0 - 1e-9) {
            const double take = std::min((1.0 - open_used_) * t_sym_, remaining);
            const double share = take / t_sym_;
            ledger_.add_share(open_sym_, share);
            trace_row(open_sym_, 1, dir, ch, ue, share);
            open_used_ += share;
            remaining -= take;
        }
        while (remaining > dust) {
            maybe_guard(dir);
            const long s = next_free_symbol();
            const double take = std::min(t_sym_, remaining);
            mark(s, dir, ch, ue, take / t_sym_);
            cursor_ = s + 1;
            last_dir_ = dir;
            open_sym_ = s;
            open_dir_ = dir;
            open_used_ = take / t_sym_;
            remaining -= take;
        }
        return cursor_;
    }

    void maybe_guard(SymDir dir)
    {
        if (last_dir_ == SymDir::Idle || last_dir_ == dir)
            return;
        for (int g = 0; g < ps_.sc.sim.guard_symbols; ++g) {
            const long s = next_free_symbol();
            mark(s, SymDir::Guard, Channel::Guard, -1, 1.0);
            cursor_ = s + 1;
            ++n_guard_sym_;
        }
        open_sym_ = -1;
    }

    long next_free_symbol()
    {
        long s = cursor_;
        const long limit = cursor_ + 16 * std::max<long>(sr_period_sym_, cqi_period_sym_ + 1);
        while (reserved(s)) {
            if (++s > limit)
                throw std::runtime_error(
                    "scheduler deadlock: no schedulable symbol near index " +
                    std::to_string(cursor_));
        }
        return s;
    }

    void mark(long sym, SymDir dir, Channel ch, int ue, double share)
    {
        ledger_.ensure(sym + 1);
        ledger_.dir[sym] = dir;
        ledger_.ch[sym] = ch;
        ledger_.add_share(sym, share);
        hash_mix(static_cast<std::uint64_t>(sym));
        hash_mix(static_cast<std::uint64_t>(dir));
        hash_mix(static_cast<std::uint64_t>(ch));
        hash_mix(static_cast<std::uint64_t>(ue + 1));
        hash_mix(static_cast<std::uint64_t>(std::llround(share * 65536.0)));
        if (!assignments_.empty()) {
            Assignment& a = assignments_.back();
            if (a.sym + a.n_sym == sym && a.dir == dir && a.channel == ch && a.ue == ue &&
                a.freq_share == share) {
                ++a.n_sym;
                trace_row(sym, 1, dir, ch, ue, share);
                return;
            }
        }
        assignments_.push_back({sym, 1, dir, ch, ue, share});
        trace_row(sym, 1, dir, ch, ue, share);
    }

    // ----------------------------------------------------- link helpers

    // standalone control transmitted towards the UE (grants, ACK-to-UE)
    double ctrl_time_dl(const UeState& ue, double bits) const
    {
        return bits * ps_.sc.control.gamma_b /
               (ps_.sc.budget.bandwidth_hz * ctx_.eff_snr(ue.snr, Direction::Dl));
    }
    // UE-transmitted control: beamformed link in analog, robust fixed-rate
    // code when frequency-multiplexed (digital/hybrid)
    double ctrl_time_ul(const UeState& ue, double bits) const
    {
        if (ps_.sc.arch.kind == ArchKind::Analog)
            return bits * ps_.sc.control.gamma_b /
                   (ps_.sc.budget.bandwidth_hz * ctx_.eff_snr(ue.snr, Direction::Ul));
        return bits / (ps_.sc.control.rho_ack * ps_.sc.budget.bandwidth_hz);
    }
    bool analog() const { return ps_.sc.arch.kind == ArchKind::Analog; }

    // TTI count and symbol count for a transfer of `bits` at rate rho
    // (bits/s/Hz), including `t_extra` of in-band control that must fit
    // into the allocation's slack.
    struct ChainPlan {
        int n_ttis = 0;
        long n_sym = 0;
        double t_min = 0.0;
    };
    ChainPlan plan_chain(double bits, double rho, double t_inband_per_tti) const
    {
        ChainPlan p;
        p.t_min = bits / (rho * ps_.sc.budget.bandwidth_hz);
        if (ps_.sc.frame.tti_mode == TtiMode::Fixed) {
            int m = std::max(1, static_cast<int>(symbols_for(p.t_min, ps_.sc.frame.t_tti_max)));
            while (p.t_min + m * t_inband_per_tti > m * ps_.sc.frame.t_tti_max + 1e-15)
                ++m;
            p.n_ttis = m;
            p.n_sym = static_cast<long>(m) * n_sym_tti_;
            return p;
        }
        long n = std::max<long>(1, symbols_for(p.t_min, t_sym_));
        for (int it = 0; it < 8; ++it) {
            const int m = static_cast<int>((n + n_sym_tti_ - 1) / n_sym_tti_);
            const long n2 = std::max<long>(
                1, symbols_for(std::max(p.t_min + m * t_inband_per_tti, p.t_min), t_sym_));
            if (n2 == n) {
                p.n_ttis = m;
                p.n_sym = n;
                return p;
            }
            n = n2;
        }
        p.n_ttis = static_cast<int>((n + n_sym_tti_ - 1) / n_sym_tti_);
        p.n_sym = n;
        return p;
    }

    int harq_failures(int n_ttis)
    {
        if (ps_.sc.sim.harq_error_prob <= 0.0)
            return 0;
        std::bernoulli_distribution err(ps_.sc.sim.harq_error_prob);
        int f = 0;
        for (int i = 0; i < n_ttis; ++i)
            f += err(rng_) ? 1 : 0;
        return f;
    }

    // --------------------------------------------------------- pipeline

    void dispatch(const Event& ev)
    {
        switch (ev.kind) {
            case EventKind::PacketArrival: on_arrival(ev); break;
            case EventKind::SrSlot: on_sr_slot(ev); break;
            case EventKind::CqiSlot: break; // accounting handled by the grid
            case EventKind::UlGrantTx: on_ul_grant(ev); break;
            case EventKind::UlDataTx: on_ul_data(ev); break;
            case EventKind::DlGrantDataTx: on_dl_data(ev); break;
            case EventKind::DlAckTx: on_dl_ack(ev); break;
            case EventKind::UlAckTx: on_ul_ack(ev); break;
            case EventKind::GuardSymbol: break; // inserted inline, never queued
        }
    }

    void on_arrival(const Event& ev)
    {
        UeState& ue = ues_[ev.ue];
        const double t_arr = ev.ready_sym * t_sym_;
        if (ps_.sc.traffic.direction == Direction::Ul) {
            ue.buffer_ul += ev.bits;
            ue.ul_arrivals.push_back(t_arr);
            // served at the next SR opportunity; nothing to schedule here
        } else {
            ue.buffer_dl += ev.bits;
            ue.dl_arrivals.push_back(t_arr);
            if (!ue.dl_active) {
                ue.dl_active = true;
                Event tx;
                tx.ready_sym = ev.ready_sym;
                tx.seq = next_seq();
                tx.kind = EventKind::DlGrantDataTx;
                tx.ue = ev.ue;
                tx.bits = ue.buffer_dl;
                tx.pkt_arrivals = std::move(ue.dl_arrivals);
                ue.dl_arrivals.clear();
                ue.buffer_dl = 0.0;
                push(tx);
            }
        }
    }

    void on_sr_slot(const Event& ev)
    {
        for (int u = 0; u < static_cast<int>(ues_.size()); ++u) {
            UeState& ue = ues_[u];
            if (ue.buffer_ul <= 0.0 || ue.ul_active)
                continue;
            ue.ul_active = true;
            Event g;
            g.ready_sym = ev.ready_sym + ps_.sc.sim.processing_sr_to_grant_sym;
            g.seq = next_seq();
            g.kind = EventKind::UlGrantTx;
            g.ue = u;
            g.bits = ue.buffer_ul;
            g.pkt_arrivals = std::move(ue.ul_arrivals);
            ue.ul_arrivals.clear();
            ue.buffer_ul = 0.0;
            push(g);
        }
    }

    void on_ul_grant(const Event& ev)
    {
        UeState& ue = ues_[ev.ue];
        const auto plan = plan_chain(ev.bits, ue.rho_ul, 0.0);
        const double t_g = ctrl_time_dl(ue, ps_.sc.control.grant_bits(ps_.sc.frame.tti_mode));
        if (analog()) {
            // single-beam: the grant blocks whole full-band symbols
            const long n = plan.n_ttis * symbols_for(t_g, t_sym_);
            allocate_whole(n, SymDir::Dl, Channel::UlGrant, ev.ue);
            t_ul_grant_ += n * t_sym_;
        } else {
            allocate_share(plan.n_ttis * t_g, SymDir::Dl, Channel::UlGrant, ev.ue);
            t_ul_grant_ += plan.n_ttis * t_g;
        }
        n_ul_grants_ += plan.n_ttis;

        Event d = ev;
        d.ready_sym = cursor_ + ps_.sc.sim.processing_grant_to_data_sym;
        d.seq = next_seq();
        d.kind = EventKind::UlDataTx;
        push(d);
    }

    void on_ul_data(const Event& ev)
    {
        UeState& ue = ues_[ev.ue];
        const auto plan = plan_chain(ev.bits, ue.rho_ul, 0.0);
        allocate_whole(plan.n_sym, SymDir::Ul, Channel::UlData, ev.ue);
        account_data(plan, ev.is_retx, /*ul=*/true, ev.ue);
        record_harq(ue, plan.n_ttis, ev.is_retx);

        const int fails = ev.is_retx ? 0 : harq_failures(plan.n_ttis);
        if (fails > 0) {
            Event r = ev;
            r.ready_sym = cursor_;
            r.seq = next_seq();
            r.kind = EventKind::UlGrantTx;
            r.bits = ev.bits * fails / plan.n_ttis;
            r.is_retx = true;
            r.ack_ttis = ev.ack_ttis + plan.n_ttis;
            push(r);
            n_harq_retx_ttis_ += fails;
            return;
        }
        Event a;
        a.ready_sym = cursor_;
        a.seq = next_seq();
        a.kind = EventKind::DlAckTx;
        a.ue = ev.ue;
        a.n_ttis = ev.ack_ttis + plan.n_ttis;
        a.is_ackdata = ev.is_ackdata;
        a.is_tcp = ev.is_tcp;
        a.bits = ev.is_ackdata ? ev.bits : 0.0;
        a.pkt_arrivals = ev.pkt_arrivals;
        push(a);
    }

    void on_dl_data(const Event& ev)
    {
        UeState& ue = ues_[ev.ue];
        const double t_g = ctrl_time_dl(ue, ps_.sc.control.grant_bits(ps_.sc.frame.tti_mode));
        double bits = ev.bits;
        ChainPlan plan;
        if (ev.is_tcp && !ev.is_retx) {
            // full-buffer cycle: one maximum-length TTI carrying as many
            // whole segments as fit beside the in-band grant
            const double w = ps_.sc.budget.bandwidth_hz;
            const double cap = ps_.sc.frame.t_tti_max - t_g;
            const double n_seg =
                std::max(1.0, std::floor(cap * ue.rho_dl * w / ps_.sc.traffic.l_data_bits));
            bits = n_seg * ps_.sc.traffic.l_data_bits;
            plan.n_ttis = 1;
            plan.n_sym = n_sym_tti_;
            plan.t_min = bits / (ue.rho_dl * w);
        } else {
            plan = plan_chain(bits, ue.rho_dl, ev.is_rrc ? 0.0 : t_g);
        }

        if (ev.is_rrc) {
            allocate_whole(plan.n_sym, SymDir::Dl, Channel::Rrc, ev.ue);
            t_rrc_ += plan.n_sym * t_sym_;
            return; // control-plane message: no data ACK pipeline
        }

        allocate_whole(plan.n_sym, SymDir::Dl, Channel::DlData, ev.ue);
        account_data(plan, ev.is_retx, /*ul=*/false, ev.ue);
        record_harq(ue, plan.n_ttis, ev.is_retx);
        t_dl_grant_ += plan.n_ttis * t_g;
        n_dl_grants_ += plan.n_ttis;

        const int fails = ev.is_retx ? 0 : harq_failures(plan.n_ttis);
        if (fails > 0) {
            Event r = ev;
            r.ready_sym = cursor_;
            r.seq = next_seq();
            r.bits = bits * fails / plan.n_ttis;
            r.is_retx = true;
            r.ack_ttis = ev.ack_ttis + plan.n_ttis;
            push(r);
            n_harq_retx_ttis_ += fails;
            return;
        }
        Event a;
        a.ready_sym = cursor_;
        a.seq = next_seq();
        a.kind = EventKind::UlAckTx;
        a.ue = ev.ue;
        a.n_ttis = ev.ack_ttis + plan.n_ttis;
        a.is_tcp = ev.is_tcp;
        a.bits = bits;
        a.pkt_arrivals = ev.pkt_arrivals;
        push(a);
    }

    // BS -> UE ACK burst closing an UL transfer
    void on_dl_ack(const Event& ev)
    {
        UeState& ue = ues_[ev.ue];
        const double t_a = ctrl_time_dl(ue, ps_.sc.control.ack_bits);
        if (ps_.sc.control.ack_bits > 0.0) {
            if (analog()) {
                const long n = ev.n_ttis * symbols_for(t_a, t_sym_);
                allocate_whole(n, SymDir::Dl, Channel::DlAck, ev.ue);
                t_dl_ack_ += n * t_sym_;
            } else {
                allocate_share(ev.n_ttis * t_a, SymDir::Dl, Channel::DlAck, ev.ue);
                t_dl_ack_ += ev.n_ttis * t_a;
            }
        }
        n_dl_acks_ += ev.n_ttis;
        ue.harq.clear();

        const double t_done = cursor_ * t_sym_;
        for (double t0 : ev.pkt_arrivals)
            rtt_samples_.push_back(t_done - t0);
        if (!ev.is_ackdata) {
            ++n_transfers_;
            ue.goodput_bits += ev.bits > 0.0 ? ev.bits : 0.0;
            transfer_log_.push_back({ev.ue, ev.bits});
        }
        ue.ul_active = false;

        if (ev.is_tcp && ev.is_ackdata) {
            // TCP cycle complete; start the next one if time remains
            if (cursor_ < duration_sym_) {
                Event nxt;
                nxt.ready_sym = cursor_;
                nxt.seq = next_seq();
                nxt.kind = EventKind::DlGrantDataTx;
                nxt.ue = ev.ue;
                nxt.is_tcp = true;
                push(nxt);
            }
        }
        // UL bursty pipeline restarts via the next SR slot when the
        // buffer is non-empty; nothing to do here.
    }

    // UE -> BS ACK burst closing a DL transfer
    void on_ul_ack(const Event& ev)
    {
        UeState& ue = ues_[ev.ue];
        const double t_a = ctrl_time_ul(ue, ps_.sc.control.ack_bits);
        if (ps_.sc.control.ack_bits > 0.0) {
            if (analog()) {
                const long n = ev.n_ttis * symbols_for(t_a, t_sym_);
                allocate_whole(n, SymDir::Ul, Channel::UlAck, ev.ue);
                t_ul_ack_ += n * t_sym_;
            } else {
                allocate_share(ev.n_ttis * t_a, SymDir::Ul, Channel::UlAck, ev.ue);
                t_ul_ack_ += ev.n_ttis * t_a;
            }
        }
        n_ul_acks_ += ev.n_ttis;
        ue.harq.clear();

        const double t_done = cursor_ * t_sym_;
        for (double t0 : ev.pkt_arrivals)
            rtt_samples_.push_back(t_done - t0);
        ++n_transfers_;
        ue.goodput_bits += ev.bits;
        transfer_log_.push_back({ev.ue, ev.bits});

        if (ev.is_tcp) {
            // acknowledge the segment burst over the UL data plane
            const double ack_bits = std::ceil(ev.bits / ps_.sc.traffic.l_data_bits /
                                              ps_.sc.traffic.ack_coalescing) *
                                    ps_.sc.traffic.l_ack_bits;
            Event g;
            g.ready_sym = cursor_;
            g.seq = next_seq();
            g.kind = EventKind::UlGrantTx;
            g.ue = ev.ue;
            g.bits = ack_bits;
            g.is_tcp = true;
            g.is_ackdata = true;
            push(g);
            return;
        }
        ue.dl_active = false;
        if (ue.buffer_dl > 0.0) {
            Event tx;
            tx.ready_sym = cursor_;
            tx.seq = next_seq();
            tx.kind = EventKind::DlGrantDataTx;
            tx.ue = ev.ue;
            tx.bits = ue.buffer_dl;
            tx.pkt_arrivals = std::move(ue.dl_arrivals);
            ue.dl_arrivals.clear();
            ue.buffer_dl = 0.0;
            ue.dl_active = true;
            push(tx);
        }
    }

    void account_data(const ChainPlan& plan, bool is_retx, bool ul, int ue)
    {
        const double alloc = plan.n_sym * t_sym_;
        t_data_alloc_ += alloc;
        if (ul) {
            t_ul_data_alloc_ += alloc;
            n_ul_ttis_ += plan.n_ttis;
            per_ue_ul_ttis_[ue] += plan.n_ttis;
        } else {
            n_dl_ttis_ += plan.n_ttis;
            per_ue_dl_ttis_[ue] += plan.n_ttis;
        }
        if (!is_retx)
            t_useful_ += plan.t_min; // retransmissions repeat known bits
        n_ttis_total_ += plan.n_ttis;
    }

    void record_harq(UeState& ue, int n_ttis, bool retx)
    {
        const double ack_time = cursor_ * t_sym_;
        for (int i = 0; i < n_ttis; ++i)
            ue.harq.push_back({next_harq_id_++, retx ? 1 : 0, ack_time});
    }

    // --------------------------------------------------------- plumbing

    void push(Event ev) { queue_.push(std::move(ev)); }
    long next_seq() { return seq_++; }

    void hash_mix(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i) {
            hash_ ^= (v >> (8 * i)) & 0xff;
            hash_ *= 1099511628211ull;
        }
    }

    bool trace_on() const { return cfg_.trace != nullptr; }
    void trace_row(long sym, int n, SymDir dir, Channel ch, int ue, double share)
    {
        if (!trace_on())
            return;
        for (long s = sym; s < sym + n; ++s)
            *cfg_.trace << s << ',' << to_string(dir) << ',' << to_string(ch) << ',' << ue << ','
                        << share << '\n';
    }

    // ----------------------------------------------------------- report

    SimReport report()
    {
        SimReport r;
        r.seed = cfg_.seed;
        const long end_sym = std::max(cursor_, duration_sym_);
        ledger_.ensure(end_sym);

        long sr_sym = 0, cqi_sym = 0, idle_sym = 0;
        for (long s = 0; s < end_sym; ++s) {
            if (ledger_.ch[s] != Channel::Unset)
                continue;
            if (in_sr_block(s)) {
                ledger_.ch[s] = Channel::Sr;
                ledger_.dir[s] = SymDir::Ul;
                ++sr_sym;
            } else if (in_cqi_block(s)) {
                ledger_.ch[s] = Channel::Cqi;
                ledger_.dir[s] = SymDir::Ul;
                ++cqi_sym;
            } else {
                ledger_.ch[s] = Channel::Idle;
                ++idle_sym;
            }
        }
        if (trace_on()) {
            for (long s = 0; s < end_sym; ++s)
                if (ledger_.ch[s] == Channel::Sr || ledger_.ch[s] == Channel::Cqi ||
                    ledger_.ch[s] == Channel::Idle)
                    trace_row(s, 1, ledger_.dir[s], ledger_.ch[s], -1, 1.0);
        }

        const double elapsed = end_sym * t_sym_;
        r.elapsed_s = elapsed;
        r.n_symbols = end_sym;
        r.sr_time_s = sr_sym * t_sym_;
        r.cqi_time_s = cqi_sym * t_sym_;
        r.guard_time_s = n_guard_sym_ * t_sym_;
        r.rrc_time_s = t_rrc_;
        r.useful_time_s = t_useful_;
        r.data_alloc_s = t_data_alloc_;
        r.ul_data_alloc_s = t_ul_data_alloc_;
        r.delivered_bits = 0.0;

        r.sr_frac = r.sr_time_s / elapsed;
        r.cqi_frac = r.cqi_time_s / elapsed;
        if (t_data_alloc_ > 0.0) {
            r.utilization = t_useful_ / t_data_alloc_;
            r.ul_grant_frac = t_ul_grant_ / t_data_alloc_;
            r.dl_grant_frac = t_dl_grant_ / t_data_alloc_;
            r.dl_ack_frac = t_dl_ack_ / t_data_alloc_;
            r.ul_ack_frac = t_ul_ack_ / t_data_alloc_;
            r.realized_p_ul = t_ul_data_alloc_ / t_data_alloc_;
            r.mean_tti_s = t_data_alloc_ / n_ttis_total_;
        }
        r.control_overhead = r.sr_frac + r.cqi_frac + r.ul_grant_frac + r.dl_grant_frac +
                             r.dl_ack_frac + r.ul_ack_frac;
        r.guard_frac = r.guard_time_s / elapsed;
        r.overhead_with_guard = r.control_overhead + r.guard_frac;
        r.rrc_frac = t_rrc_ / elapsed;
        r.idle_frac = idle_sym * t_sym_ / elapsed;

        if (!rtt_samples_.empty()) {
            std::vector<double> v = rtt_samples_;
            std::sort(v.begin(), v.end());
            auto pct = [&](double p) {
                const double idx = p / 100.0 * (v.size() - 1);
                const std::size_t lo = static_cast<std::size_t>(idx);
                const std::size_t hi = std::min(lo + 1, v.size() - 1);
                return (v[lo] + (v[hi] - v[lo]) * (idx - lo)) * 1e6;
            };
            r.rtt.p50_us = pct(50.0);
            r.rtt.p95_us = pct(95.0);
            r.rtt.p99_us = pct(99.0);
            double sum = 0;
            for (double x : v)
                sum += x;
            r.rtt.mean_us = sum / v.size() * 1e6;
            r.rtt.n = v.size();
        }

        r.per_ue_goodput_bps.resize(ues_.size());
        for (std::size_t u = 0; u < ues_.size(); ++u) {
            r.per_ue_goodput_bps[u] = ues_[u].goodput_bits / elapsed;
            r.delivered_bits += ues_[u].goodput_bits;
            r.ue_snr.push_back(ues_[u].snr);
        }

        r.n_ul_ttis = n_ul_ttis_;
        r.n_dl_ttis = n_dl_ttis_;
        r.n_ul_grants = n_ul_grants_;
        r.n_dl_grants = n_dl_grants_;
        r.n_dl_acks = n_dl_acks_;
        r.n_ul_acks = n_ul_acks_;
        r.n_harq_retx_ttis = n_harq_retx_ttis_;
        r.n_transfers = n_transfers_;
        r.transfers = transfer_log_;
        r.per_ue_ul_ttis = per_ue_ul_ttis_;
        r.per_ue_dl_ttis = per_ue_dl_ttis_;
        r.sr_period_sym = sr_period_sym_;
        r.sr_block_sym = sr_block_sym_;
        r.cqi_period_sym = cqi_period_sym_;
        r.cqi_block_sym = cqi_block_sym_;
        r.trace_hash = hash_;

        check_invariants(r);
        return r;
    }

    void check_invariants(const SimReport& r) const
    {
        // every granted TTI has exactly one grant and one scheduled ACK
        if (r.n_ul_ttis != r.n_ul_grants || r.n_ul_ttis != r.n_dl_acks)
            throw std::logic_error("simulator invariant: UL TTI/grant/ACK counts diverge");
        if (r.n_dl_ttis != r.n_dl_grants || r.n_dl_ttis != r.n_ul_acks)
            throw std::logic_error("simulator invariant: DL TTI/grant/ACK counts diverge");
        for (long s = 0; s < r.n_symbols; ++s) {
            if (ledger_.ch[s] == Channel::Unset)
                throw std::logic_error("simulator invariant: unclassified symbol");
            if (ledger_.used_share[s] > 1.0f + 1e-4f)
                throw std::logic_error("simulator invariant: frequency shares exceed 1");
        }
    }

    // ----------------------------------------------------------- fields

    PreparedScenario ps_;
    SimConfig cfg_;
    LinkContext ctx_;
    std::mt19937_64 rng_;

    double t_sym_ = 0.0;
    long n_sym_tti_ = 0;
    long duration_sym_ = 0;
    long sr_period_sym_ = 1;
    long sr_block_sym_ = 0;
    long cqi_period_sym_ = 0;
    long cqi_block_sym_ = 0;

    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::vector<UeState> ues_;
    std::vector<long> per_ue_ul_ttis_;
    std::vector<long> per_ue_dl_ttis_;
    SymbolLedger ledger_;
    std::vector<Assignment> assignments_;
    std::vector<double> rtt_samples_;

    long cursor_ = 0;
    long seq_ = 0;
    SymDir last_dir_ = SymDir::Idle;
    long open_sym_ = -1;
    SymDir open_dir_ = SymDir::Idle;
    double open_used_ = 0.0;

    double t_useful_ = 0.0;
    double t_data_alloc_ = 0.0;
    double t_ul_data_alloc_ = 0.0;
    double t_ul_grant_ = 0.0;
    double t_dl_grant_ = 0.0;
    double t_dl_ack_ = 0.0;
    double t_ul_ack_ = 0.0;
    double t_rrc_ = 0.0;
    long n_guard_sym_ = 0;
    long n_ul_ttis_ = 0;
    long n_dl_ttis_ = 0;
    long n_ttis_total_ = 0;
    long n_ul_grants_ = 0;
    long n_dl_grants_ = 0;
    long n_dl_acks_ = 0;
    long n_ul_acks_ = 0;
    long n_harq_retx_ttis_ = 0;
    long n_transfers_ = 0;
    std::vector<TransferRecord> transfer_log_;
    long next_harq_id_ = 0;
    std::uint64_t hash_ = 1469598103934665603ull;
};

inline SimReport run_simulation(const PreparedScenario& ps, double duration_s, std::uint64_t seed,
                                std::ostream* trace = nullptr)
{
    SimConfig cfg;
    cfg.duration_s = duration_s;
    cfg.seed = seed;
    cfg.trace = trace;
    Simulator sim(ps, cfg);
    return sim.run();
}

// ------------------------------------------------------- RRC experiment

// Mean per-UE data rate under full-buffer background traffic as a
// function of the control-plane (RRC-style) message rate, for both TTI
// modes.  Each message is a DL transmission of rrc_bits: a whole TTI in
// fixed mode, a few symbols in flexible mode.
struct RrcCurve {
    std::vector<double> rates_per_ue;   // messages/s per UE
    std::vector<double> fixed_bps;      // mean per-UE goodput, fixed TTIs
    std::vector<double> flexible_bps;   // mean per-UE goodput, flexible TTIs
    double rrc_bits = 0.0;
};

inline RrcCurve rrc_experiment(const Scenario& scenario, const std::vector<double>& rates_per_ue,
                               double rrc_bits, double duration_s, std::uint64_t seed)
{
    if (rates_per_ue.empty())
        throw std::invalid_argument("rrc_experiment: empty rate sweep");
    RrcCurve curve;
    curve.rates_per_ue = rates_per_ue;
    curve.rrc_bits = rrc_bits;
    for (TtiMode mode : {TtiMode::Fixed, TtiMode::Flexible}) {
        for (double rate : rates_per_ue) {
            Scenario sc = scenario;
            sc.traffic.kind = TrafficKind::FullBufferTcp; // full-buffer background
            sc.frame.tti_mode = mode;
            sc.sim.rrc_rate_per_ue = rate;
            sc.sim.rrc_bits = rrc_bits;
            const PreparedScenario ps = prepare(sc);
            const SimReport rep = run_simulation(ps, duration_s, seed);
            double mean = 0.0;
            for (double g : rep.per_ue_goodput_bps)
                mean += g;
            mean /= rep.per_ue_goodput_bps.empty() ? 1.0 : rep.per_ue_goodput_bps.size();
            (mode == TtiMode::Fixed ? curve.fixed_bps : curve.flexible_bps).push_back(mean);
        }
    }
    return curve;
}

} // namespace ttiflex
