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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ttiflex/overhead.hpp"

using namespace ttiflex;

namespace {

constexpr double kGammaB = 3.9810717055349722; // 6 dB, linear
constexpr double kGminUl = 1.2589254117941661e-4; // -39 dB
constexpr double kGminDl = 6.3095734448019333e-4; // -32 dB

FrameParams frame()
{
    FrameParams fp;
    fp.t_sym = 4.16e-6;
    fp.t_tti_max = 30 * fp.t_sym;
    return fp;
}

ControlMsg sr_msg(double bits = 18.0)
{
    return ControlMsg{bits, kGammaB, 500e-6};
}

// one served UE pinned exactly at both cell-edge SNR floors
SnrDistribution edge_atom()
{
    SnrSample s;
    s.gamma_ul = kGminUl;
    s.gamma_dl = kGminDl;
    s.state = LinkState::Nlos;
    SnrDistribution d;
    d.samples.push_back(s);
    return d;
}

SnrDistribution served_population(std::uint64_t seed = 1)
{
    LinkBudget budget;
    PathLossModel plm;
    return sample_snr_distribution(budget, plm, 100000, seed).restricted(kGminUl, kGminDl);
}

OverheadInputs baseline_inputs(const SnrDistribution& dist, ArchKind kind)
{
    OverheadInputs in;
    in.arch.kind = kind;
    in.arch.streams = kind == ArchKind::Hybrid ? 2 : 1;
    in.fp = frame();
    in.sr = sr_msg();
    in.cqi = ControlMsg{26.0, kGammaB, 0.0}; // disabled
    in.ul_grant = ControlMsg{100.0, kGammaB, 0.0};
    in.dl_grant = ControlMsg{100.0, kGammaB, 0.0};
    in.dl_ack = ControlMsg{5.0, kGammaB, 0.0};
    in.ul_ack = ControlMsg{5.0, kGammaB, 0.0};
    in.gamma_min_ul = kGminUl;
    in.gamma_min_dl = kGminDl;
    in.dist = &dist;
    in.e_tti = 1.248e-4;
    return in;
}

} // namespace

TEST_CASE("scheduling-request overhead hits the frozen slot counts")
{
    const FrameParams fp = frame();
    AntennaConfig ant;
    BeamformingArch analog{ArchKind::Analog, 1, 0.0};
    BeamformingArch hybrid{ArchKind::Hybrid, 2, 0.0};
    BeamformingArch digital{ArchKind::Digital, 1, 0.0};

    // full-gain trigger slot is one symbol; the 500 us period realizes as
    // 120 symbols, so dedicated slots cost n_ue / 120
    CHECK(sr_overhead(sr_msg(), 8, analog, SrMode::Tdma, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(8.0 / 120.0).margin(1e-12));
    // omni reception needs 9 symbols for the 18-bit trigger
    CHECK(sr_overhead(sr_msg(), 8, analog, SrMode::Fdma, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(9.0 / 120.0).margin(1e-12));
    CHECK(sr_overhead(sr_msg(), 8, analog, SrMode::Auto, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(8.0 / 120.0).margin(1e-12));

    // short and long buffer-status payloads grow the omni slot to 13 / 20 symbols
    CHECK(sr_overhead(sr_msg(26.0), 8, analog, SrMode::Fdma, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(13.0 / 120.0).margin(1e-12));
    CHECK(sr_overhead(sr_msg(42.0), 8, analog, SrMode::Fdma, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(20.0 / 120.0).margin(1e-12));

    // two hybrid chains halve the dedicated-slot bill and double the omni gain
    CHECK(sr_overhead(sr_msg(), 8, hybrid, SrMode::Tdma, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(4.0 / 120.0).margin(1e-12));
    CHECK(sr_overhead(sr_msg(), 8, hybrid, SrMode::Fdma, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(5.0 / 120.0).margin(1e-12));

    // a digital BS hears everyone at once: one slot per period, n_ue-free
    CHECK(sr_overhead(sr_msg(), 8, digital, SrMode::Auto, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(1.0 / 120.0).margin(1e-12));
    CHECK(sr_overhead(sr_msg(), 64, digital, SrMode::Auto, ant, 1e9, kGminUl, fp) ==
          Catch::Approx(1.0 / 120.0).margin(1e-12));
}

TEST_CASE("auto SR multiplexing switches from dedicated to omni at 9 UEs")
{
    const FrameParams fp = frame();
    AntennaConfig ant;
    BeamformingArch analog{ArchKind::Analog, 1, 0.0};

    // dedicated slots scale linearly with n_ue until they cost more than
    // the shared omni slot, then the fraction plateaus
    for (int n = 1; n <= 9; ++n)
        CHECK(sr_overhead(sr_msg(), n, analog, SrMode::Auto, ant, 1e9, kGminUl, fp) ==
              Catch::Approx(n / 120.0).margin(1e-12));
    for (int n : {10, 20, 100})
        CHECK(sr_overhead(sr_msg(), n, analog, SrMode::Auto, ant, 1e9, kGminUl, fp) ==
              Catch::Approx(9.0 / 120.0).margin(1e-12));

    CHECK(sr_mode_resolved(sr_msg(), 8, analog, SrMode::Auto, ant, 1e9, kGminUl, fp) ==
          SrMode::Tdma);
    CHECK(sr_mode_resolved(sr_msg(), 20, analog, SrMode::Auto, ant, 1e9, kGminUl, fp) ==
          SrMode::Fdma);
}

TEST_CASE("CQI slots reuse the SR arithmetic and a zero period disables them")
{
    const FrameParams fp = frame();
    AntennaConfig ant;
    BeamformingArch analog{ArchKind::Analog, 1, 0.0};

    const ControlMsg off{26.0, kGammaB, 0.0};
    CHECK(cqi_overhead(off, 8, analog, SrMode::Auto, ant, 1e9, kGminUl, fp) == 0.0);

    const ControlMsg on{26.0, kGammaB, 500e-6};
    CHECK(cqi_overhead(on, 8, analog, SrMode::Auto, ant, 1e9, kGminUl, fp) ==
          sr_overhead(on, 8, analog, SrMode::Auto, ant, 1e9, kGminUl, fp));
}

TEST_CASE("per-TTI channels on the cell-edge atom match hand-derived fractions")
{
    const FrameParams fp = frame();
    AntennaConfig ant;
    BeamformingArch analog{ArchKind::Analog, 1, 0.0};
    BeamformingArch hybrid{ArchKind::Hybrid, 2, 0.0};
    const SnrDistribution atom = edge_atom();
    const ControlMsg grant{100.0, kGammaB, 0.0};
    const ControlMsg ack{5.0, kGammaB, 0.0};
    const double e_tti = 1.248e-4;

    // analog: every per-TTI message at or above the SNR floor fits one
    // dedicated symbol, so each channel costs p * t_sym / E[T_TTI] = 1/60
    CHECK(ul_grant_overhead(grant, analog, ant, atom, 0.5, e_tti, 1e9, fp) ==
          Catch::Approx(1.0 / 60.0).margin(1e-12));
    CHECK(dl_ack_overhead(ack, analog, ant, atom, 0.5, e_tti, 1e9, fp) ==
          Catch::Approx(1.0 / 60.0).margin(1e-12));
    CHECK(ul_ack_overhead(ack, analog, ant, atom, 0.5, e_tti, 0.125, 1e9, fp) ==
          Catch::Approx(1.0 / 60.0).margin(1e-12));

    // downlink grants ride in-band for every architecture (no rounding)
    CHECK(dl_grant_overhead(grant, analog, ant, atom, 0.5, e_tti, 1e9) ==
          Catch::Approx(2.4686269299e-3).epsilon(1e-9));
    CHECK(dl_grant_overhead(grant, hybrid, ant, atom, 0.5, e_tti, 1e9) ==
          Catch::Approx(2.4686269299e-3).epsilon(1e-9));

    // hybrid per-TTI control is frequency-multiplexed: raw airtime fractions
    CHECK(ul_grant_overhead(grant, hybrid, ant, atom, 0.5, e_tti, 1e9, fp) ==
          Catch::Approx(2.4686269299e-3).epsilon(1e-9));
    CHECK(dl_ack_overhead(ack, hybrid, ant, atom, 0.5, e_tti, 1e9, fp) ==
          Catch::Approx(1.2343134650e-4).epsilon(1e-9));
    // robust-rate uplink ACK is SNR-free: (1-p) * b / (rho_ack * E[T] * W)
    CHECK(ul_ack_overhead(ack, hybrid, ant, atom, 0.5, e_tti, 0.125, 1e9, fp) ==
          Catch::Approx(1.6025641026e-4).epsilon(1e-9));

    // zero-length ACK messages disable the channel
    const ControlMsg none{0.0, kGammaB, 0.0};
    CHECK(dl_ack_overhead(none, analog, ant, atom, 0.5, e_tti, 1e9, fp) == 0.0);
    CHECK(ul_ack_overhead(none, analog, ant, atom, 0.5, e_tti, 0.125, 1e9, fp) == 0.0);
}

TEST_CASE("quantized digital front ends pay a control premium")
{
    const FrameParams fp = frame();
    AntennaConfig ant;
    BeamformingArch ideal{ArchKind::Digital, 1, 0.0};
    BeamformingArch coarse{ArchKind::Digital, 1, 0.1};
    const SnrDistribution atom = edge_atom();
    const ControlMsg grant{100.0, kGammaB, 0.0};

    const double f0 = ul_grant_overhead(grant, ideal, ant, atom, 0.5, 1.248e-4, 1e9, fp);
    const double f1 = ul_grant_overhead(grant, coarse, ant, atom, 0.5, 1.248e-4, 1e9, fp);
    CHECK(f1 > f0); // distortion lowers the effective SNR, raising airtime
}

TEST_CASE("unrounded overhead scales inversely with bandwidth")
{
    AntennaConfig ant;
    BeamformingArch hybrid{ArchKind::Hybrid, 2, 0.0};
    const SnrDistribution atom = edge_atom();
    const ControlMsg grant{100.0, kGammaB, 0.0};

    const double f1 = dl_grant_overhead(grant, hybrid, ant, atom, 0.5, 1.248e-4, 1e9);
    const double f2 = dl_grant_overhead(grant, hybrid, ant, atom, 0.5, 1.248e-4, 2e9);
    CHECK(f1 / f2 == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("more receive gain never increases the SR bill")
{
    const FrameParams fp = frame();
    BeamformingArch analog{ArchKind::Analog, 1, 0.0};
    AntennaConfig small;
    AntennaConfig big;
    big.n_ant_ue = 32;
    CHECK(sr_overhead(sr_msg(), 8, analog, SrMode::Fdma, big, 1e9, kGminUl, fp) <=
          sr_overhead(sr_msg(), 8, analog, SrMode::Fdma, small, 1e9, kGminUl, fp));
}

TEST_CASE("aggregate table reproduces the frozen per-architecture totals")
{
    const SnrDistribution dist = served_population();
    REQUIRE(dist.size() > 90000);

    const OverheadReport a = total_overhead(baseline_inputs(dist, ArchKind::Analog));
    const OverheadReport h = total_overhead(baseline_inputs(dist, ArchKind::Hybrid));
    const OverheadReport d = total_overhead(baseline_inputs(dist, ArchKind::Digital));

    CHECK(a.total == Catch::Approx(0.1168).margin(2e-4));
    CHECK(h.total == Catch::Approx(0.0339).margin(2e-4));
    CHECK(d.total == Catch::Approx(0.0089).margin(2e-4));

    // totals are component sums
    for (const OverheadReport& r : {a, h, d})
        CHECK(r.total ==
              Catch::Approx(r.sr + r.cqi + r.ul_grant + r.dl_grant + r.dl_ack + r.ul_ack)
                  .margin(1e-15));

    // the architecture ordering is strict at the baseline
    CHECK(a.total > h.total);
    CHECK(h.total > d.total);

    // dist-independent components inside the aggregate
    CHECK(a.sr == Catch::Approx(8.0 / 120.0).margin(1e-12));
    CHECK(a.cqi == 0.0);
    CHECK(a.ul_grant == Catch::Approx(1.0 / 60.0).margin(1e-12));
    CHECK(a.dl_ack == Catch::Approx(1.0 / 60.0).margin(1e-12));
    CHECK(a.ul_ack == Catch::Approx(1.0 / 60.0).margin(1e-12));
    CHECK(h.sr == Catch::Approx(4.0 / 120.0).margin(1e-12));
    CHECK(d.sr == Catch::Approx(1.0 / 120.0).margin(1e-12));
    CHECK(h.ul_ack == Catch::Approx(1.6025641026e-4).epsilon(1e-9));
    CHECK(d.ul_ack == Catch::Approx(1.6025641026e-4).epsilon(1e-9));
    CHECK(a.sr_mode_used == SrMode::Tdma);
}

TEST_CASE("infeasible configurations are rejected, not clamped")
{
    const FrameParams fp = frame();
    BeamformingArch analog{ArchKind::Analog, 1, 0.0};
    AntennaConfig tiny;
    tiny.n_ant_bs = 1;
    tiny.n_ant_ue = 1;

    // a 10000-bit payload at omni gain 1 cannot fit its own period
    const ControlMsg huge{10000.0, kGammaB, 500e-6};
    CHECK_THROWS_AS(sr_overhead(huge, 8, analog, SrMode::Fdma, tiny, 1e9, kGminUl, fp),
                    std::runtime_error);

    // a period shorter than one symbol has no realizable slot grid
    const ControlMsg fast{18.0, kGammaB, 1e-6};
    AntennaConfig ant;
    CHECK_THROWS_AS(sr_overhead(fast, 8, analog, SrMode::Tdma, ant, 1e9, kGminUl, fp),
                    std::invalid_argument);
}

TEST_CASE("argument validation on the overhead formulas")
{
    const FrameParams fp = frame();
    AntennaConfig ant;
    BeamformingArch analog{ArchKind::Analog, 1, 0.0};
    const SnrDistribution atom = edge_atom();
    const ControlMsg grant{100.0, kGammaB, 0.0};

    CHECK_THROWS_AS(sr_overhead(ControlMsg{0.0, kGammaB, 500e-6}, 8, analog, SrMode::Auto, ant,
                                1e9, kGminUl, fp),
                    std::invalid_argument);
    CHECK_THROWS_AS(sr_overhead(sr_msg(), 0, analog, SrMode::Auto, ant, 1e9, kGminUl, fp),
                    std::invalid_argument);
    CHECK_THROWS_AS(sr_overhead(sr_msg(), 8, analog, SrMode::Auto, ant, 1e9, 0.0, fp),
                    std::invalid_argument);
    CHECK_THROWS_AS(ul_grant_overhead(grant, analog, ant, atom, 1.5, 1.248e-4, 1e9, fp),
                    std::invalid_argument);
    CHECK_THROWS_AS(ul_grant_overhead(grant, analog, ant, atom, 0.5, 0.0, 1e9, fp),
                    std::invalid_argument);

    OverheadInputs in = baseline_inputs(atom, ArchKind::Analog);
    in.dist = nullptr;
    CHECK_THROWS_AS(total_overhead(in), std::invalid_argument);
}
