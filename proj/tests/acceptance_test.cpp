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
//
// Release acceptance gate.  Each test case checks one numbered criterion
// and prints a single [PASS]/[FAIL] line (plus detail lines on failure)
// so the gate can be read off a raw ctest log.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ttiflex/ttiflex.hpp"

using namespace ttiflex;

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

// Collects pass/fail state plus human-readable detail for one criterion.
struct Verdict {
    bool ok = true;
    std::vector<std::string> info;   // always printed
    std::vector<std::string> faults; // printed on failure

    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            faults.push_back(what);
        }
    }
    void expect_abs(const std::string& what, double got, double want, double tol)
    {
        expect(std::abs(got - want) <= tol,
               what + ": got " + num(got) + ", pinned " + num(want) + " (tol " + num(tol) + ")");
    }
    void expect_rel(const std::string& what, double got, double want, double rel)
    {
        expect(std::abs(got - want) <= rel * std::abs(want),
               what + ": got " + num(got) + ", expected " + num(want) + " +/-" +
                   num(rel * 100.0) + "%");
    }
    void note(const std::string& s) { info.push_back(s); }
};

void conclude(const Verdict& v)
{
    const std::string name = Catch::getResultCapture().getCurrentTestName();
    std::printf("%s %s\n", v.ok ? "[PASS]" : "[FAIL]", name.c_str());
    for (const auto& s : v.info)
        std::printf("       %s\n", s.c_str());
    for (const auto& s : v.faults)
        std::printf("       %s\n", s.c_str());
    std::fflush(stdout);
    for (const auto& s : v.faults)
        UNSCOPED_INFO(s);
    CHECK(v.ok);
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

} // namespace

TEST_CASE("criterion 1: control-overhead entries match their pinned four-decimal values")
{
    Stopwatch sw;
    Verdict v;
    const PreparedScenario ps = prepare(builtin_scenario("baseline_overhead"));
    const OverheadInputs in = make_overhead_inputs(ps);
    const ControlConfig& cc = ps.sc.control;

    BeamformingArch analog;
    analog.kind = ArchKind::Analog;
    BeamformingArch hybrid2;
    hybrid2.kind = ArchKind::Hybrid;
    hybrid2.streams = 2;
    BeamformingArch digital;
    digital.kind = ArchKind::Digital;

    auto sr = [&](SrPayload p, const BeamformingArch& a, SrMode m) {
        return sr_overhead(cc.sr_msg(p), in.n_ue, a, m, in.ant, in.w_tot, in.gamma_min_ul, in.fp);
    };

    // single-beam SR, serialized: one symbol per UE regardless of payload
    v.expect_abs("sr analog tdma trigger", sr(SrPayload::Trigger, analog, SrMode::Tdma), 0.0667, 5e-5);
    v.expect_abs("sr analog tdma short", sr(SrPayload::ShortBsr, analog, SrMode::Tdma), 0.0667, 5e-5);
    v.expect_abs("sr analog tdma long", sr(SrPayload::LongBsr, analog, SrMode::Tdma), 0.0667, 5e-5);
    // omni-received shared slot: symbols grow with the payload
    v.expect_abs("sr analog fdma trigger", sr(SrPayload::Trigger, analog, SrMode::Fdma), 0.0750, 5e-5);
    v.expect_abs("sr analog fdma short", sr(SrPayload::ShortBsr, analog, SrMode::Fdma), 0.1083, 5e-5);
    v.expect_abs("sr analog fdma long", sr(SrPayload::LongBsr, analog, SrMode::Fdma), 0.1667, 5e-5);
    v.expect_abs("sr hybrid K=2", sr(SrPayload::Trigger, hybrid2, SrMode::Tdma), 0.0333, 5e-5);
    v.expect_abs("sr digital", sr(SrPayload::Trigger, digital, SrMode::Tdma), 0.0083, 5e-5);

    const double ulg_analog = ul_grant_overhead(cc.grant_msg(in.fp.tti_mode), analog, in.ant,
                                                *in.dist, in.p_ul, in.e_tti, in.w_tot, in.fp);
    const double dla_analog = dl_ack_overhead(cc.ack_msg(), analog, in.ant, *in.dist, in.p_ul,
                                              in.e_tti, in.w_tot, in.fp);
    const double ula_analog = ul_ack_overhead(cc.ack_msg(), analog, in.ant, *in.dist, in.p_ul,
                                              in.e_tti, cc.rho_ack, in.w_tot, in.fp);
    const double ula_digital = ul_ack_overhead(cc.ack_msg(), digital, in.ant, *in.dist, in.p_ul,
                                               in.e_tti, cc.rho_ack, in.w_tot, in.fp);
    v.expect_abs("ul grant analog", ulg_analog, 0.0167, 5e-5);
    v.expect_abs("dl ack analog", dla_analog, 0.0167, 5e-5);
    v.expect_abs("ul ack analog", ula_analog, 0.0167, 5e-5);
    v.expect_abs("ul ack digital", ula_digital, 0.00016, 5e-6);

    const double elapsed = sw.seconds();
    v.expect(elapsed < 1.0, "runtime " + num(elapsed) + " s exceeds 1 s budget");
    conclude(v);
}

TEST_CASE("criterion 2: distribution-dependent overheads and architecture totals")
{
    Verdict v;
    const PreparedScenario ps = prepare(builtin_scenario("baseline_overhead"));
    const OverheadTable t = overhead_table(ps);

    // these ride the in-band data beam, so they scale with E[1/SNR] of the
    // served population rather than the pinned cell edge
    v.expect_rel("dl grant", t.analog.dl_grant, 0.000177, 0.50);
    v.expect_rel("ul grant digital", t.digital.ul_grant, 0.000184, 0.50);
    v.expect_rel("dl ack digital", t.digital.dl_ack, 0.000009, 0.50);

    v.expect_rel("total analog", t.analog.total, 0.1170, 0.10);
    v.expect_rel("total hybrid K=2", t.hybrid.total, 0.0339, 0.10);
    v.expect_rel("total digital", t.digital.total, 0.0089, 0.10);
    conclude(v);
}

TEST_CASE("criterion 3: saturated-TCP utilization flat near 0.525 fixed, higher flexible")
{
    Stopwatch sw;
    Verdict v;
    const Scenario sc = builtin_scenario("tcp_fullbuffer");
    const double rho_peak = 4.8; // cap rate: full-gain link far above saturation

    double fix_lo = 1.0, fix_hi = 0.0, flex_at_30 = 0.0;
    bool flex_above_fix = true;
    for (int n = 4; n <= 100; ++n) {
        FrameParams fp = sc.frame;
        fp.t_tti_max = n * fp.t_sym;
        fp.tti_mode = TtiMode::Fixed;
        const double eta_fix =
            util_tcp(fp, rho_peak, rho_peak, sc.traffic.l_data_bits, sc.traffic.l_ack_bits).eta;
        fp.tti_mode = TtiMode::Flexible;
        const double eta_flex =
            util_tcp(fp, rho_peak, rho_peak, sc.traffic.l_data_bits, sc.traffic.l_ack_bits).eta;
        fix_lo = std::min(fix_lo, eta_fix);
        fix_hi = std::max(fix_hi, eta_fix);
        flex_above_fix = flex_above_fix && eta_flex > eta_fix;
        if (n == 30)
            flex_at_30 = eta_flex;
        v.expect_abs("eta_fix at " + std::to_string(n) + " symbols", eta_fix, 0.525, 0.01);
    }
    v.expect(fix_hi - fix_lo <= 1e-9, "eta_fix varies with the TTI length: spread " +
                                          num(fix_hi - fix_lo));
    v.expect(flex_above_fix, "eta_flex does not dominate eta_fix at every sweep point");
    v.expect(flex_at_30 > 0.95, "eta_flex at 30 symbols = " + num(flex_at_30) + " <= 0.95");

    const double elapsed = sw.seconds();
    v.expect(elapsed < 1.0, "runtime " + num(elapsed) + " s exceeds 1 s budget");
    conclude(v);
}

TEST_CASE("criterion 4: Monte Carlo SNR percentiles hit the calibration targets")
{
    Stopwatch sw;
    Verdict v;
    const Scenario sc = builtin_scenario("baseline_overhead");
    const SnrDistribution dist =
        sample_snr_distribution(sc.budget, sc.path_loss, 100000, sc.monte_carlo.seed);

    v.expect_abs("UL 5th percentile [dB]", dist.percentile_db(Direction::Ul, 5.0), -39.0, 2.0);
    v.expect_abs("UL median [dB]", dist.percentile_db(Direction::Ul, 50.0), -16.0, 2.0);
    v.expect_abs("DL 5th percentile [dB]", dist.percentile_db(Direction::Dl, 5.0), -32.0, 2.0);
    v.expect_abs("DL median [dB]", dist.percentile_db(Direction::Dl, 50.0), -9.0, 2.0);

    const double elapsed = sw.seconds();
    v.expect(elapsed < 10.0, "runtime " + num(elapsed) + " s exceeds 10 s budget");
    conclude(v);
}

TEST_CASE("criterion 5: small-packet utilization trend bands")
{
    Stopwatch sw;
    Verdict v;
    const PreparedScenario ps = prepare(builtin_scenario("small_packets"));
    const std::size_t n_mc = 100000;

    const int sweep[] = {4, 10, 20, 30, 50, 75, 100};
    double fix_at_4 = 0.0, fix_at_100 = 0.0;
    for (int n : sweep) {
        FrameParams fp = ps.sc.frame;
        fp.t_tti_max = n * fp.t_sym;
        const double eta_fix =
            util_bursty_fixed(ps.sc.traffic, fp, ps.dist_served, ps.link(), n_mc, 5).eta;
        const double eta_flex =
            util_bursty_flexible(ps.sc.traffic, fp, ps.dist_served, ps.link(), n_mc, 5).eta;
        if (n == 4)
            fix_at_4 = eta_fix;
        if (n == 100)
            fix_at_100 = eta_fix;
        v.note("T=" + std::to_string(n) + " sym: eta_fix=" + num(eta_fix) +
               " eta_flex=" + num(eta_flex));
        v.expect(eta_flex >= 0.15 && eta_flex <= 0.30,
                 "eta_flex at " + std::to_string(n) + " symbols = " + num(eta_flex) +
                     " outside the required [0.15, 0.30] band");
    }
    v.expect_abs("eta_fix at 4 symbols", fix_at_4, 0.20, 0.05);
    v.expect(fix_at_100 <= 0.02,
             "eta_fix at 100 symbols = " + num(fix_at_100) + " > 0.02");

    // Known-unreachable band, kept failing on purpose: this traffic profile
    // has a mean PDU of 10710 bytes (85680 bits), which needs several OFDM
    // symbols even at the 4.8 bps/Hz cap.  Flexible allocation then wastes
    // at most one symbol of rounding per TTI, so its utilization is pinned
    // near 1 (measured above), and no parameter within this scenario brings
    // it down into [0.15, 0.30].  That band would require sub-symbol
    // payloads (a few hundred bytes at most).  The fixed-TTI bounds fail
    // for the same reason: multi-symbol payloads keep eta_fix(4 sym) well
    // above 0.25.  See README "Acceptance status" for the full argument.
    conclude(v);
}

TEST_CASE("criterion 6: overhead grows with the UE count up to the SR crossover, then plateaus")
{
    Verdict v;
    const PreparedScenario ps = prepare(builtin_scenario("baseline_overhead"));

    OverheadInputs in = make_overhead_inputs(ps);
    in.sr_mode = SrMode::Auto;
    std::vector<double> analog_total(65, 0.0);
    for (int n = 1; n <= 64; ++n) {
        in.n_ue = n;
        analog_total[n] = total_overhead(in).total;
    }
    // dedicated per-UE slots win below the crossover, the shared omni slot
    // wins above it; the crossover for an 18-bit payload sits at 9 UEs
    int crossover = 0;
    for (int n = 2; n <= 64; ++n)
        if (analog_total[n] == analog_total[n - 1]) {
            crossover = n - 1;
            break;
        }
    v.expect(crossover > 1, "analog total never plateaus over 1..64 UEs");
    if (crossover > 1) {
        v.note("analog plateau starts at " + std::to_string(crossover) + " UEs");
        for (int n = 2; n <= crossover; ++n)
            v.expect(analog_total[n] > analog_total[n - 1],
                     "analog total not strictly increasing at " + std::to_string(n) + " UEs");
        for (int n = crossover + 1; n <= 64; ++n)
            v.expect(analog_total[n] == analog_total[crossover],
                     "analog total not exactly constant at " + std::to_string(n) + " UEs");
    }

    OverheadInputs ind = make_overhead_inputs(ps);
    ind.arch.kind = ArchKind::Digital;
    ind.n_ue = 1;
    const double digital_ref = total_overhead(ind).total;
    for (int n = 2; n <= 64; ++n) {
        ind.n_ue = n;
        v.expect(total_overhead(ind).total == digital_ref,
                 "digital total varies with the UE count at " + std::to_string(n) + " UEs");
    }
    conclude(v);
}

TEST_CASE("criterion 7: 10-second simulations match the closed forms within 5%")
{
    Verdict v;
    const char* templates[] = {"tcp_fullbuffer", "large_packets", "small_packets"};
    for (const char* name : templates) {
        for (TtiMode mode : {TtiMode::Fixed, TtiMode::Flexible}) {
            Scenario sc = builtin_scenario(name);
            sc.frame.tti_mode = mode;
            const PreparedScenario ps = prepare(sc);
            Stopwatch sw;
            const SimReport r = run_simulation(ps, 10.0, 1234);
            const double elapsed = sw.seconds();
            const std::string tag = std::string(name) + "/" + to_string(mode);
            v.expect(elapsed < 120.0, tag + ": runtime " + num(elapsed) + " s exceeds 120 s");
            if (!r.utilization.has_value()) {
                v.expect(false, tag + ": simulation allocated no data time");
                continue;
            }
            const double eta_ana = utilization_comparator(ps, r, 99);
            const ComparatorReport c = control_comparator(ps, r);
            v.expect_rel(tag + " utilization", *r.utilization, eta_ana, 0.05);
            v.expect_rel(tag + " control overhead", r.control_overhead, c.control_overhead, 0.05);
        }
    }
    conclude(v);
}

TEST_CASE("criterion 8: sparse-uplink p95 round trip within one SR period plus 20 symbols")
{
    Verdict v;
    Scenario sc = builtin_scenario("small_packets");
    sc.n_ue = 1;
    sc.arch.kind = ArchKind::Digital;
    sc.frame.tti_mode = TtiMode::Flexible;
    sc.traffic.direction = Direction::Ul;
    sc.traffic.arrival_rate_per_ue = 200.0; // sparse against the 2 kHz SR clock
    sc.traffic.size_min_bytes = 100.0;
    sc.traffic.size_max_bytes = 100.0;
    sc.traffic.mean_size_bytes = 100.0;
    sc.traffic.std_size_bytes = 0.0;
    sc.sim.processing_sr_to_grant_sym = 0;
    sc.sim.processing_grant_to_data_sym = 0;

    const PreparedScenario ps = prepare(sc);
    const SimReport r = run_simulation(ps, 1.0, 8);

    const double budget_us = (120.0 + 20.0) * 4.16; // SR period + 20 symbols
    v.note("p95 RTT " + num(r.rtt.p95_us) + " us over " + std::to_string(r.rtt.n) +
           " transfers (budget " + num(budget_us) + " us)");
    v.expect(r.rtt.n >= 50, "too few round trips sampled: " + std::to_string(r.rtt.n));
    v.expect(r.rtt.p95_us <= budget_us,
             "p95 RTT " + num(r.rtt.p95_us) + " us exceeds " + num(budget_us) + " us");
    conclude(v);
}

TEST_CASE("criterion 9: control-message load degrades fixed TTIs far more than flexible")
{
    Verdict v;
    const Scenario sc = builtin_scenario("tcp_fullbuffer");
    const std::vector<double> rates = {0.0, 150.0, 300.0, 600.0};
    const RrcCurve curve = rrc_experiment(sc, rates, 2000.0, 1.0, 17);

    const double fixed_drop = 1.0 - curve.fixed_bps.back() / curve.fixed_bps.front();
    const double flex_drop = 1.0 - curve.flexible_bps.back() / curve.flexible_bps.front();
    v.note("per-UE goodput drop at " + num(rates.back()) + " msg/s/UE: fixed " +
           num(fixed_drop * 100.0) + "%, flexible " + num(flex_drop * 100.0) + "%");
    v.expect(fixed_drop > 0.50,
             "fixed-TTI goodput drop " + num(fixed_drop * 100.0) + "% is not > 50%");
    v.expect(flex_drop < 0.05,
             "flexible-TTI goodput drop " + num(flex_drop * 100.0) + "% is not < 5%");
    conclude(v);
}

TEST_CASE("criterion 10: property suites hold over randomized inputs")
{
    Verdict v;
    std::mt19937_64 rng(99);

    // allocation rounding: never below the need, flexible never above fixed,
    // monotone in the need
    {
        FrameParams fix = builtin_scenario("tcp_fullbuffer").frame;
        fix.tti_mode = TtiMode::Fixed;
        FrameParams flex = fix;
        flex.tti_mode = TtiMode::Flexible;
        std::uniform_real_distribution<double> logt(std::log(1e-7), std::log(1e-2));
        bool ok = true;
        double prev_t = 0.0, prev_q = 0.0;
        std::vector<double> ts(2000);
        for (double& t : ts)
            t = std::exp(logt(rng));
        std::sort(ts.begin(), ts.end());
        for (double t : ts) {
            const double qf = allocation_time(t, flex);
            const double qx = allocation_time(t, fix);
            ok = ok && qf >= t && qx >= t && qf <= qx + 1e-15;
            ok = ok && (prev_t == 0.0 || qf >= prev_q - 1e-15);
            prev_t = t;
            prev_q = qf;
        }
        v.expect(ok, "allocation rounding properties violated");
    }

    // flexible utilization dominates fixed on shared draws
    {
        const PreparedScenario ps = prepare(builtin_scenario("small_packets"));
        bool ok = true;
        for (std::uint64_t seed : {11u, 12u, 13u}) {
            const double ef =
                util_bursty_fixed(ps.sc.traffic, ps.sc.frame, ps.dist_served, ps.link(), 10000, seed)
                    .eta;
            const double ex = util_bursty_flexible(ps.sc.traffic, ps.sc.frame, ps.dist_served,
                                                   ps.link(), 10000, seed)
                                  .eta;
            ok = ok && ex >= ef;
        }
        v.expect(ok, "eta_flex < eta_fix on shared draws");
    }

    // overhead monotonicity: more payload bits never cheaper, more receive
    // gain never dearer
    {
        const PreparedScenario ps = prepare(builtin_scenario("baseline_overhead"));
        OverheadInputs in = make_overhead_inputs(ps);
        bool ok = true;
        double prev = 0.0;
        for (double bits : {10.0, 18.0, 26.0, 42.0, 80.0}) {
            ControlMsg m{bits, in.sr.gamma_b, in.sr.period_s};
            const double f = sr_overhead(m, in.n_ue, in.arch, SrMode::Fdma, in.ant, in.w_tot,
                                         in.gamma_min_ul, in.fp);
            ok = ok && f >= prev;
            prev = f;
        }
        AntennaConfig ant = in.ant;
        prev = 1e9;
        for (int n_rx : {1, 4, 16, 64, 256}) {
            ant.n_ant_bs = n_rx;
            const double f = sr_overhead(in.sr, in.n_ue, in.arch, SrMode::Fdma, ant, in.w_tot,
                                         in.gamma_min_ul, in.fp);
            ok = ok && f <= prev;
            prev = f;
        }
        v.expect(ok, "overhead monotonicity in bits/gain violated");
    }

    // quantized effective SNR stays below both the ideal gain and the
    // quantizer ceiling, and grows with the input
    {
        bool ok = true;
        std::uniform_real_distribution<double> logg(std::log(1e-6), std::log(1e8));
        for (double alpha : {0.0, 0.05, 0.1, 0.3}) {
            double prev_q = -1.0, prev_g = -1.0;
            std::vector<double> gs(2500);
            for (double& g : gs)
                g = std::exp(logg(rng));
            std::sort(gs.begin(), gs.end());
            for (double g : gs) {
                const double q = quantized_snr(g, alpha);
                ok = ok && q <= g * (1.0 + 1e-12);
                if (alpha > 0.0)
                    ok = ok && q <= 1.0 / alpha + 1e-9;
                else
                    ok = ok && q == g;
                ok = ok && (prev_g < 0.0 || q >= prev_q - 1e-15);
                prev_q = q;
                prev_g = g;
            }
        }
        v.expect(ok, "quantized-SNR bounds violated");
    }

    // truncated-lognormal sampler recovers the configured moments
    {
        TrafficModel t;
        t.kind = TrafficKind::BurstyLogNormal;
        fit_bursty_model(t);
        std::mt19937_64 r2(7);
        double s1 = 0.0, s2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double bytes = sample_pdu_size_bits(t, r2) / 8.0;
            s1 += bytes;
            s2 += bytes * bytes;
        }
        const double mean = s1 / n;
        const double sd = std::sqrt(s2 / n - mean * mean);
        v.expect_rel("sampled mean PDU size", mean, t.mean_size_bytes, 0.01);
        v.expect_rel("sampled PDU size std dev", sd, t.std_size_bytes, 0.05);
    }

    // simulator invariants over 1000 randomized mini-scenarios: symbol
    // conservation, frequency-share bounds and control pairing are asserted
    // inside report() and throw on violation
    {
        std::mt19937_64 gen(5150);
        auto coin = [&](double p) { return std::bernoulli_distribution(p)(gen); };
        auto pick_int = [&](int lo, int hi) {
            return std::uniform_int_distribution<int>(lo, hi)(gen);
        };
        bool ok = true;
        std::string first_failure;
        for (int trial = 0; trial < 1000 && ok; ++trial) {
            Scenario sc = builtin_scenario("small_packets");
            sc.monte_carlo.n_samples = 2000;
            sc.monte_carlo.seed = 1 + trial;
            sc.n_ue = pick_int(1, 8);
            sc.frame.tti_mode = coin(0.5) ? TtiMode::Fixed : TtiMode::Flexible;
            const int arch = pick_int(0, 2);
            if (arch == 1) {
                sc.arch.kind = ArchKind::Hybrid;
                sc.arch.streams = pick_int(2, 4);
            } else if (arch == 2) {
                sc.arch.kind = ArchKind::Digital;
                sc.arch.quantizer_alpha = coin(0.5) ? 0.1 : 0.0;
            }
            if (coin(0.4)) {
                sc.traffic.kind = TrafficKind::FullBufferTcp;
            } else {
                sc.traffic.direction = coin(0.5) ? Direction::Dl : Direction::Ul;
                const double rates[] = {0.0, 5.0, 25.0, 50.0};
                sc.traffic.arrival_rate_per_ue = rates[pick_int(0, 3)];
            }
            sc.sim.guard_symbols = pick_int(0, 2);
            sc.sim.harq_error_prob = coin(0.3) ? 0.2 : 0.0;
            sc.control.cqi_period_s = coin(0.3) ? 10e-3 : 0.0;
            sc.sim.rrc_rate_per_ue = coin(0.2) ? 100.0 : 0.0;
            try {
                const SimReport r = run_simulation(prepare(sc), 0.05, 9000 + trial);
                if (r.data_alloc_s > 0.0 &&
                    (!r.utilization || *r.utilization <= 0.0 || *r.utilization > 1.0 + 1e-12)) {
                    ok = false;
                    first_failure = "trial " + std::to_string(trial) + ": utilization out of range";
                }
            } catch (const std::exception& e) {
                ok = false;
                first_failure = "trial " + std::to_string(trial) + ": " + e.what();
            }
        }
        v.expect(ok, "randomized simulator sweep failed: " + first_failure);
    }
    conclude(v);
}
