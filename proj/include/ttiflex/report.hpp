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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ttiflex/simulator.hpp"

// Experiment orchestration: parameter sweeps, emission of the overhead
// table and plot-ready CSV files, JSON summaries, and the closed-form
// comparators used to cross-validate simulator runs against the
// analytics on identical inputs.

namespace ttiflex {

// ------------------------------------------------------------ sweeps

struct SweepSpec {
    std::string parameter;       // e.g. "n_ue", "t_tti_max_symbols", "rrc_rate"
    std::vector<double> values;
};

// Accepts "name=a..b[:step]" (inclusive range) or "name=v1,v2,v3".
inline SweepSpec parse_sweep(const std::string& text)
{
    SweepSpec sw;
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size())
        throw std::invalid_argument("sweep: expected 'name=a..b[:step]' or 'name=v1,v2,...', got '" +
                                    text + "'");
    sw.parameter = text.substr(0, eq);
    const std::string rhs = text.substr(eq + 1);
    const auto dots = rhs.find("..");
    try {
        if (dots != std::string::npos) {
            const double lo = std::stod(rhs.substr(0, dots));
            std::string rest = rhs.substr(dots + 2);
            double step = 1.0;
            const auto colon = rest.find(':');
            if (colon != std::string::npos) {
                step = std::stod(rest.substr(colon + 1));
                rest = rest.substr(0, colon);
            }
            const double hi = std::stod(rest);
            if (!(step > 0.0) || hi < lo)
                throw std::invalid_argument("sweep: need hi >= lo and step > 0");
            for (double v = lo; v <= hi + 1e-9 * std::max(1.0, std::abs(hi)); v += step)
                sw.values.push_back(v);
        } else {
            std::stringstream ss(rhs);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty())
                    sw.values.push_back(std::stod(tok));
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("sweep: cannot parse values in '" + text + "'");
    }
    if (sw.values.empty())
        throw std::invalid_argument("sweep: no values in '" + text + "'");
    return sw;
}

// Apply one sweep value to a scenario copy; throws on unknown parameter.
inline void apply_sweep_value(Scenario& sc, const std::string& parameter, double v)
{
    if (parameter == "n_ue")
        sc.n_ue = static_cast<int>(std::llround(v));
    else if (parameter == "t_tti_max_symbols")
        sc.frame.t_tti_max = std::llround(v) * sc.frame.t_sym;
    else if (parameter == "p_ul")
        sc.p_ul = v;
    else if (parameter == "rrc_rate")
        sc.sim.rrc_rate_per_ue = v;
    else if (parameter == "arrival_rate_per_ue")
        sc.traffic.arrival_rate_per_ue = v;
    else if (parameter == "quantizer_alpha")
        sc.arch.quantizer_alpha = v;
    else if (parameter == "cell_radius_m")
        sc.path_loss.cell_radius_m = v;
    else
        throw std::invalid_argument(
            "sweep: unknown parameter '" + parameter +
            "' (known: n_ue, t_tti_max_symbols, p_ul, rrc_rate, arrival_rate_per_ue, "
            "quantizer_alpha, cell_radius_m)");
    validate_scenario(sc);
}

// --------------------------------------------------------- file output

namespace detail {

inline std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    return out;
}

// Reproducibility stamp required on every CSV artifact.
inline void csv_stamp(std::ostream& out, const Scenario& sc, std::uint64_t seed)
{
    out << "# scenario_hash=" << std::hex << scenario_hash(sc) << std::dec << " seed=" << seed
        << " name=" << sc.name << "\n";
}

inline std::string fmt4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace detail

// ------------------------------------------------- overhead experiment

// Per-channel overhead fractions for the three front-end architectures
// side by side (columns analog/hybrid/digital), as text and CSV.
struct OverheadTable {
    OverheadReport analog;
    OverheadReport hybrid;
    OverheadReport digital;
};

inline OverheadTable overhead_table(const PreparedScenario& ps)
{
    OverheadTable t;
    BeamformingArch a;
    a.kind = ArchKind::Analog;
    a.streams = 1;
    a.quantizer_alpha = ps.sc.arch.quantizer_alpha;
    t.analog = total_overhead(ps, a);
    a.kind = ArchKind::Hybrid;
    a.streams = ps.sc.arch.kind == ArchKind::Hybrid ? ps.sc.arch.streams : 2;
    t.hybrid = total_overhead(ps, a);
    a.kind = ArchKind::Digital;
    a.streams = 1;
    t.digital = total_overhead(ps, a);
    return t;
}

inline std::string overhead_table_text(const OverheadTable& t)
{
    using detail::fmt4;
    std::ostringstream os;
    auto row = [&](const char* name, double a, double h, double d) {
        os << std::left << std::setw(22) << name << std::right << std::setw(10) << fmt4(a)
           << std::setw(10) << fmt4(h) << std::setw(10) << fmt4(d) << "\n";
    };
    os << std::left << std::setw(22) << "channel" << std::right << std::setw(10) << "analog"
       << std::setw(10) << "hybrid" << std::setw(10) << "digital" << "\n";
    row("scheduling_request", t.analog.sr, t.hybrid.sr, t.digital.sr);
    row("cqi", t.analog.cqi, t.hybrid.cqi, t.digital.cqi);
    row("ul_grant", t.analog.ul_grant, t.hybrid.ul_grant, t.digital.ul_grant);
    row("dl_grant", t.analog.dl_grant, t.hybrid.dl_grant, t.digital.dl_grant);
    row("dl_ack", t.analog.dl_ack, t.hybrid.dl_ack, t.digital.dl_ack);
    row("ul_ack", t.analog.ul_ack, t.hybrid.ul_ack, t.digital.ul_ack);
    row("total", t.analog.total, t.hybrid.total, t.digital.total);
    return os.str();
}

inline void overhead_table_csv(std::ostream& out, const Scenario& sc, const OverheadTable& t)
{
    detail::csv_stamp(out, sc, sc.monte_carlo.seed);
    out << "channel,analog,hybrid,digital\n";
    auto row = [&](const char* name, double a, double h, double d) {
        out << name << ',' << detail::fmt4(a) << ',' << detail::fmt4(h) << ',' << detail::fmt4(d)
            << "\n";
    };
    row("scheduling_request", t.analog.sr, t.hybrid.sr, t.digital.sr);
    row("cqi", t.analog.cqi, t.hybrid.cqi, t.digital.cqi);
    row("ul_grant", t.analog.ul_grant, t.hybrid.ul_grant, t.digital.ul_grant);
    row("dl_grant", t.analog.dl_grant, t.hybrid.dl_grant, t.digital.dl_grant);
    row("dl_ack", t.analog.dl_ack, t.hybrid.dl_ack, t.digital.dl_ack);
    row("ul_ack", t.analog.ul_ack, t.hybrid.ul_ack, t.digital.ul_ack);
    row("total", t.analog.total, t.hybrid.total, t.digital.total);
}

inline nlohmann::json to_json(const OverheadReport& r)
{
    return {{"sr", r.sr},           {"cqi", r.cqi},       {"ul_grant", r.ul_grant},
            {"dl_grant", r.dl_grant}, {"dl_ack", r.dl_ack}, {"ul_ack", r.ul_ack},
            {"total", r.total},     {"arch", to_string(r.arch)},
            {"sr_mode_used", to_string(r.sr_mode_used)}};
}

// Overhead as a function of a swept scenario parameter, all three
// architectures per row.
inline void overhead_sweep_csv(std::ostream& out, const Scenario& base, const SweepSpec& sw)
{
    detail::csv_stamp(out, base, base.monte_carlo.seed);
    out << sw.parameter << ",arch,sr,cqi,ul_grant,dl_grant,dl_ack,ul_ack,total\n";
    for (double v : sw.values) {
        Scenario sc = base;
        apply_sweep_value(sc, sw.parameter, v);
        const PreparedScenario ps = prepare(sc);
        const OverheadTable t = overhead_table(ps);
        for (const OverheadReport* r : {&t.analog, &t.hybrid, &t.digital}) {
            out << v << ',' << to_string(r->arch) << ',' << detail::fmt4(r->sr) << ','
                << detail::fmt4(r->cqi) << ',' << detail::fmt4(r->ul_grant) << ','
                << detail::fmt4(r->dl_grant) << ',' << detail::fmt4(r->dl_ack) << ','
                << detail::fmt4(r->ul_ack) << ',' << detail::fmt4(r->total) << "\n";
        }
    }
}

// --------------------------------------------- utilization experiment

// Utilization of the scenario's traffic model for both TTI modes.
struct UtilizationPair {
    UtilizationReport fixed;
    UtilizationReport flexible;
};

inline UtilizationPair utilization_pair(const PreparedScenario& ps)
{
    UtilizationPair u;
    const Scenario& sc = ps.sc;
    if (sc.traffic.kind == TrafficKind::FullBufferTcp) {
        FrameParams fp = sc.frame;
        fp.tti_mode = TtiMode::Fixed;
        u.fixed = util_tcp(fp, sc.spectral.rho_max, sc.spectral.rho_max, sc.traffic.l_data_bits,
                           sc.traffic.l_ack_bits);
        fp.tti_mode = TtiMode::Flexible;
        u.flexible = util_tcp(fp, sc.spectral.rho_max, sc.spectral.rho_max, sc.traffic.l_data_bits,
                              sc.traffic.l_ack_bits);
        return u;
    }
    const std::size_t n = std::max<std::size_t>(sc.monte_carlo.n_samples, 10000);
    u.fixed = util_bursty_fixed(sc.traffic, sc.frame, ps.dist_served, ps.link(), n,
                                sc.monte_carlo.seed + 17);
    u.flexible = util_bursty_flexible(sc.traffic, sc.frame, ps.dist_served, ps.link(), n,
                                      sc.monte_carlo.seed + 17);
    return u;
}

inline void utilization_sweep_csv(std::ostream& out, const Scenario& base, const SweepSpec& sw)
{
    detail::csv_stamp(out, base, base.monte_carlo.seed);
    out << sw.parameter << ",eta_fixed,eta_flexible,ci95_fixed,ci95_flexible\n";
    for (double v : sw.values) {
        Scenario sc = base;
        apply_sweep_value(sc, sw.parameter, v);
        const PreparedScenario ps = prepare(sc);
        const UtilizationPair u = utilization_pair(ps);
        out << v << ',' << detail::fmt4(u.fixed.eta) << ',' << detail::fmt4(u.flexible.eta) << ','
            << detail::fmt4(u.fixed.ci95) << ',' << detail::fmt4(u.flexible.ci95) << "\n";
    }
}

// ---------------------------------------------------- SNR experiment

// CDF of the omnidirectional DL/UL SNR over connected users, as an
// evenly spaced percentile grid with the 5th/50th percentiles called out.
inline void snr_cdf_csv(std::ostream& out, const Scenario& sc, const SnrDistribution& dist)
{
    detail::csv_stamp(out, sc, sc.monte_carlo.seed);
    out << "# p5_dl_db=" << detail::fmt4(dist.percentile_db(Direction::Dl, 5.0))
        << " p50_dl_db=" << detail::fmt4(dist.percentile_db(Direction::Dl, 50.0))
        << " p5_ul_db=" << detail::fmt4(dist.percentile_db(Direction::Ul, 5.0))
        << " p50_ul_db=" << detail::fmt4(dist.percentile_db(Direction::Ul, 50.0))
        << " outage_frac=" << detail::fmt4(static_cast<double>(dist.n_outage) /
                                           (dist.n_outage + dist.samples.size()))
        << "\n";
    out << "percentile,gamma_dl_db,gamma_ul_db\n";
    for (int i = 1; i <= 999; ++i) {
        const double p = i / 10.0;
        out << p << ',' << dist.percentile_db(Direction::Dl, p) << ','
            << dist.percentile_db(Direction::Ul, p) << "\n";
    }
}

// -------------------------------------------------- simulate / rrc

inline nlohmann::json to_json(const SimReport& r)
{
    nlohmann::json j;
    if (r.utilization)
        j["utilization"] = *r.utilization;
    else
        j["utilization"] = nullptr;
    j["overhead"] = {{"sr", r.sr_frac},
                     {"cqi", r.cqi_frac},
                     {"ul_grant", r.ul_grant_frac},
                     {"dl_grant", r.dl_grant_frac},
                     {"dl_ack", r.dl_ack_frac},
                     {"ul_ack", r.ul_ack_frac},
                     {"control_total", r.control_overhead},
                     {"guard", r.guard_frac},
                     {"with_guard", r.overhead_with_guard},
                     {"rrc", r.rrc_frac}};
    j["rtt_us"] = {{"p50", r.rtt.p50_us},
                   {"p95", r.rtt.p95_us},
                   {"p99", r.rtt.p99_us},
                   {"mean", r.rtt.mean_us},
                   {"n", r.rtt.n}};
    j["per_ue_goodput_bps"] = r.per_ue_goodput_bps;
    j["realized_p_ul"] = r.realized_p_ul;
    j["mean_tti_s"] = r.mean_tti_s;
    j["elapsed_s"] = r.elapsed_s;
    j["n_symbols"] = r.n_symbols;
    j["idle_frac"] = r.idle_frac;
    j["counters"] = {{"ul_ttis", r.n_ul_ttis},     {"dl_ttis", r.n_dl_ttis},
                     {"ul_grants", r.n_ul_grants}, {"dl_grants", r.n_dl_grants},
                     {"dl_acks", r.n_dl_acks},     {"ul_acks", r.n_ul_acks},
                     {"harq_retx_ttis", r.n_harq_retx_ttis},
                     {"transfers", r.n_transfers}};
    j["grid"] = {{"sr_period_sym", r.sr_period_sym},
                 {"sr_block_sym", r.sr_block_sym},
                 {"cqi_period_sym", r.cqi_period_sym},
                 {"cqi_block_sym", r.cqi_block_sym}};
    std::ostringstream hex;
    hex << std::hex << r.trace_hash;
    j["trace_hash"] = hex.str();
    j["seed"] = r.seed;
    return j;
}

inline void rrc_curve_csv(std::ostream& out, const Scenario& sc, const RrcCurve& c,
                          std::uint64_t seed)
{
    detail::csv_stamp(out, sc, seed);
    out << "rrc_rate_per_ue,fixed_bps,flexible_bps,fixed_rel,flexible_rel\n";
    const double f0 = c.fixed_bps.empty() ? 1.0 : std::max(c.fixed_bps.front(), 1e-12);
    const double x0 = c.flexible_bps.empty() ? 1.0 : std::max(c.flexible_bps.front(), 1e-12);
    for (std::size_t i = 0; i < c.rates_per_ue.size(); ++i)
        out << c.rates_per_ue[i] << ',' << c.fixed_bps[i] << ',' << c.flexible_bps[i] << ','
            << detail::fmt4(c.fixed_bps[i] / f0) << ',' << detail::fmt4(c.flexible_bps[i] / x0)
            << "\n";
}

// --------------------------------------------- analytic comparators

// Closed-form expectations evaluated on an explicit UE population and on
// the realized TTI mix of a simulator run, so simulator measurements and
// analytics are compared on identical inputs.
struct ComparatorReport {
    double eta = 0.0;
    double ul_grant_frac = 0.0;
    double dl_grant_frac = 0.0;
    double dl_ack_frac = 0.0;
    double ul_ack_frac = 0.0;
    double sr_frac = 0.0;
    double cqi_frac = 0.0;
    double control_overhead = 0.0;
};

namespace detail {

// per-message standalone/in-band control costs for one UE, mirroring the
// per-architecture multiplexing rules
struct CtrlCosts {
    double ul_grant; // seconds charged per UL TTI
    double dl_grant; // per DL TTI (in-band)
    double dl_ack;   // per UL TTI
    double ul_ack;   // per DL TTI
};

inline CtrlCosts ctrl_costs(const PreparedScenario& ps, const SnrSample& s)
{
    const Scenario& sc = ps.sc;
    const LinkContext ctx = ps.link();
    const double w = sc.budget.bandwidth_hz;
    const double gb = sc.control.gamma_b;
    const bool analog = sc.arch.kind == ArchKind::Analog;
    const double t_grant = sc.control.grant_bits(sc.frame.tti_mode) * gb /
                           (w * ctx.eff_snr(s, Direction::Dl));
    const double t_dl_ack = sc.control.ack_bits * gb / (w * ctx.eff_snr(s, Direction::Dl));
    const double t_ul_ack = analog
                                ? sc.control.ack_bits * gb / (w * ctx.eff_snr(s, Direction::Ul))
                                : sc.control.ack_bits / (sc.control.rho_ack * w);
    CtrlCosts c;
    c.ul_grant = analog ? symbols_for(t_grant, sc.frame.t_sym) * sc.frame.t_sym : t_grant;
    c.dl_grant = t_grant; // rides inside the DL data TTI in every architecture
    c.dl_ack = sc.control.ack_bits > 0.0
                   ? (analog ? symbols_for(t_dl_ack, sc.frame.t_sym) * sc.frame.t_sym : t_dl_ack)
                   : 0.0;
    c.ul_ack = sc.control.ack_bits > 0.0
                   ? (analog ? symbols_for(t_ul_ack, sc.frame.t_sym) * sc.frame.t_sym : t_ul_ack)
                   : 0.0;
    return c;
}

} // namespace detail

// Expected control fractions given the run's realized per-UE TTI counts
// and data-plane time: the closed-form per-TTI costs summed over the
// identical TTI population the simulator executed.
inline ComparatorReport control_comparator(const PreparedScenario& ps, const SimReport& r)
{
    ComparatorReport c;
    if (r.data_alloc_s <= 0.0)
        return c;
    for (std::size_t u = 0; u < r.ue_snr.size(); ++u) {
        const auto costs = detail::ctrl_costs(ps, r.ue_snr[u]);
        c.ul_grant_frac += r.per_ue_ul_ttis[u] * costs.ul_grant;
        c.dl_ack_frac += r.per_ue_ul_ttis[u] * costs.dl_ack;
        c.dl_grant_frac += r.per_ue_dl_ttis[u] * costs.dl_grant;
        c.ul_ack_frac += r.per_ue_dl_ttis[u] * costs.ul_ack;
    }
    c.ul_grant_frac /= r.data_alloc_s;
    c.dl_grant_frac /= r.data_alloc_s;
    c.dl_ack_frac /= r.data_alloc_s;
    c.ul_ack_frac /= r.data_alloc_s;
    c.sr_frac = static_cast<double>(r.sr_block_sym) / r.sr_period_sym;
    c.cqi_frac = r.cqi_period_sym > 0
                     ? static_cast<double>(r.cqi_block_sym) / r.cqi_period_sym
                     : 0.0;
    c.control_overhead = c.sr_frac + c.cqi_frac + c.ul_grant_frac + c.dl_grant_frac +
                         c.dl_ack_frac + c.ul_ack_frac;
    return c;
}

// Closed-form utilization over an explicit UE population.  TCP:
// deterministic per-atom cycle arithmetic with whole segments (the
// simulator's quantization), weighted by the realized per-atom cycle
// counts.  Bursty: allocation arithmetic applied to the run's own
// transfer log, so the comparison isolates the scheduler from workload
// sampling noise; falls back to a Monte-Carlo expectation over the size
// distribution when the report carries no transfers.
inline double utilization_comparator(const PreparedScenario& ps, const SimReport& r,
                                     std::uint64_t seed)
{
    const Scenario& sc = ps.sc;
    if (sc.traffic.kind == TrafficKind::FullBufferTcp) {
        const LinkContext ctx = ps.link();
        const double w = sc.budget.bandwidth_hz;
        const double t_max = sc.frame.t_tti_max;
        double useful = 0.0, alloc = 0.0;
        for (std::size_t u = 0; u < r.ue_snr.size(); ++u) {
            const double cycles = static_cast<double>(r.per_ue_dl_ttis[u]);
            if (cycles <= 0.0)
                continue;
            const double rho_dl = ctx.rho(r.ue_snr[u], Direction::Dl);
            const double rho_ul = ctx.rho(r.ue_snr[u], Direction::Ul);
            const double t_g = sc.control.grant_bits(sc.frame.tti_mode) * sc.control.gamma_b /
                               (w * ctx.eff_snr(r.ue_snr[u], Direction::Dl));
            const double n_seg =
                std::max(1.0, std::floor((t_max - t_g) * rho_dl * w / sc.traffic.l_data_bits));
            const double t_data = n_seg * sc.traffic.l_data_bits / (rho_dl * w);
            const double ack_bits =
                std::ceil(n_seg / sc.traffic.ack_coalescing) * sc.traffic.l_ack_bits;
            const double t_ack = ack_bits / (rho_ul * w);
            FrameParams fp = sc.frame;
            const double alloc_ack = allocation_time(t_ack, fp);
            useful += cycles * (t_data + t_ack);
            alloc += cycles * (t_max + alloc_ack);
        }
        return alloc > 0.0 ? useful / alloc : 0.0;
    }
    if (!r.transfers.empty()) {
        const LinkContext ctx = ps.link();
        double useful = 0.0, alloc = 0.0;
        for (const TransferRecord& tr : r.transfers) {
            const double rho = ctx.rho(r.ue_snr[tr.ue], sc.traffic.direction);
            const double t = tr.bits / (rho * ctx.w_tot);
            useful += t;
            alloc += allocation_time(t, sc.frame);
        }
        return alloc > 0.0 ? useful / alloc : 0.0;
    }
    SnrDistribution atoms;
    atoms.samples = r.ue_snr;
    const std::size_t n = std::max<std::size_t>(sc.monte_carlo.n_samples, 50000);
    const UtilizationReport rep =
        sc.frame.tti_mode == TtiMode::Fixed
            ? util_bursty_fixed(sc.traffic, sc.frame, atoms, ps.link(), n, seed)
            : util_bursty_flexible(sc.traffic, sc.frame, atoms, ps.link(), n, seed);
    return rep.eta;
}

// ------------------------------------------------------ orchestration

// Run one named experiment and write its artifacts into out_dir.
// Returns the list of files written.
inline std::vector<std::string> run_experiment(const Scenario& sc, const std::string& experiment,
                                               const std::optional<SweepSpec>& sweep,
                                               const std::string& out_dir,
                                               const std::string& format = "csv",
                                               double sim_duration_s = 1.0, bool trace = false,
                                               const std::vector<double>& rrc_rates = {})
{
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };
    const bool json_fmt = format == "json";
    if (format != "csv" && format != "json")
        throw std::invalid_argument("format must be csv or json");

    try {
        if (experiment == "overhead") {
            const PreparedScenario ps = prepare(sc);
            if (sweep) {
                const std::string f = path("overhead_sweep." + format);
                auto out = detail::open_out(f);
                if (json_fmt) {
                    nlohmann::json j;
                    j["scenario_hash"] = scenario_hash(sc);
                    j["parameter"] = sweep->parameter;
                    j["rows"] = nlohmann::json::array();
                    for (double v : sweep->values) {
                        Scenario s2 = sc;
                        apply_sweep_value(s2, sweep->parameter, v);
                        const OverheadTable t = overhead_table(prepare(s2));
                        j["rows"].push_back({{"value", v},
                                             {"analog", to_json(t.analog)},
                                             {"hybrid", to_json(t.hybrid)},
                                             {"digital", to_json(t.digital)}});
                    }
                    out << j.dump(2) << "\n";
                } else {
                    overhead_sweep_csv(out, sc, *sweep);
                }
                written.push_back(f);
            } else {
                const OverheadTable t = overhead_table(ps);
                const std::string ftxt = path("overhead_table.txt");
                detail::open_out(ftxt) << overhead_table_text(t);
                written.push_back(ftxt);
                const std::string f = path("overhead_table." + format);
                auto out = detail::open_out(f);
                if (json_fmt) {
                    nlohmann::json j;
                    j["scenario_hash"] = scenario_hash(sc);
                    j["analog"] = to_json(t.analog);
                    j["hybrid"] = to_json(t.hybrid);
                    j["digital"] = to_json(t.digital);
                    out << j.dump(2) << "\n";
                } else {
                    overhead_table_csv(out, sc, t);
                }
                written.push_back(f);
            }
        } else if (experiment == "utilization") {
            if (sweep) {
                const std::string f = path("utilization_sweep.csv");
                auto out = detail::open_out(f);
                utilization_sweep_csv(out, sc, *sweep);
                written.push_back(f);
            } else {
                const PreparedScenario ps = prepare(sc);
                const UtilizationPair u = utilization_pair(ps);
                const std::string f = path("utilization.json");
                auto out = detail::open_out(f);
                nlohmann::json j;
                j["scenario_hash"] = scenario_hash(sc);
                j["fixed"] = {{"eta", u.fixed.eta}, {"ci95", u.fixed.ci95},
                              {"mean_tti_s", u.fixed.mean_tti_s}};
                j["flexible"] = {{"eta", u.flexible.eta}, {"ci95", u.flexible.ci95},
                                 {"mean_tti_s", u.flexible.mean_tti_s}};
                out << j.dump(2) << "\n";
                written.push_back(f);
            }
        } else if (experiment == "simulate") {
            const PreparedScenario ps = prepare(sc);
            std::ofstream trace_out;
            std::ostream* trace_sink = nullptr;
            if (trace) {
                const std::string ft = path("trace.csv");
                trace_out = detail::open_out(ft);
                detail::csv_stamp(trace_out, sc, sc.monte_carlo.seed);
                trace_sink = &trace_out;
                written.push_back(ft);
            }
            const SimReport r = run_simulation(ps, sim_duration_s, sc.monte_carlo.seed, trace_sink);
            const std::string f = path("simulate.json");
            auto out = detail::open_out(f);
            nlohmann::json j = to_json(r);
            j["scenario_hash"] = scenario_hash(sc);
            out << j.dump(2) << "\n";
            written.push_back(f);
        } else if (experiment == "rrc") {
            std::vector<double> rates = rrc_rates;
            if (rates.empty())
                rates = {0.0, 100.0, 200.0, 400.0, 600.0, 800.0};
            const RrcCurve c =
                rrc_experiment(sc, rates, sc.sim.rrc_bits, sim_duration_s, sc.monte_carlo.seed);
            const std::string f = path("rrc_curve.csv");
            auto out = detail::open_out(f);
            rrc_curve_csv(out, sc, c, sc.monte_carlo.seed);
            written.push_back(f);
        } else if (experiment == "snr") {
            const PreparedScenario ps = prepare(sc);
            const std::string f = path("snr_cdf.csv");
            auto out = detail::open_out(f);
            snr_cdf_csv(out, sc, ps.dist);
            written.push_back(f);
        } else {
            throw std::invalid_argument("unknown experiment '" + experiment + "'");
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error("experiment '" + experiment + "' failed: " + e.what());
    }
    return written;
}

} // namespace ttiflex
