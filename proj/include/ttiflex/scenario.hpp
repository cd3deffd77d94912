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
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttiflex/channel.hpp"
#include "ttiflex/frame.hpp"
#include "ttiflex/overhead.hpp"
#include "ttiflex/traffic.hpp"
#include "ttiflex/utilization.hpp"

// Scenario: the full parameter bundle driving every computation, loaded
// from a hierarchical JSON file.  Validation reports every violated
// invariant with its JSON path.  PreparedScenario adds the derived state
// (empirical SNR distribution, cell-edge targets, fitted traffic model)
// that the analytics and the simulator consume.

namespace ttiflex {

// Simulator-only knobs (a scenario section so runs are reproducible from
// the file alone).
struct SimKnobs {
    int processing_sr_to_grant_sym = 0;  // symbols between SR decode and grant
    int processing_grant_to_data_sym = 0;
    int guard_symbols = 1;               // per UL<->DL switch
    double harq_error_prob = 0.0;        // i.i.d. block error probability
    double rrc_rate_per_ue = 0.0;        // control-plane message arrivals [1/s]
    double rrc_bits = 2000.0;

    void validate() const
    {
        if (processing_sr_to_grant_sym < 0 || processing_grant_to_data_sym < 0)
            throw std::invalid_argument("sim: processing delays must be >= 0 symbols");
        if (guard_symbols < 0)
            throw std::invalid_argument("sim: guard_symbols must be >= 0");
        if (harq_error_prob < 0.0 || harq_error_prob >= 1.0)
            throw std::invalid_argument("sim: harq_error_prob must be in [0, 1)");
        if (rrc_rate_per_ue < 0.0 || rrc_bits < 0.0)
            throw std::invalid_argument("sim: rrc settings must be >= 0");
    }
};

enum class SrPayload { Trigger, ShortBsr, LongBsr };

inline const char* to_string(SrPayload p)
{
    switch (p) {
        case SrPayload::Trigger: return "trigger";
        case SrPayload::ShortBsr: return "short_bsr";
        case SrPayload::LongBsr: return "long_bsr";
    }
    return "?";
}

// Control-channel configuration: the three SR payload variants (trigger
// only / short BSR / long BSR), grant sizes per TTI mode, ACK size, and
// the shared Eb/N0 target.
struct ControlConfig {
    double sr_bits_trigger = 18.0;
    double sr_bits_short_bsr = 26.0;
    double sr_bits_long_bsr = 42.0;
    SrPayload sr_payload = SrPayload::Trigger; // variant used in aggregates
    double sr_period_s = 500e-6;
    SrMode sr_mode = SrMode::Auto;
    double cqi_bits = 26.0;
    double cqi_period_s = 0.0; // 0 = disabled
    double grant_bits_fixed = 80.0;
    double grant_bits_flexible = 100.0;
    double ack_bits = 5.0;
    double gamma_b = 3.9810717055349722; // 6 dB, linear
    double rho_ack = 0.125;              // robust ACK code rate [bps/Hz]

    double sr_bits(SrPayload p) const
    {
        switch (p) {
            case SrPayload::Trigger: return sr_bits_trigger;
            case SrPayload::ShortBsr: return sr_bits_short_bsr;
            case SrPayload::LongBsr: return sr_bits_long_bsr;
        }
        return sr_bits_trigger;
    }
    double grant_bits(TtiMode m) const
    {
        return m == TtiMode::Fixed ? grant_bits_fixed : grant_bits_flexible;
    }
    ControlMsg sr_msg(SrPayload p) const { return {sr_bits(p), gamma_b, sr_period_s}; }
    ControlMsg cqi_msg() const { return {cqi_bits, gamma_b, cqi_period_s}; }
    ControlMsg grant_msg(TtiMode m) const { return {grant_bits(m), gamma_b, 0.0}; }
    ControlMsg ack_msg() const { return {ack_bits, gamma_b, 0.0}; }
};

// Optional explicit cell-edge targets; when absent they are derived as the
// edge_percentile of the connected-UE SNR distribution.
struct SnrTargets {
    std::optional<double> gamma_min_ul_db;
    std::optional<double> gamma_min_dl_db;
    double edge_percentile = 5.0;
};

struct MonteCarlo {
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
};

struct Scenario {
    std::string name = "scenario";
    FrameParams frame;
    AntennaConfig antennas;
    BeamformingArch arch;
    LinkBudget budget;
    PathLossModel path_loss;
    SpectralEfficiencyParams spectral;
    SnrTargets snr;
    TrafficModel traffic;
    ControlConfig control;
    SimKnobs sim;
    int n_ue = 8;
    double p_ul = 0.5;
    MonteCarlo monte_carlo;
};

// ------------------------------------------------------------- validation

// Collects every violation (path + reason) rather than stopping at the
// first, then throws one exception listing them all.
inline void validate_scenario(const Scenario& sc)
{
    std::vector<std::string> errors;
    auto check = [&](auto&& fn, const char* path) {
        try {
            fn();
        } catch (const std::exception& e) {
            errors.push_back(std::string(path) + ": " + e.what());
        }
    };

    check([&] { sc.frame.validate(); }, "frame");
    check([&] { sc.antennas.validate(); }, "antennas");
    check([&] { sc.arch.validate(sc.antennas); }, "arch");
    check([&] { sc.budget.validate(); }, "budget");
    check([&] { sc.path_loss.validate(); }, "path_loss");
    check([&] { sc.spectral.validate(); }, "spectral_efficiency");
    check([&] { sc.sim.validate(); }, "sim");

    if (sc.n_ue < 1)
        errors.push_back("n_ue: must be >= 1");
    if (sc.p_ul < 0.0 || sc.p_ul > 1.0)
        errors.push_back("p_ul: must be in [0, 1]");
    if (sc.monte_carlo.n_samples < 1)
        errors.push_back("monte_carlo.n_samples: must be >= 1");
    if (sc.control.sr_period_s <= 0.0)
        errors.push_back("control.sr.period: must be > 0");
    if (sc.control.cqi_period_s < 0.0)
        errors.push_back("control.cqi.period: must be >= 0");
    if (!(sc.control.gamma_b > 0.0))
        errors.push_back("control.gamma_b: must be > 0");
    if (!(sc.control.rho_ack > 0.0))
        errors.push_back("control.rho_ack: must be > 0");
    if (sc.control.sr_bits_trigger < 1 || sc.control.sr_bits_short_bsr < 1 ||
        sc.control.sr_bits_long_bsr < 1)
        errors.push_back("control.sr: all payload sizes must be >= 1 bit");
    if (sc.control.grant_bits_fixed < 1 || sc.control.grant_bits_flexible < 1)
        errors.push_back("control.grant: sizes must be >= 1 bit");
    if (sc.control.ack_bits < 0)
        errors.push_back("control.ack: bits must be >= 0");
    if (sc.snr.edge_percentile <= 0.0 || sc.snr.edge_percentile >= 100.0)
        errors.push_back("snr.edge_percentile: must be in (0, 100)");

    if (sc.traffic.kind == TrafficKind::FullBufferTcp) {
        if (!(sc.traffic.l_data_bits > 0) || !(sc.traffic.l_ack_bits > 0))
            errors.push_back("traffic: l_data_bits and l_ack_bits must be > 0");
        if (!(sc.traffic.ack_coalescing >= 1.0))
            errors.push_back("traffic.ack_coalescing: must be >= 1");
    } else {
        const auto& t = sc.traffic;
        bool moments_ok = true;
        if (!(t.size_min_bytes > 0) || t.size_min_bytes > t.size_max_bytes) {
            errors.push_back("traffic: need 0 < size_min_bytes <= size_max_bytes");
            moments_ok = false;
        }
        if (t.mean_size_bytes < t.size_min_bytes || t.mean_size_bytes > t.size_max_bytes) {
            errors.push_back("traffic.mean_size_bytes: must lie within [size_min, size_max]");
            moments_ok = false;
        }
        if (t.std_size_bytes < 0) {
            errors.push_back("traffic.std_size_bytes: must be >= 0");
            moments_ok = false;
        }
        if (!(t.arrival_rate_per_ue >= 0))
            errors.push_back("traffic.arrival_rate_per_ue: must be >= 0 (zero = silent)");
        // only attempt the fit once the static range checks hold, so one
        // bad field yields one error, not a cascade
        if (moments_ok && !t.degenerate()) {
            try {
                fit_truncated_lognormal(t.size_min_bytes, t.size_max_bytes, t.mean_size_bytes,
                                        t.std_size_bytes);
            } catch (const std::exception& e) {
                errors.push_back(std::string("traffic: ") + e.what());
            }
        }
    }

    if (!errors.empty()) {
        std::ostringstream os;
        os << "scenario validation failed (" << errors.size() << " error"
           << (errors.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errors)
            os << "\n  - " << e;
        throw std::invalid_argument(os.str());
    }
}

// ------------------------------------------------------------------- JSON

namespace detail {

inline double get_num(const nlohmann::json& j, const char* key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw std::invalid_argument(std::string(key) + ": expected a number");
    return j.at(key).get<double>();
}

inline int get_int(const nlohmann::json& j, const char* key, int fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number_integer())
        throw std::invalid_argument(std::string(key) + ": expected an integer");
    return j.at(key).get<int>();
}

inline std::string get_str(const nlohmann::json& j, const char* key, const std::string& fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_string())
        throw std::invalid_argument(std::string(key) + ": expected a string");
    return j.at(key).get<std::string>();
}

} // namespace detail

inline nlohmann::json to_json(const Scenario& sc)
{
    using nlohmann::json;
    json j;
    j["name"] = sc.name;
    j["frame"] = {{"t_sym_us", sc.frame.t_sym * 1e6},
                  {"n_sym_tti_max", sc.frame.n_sym_tti_max()},
                  {"tti_mode", to_string(sc.frame.tti_mode)}};
    j["antennas"] = {{"n_ant_bs", sc.antennas.n_ant_bs}, {"n_ant_ue", sc.antennas.n_ant_ue}};
    j["arch"] = {{"kind", to_string(sc.arch.kind)},
                 {"streams", sc.arch.streams},
                 {"quantizer_alpha", sc.arch.quantizer_alpha}};
    j["budget"] = {{"p_tx_bs_dbm", sc.budget.p_tx_bs_dbm},
                   {"p_tx_ue_dbm", sc.budget.p_tx_ue_dbm},
                   {"noise_figure_dl_db", sc.budget.noise_figure_dl_db},
                   {"noise_figure_ul_db", sc.budget.noise_figure_ul_db},
                   {"noise_density_dbm_hz", sc.budget.noise_density_dbm_hz},
                   {"bandwidth_hz", sc.budget.bandwidth_hz},
                   {"extra_loss_dl_db", sc.budget.extra_loss_dl_db},
                   {"extra_loss_ul_db", sc.budget.extra_loss_ul_db}};
    j["path_loss"] = {{"cell_radius_m", sc.path_loss.cell_radius_m},
                      {"min_distance_m", sc.path_loss.min_distance_m},
                      {"los_decay_m", sc.path_loss.los_decay_m},
                      {"outage_decay_m", sc.path_loss.outage_decay_m},
                      {"outage_offset", sc.path_loss.outage_offset},
                      {"los",
                       {{"intercept_db", sc.path_loss.los.intercept_db},
                        {"exponent", sc.path_loss.los.exponent},
                        {"shadow_sigma_db", sc.path_loss.los.shadow_sigma_db}}},
                      {"nlos",
                       {{"intercept_db", sc.path_loss.nlos.intercept_db},
                        {"exponent", sc.path_loss.nlos.exponent},
                        {"shadow_sigma_db", sc.path_loss.nlos.shadow_sigma_db}}}};
    j["spectral_efficiency"] = {{"alpha_bw", sc.spectral.alpha_bw},
                                {"delta_loss_db", sc.spectral.delta_loss_db},
                                {"rho_max", sc.spectral.rho_max}};
    j["snr"] = json::object();
    if (sc.snr.gamma_min_ul_db)
        j["snr"]["gamma_min_ul_db"] = *sc.snr.gamma_min_ul_db;
    if (sc.snr.gamma_min_dl_db)
        j["snr"]["gamma_min_dl_db"] = *sc.snr.gamma_min_dl_db;
    j["snr"]["edge_percentile"] = sc.snr.edge_percentile;
    if (sc.traffic.kind == TrafficKind::FullBufferTcp) {
        j["traffic"] = {{"kind", "full_buffer_tcp"},
                        {"l_data_bits", sc.traffic.l_data_bits},
                        {"l_ack_bits", sc.traffic.l_ack_bits},
                        {"ack_coalescing", sc.traffic.ack_coalescing}};
    } else {
        j["traffic"] = {{"kind", "bursty_lognormal"},
                        {"arrival_rate_per_ue", sc.traffic.arrival_rate_per_ue},
                        {"size_min_bytes", sc.traffic.size_min_bytes},
                        {"size_max_bytes", sc.traffic.size_max_bytes},
                        {"mean_size_bytes", sc.traffic.mean_size_bytes},
                        {"std_size_bytes", sc.traffic.std_size_bytes},
                        {"direction", sc.traffic.direction == Direction::Dl ? "dl" : "ul"}};
    }
    j["control"] = {{"sr",
                     {{"bits_trigger", sc.control.sr_bits_trigger},
                      {"bits_short_bsr", sc.control.sr_bits_short_bsr},
                      {"bits_long_bsr", sc.control.sr_bits_long_bsr},
                      {"payload", to_string(sc.control.sr_payload)},
                      {"period_us", sc.control.sr_period_s * 1e6},
                      {"mode", to_string(sc.control.sr_mode)}}},
                    {"cqi", {{"bits", sc.control.cqi_bits}, {"period_us", sc.control.cqi_period_s * 1e6}}},
                    {"grant",
                     {{"bits_fixed", sc.control.grant_bits_fixed},
                      {"bits_flexible", sc.control.grant_bits_flexible}}},
                    {"ack", {{"bits", sc.control.ack_bits}, {"rho_ack", sc.control.rho_ack}}},
                    {"gamma_b_db", lin_to_db(sc.control.gamma_b)}};
    j["sim"] = {{"processing_sr_to_grant_sym", sc.sim.processing_sr_to_grant_sym},
                {"processing_grant_to_data_sym", sc.sim.processing_grant_to_data_sym},
                {"guard_symbols", sc.sim.guard_symbols},
                {"harq_error_prob", sc.sim.harq_error_prob},
                {"rrc_rate_per_ue", sc.sim.rrc_rate_per_ue},
                {"rrc_bits", sc.sim.rrc_bits}};
    j["n_ue"] = sc.n_ue;
    j["p_ul"] = sc.p_ul;
    j["monte_carlo"] = {{"n_samples", sc.monte_carlo.n_samples}, {"seed", sc.monte_carlo.seed}};
    return j;
}

// Parse a scenario from JSON.  Unknown keys are rejected at the top level
// (typo safety); missing keys fall back to the documented defaults.
// Throws std::invalid_argument with the offending path on any problem.
inline Scenario scenario_from_json(const nlohmann::json& j)
{
    using detail::get_int;
    using detail::get_num;
    using detail::get_str;
    using nlohmann::json;

    static const char* known[] = {"name", "frame",   "antennas", "arch", "budget",
                                  "path_loss", "spectral_efficiency", "snr", "traffic",
                                  "control", "sim", "n_ue", "p_ul", "monte_carlo"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || (it.key() == k);
        if (!ok)
            throw std::invalid_argument("unknown top-level key: " + it.key());
    }

    Scenario sc;
    sc.name = get_str(j, "name", "scenario");

    if (j.contains("frame")) {
        const json& f = j.at("frame");
        sc.frame.t_sym = get_num(f, "t_sym_us", sc.frame.t_sym * 1e6) * 1e-6;
        if (f.contains("t_tti_max_us")) {
            sc.frame.t_tti_max = get_num(f, "t_tti_max_us", 0.0) * 1e-6;
            if (f.contains("n_sym_tti_max") &&
                std::llround(sc.frame.t_tti_max / sc.frame.t_sym) != get_int(f, "n_sym_tti_max", 0))
                throw std::invalid_argument("frame: t_tti_max_us and n_sym_tti_max disagree");
        } else {
            sc.frame.t_tti_max = get_int(f, "n_sym_tti_max", 30) * sc.frame.t_sym;
        }
        const std::string mode = get_str(f, "tti_mode", "fixed");
        if (mode == "fixed")
            sc.frame.tti_mode = TtiMode::Fixed;
        else if (mode == "flexible")
            sc.frame.tti_mode = TtiMode::Flexible;
        else
            throw std::invalid_argument("frame.tti_mode: expected 'fixed' or 'flexible'");
    }

    if (j.contains("antennas")) {
        const json& a = j.at("antennas");
        sc.antennas.n_ant_bs = get_int(a, "n_ant_bs", sc.antennas.n_ant_bs);
        sc.antennas.n_ant_ue = get_int(a, "n_ant_ue", sc.antennas.n_ant_ue);
    }

    if (j.contains("arch")) {
        const json& a = j.at("arch");
        const std::string kind = get_str(a, "kind", "analog");
        if (kind == "analog")
            sc.arch.kind = ArchKind::Analog;
        else if (kind == "hybrid")
            sc.arch.kind = ArchKind::Hybrid;
        else if (kind == "digital")
            sc.arch.kind = ArchKind::Digital;
        else
            throw std::invalid_argument("arch.kind: expected analog|hybrid|digital");
        sc.arch.streams = get_int(a, "streams", sc.arch.kind == ArchKind::Hybrid ? 2 : 1);
        sc.arch.quantizer_alpha = get_num(a, "quantizer_alpha", 0.0);
    }

    if (j.contains("budget")) {
        const json& b = j.at("budget");
        sc.budget.p_tx_bs_dbm = get_num(b, "p_tx_bs_dbm", sc.budget.p_tx_bs_dbm);
        sc.budget.p_tx_ue_dbm = get_num(b, "p_tx_ue_dbm", sc.budget.p_tx_ue_dbm);
        sc.budget.noise_figure_dl_db = get_num(b, "noise_figure_dl_db", sc.budget.noise_figure_dl_db);
        sc.budget.noise_figure_ul_db = get_num(b, "noise_figure_ul_db", sc.budget.noise_figure_ul_db);
        sc.budget.noise_density_dbm_hz = get_num(b, "noise_density_dbm_hz", sc.budget.noise_density_dbm_hz);
        sc.budget.bandwidth_hz = get_num(b, "bandwidth_hz", sc.budget.bandwidth_hz);
        sc.budget.extra_loss_dl_db = get_num(b, "extra_loss_dl_db", 0.0);
        sc.budget.extra_loss_ul_db = get_num(b, "extra_loss_ul_db", 0.0);
    }

    if (j.contains("path_loss")) {
        const json& p = j.at("path_loss");
        sc.path_loss.cell_radius_m = get_num(p, "cell_radius_m", sc.path_loss.cell_radius_m);
        sc.path_loss.min_distance_m = get_num(p, "min_distance_m", sc.path_loss.min_distance_m);
        sc.path_loss.los_decay_m = get_num(p, "los_decay_m", sc.path_loss.los_decay_m);
        sc.path_loss.outage_decay_m = get_num(p, "outage_decay_m", sc.path_loss.outage_decay_m);
        sc.path_loss.outage_offset = get_num(p, "outage_offset", sc.path_loss.outage_offset);
        auto state = [&](const char* key, PathLossState& st) {
            if (!p.contains(key))
                return;
            const json& s = p.at(key);
            st.intercept_db = get_num(s, "intercept_db", st.intercept_db);
            st.exponent = get_num(s, "exponent", st.exponent);
            st.shadow_sigma_db = get_num(s, "shadow_sigma_db", st.shadow_sigma_db);
        };
        state("los", sc.path_loss.los);
        state("nlos", sc.path_loss.nlos);
    }

    if (j.contains("spectral_efficiency")) {
        const json& s = j.at("spectral_efficiency");
        sc.spectral.alpha_bw = get_num(s, "alpha_bw", sc.spectral.alpha_bw);
        sc.spectral.delta_loss_db = get_num(s, "delta_loss_db", sc.spectral.delta_loss_db);
        sc.spectral.rho_max = get_num(s, "rho_max", sc.spectral.rho_max);
    }

    if (j.contains("snr")) {
        const json& s = j.at("snr");
        if (s.contains("gamma_min_ul_db"))
            sc.snr.gamma_min_ul_db = get_num(s, "gamma_min_ul_db", 0.0);
        if (s.contains("gamma_min_dl_db"))
            sc.snr.gamma_min_dl_db = get_num(s, "gamma_min_dl_db", 0.0);
        sc.snr.edge_percentile = get_num(s, "edge_percentile", sc.snr.edge_percentile);
    }

    if (j.contains("traffic")) {
        const json& t = j.at("traffic");
        const std::string kind = get_str(t, "kind", "full_buffer_tcp");
        if (kind == "full_buffer_tcp") {
            sc.traffic.kind = TrafficKind::FullBufferTcp;
            sc.traffic.l_data_bits = get_num(t, "l_data_bits", sc.traffic.l_data_bits);
            sc.traffic.l_ack_bits = get_num(t, "l_ack_bits", sc.traffic.l_ack_bits);
            sc.traffic.ack_coalescing = get_num(t, "ack_coalescing", 1.0);
        } else if (kind == "bursty_lognormal") {
            sc.traffic.kind = TrafficKind::BurstyLogNormal;
            sc.traffic.arrival_rate_per_ue = get_num(t, "arrival_rate_per_ue", 1.0);
            sc.traffic.size_min_bytes = get_num(t, "size_min_bytes", sc.traffic.size_min_bytes);
            sc.traffic.size_max_bytes = get_num(t, "size_max_bytes", sc.traffic.size_max_bytes);
            sc.traffic.mean_size_bytes = get_num(t, "mean_size_bytes", sc.traffic.mean_size_bytes);
            sc.traffic.std_size_bytes = get_num(t, "std_size_bytes", sc.traffic.std_size_bytes);
            const std::string dir = get_str(t, "direction", "dl");
            if (dir == "dl")
                sc.traffic.direction = Direction::Dl;
            else if (dir == "ul")
                sc.traffic.direction = Direction::Ul;
            else
                throw std::invalid_argument("traffic.direction: expected 'dl' or 'ul'");
        } else {
            throw std::invalid_argument("traffic.kind: expected full_buffer_tcp|bursty_lognormal");
        }
    }

    if (j.contains("control")) {
        const json& c = j.at("control");
        sc.control.gamma_b = db_to_lin(get_num(c, "gamma_b_db", lin_to_db(sc.control.gamma_b)));
        if (c.contains("sr")) {
            const json& s = c.at("sr");
            sc.control.sr_bits_trigger = get_num(s, "bits_trigger", sc.control.sr_bits_trigger);
            sc.control.sr_bits_short_bsr = get_num(s, "bits_short_bsr", sc.control.sr_bits_short_bsr);
            sc.control.sr_bits_long_bsr = get_num(s, "bits_long_bsr", sc.control.sr_bits_long_bsr);
            sc.control.sr_period_s = get_num(s, "period_us", sc.control.sr_period_s * 1e6) * 1e-6;
            const std::string payload = get_str(s, "payload", "trigger");
            if (payload == "trigger")
                sc.control.sr_payload = SrPayload::Trigger;
            else if (payload == "short_bsr")
                sc.control.sr_payload = SrPayload::ShortBsr;
            else if (payload == "long_bsr")
                sc.control.sr_payload = SrPayload::LongBsr;
            else
                throw std::invalid_argument("control.sr.payload: expected trigger|short_bsr|long_bsr");
            const std::string mode = get_str(s, "mode", "auto");
            if (mode == "tdma")
                sc.control.sr_mode = SrMode::Tdma;
            else if (mode == "fdma")
                sc.control.sr_mode = SrMode::Fdma;
            else if (mode == "auto")
                sc.control.sr_mode = SrMode::Auto;
            else
                throw std::invalid_argument("control.sr.mode: expected tdma|fdma|auto");
        }
        if (c.contains("cqi")) {
            const json& q = c.at("cqi");
            sc.control.cqi_bits = get_num(q, "bits", sc.control.cqi_bits);
            sc.control.cqi_period_s = get_num(q, "period_us", sc.control.cqi_period_s * 1e6) * 1e-6;
        }
        if (c.contains("grant")) {
            const json& g = c.at("grant");
            sc.control.grant_bits_fixed = get_num(g, "bits_fixed", sc.control.grant_bits_fixed);
            sc.control.grant_bits_flexible = get_num(g, "bits_flexible", sc.control.grant_bits_flexible);
        }
        if (c.contains("ack")) {
            const json& a = c.at("ack");
            sc.control.ack_bits = get_num(a, "bits", sc.control.ack_bits);
            sc.control.rho_ack = get_num(a, "rho_ack", sc.control.rho_ack);
        }
    }

    if (j.contains("sim")) {
        const json& s = j.at("sim");
        sc.sim.processing_sr_to_grant_sym = get_int(s, "processing_sr_to_grant_sym", 0);
        sc.sim.processing_grant_to_data_sym = get_int(s, "processing_grant_to_data_sym", 0);
        sc.sim.guard_symbols = get_int(s, "guard_symbols", 1);
        sc.sim.harq_error_prob = get_num(s, "harq_error_prob", 0.0);
        sc.sim.rrc_rate_per_ue = get_num(s, "rrc_rate_per_ue", 0.0);
        sc.sim.rrc_bits = get_num(s, "rrc_bits", 2000.0);
    }

    sc.n_ue = get_int(j, "n_ue", sc.n_ue);
    sc.p_ul = get_num(j, "p_ul", sc.p_ul);
    if (j.contains("monte_carlo")) {
        const json& m = j.at("monte_carlo");
        sc.monte_carlo.n_samples = static_cast<std::size_t>(get_num(m, "n_samples", 100000));
        sc.monte_carlo.seed = static_cast<std::uint64_t>(get_num(m, "seed", 1));
    }

    validate_scenario(sc);
    return sc;
}

// Load and fully validate a scenario file.
inline Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument(
            std::string("scenario parse error: ") + e.what() +
            "\nrequired sections: frame, antennas, arch, budget, path_loss, traffic, control");
    }
    if (!j.is_object())
        throw std::invalid_argument("scenario file must contain a JSON object");
    return scenario_from_json(j);
}

// FNV-1a hash of the canonical serialized form; stamped into every output
// file so each artifact records the exact configuration that produced it.
inline std::uint64_t scenario_hash(const Scenario& sc)
{
    const std::string s = to_json(sc).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ------------------------------------------------------------ preparation

// Scenario plus the derived state shared by analytics and simulator:
// the empirical connected-UE SNR distribution, the cell-edge SNR targets,
// the served (above-target) sub-population, and the fitted traffic model.
struct PreparedScenario {
    Scenario sc;
    SnrDistribution dist;       // all connected draws
    SnrDistribution dist_served; // draws meeting both cell-edge targets
    double gamma_min_ul = 0.0;  // linear
    double gamma_min_dl = 0.0;

    LinkContext link() const
    {
        return LinkContext{sc.antennas, sc.arch, sc.spectral, sc.budget.bandwidth_hz};
    }
};

inline PreparedScenario prepare(const Scenario& scenario)
{
    validate_scenario(scenario);
    PreparedScenario ps;
    ps.sc = scenario;
    fit_bursty_model(ps.sc.traffic);
    ps.dist = sample_snr_distribution(ps.sc.budget, ps.sc.path_loss, ps.sc.monte_carlo.n_samples,
                                      ps.sc.monte_carlo.seed);
    if (ps.dist.empty())
        throw std::runtime_error("prepare: every SNR draw landed in outage");
    const double pct = ps.sc.snr.edge_percentile;
    ps.gamma_min_ul = ps.sc.snr.gamma_min_ul_db
                          ? db_to_lin(*ps.sc.snr.gamma_min_ul_db)
                          : db_to_lin(ps.dist.percentile_db(Direction::Ul, pct));
    ps.gamma_min_dl = ps.sc.snr.gamma_min_dl_db
                          ? db_to_lin(*ps.sc.snr.gamma_min_dl_db)
                          : db_to_lin(ps.dist.percentile_db(Direction::Dl, pct));
    ps.dist_served = ps.dist.restricted(ps.gamma_min_ul, ps.gamma_min_dl);
    if (ps.dist_served.empty())
        throw std::runtime_error("prepare: no UE meets the cell-edge SNR targets");
    return ps;
}

// Mean TTI duration for the overhead denominators.  Fixed mode: the fixed
// TTI length.  Flexible mode: the mean realized TTI of the active traffic
// model (TCP: data TTI + rounded ACK TTI; bursty: mean over the sampled
// allocation chains).
inline double expected_tti(const PreparedScenario& ps)
{
    const FrameParams& fp = ps.sc.frame;
    if (fp.tti_mode == TtiMode::Fixed)
        return fp.t_tti_max;
    if (ps.sc.traffic.kind == TrafficKind::FullBufferTcp) {
        const auto r = util_tcp(fp, ps.sc.spectral.rho_max, ps.sc.spectral.rho_max,
                                ps.sc.traffic.l_data_bits, ps.sc.traffic.l_ack_bits);
        return r.mean_tti_s;
    }
    const std::size_t n = std::max<std::size_t>(ps.sc.monte_carlo.n_samples, 10000);
    const auto r = util_bursty_flexible(ps.sc.traffic, fp, ps.dist_served, ps.link(), n,
                                        ps.sc.monte_carlo.seed + 0x9e3779b9ull);
    return r.mean_tti_s;
}

// Assemble the overhead-aggregation inputs for one architecture (the
// scenario's own by default).
inline OverheadInputs make_overhead_inputs(const PreparedScenario& ps,
                                           std::optional<BeamformingArch> arch_override = {})
{
    OverheadInputs in;
    in.ant = ps.sc.antennas;
    in.arch = arch_override ? *arch_override : ps.sc.arch;
    in.fp = ps.sc.frame;
    in.w_tot = ps.sc.budget.bandwidth_hz;
    in.sr = ps.sc.control.sr_msg(ps.sc.control.sr_payload);
    in.cqi = ps.sc.control.cqi_msg();
    in.ul_grant = ps.sc.control.grant_msg(ps.sc.frame.tti_mode);
    in.dl_grant = ps.sc.control.grant_msg(ps.sc.frame.tti_mode);
    in.dl_ack = ps.sc.control.ack_msg();
    in.ul_ack = ps.sc.control.ack_msg();
    in.sr_mode = ps.sc.control.sr_mode;
    in.rho_ack = ps.sc.control.rho_ack;
    in.n_ue = ps.sc.n_ue;
    in.p_ul = ps.sc.p_ul;
    in.gamma_min_ul = ps.gamma_min_ul;
    in.gamma_min_dl = ps.gamma_min_dl;
    in.dist = &ps.dist_served;
    in.e_tti = expected_tti(ps);
    return in;
}

// Scenario-level aggregate: the per-channel fractions and total for one
// architecture.
inline OverheadReport total_overhead(const PreparedScenario& ps,
                                     std::optional<BeamformingArch> arch_override = {})
{
    return total_overhead(make_overhead_inputs(ps, arch_override));
}

// -------------------------------------------------------------- templates

// Built-in scenario templates.  These are the same configurations shipped
// as scenarios/*.json; the builders exist so tests and the CLI can run
// without touching the filesystem.
//
//   baseline_overhead   8-UE overhead study with pinned cell-edge targets
//   tcp_fullbuffer      saturated TCP stream, fixed vs flexible TTI
//   large_packets       bursty ~2 MB-mean transfers (file-transfer regime)
//   small_packets       bursty ~10 kB-mean transfers (web-browsing regime)
//   realistic           sim-oriented: guard symbols, delays, CQI, HARQ
inline Scenario builtin_scenario(const std::string& name)
{
    Scenario sc;
    sc.frame.t_sym = 4.16e-6;
    sc.frame.t_tti_max = 30 * 4.16e-6;
    sc.monte_carlo.n_samples = 100000;
    sc.monte_carlo.seed = 1;

    if (name == "baseline_overhead") {
        sc.name = name;
        // fixed mode pins the overhead denominator at the full TTI length,
        // which is the normalization the reference table uses
        sc.frame.tti_mode = TtiMode::Fixed;
        sc.arch.kind = ArchKind::Analog;
        // reference cell-edge operating point; -39/-32 dB are the omni UL/DL
        // SNRs of a ~5th-percentile user in this cell
        sc.snr.gamma_min_ul_db = -39.0;
        sc.snr.gamma_min_dl_db = -32.0;
        sc.traffic.kind = TrafficKind::FullBufferTcp;
        sc.control.cqi_period_s = 0.0;
        return sc;
    }
    if (name == "tcp_fullbuffer") {
        sc.name = name;
        sc.frame.tti_mode = TtiMode::Flexible;
        sc.arch.kind = ArchKind::Analog;
        sc.snr.gamma_min_ul_db = -39.0;
        sc.snr.gamma_min_dl_db = -32.0;
        sc.traffic.kind = TrafficKind::FullBufferTcp;
        sc.traffic.l_data_bits = 12000.0;
        sc.traffic.l_ack_bits = 592.0;
        sc.control.cqi_period_s = 0.0;
        return sc;
    }
    if (name == "large_packets") {
        sc.name = name;
        sc.frame.tti_mode = TtiMode::Flexible;
        sc.arch.kind = ArchKind::Analog;
        sc.snr.gamma_min_ul_db = -39.0;
        sc.snr.gamma_min_dl_db = -32.0;
        sc.traffic.kind = TrafficKind::BurstyLogNormal;
        sc.traffic.arrival_rate_per_ue = 5.0;
        sc.traffic.size_min_bytes = 100e3;
        sc.traffic.size_max_bytes = 100e6;
        sc.traffic.mean_size_bytes = 2e6;
        sc.traffic.std_size_bytes = 5e6;
        sc.traffic.direction = Direction::Dl;
        sc.control.cqi_period_s = 0.0;
        return sc;
    }
    if (name == "small_packets") {
        sc.name = name;
        sc.frame.tti_mode = TtiMode::Flexible;
        sc.arch.kind = ArchKind::Analog;
        sc.snr.gamma_min_ul_db = -39.0;
        sc.snr.gamma_min_dl_db = -32.0;
        sc.traffic.kind = TrafficKind::BurstyLogNormal;
        sc.traffic.arrival_rate_per_ue = 25.0;
        sc.traffic.size_min_bytes = 100.0;
        sc.traffic.size_max_bytes = 2e6;
        sc.traffic.mean_size_bytes = 10710.0;
        sc.traffic.std_size_bytes = 25032.0;
        sc.traffic.direction = Direction::Dl;
        sc.control.cqi_period_s = 0.0;
        return sc;
    }
    if (name == "realistic") {
        sc.name = name;
        sc.frame.tti_mode = TtiMode::Flexible;
        sc.arch.kind = ArchKind::Hybrid;
        sc.arch.streams = 2;
        sc.snr.gamma_min_ul_db = -39.0;
        sc.snr.gamma_min_dl_db = -32.0;
        sc.traffic.kind = TrafficKind::BurstyLogNormal;
        sc.traffic.arrival_rate_per_ue = 25.0;
        sc.traffic.size_min_bytes = 100.0;
        sc.traffic.size_max_bytes = 2e6;
        sc.traffic.mean_size_bytes = 10710.0;
        sc.traffic.std_size_bytes = 25032.0;
        sc.traffic.direction = Direction::Dl;
        sc.control.cqi_period_s = 10e-3;
        sc.sim.guard_symbols = 1;
        sc.sim.processing_sr_to_grant_sym = 2;
        sc.sim.processing_grant_to_data_sym = 2;
        sc.sim.harq_error_prob = 0.01;
        return sc;
    }
    throw std::invalid_argument(
        "unknown scenario template '" + name +
        "' (available: baseline_overhead, tcp_fullbuffer, large_packets, small_packets, realistic)");
}

inline std::vector<std::string> builtin_scenario_names()
{
    return {"baseline_overhead", "tcp_fullbuffer", "large_packets", "small_packets", "realistic"};
}

} // namespace ttiflex
