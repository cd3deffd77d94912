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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttiflex/ttiflex.hpp"

// Command-line front end.  Exit codes: 0 success, 2 scenario validation
// or parse error, 1 runtime error.

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

ttiflex::Scenario load(const std::string& file)
{
    // built-in template names double as scenario sources
    for (const std::string& name : ttiflex::builtin_scenario_names())
        if (file == name)
            return ttiflex::builtin_scenario(name);
    return ttiflex::load_scenario(file);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ttiflex: mmWave MAC frame-structure overhead/utilization analysis"};
    app.require_subcommand(1);

    std::string file;
    std::string out_dir = ".";
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    auto add_common = [&](CLI::App* cmd, bool needs_file = true) {
        if (needs_file)
            cmd->add_option("file", file, "scenario file (JSON) or built-in template name")
                ->required();
        cmd->add_option("--seed", seed, "override the scenario Monte-Carlo seed");
        cmd->add_option("--out", out_dir, "output directory (default: current)");
        cmd->add_option("--format", format, "artifact format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* c_validate = app.add_subcommand("validate", "parse and validate a scenario file");
    add_common(c_validate);

    std::string sweep_text;
    auto* c_overhead = app.add_subcommand("overhead", "control-overhead fractions per architecture");
    add_common(c_overhead);
    c_overhead->add_option("--sweep", sweep_text, "parameter sweep, e.g. n_ue=1..64 or n_ue=1,2,4");

    auto* c_util = app.add_subcommand("utilization", "airlink utilization, fixed vs flexible TTIs");
    add_common(c_util);
    c_util->add_option("--sweep", sweep_text,
                       "parameter sweep, e.g. t_tti_max_symbols=4..100:4");

    double duration_s = 1.0;
    bool trace = false;
    auto* c_sim = app.add_subcommand("simulate", "discrete-event simulation of the frame timeline");
    add_common(c_sim);
    c_sim->add_option("--duration", duration_s, "simulated seconds (default 1.0)");
    c_sim->add_flag("--trace", trace, "write per-symbol trace.csv");

    std::vector<double> rrc_rates;
    auto* c_rrc = app.add_subcommand("rrc", "per-UE data rate vs control-plane message rate");
    add_common(c_rrc);
    c_rrc->add_option("--rates", rrc_rates, "messages/s per UE sweep (default 0..800)");
    c_rrc->add_option("--duration", duration_s, "simulated seconds per point (default 1.0)");

    std::size_t snr_samples = 0;
    auto* c_snr = app.add_subcommand("snr", "omnidirectional SNR distribution of the cell");
    add_common(c_snr);
    c_snr->add_option("--samples", snr_samples, "Monte-Carlo sample count override");

    CLI11_PARSE(app, argc, argv);

    ttiflex::Scenario sc;
    try {
        sc = load(file);
        if (seed)
            sc.monte_carlo.seed = *seed;
        if (snr_samples > 0)
            sc.monte_carlo.n_samples = snr_samples;
    } catch (const std::exception& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kExitValidation;
    }

    if (c_validate->parsed()) {
        std::cout << "ok: scenario '" << sc.name << "' is valid (hash " << std::hex
                  << ttiflex::scenario_hash(sc) << std::dec << ")\n";
        return kExitOk;
    }

    std::optional<ttiflex::SweepSpec> sweep;
    try {
        if (!sweep_text.empty())
            sweep = ttiflex::parse_sweep(sweep_text);
    } catch (const std::exception& e) {
        std::cerr << "sweep error: " << e.what() << "\n";
        return kExitValidation;
    }

    std::string experiment;
    if (c_overhead->parsed())
        experiment = "overhead";
    else if (c_util->parsed())
        experiment = "utilization";
    else if (c_sim->parsed())
        experiment = "simulate";
    else if (c_rrc->parsed())
        experiment = "rrc";
    else if (c_snr->parsed())
        experiment = "snr";

    try {
        const auto files = ttiflex::run_experiment(sc, experiment, sweep, out_dir, format,
                                                   duration_s, trace, rrc_rates);
        if (experiment == "overhead" && !sweep) {
            const auto t = ttiflex::overhead_table(ttiflex::prepare(sc));
            std::cout << ttiflex::overhead_table_text(t);
        }
        for (const auto& f : files)
            std::cout << "wrote " << f << "\n";
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
