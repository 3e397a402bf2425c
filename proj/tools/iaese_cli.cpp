// SPDX-License-Identifier: Apache-2.0
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

// Monte Carlo driver: runs the configured sweep and writes CSV/JSON results.

#include "iaese/error.hpp"
#include "iaese/experiment.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

std::vector<iaese::Protocol> protocols_from(const std::string& s)
{
    if (s == "both") {
        return {iaese::Protocol::full_ia, iaese::Protocol::partial_ia};
    }
    return {iaese::parse_protocol(s)};
}

std::vector<iaese::Algorithm> algorithms_from(const std::string& s)
{
    if (s == "both") {
        return {iaese::Algorithm::esem, iaese::Algorithm::epa};
    }
    return {iaese::parse_algorithm(s)};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Interference-alignment ESE simulator"};
    std::string config_path;
    std::string protocol;
    std::string algorithm;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> grid_point;
    bool emit_plot_data = false;
    bool include_nonconverged = false;

    app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--protocol", protocol, "full | partial | both")
        ->check(CLI::IsMember({"full", "partial", "both"}));
    app.add_option("--algorithm", algorithm, "esem | epa | both")->check(CLI::IsMember({"esem", "epa", "both"}));
    app.add_option("--trials", trials, "trials per grid point")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out, "output directory");
    app.add_option("--grid-point", grid_point, "run a single grid point")->check(CLI::NonNegativeNumber);
    app.add_flag("--emit-plot-data", emit_plot_data, "write per-axis aggregate tables");
    app.add_flag("--include-nonconverged", include_nonconverged, "keep non-converged trials in aggregates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    iaese::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = iaese::load_config(config_path);
        }
        if (!protocol.empty()) {
            cfg.protocols = protocols_from(protocol);
        }
        if (!algorithm.empty()) {
            cfg.algorithms = algorithms_from(algorithm);
        }
        if (trials) {
            cfg.trials = *trials;
        }
        if (seed) {
            cfg.seed = *seed;
        }
        if (!out.empty()) {
            cfg.out = out;
        }
        if (include_nonconverged) {
            cfg.include_nonconverged = true;
        }
        cfg.validate();
    } catch (const iaese::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const auto result = iaese::run_experiment(cfg, grid_point, &std::cerr);
        if (!result.any_feasible) {
            std::cerr << "no grid point has a feasible dimension plan\n";
            return kExitInfeasible;
        }
        iaese::write_outputs(result, cfg, cfg.out, emit_plot_data);
        for (const auto& a : iaese::aggregate(result, cfg, cfg.include_nonconverged)) {
            std::cout << "point " << a.grid_index << " " << iaese::to_string(a.protocol) << "/"
                      << iaese::to_string(a.algorithm) << ": ESE " << a.ese_mean << " +/- " << a.ese_se
                      << " bit/s/Hz/J, ASE " << a.ase_mean << " bit/s/Hz (" << a.trials_used << "/"
                      << a.trials_total << " trials)\n";
        }
        std::cout << "wrote " << cfg.out << "\n";
    } catch (const iaese::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const iaese::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
