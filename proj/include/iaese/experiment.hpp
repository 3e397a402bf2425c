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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iaese/esem.hpp"
#include "iaese/metrics.hpp"
#include "iaese/network.hpp"
#include "iaese/protocol.hpp"
#include "iaese/scheduling.hpp"

namespace iaese {

struct ExperimentConfig {
    NetworkConfig base = NetworkConfig::defaults();
    std::vector<double> p_max_bs_dbm{30.0};
    std::vector<double> p_max_rn_dbm{20.0};
    std::vector<int> relays{2};
    std::vector<double> isd_km{1.5};
    std::vector<int> s_r{1};
    std::vector<int> s_u{2};
    std::vector<Protocol> protocols{Protocol::full_ia, Protocol::partial_ia};
    std::vector<Algorithm> algorithms{Algorithm::esem, Algorithm::epa};
    int trials = 200;
    std::uint64_t seed = 1;
    std::string out = "results";
    int max_groups = kDefaultMaxGroups;
    SolverOptions solver;
    bool include_nonconverged = false;
    int threads = 0;  ///< 0: hardware concurrency

    /// Throws ConfigError.
    void validate() const;
};

/// Parses the JSON config format; unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

Protocol parse_protocol(const std::string& name);
Algorithm parse_algorithm(const std::string& name);

struct GridPoint {
    int index = 0;
    double p_max_bs_dbm = 0.0;
    double p_max_rn_dbm = 0.0;
    int relays = 0;
    double isd_km = 0.0;
    int s_r = 0;
    int s_u = 0;
    NetworkConfig network;
};

/// Cartesian product of the sweep axes, P_max^B varying slowest.
std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg);

/// Intermediate objects of one trial under one protocol.
struct TrialState {
    Layout layout;
    DimensionPlan plan;
    PrecodedChannels h;
    RxBfmSet rx;
    std::vector<SmcPool> pools;
    std::vector<std::vector<SmcGroup>> groups;
    std::vector<std::string> dropped;
};

/// Layout and channels depend only on trial_seed, so both protocols see the
/// same network realization.
TrialState build_trial_state(const NetworkConfig& cfg, Protocol protocol, std::uint64_t trial_seed,
                             int max_groups = kDefaultMaxGroups, const CrossGainOptions& cross = {});

/// Per-cell problems of a built trial.
std::vector<CellProblem> cell_problems(const TrialState& state, const NetworkConfig& cfg);

std::array<PowerSolution, kCells> solve_cells(const std::vector<CellProblem>& problems,
                                              Algorithm algorithm, const NetworkConfig& cfg,
                                              std::uint64_t trial_seed, Protocol protocol,
                                              const SolverOptions& solver = {});

std::vector<TrialMetrics> run_trial(const NetworkConfig& cfg, const std::vector<Protocol>& protocols,
                                    const std::vector<Algorithm>& algorithms, std::uint64_t trial_seed,
                                    int max_groups = kDefaultMaxGroups, const SolverOptions& solver = {});

std::uint64_t trial_seed(std::uint64_t master, int grid_index, int trial);

struct ResultRow {
    int grid_index = 0;
    int trial = 0;
    TrialMetrics metrics;
};

struct ExperimentResult {
    std::vector<GridPoint> points;
    std::vector<std::string> infeasible;  ///< "grid point k, protocol: reason"
    std::vector<std::string> failures;    ///< failed trials, skipped
    std::vector<ResultRow> rows;          ///< ordered by grid point, trial, protocol, algorithm
    bool any_feasible = false;
};

/// Runs every (or one) grid point. Diagnostics go to `log` when given.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::optional<int> grid_point = std::nullopt,
                                std::ostream* log = nullptr);

struct Aggregate {
    int grid_index = 0;
    Protocol protocol = Protocol::full_ia;
    Algorithm algorithm = Algorithm::esem;
    int trials_total = 0;
    int trials_used = 0;
    int converged = 0;
    double ase_mean = 0.0;
    double ase_se = 0.0;
    double ese_mean = 0.0;
    double ese_se = 0.0;
    double p_total_mean = 0.0;
    double p_total_se = 0.0;
    double median_iterations = 0.0;
};

std::vector<Aggregate> aggregate(const ExperimentResult& result, const ExperimentConfig& cfg,
                                 bool include_nonconverged);

/// Writes results.csv, results_cells.csv, aggregates.csv and config.json into
/// `dir`, plus plot_*.csv tables when requested.
void write_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                   const std::filesystem::path& dir, bool emit_plot_data);

} // namespace iaese
