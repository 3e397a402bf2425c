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

#include "iaese/experiment.hpp"

#include "iaese/error.hpp"
#include "iaese/random.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace iaese {

using nlohmann::json;

Protocol parse_protocol(const std::string& name)
{
    if (name == "full" || name == "full_ia") {
        return Protocol::full_ia;
    }
    if (name == "partial" || name == "partial_ia") {
        return Protocol::partial_ia;
    }
    throw ConfigError("unknown protocol '" + name + "'");
}

Algorithm parse_algorithm(const std::string& name)
{
    if (name == "esem") {
        return Algorithm::esem;
    }
    if (name == "epa") {
        return Algorithm::epa;
    }
    throw ConfigError("unknown algorithm '" + name + "'");
}

void ExperimentConfig::validate() const
{
    auto nonempty = [](bool empty, const char* axis) {
        if (empty) {
            throw ConfigError(std::string("axis '") + axis + "' is empty");
        }
    };
    nonempty(p_max_bs_dbm.empty(), "p_max_bs_dbm");
    nonempty(p_max_rn_dbm.empty(), "p_max_rn_dbm");
    nonempty(relays.empty(), "relays");
    nonempty(isd_km.empty(), "isd_km");
    nonempty(s_r.empty(), "s_r");
    nonempty(s_u.empty(), "s_u");
    nonempty(protocols.empty(), "protocols");
    nonempty(algorithms.empty(), "algorithms");
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (max_groups < 1) {
        throw ConfigError("max_groups must be at least 1");
    }
    if (!(solver.steps.a > 0.0) || !(solver.steps.b > 0.0) || solver.max_iterations < 1 ||
        !(solver.tolerance > 0.0)) {
        throw ConfigError("solver settings must be positive");
    }
    for (const auto& p : expand_grid(*this)) {
        try {
            p.network.validate();
        } catch (const InvalidInput& e) {
            throw ConfigError("grid point " + std::to_string(p.index) + ": " + e.what());
        }
    }
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out)
{
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!j.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
            allowed.end()) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

} // namespace

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig cfg;
    try {
        const json j = json::parse(text);
        check_keys(j,
                   {"p_max_bs_dbm", "p_max_rn_dbm", "relays", "isd_km", "s_r", "s_u", "protocols",
                    "algorithms", "trials", "seed", "out", "max_groups", "solver", "network",
                    "include_nonconverged", "threads"},
                   "config");
        read(j, "p_max_bs_dbm", cfg.p_max_bs_dbm);
        read(j, "p_max_rn_dbm", cfg.p_max_rn_dbm);
        read(j, "relays", cfg.relays);
        read(j, "isd_km", cfg.isd_km);
        read(j, "s_r", cfg.s_r);
        read(j, "s_u", cfg.s_u);
        if (j.contains("protocols")) {
            cfg.protocols.clear();
            for (const auto& p : j.at("protocols")) {
                cfg.protocols.push_back(parse_protocol(p.get<std::string>()));
            }
        }
        if (j.contains("algorithms")) {
            cfg.algorithms.clear();
            for (const auto& a : j.at("algorithms")) {
                cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
            }
        }
        read(j, "trials", cfg.trials);
        read(j, "seed", cfg.seed);
        read(j, "out", cfg.out);
        read(j, "max_groups", cfg.max_groups);
        read(j, "include_nonconverged", cfg.include_nonconverged);
        read(j, "threads", cfg.threads);
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            check_keys(s, {"step_a", "step_b", "max_iterations", "tolerance", "max_halvings"}, "solver");
            read(s, "step_a", cfg.solver.steps.a);
            read(s, "step_b", cfg.solver.steps.b);
            read(s, "max_iterations", cfg.solver.max_iterations);
            read(s, "tolerance", cfg.solver.tolerance);
            read(s, "max_halvings", cfg.solver.max_halvings);
        }
        if (j.contains("network")) {
            const json& n = j.at("network");
            check_keys(n,
                       {"subcarrier_blocks", "block_bandwidth_hz", "ues", "bs_antennas", "rn_antennas",
                        "ue_antennas", "rn_distance_ratio", "noise_psd_dbm_hz", "snr_gap_db", "alpha"},
                       "network");
            NetworkConfig& b = cfg.base;
            read(n, "subcarrier_blocks", b.subcarrier_blocks);
            read(n, "block_bandwidth_hz", b.block_bandwidth_hz);
            read(n, "ues", b.ues);
            read(n, "bs_antennas", b.bs_antennas);
            read(n, "rn_antennas", b.rn_antennas);
            read(n, "ue_antennas", b.ue_antennas);
            read(n, "rn_distance_ratio", b.rn_distance_ratio);
            read(n, "noise_psd_dbm_hz", b.noise_psd_dbm_hz);
            read(n, "snr_gap_db", b.snr_gap_db);
            read(n, "alpha", b.alpha);
            b.rescale_power_model();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string config_to_json(const ExperimentConfig& cfg)
{
    json j;
    j["p_max_bs_dbm"] = cfg.p_max_bs_dbm;
    j["p_max_rn_dbm"] = cfg.p_max_rn_dbm;
    j["relays"] = cfg.relays;
    j["isd_km"] = cfg.isd_km;
    j["s_r"] = cfg.s_r;
    j["s_u"] = cfg.s_u;
    j["protocols"] = json::array();
    for (const auto p : cfg.protocols) {
        j["protocols"].push_back(std::string(to_string(p)));
    }
    j["algorithms"] = json::array();
    for (const auto a : cfg.algorithms) {
        j["algorithms"].push_back(std::string(to_string(a)));
    }
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out;
    j["max_groups"] = cfg.max_groups;
    j["include_nonconverged"] = cfg.include_nonconverged;
    j["threads"] = cfg.threads;
    j["solver"] = {{"step_a", cfg.solver.steps.a},
                   {"step_b", cfg.solver.steps.b},
                   {"max_iterations", cfg.solver.max_iterations},
                   {"tolerance", cfg.solver.tolerance},
                   {"max_halvings", cfg.solver.max_halvings}};
    const NetworkConfig& b = cfg.base;
    j["network"] = {{"subcarrier_blocks", b.subcarrier_blocks},
                    {"block_bandwidth_hz", b.block_bandwidth_hz},
                    {"ues", b.ues},
                    {"bs_antennas", b.bs_antennas},
                    {"rn_antennas", b.rn_antennas},
                    {"ue_antennas", b.ue_antennas},
                    {"rn_distance_ratio", b.rn_distance_ratio},
                    {"noise_psd_dbm_hz", b.noise_psd_dbm_hz},
                    {"snr_gap_db", b.snr_gap_db},
                    {"alpha", b.alpha}};
    return j.dump(2);
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg)
{
    std::vector<GridPoint> out;
    for (const double pb : cfg.p_max_bs_dbm) {
        for (const double pr : cfg.p_max_rn_dbm) {
            for (const int m : cfg.relays) {
                for (const double isd : cfg.isd_km) {
                    for (const int sr : cfg.s_r) {
                        for (const int su : cfg.s_u) {
                            GridPoint g;
                            g.index = static_cast<int>(out.size());
                            g.p_max_bs_dbm = pb;
                            g.p_max_rn_dbm = pr;
                            g.relays = m;
                            g.isd_km = isd;
                            g.s_r = sr;
                            g.s_u = su;
                            g.network = cfg.base;
                            g.network.p_max_bs_w = dbm_to_watt(pb);
                            g.network.p_max_rn_w = dbm_to_watt(pr);
                            g.network.relays = m;
                            g.network.isd_km = isd;
                            g.network.s_r = sr;
                            g.network.s_u = su;
                            out.push_back(std::move(g));
                        }
                    }
                }
            }
        }
    }
    return out;
}

TrialState build_trial_state(const NetworkConfig& cfg, Protocol protocol, std::uint64_t trial_seed,
                             int max_groups, const CrossGainOptions& cross)
{
    TrialState st;
    st.plan = plan_dimensions(protocol, cfg);
    if (!st.plan.feasible) {
        throw InvalidInput("infeasible dimension plan: " + st.plan.reason);
    }
    st.layout = generate_layout(cfg, derive_seed(trial_seed, {static_cast<std::uint64_t>(Stream::layout)}));
    const ChannelSet channels =
        sample_channels(st.layout, cfg, derive_seed(trial_seed, {static_cast<std::uint64_t>(Stream::channels)}));
    const PrecoderSet precoders = generate_precoders(
        st.plan, cfg,
        derive_seed(trial_seed, {static_cast<std::uint64_t>(Stream::precoders), static_cast<std::uint64_t>(protocol)}));
    st.h = precode_channels(channels, precoders);
    st.rx = compute_beamformers(protocol, st.h, st.plan);

    const GroupLimits limits = group_limits(st.plan, cfg);
    for (int n = 0; n < kCells; ++n) {
        st.pools.push_back(build_smc_pool(st.h, st.rx, n));
        auto skeletons = semi_orthogonal_groups(st.pools.back(), cfg.alpha, limits, max_groups, cfg.relays);
        st.groups.push_back(finalize_groups(std::move(skeletons), st.pools.back(), &st.dropped));
    }
    compute_cross_gains(st.groups, st.pools, st.h, protocol, cross);
    return st;
}

std::vector<CellProblem> cell_problems(const TrialState& state, const NetworkConfig& cfg)
{
    std::vector<CellProblem> out;
    for (const auto& cell : state.groups) {
        std::vector<GroupGains> gains;
        for (const auto& g : cell) {
            gains.push_back(group_gains(g));
        }
        out.push_back(make_cell_problem(std::move(gains), cfg));
    }
    return out;
}

std::array<PowerSolution, kCells> solve_cells(const std::vector<CellProblem>& problems,
                                              Algorithm algorithm, const NetworkConfig& cfg,
                                              std::uint64_t trial_seed, Protocol protocol,
                                              const SolverOptions& solver)
{
    std::array<PowerSolution, kCells> out;
    for (int n = 0; n < kCells; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        if (problems.at(cn).groups.empty()) {
            out[cn] = idle_solution(cfg);
        } else if (algorithm == Algorithm::esem) {
            out[cn] = solve_esem(problems[cn], solver);
        } else {
            out[cn] = solve_epa(problems[cn],
                                derive_seed(trial_seed, {static_cast<std::uint64_t>(Stream::epa),
                                                         static_cast<std::uint64_t>(protocol),
                                                         static_cast<std::uint64_t>(n)}));
        }
    }
    return out;
}

std::vector<TrialMetrics> run_trial(const NetworkConfig& cfg, const std::vector<Protocol>& protocols,
                                    const std::vector<Algorithm>& algorithms, std::uint64_t trial_seed,
                                    int max_groups, const SolverOptions& solver)
{
    std::vector<TrialMetrics> out;
    for (const auto protocol : protocols) {
        const TrialState st = build_trial_state(cfg, protocol, trial_seed, max_groups);
        const auto problems = cell_problems(st, cfg);
        for (const auto algorithm : algorithms) {
            const auto solutions = solve_cells(problems, algorithm, cfg, trial_seed, protocol, solver);
            TrialMetrics m = realized_metrics(solutions, st.groups, cfg);
            m.protocol = protocol;
            m.algorithm = algorithm;
            out.push_back(std::move(m));
        }
    }
    return out;
}

std::uint64_t trial_seed(std::uint64_t master, int grid_index, int trial)
{
    return derive_seed(master, {static_cast<std::uint64_t>(grid_index), static_cast<std::uint64_t>(trial)});
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::optional<int> grid_point, std::ostream* log)
{
    cfg.validate();
    ExperimentResult result;
    result.points = expand_grid(cfg);
    if (grid_point) {
        if (*grid_point < 0 || *grid_point >= static_cast<int>(result.points.size())) {
            throw ConfigError("grid point " + std::to_string(*grid_point) + " outside [0, " +
                              std::to_string(result.points.size()) + ")");
        }
    }

    struct Task {
        int grid = 0;
        int trial = 0;
        std::vector<Protocol> protocols;
    };
    std::vector<Task> tasks;
    for (const auto& p : result.points) {
        if (grid_point && p.index != *grid_point) {
            continue;
        }
        std::vector<Protocol> feasible;
        for (const auto protocol : cfg.protocols) {
            const DimensionPlan plan = plan_dimensions(protocol, p.network);
            if (plan.feasible) {
                feasible.push_back(protocol);
            } else {
                result.infeasible.push_back("grid point " + std::to_string(p.index) + ", " +
                                            std::string(to_string(protocol)) + ": " + plan.reason);
            }
        }
        if (feasible.empty()) {
            continue;
        }
        result.any_feasible = true;
        for (int t = 0; t < cfg.trials; ++t) {
            tasks.push_back({p.index, t, feasible});
        }
    }
    if (log != nullptr) {
        for (const auto& msg : result.infeasible) {
            *log << "infeasible: " << msg << '\n';
        }
    }

    std::vector<std::vector<TrialMetrics>> outputs(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& task = tasks[i];
            try {
                outputs[i] = run_trial(result.points[static_cast<std::size_t>(task.grid)].network,
                                       task.protocols, cfg.algorithms,
                                       trial_seed(cfg.seed, task.grid, task.trial), cfg.max_groups,
                                       cfg.solver);
            } catch (const Error& e) {
                errors[i] = "grid point " + std::to_string(task.grid) + ", trial " +
                            std::to_string(task.trial) + ": " + e.what();
            }
        }
    };
    unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(tasks.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i].empty()) {
            result.failures.push_back(errors[i]);
            if (log != nullptr) {
                *log << "trial skipped: " << errors[i] << '\n';
            }
            continue;
        }
        for (auto& m : outputs[i]) {
            result.rows.push_back({tasks[i].grid, tasks[i].trial, std::move(m)});
        }
    }
    return result;
}

namespace {

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (const double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_error(const std::vector<double>& v)
{
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean(v);
    double ss = 0.0;
    for (const double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double median(std::vector<double> v)
{
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

} // namespace

std::vector<Aggregate> aggregate(const ExperimentResult& result, const ExperimentConfig& cfg,
                                 bool include_nonconverged)
{
    std::vector<Aggregate> out;
    for (const auto& p : result.points) {
        for (const auto protocol : cfg.protocols) {
            for (const auto algorithm : cfg.algorithms) {
                Aggregate a;
                a.grid_index = p.index;
                a.protocol = protocol;
                a.algorithm = algorithm;
                std::vector<double> ase;
                std::vector<double> ese;
                std::vector<double> pt;
                std::vector<double> iters;
                for (const auto& row : result.rows) {
                    const TrialMetrics& m = row.metrics;
                    if (row.grid_index != p.index || m.protocol != protocol || m.algorithm != algorithm) {
                        continue;
                    }
                    ++a.trials_total;
                    int it = 0;
                    for (const auto& c : m.cells) {
                        it = std::max(it, c.iterations);
                    }
                    iters.push_back(it);
                    if (m.converged) {
                        ++a.converged;
                    } else if (!include_nonconverged) {
                        continue;
                    }
                    ase.push_back(m.ase_bps_hz);
                    ese.push_back(m.ese_bps_hz_j);
                    pt.push_back(m.p_total_w);
                }
                if (a.trials_total == 0) {
                    continue;
                }
                a.trials_used = static_cast<int>(ese.size());
                a.ase_mean = mean(ase);
                a.ase_se = std_error(ase);
                a.ese_mean = mean(ese);
                a.ese_se = std_error(ese);
                a.p_total_mean = mean(pt);
                a.p_total_se = std_error(pt);
                a.median_iterations = median(iters);
                out.push_back(a);
            }
        }
    }
    return out;
}

namespace {

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

constexpr const char* kResultHeader =
    "trial,protocol,algorithm,p_max_b_dbm,p_max_r_dbm,m,isd_km,s_r,s_u,cell,ase_bps_hz,ese_bps_hz_j,"
    "p_total_w,iterations,converged\n";

std::string point_fields(const GridPoint& p)
{
    return num(p.p_max_bs_dbm) + "," + num(p.p_max_rn_dbm) + "," + std::to_string(p.relays) + "," +
           num(p.isd_km) + "," + std::to_string(p.s_r) + "," + std::to_string(p.s_u);
}

struct Axis {
    const char* name;
    double (*value)(const GridPoint&);
    std::size_t size;
};

} // namespace

void write_outputs(const ExperimentResult& result, const ExperimentConfig& cfg,
                   const std::filesystem::path& dir, bool emit_plot_data)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    }

    auto main = open_out(dir / "results.csv");
    auto cells = open_out(dir / "results_cells.csv");
    main << kResultHeader;
    cells << kResultHeader;
    for (const auto& row : result.rows) {
        const GridPoint& p = result.points[static_cast<std::size_t>(row.grid_index)];
        const TrialMetrics& m = row.metrics;
        const std::string prefix = std::to_string(row.trial) + "," + std::string(to_string(m.protocol)) + "," +
                                   std::string(to_string(m.algorithm)) + "," + point_fields(p) + ",";
        int it = 0;
        for (int n = 0; n < kCells; ++n) {
            const CellMetrics& c = m.cells[static_cast<std::size_t>(n)];
            it = std::max(it, c.iterations);
            cells << prefix << n << "," << num(c.ase_bps_hz) << "," << num(c.ese_bps_hz_j) << ","
                  << num(c.p_total_w) << "," << c.iterations << "," << (c.converged ? 1 : 0) << "\n";
        }
        main << prefix << "avg," << num(m.ase_bps_hz) << "," << num(m.ese_bps_hz_j) << "," << num(m.p_total_w)
             << "," << it << "," << (m.converged ? 1 : 0) << "\n";
    }

    const auto aggs = aggregate(result, cfg, cfg.include_nonconverged);
    auto agg = open_out(dir / "aggregates.csv");
    agg << "protocol,algorithm,p_max_b_dbm,p_max_r_dbm,m,isd_km,s_r,s_u,trials_total,trials_used,converged,"
           "ase_mean,ase_se,ese_mean,ese_se,p_total_mean,p_total_se,median_iterations\n";
    for (const auto& a : aggs) {
        const GridPoint& p = result.points[static_cast<std::size_t>(a.grid_index)];
        agg << to_string(a.protocol) << "," << to_string(a.algorithm) << "," << point_fields(p) << ","
            << a.trials_total << "," << a.trials_used << "," << a.converged << "," << num(a.ase_mean) << ","
            << num(a.ase_se) << "," << num(a.ese_mean) << "," << num(a.ese_se) << "," << num(a.p_total_mean)
            << "," << num(a.p_total_se) << "," << num(a.median_iterations) << "\n";
    }

    json sidecar = json::parse(config_to_json(cfg));
    sidecar["resolved_seed"] = cfg.seed;
    sidecar["infeasible"] = result.infeasible;
    sidecar["failures"] = result.failures;
    open_out(dir / "config.json") << sidecar.dump(2) << "\n";

    if (!emit_plot_data) {
        return;
    }
    const std::vector<Axis> axes = {
        {"p_max_b_dbm", [](const GridPoint& p) { return p.p_max_bs_dbm; }, cfg.p_max_bs_dbm.size()},
        {"p_max_r_dbm", [](const GridPoint& p) { return p.p_max_rn_dbm; }, cfg.p_max_rn_dbm.size()},
        {"m", [](const GridPoint& p) { return static_cast<double>(p.relays); }, cfg.relays.size()},
        {"isd_km", [](const GridPoint& p) { return p.isd_km; }, cfg.isd_km.size()},
        {"s_r", [](const GridPoint& p) { return static_cast<double>(p.s_r); }, cfg.s_r.size()},
        {"s_u", [](const GridPoint& p) { return static_cast<double>(p.s_u); }, cfg.s_u.size()},
    };
    std::vector<const Axis*> swept;
    for (const auto& a : axes) {
        if (a.size > 1) {
            swept.push_back(&a);
        }
    }

    // Aggregates averaged over the axes a table does not show.
    auto write_table = [&](const std::vector<const Axis*>& shown) {
        std::string name = "plot";
        std::string header;
        for (const auto* a : shown) {
            name += std::string("_") + a->name;
            header += std::string(a->name) + ",";
        }
        auto out = open_out(dir / (name + ".csv"));
        out << header << "protocol,algorithm,ase_mean,ese_mean\n";
        std::map<std::tuple<std::vector<double>, int, int>, std::pair<std::vector<double>, std::vector<double>>>
            cells_by_key;
        for (const auto& a : aggs) {
            const GridPoint& p = result.points[static_cast<std::size_t>(a.grid_index)];
            std::vector<double> coords;
            for (const auto* ax : shown) {
                coords.push_back(ax->value(p));
            }
            auto& slot = cells_by_key[{coords, static_cast<int>(a.protocol), static_cast<int>(a.algorithm)}];
            slot.first.push_back(a.ase_mean);
            slot.second.push_back(a.ese_mean);
        }
        for (const auto& [key, vals] : cells_by_key) {
            for (const double c : std::get<0>(key)) {
                out << num(c) << ",";
            }
            out << to_string(static_cast<Protocol>(std::get<1>(key))) << ","
                << to_string(static_cast<Algorithm>(std::get<2>(key))) << "," << num(mean(vals.first)) << ","
                << num(mean(vals.second)) << "\n";
        }
    };
    for (std::size_t i = 0; i < swept.size(); ++i) {
        write_table({swept[i]});
        for (std::size_t k = i + 1; k < swept.size(); ++k) {
            write_table({swept[i], swept[k]});
        }
    }
}

} // namespace iaese
