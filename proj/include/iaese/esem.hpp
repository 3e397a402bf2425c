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
#include <vector>

#include "iaese/network.hpp"
#include "iaese/scheduling.hpp"

namespace iaese {

/// Own-cell effective gains of one relay pair.
struct RelayGains {
    double w_br = 0.0;  ///< BS->RN hop
    double w_ru = 0.0;  ///< RN->UE hop
    int rn = 0;
};

/// Gains of one SMC group in the member order of SmcGroup.
struct GroupGains {
    std::vector<double> direct_t1;
    std::vector<double> direct_t2;
    std::vector<RelayGains> relays;
};

GroupGains group_gains(const SmcGroup& group);

/// Everything one cell's solver needs; no cross-cell quantities.
struct CellProblem {
    std::vector<GroupGains> groups;
    int relays = 0;
    double p_max_bs_w = 0.0;
    double p_max_rn_w = 0.0;
    double noise_w = 0.0;    ///< snr gap times N0*L*W
    double xi_bs = 0.0;
    double xi_rn = 0.0;
    double p_fixed_w = 0.0;  ///< P_C^B + M*P_C^R
};

CellProblem make_cell_problem(std::vector<GroupGains> groups, const NetworkConfig& cfg);

struct DualState {
    double lambda_t1 = 0.0;
    double lambda_t2 = 0.0;
    std::vector<double> nu;
    double mu = 0.0;
    int iteration = 0;
};

/// mu = 1/(P_C^B + M*P_C^R), all power duals zero.
DualState initial_duals(const CellProblem& problem);

enum class Phase { t1, t2 };

/// [1/(price*ln2) - noise/w]^+. Throws DualDomainError for a nonpositive price.
double waterfill(double w, double price, double noise_w);

double waterfill_direct(double w, const DualState& duals, Phase phase, const CellProblem& problem);

struct RelayPower {
    double bs = 0.0;
    double rn = 0.0;
    double bs_uncoupled = 0.0;
    double rn_uncoupled = 0.0;
};

/// Independent water-filling per hop followed by the min-coupling that
/// equalizes both hop SNRs.
RelayPower waterfill_relay(double w_br, double w_ru, int rn, const DualState& duals,
                           const CellProblem& problem);

/// Powers per unit of the time-sharing variable, i.e. physical watts for the
/// selected group.
struct AllocatedPowers {
    std::vector<double> direct_t1;
    std::vector<double> direct_t2;
    std::vector<double> relay_bs;
    std::vector<double> relay_rn;

    double bs_t1_sum() const;
    double bs_t2_sum() const;
    std::vector<double> rn_sums(const GroupGains& g, int relays) const;
};

struct GroupScore {
    double rate = 0.0;  ///< sum of 1/2 log2(1 + SNR) over members
    AllocatedPowers powers;
    std::vector<double> rates_t1;
    std::vector<double> rates_t2;
    std::vector<double> rates_relay;
    /// Water levels summed over streams whose power moves with the given
    /// dual; used to scale the dual step.
    double responsive_t1 = 0.0;
    double responsive_t2 = 0.0;
    std::vector<double> responsive_rn;
};

GroupScore score_group(const GroupGains& group, const DualState& duals, const CellProblem& problem);

/// 1/(P_C + (xi_B * BS power + xi_R * RN power)/2).
double optimal_t(const GroupGains& group, const AllocatedPowers& powers, const CellProblem& problem);

struct Selection {
    int group = -1;
    double t = 0.0;
};

/// Highest transformed objective t_j * rate_j wins, lowest index on ties.
Selection select_group_and_t(const std::vector<GroupScore>& scores, const CellProblem& problem);

/// s_i = a / (b + i).
struct StepSchedule {
    double a = 50.0;
    double b = 50.0;
    double at(int iteration, int halvings = 0) const;
};

DualState subgradient_step(const DualState& duals, const GroupGains& group, const GroupScore& score,
                           const CellProblem& problem, double step);

struct SolverOptions {
    StepSchedule steps;
    int max_iterations = 2000;
    double tolerance = 1e-8;
    int max_halvings = 20;
};

struct PowerSolution {
    int selected_group = -1;
    double t = 0.0;
    double s_tilde = 0.0;
    AllocatedPowers physical;
    AllocatedPowers p_tilde;
    std::vector<double> c_tilde_t1;
    std::vector<double> c_tilde_t2;
    std::vector<double> c_tilde_relay;
    double rate = 0.0;       ///< own-cell rate without OCI
    double objective = 0.0;  ///< t * rate
    DualState duals;
    bool converged = false;
    int iterations = 0;
};

/// Every group carries its own dual state and is iterated until its dual
/// deltas drop below the tolerance; the group argmax is taken on the result.
/// Throws InvalidInput when the problem has no groups.
PowerSolution solve_esem(const CellProblem& problem, const SolverOptions& options = {});

/// Random group, equal power split per transmitter and phase.
PowerSolution solve_epa(const CellProblem& problem, std::uint64_t seed);

/// s * 1/2 log2(1 + w p / (s noise)), zero at s = 0.
double perspective_rate(double s_tilde, double p_tilde, double w, double noise_w);

/// Perspective of the relay min-rate.
double perspective_relay_rate(double s_tilde, double p_bs, double p_rn, const RelayGains& g,
                              double noise_w);

/// Sum of the perspective rates of one group at transformed powers.
double transformed_objective(const GroupGains& group, double s_tilde, const AllocatedPowers& p_tilde,
                             double noise_w);

} // namespace iaese
