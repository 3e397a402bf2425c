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

#include <array>
#include <string_view>
#include <vector>

#include "iaese/esem.hpp"
#include "iaese/network.hpp"
#include "iaese/protocol.hpp"
#include "iaese/scheduling.hpp"

namespace iaese {

enum class Algorithm { esem, epa };

std::string_view to_string(Algorithm algorithm);

/// Realized SINRs and rate of one served member (same order as SmcGroup::members).
struct MemberRealization {
    SmcKind kind = SmcKind::direct_t1;
    double sinr_t1 = 0.0;  ///< unused (0) for direct_t2
    double sinr_t2 = 0.0;  ///< unused (0) for direct_t1
    double rate = 0.0;
};

struct CellMetrics {
    double ase_bps_hz = 0.0;
    double ese_bps_hz_j = 0.0;
    double p_total_w = 0.0;
    int iterations = 0;
    bool converged = true;
    std::vector<MemberRealization> members;
};

struct TrialMetrics {
    Protocol protocol = Protocol::full_ia;
    Algorithm algorithm = Algorithm::esem;
    std::array<CellMetrics, kCells> cells;
    double ase_bps_hz = 0.0;   ///< mean over cells
    double ese_bps_hz_j = 0.0; ///< mean over cells
    double p_total_w = 0.0;    ///< mean over cells
    bool converged = true;     ///< all cells converged
};

/// Per-stream physical powers of one cell's selected group, indexed by the
/// ZF column of each transmitter.
struct StreamPowers {
    std::vector<double> bs_t1;
    std::vector<double> bs_t2;
    std::vector<std::vector<double>> rn;  ///< [m][column]
};

StreamPowers stream_powers(const SmcGroup& group, const PowerSolution& solution);

/// Solution of a cell with no usable group: nothing transmitted.
PowerSolution idle_solution(const NetworkConfig& cfg);

/// Recomputes every served member's SINR with the other cells' selected
/// groups as interferers and evaluates SE, power and ESE per cell.
TrialMetrics realized_metrics(const std::array<PowerSolution, kCells>& solutions,
                              const std::vector<std::vector<SmcGroup>>& groups,
                              const NetworkConfig& cfg);

} // namespace iaese
