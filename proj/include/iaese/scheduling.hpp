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
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "iaese/linalg.hpp"
#include "iaese/network.hpp"
#include "iaese/protocol.hpp"

namespace iaese {

/// Rows with a smaller Euclidean norm are treated as zero channels and dropped.
inline constexpr double kMinRowNorm = 1e-12;

enum class RowKind { direct_t1, bs_rn_t1, direct_t2, rn_ue_t2 };

/// One row of an effective channel R^H * H~: a virtual MISO stream (SMC)
/// that a transmitter of `cell` may schedule.
struct SmcRow {
    RowKind kind = RowKind::direct_t1;
    int cell = 0;
    int ue = -1;   ///< receiving UE, -1 for BS->RN rows
    int rn = -1;   ///< receiving RN (bs_rn_t1) or transmitting RN (rn_ue_t2)
    int dim = 0;   ///< column of the receive beamformer that produced the row
    CRowVector h;  ///< row in the transmitter's precoded space
    CVector rx;    ///< the receive beamforming vector (that column)
    double norm = 0.0;
};

struct SmcPool {
    int cell = 0;
    std::vector<SmcRow> rows;
};

SmcPool build_smc_pool(const PrecodedChannels& h, const RxBfmSet& rx, int cell);

enum class SmcKind { direct_t1, direct_t2, relay_pair };

inline constexpr std::size_t kNoRow = std::numeric_limits<std::size_t>::max();

/// A scheduled stream of a group. Relay pairs reference both hops.
struct Smc {
    SmcKind kind = SmcKind::direct_t1;
    int cell = 0;
    int ue = -1;
    int rn = -1;                 ///< M(e) for relay pairs
    std::size_t row_t1 = kNoRow; ///< pool row served in phase 1 (BS-UE or BS-RN)
    std::size_t row_t2 = kNoRow; ///< pool row served in phase 2 (BS-UE or RN-UE)
    int stream_t1 = -1;          ///< column of the phase-1 BS ZF matrix
    int stream_t2 = -1;          ///< column of the phase-2 BS or RN ZF matrix
    double w_t1 = 0.0;           ///< effective power gain of the phase-1 hop
    double w_t2 = 0.0;           ///< effective power gain of the phase-2 hop
};

/// Interference gains from one foreign group, one entry per foreign stream.
struct SourceGains {
    std::vector<double> bs;
    std::vector<std::vector<double>> rn;  ///< [m][stream]
};

/// Cross-cell gains of one member: [source cell][source group].
struct MemberCrossGains {
    std::array<std::vector<SourceGains>, kCells> t1;
    std::array<std::vector<SourceGains>, kCells> t2;
};

/// One candidate SMC group of a cell. Members are ordered direct_t1 first,
/// then direct_t2, then relay pairs.
struct SmcGroup {
    int cell = 0;
    int id = 0;
    std::vector<Smc> members;
    std::vector<std::size_t> bs_t1_rows;               ///< stacking order of the BS phase-1 ZF
    std::vector<std::size_t> bs_t2_rows;
    std::vector<std::vector<std::size_t>> rn_rows;     ///< [m]

    CMatrix zf_bs_t1;
    CMatrix zf_bs_t2;
    std::vector<CMatrix> zf_rn;                        ///< [m]
    RVector gains_bs_t1;
    RVector gains_bs_t2;
    std::vector<RVector> gains_rn;

    std::vector<MemberCrossGains> cross;               ///< parallel to members

    std::size_t count(SmcKind kind) const;
};

/// Per-transmitter member caps of a group.
struct GroupLimits {
    int bs_t1 = 0;
    int bs_t2 = 0;
    int rn = 0;
};

GroupLimits group_limits(const DimensionPlan& plan, const NetworkConfig& cfg);

/// Default number of strongest-row seeds per cell.
inline constexpr int kDefaultMaxGroups = 8;

/// Greedy semi-orthogonal selection. Group g seeds each transmitter's
/// selection with its g-th strongest row; remaining rows are admitted in
/// decreasing norm order when their normalized correlation with every
/// admitted row of the same transmitter is below alpha. Relay pairs are
/// formed index-wise from an RN's admitted BS->RN and RN->UE rows; unpaired
/// rows are left out. Duplicate groups are removed.
std::vector<SmcGroup> semi_orthogonal_groups(const SmcPool& pool, double alpha,
                                             const GroupLimits& limits, int max_groups,
                                             int relays);

/// Computes the ZF matrices and own gains. Throws SingularGroup when a
/// transmitter's stacked rows are rank deficient.
SmcGroup finalize_group(SmcGroup skeleton, const SmcPool& pool);

/// Finalizes all skeletons, dropping singular ones; ids are renumbered to
/// positions. Diagnostics for dropped groups are appended to `dropped`.
std::vector<SmcGroup> finalize_groups(std::vector<SmcGroup> skeletons, const SmcPool& pool,
                                      std::vector<std::string>* dropped = nullptr);

struct CrossGainOptions {
    /// Store full-IA gains below kAlignedFloor * own gain as exactly zero.
    bool zero_aligned = true;
};

/// Gain ratio (foreign / own) under which full-IA leakage counts as nulled.
inline constexpr double kAlignedFloor = 1e-18;

/// Fills SmcGroup::cross for every group of every cell.
void compute_cross_gains(std::vector<std::vector<SmcGroup>>& groups,
                         const std::vector<SmcPool>& pools, const PrecodedChannels& h,
                         Protocol protocol, const CrossGainOptions& options = {});

} // namespace iaese
