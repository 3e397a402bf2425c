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
#include <string>
#include <string_view>
#include <vector>

#include "iaese/linalg.hpp"
#include "iaese/network.hpp"

namespace iaese {

enum class Protocol { full_ia, partial_ia };

std::string_view to_string(Protocol protocol);

/// Stream budgets of one protocol, plus the receive dimensions each receiver
/// keeps after beamforming.
struct DimensionPlan {
    Protocol protocol = Protocol::full_ia;
    int s_b_t1 = 0;  ///< BS streams in phase 1
    int s_b_t2 = 0;  ///< BS streams in phase 2
    int s_r = 0;
    int s_u = 0;
    int relays = 0;
    int rn_rx_t1 = 0;     ///< RxBFM columns at each RN, phase 1
    int ue_rx_t1 = 0;     ///< RxBFM columns at each UE, phase 1
    int ue_rx_t2_bs = 0;  ///< RxBFM columns at a UE served by its BS, phase 2
    int ue_rx_t2_rn = 0;  ///< RxBFM columns at a UE served by an RN, phase 2
    bool feasible = false;
    std::string reason;
};

DimensionPlan plan_dimensions(Protocol protocol, const NetworkConfig& cfg);

/// Random transmit precoders (TPs) with unit-norm columns.
struct PrecoderSet {
    std::vector<CMatrix> bs_t1;               ///< [cell], L*N_B x S^{B,T1}
    std::vector<CMatrix> bs_t2;               ///< [cell], L*N_B x S^{B,T2}
    std::vector<std::vector<CMatrix>> rn_t2;  ///< [cell][m], L*N_R x S^R
};

/// Maximum regeneration attempts per precoder before GenerationFailure.
inline constexpr int kPrecoderRetries = 8;

PrecoderSet generate_precoders(const DimensionPlan& plan, const NetworkConfig& cfg,
                               std::uint64_t seed);

/// Precoded channels H * A for every receiver and every (possibly foreign)
/// transmitter, both phases.
class PrecodedChannels {
public:
    PrecodedChannels() = default;
    PrecodedChannels(int relays, int ues);

    int relays() const { return relays_; }
    int ues() const { return ues_; }

    CMatrix& t1_bs_rn(int n, int m, int src) { return t1_bs_rn_[idx3(n, m, src, relays_)]; }
    const CMatrix& t1_bs_rn(int n, int m, int src) const { return t1_bs_rn_[idx3(n, m, src, relays_)]; }
    CMatrix& t1_bs_ue(int n, int k, int src) { return t1_bs_ue_[idx3(n, k, src, ues_)]; }
    const CMatrix& t1_bs_ue(int n, int k, int src) const { return t1_bs_ue_[idx3(n, k, src, ues_)]; }
    CMatrix& t2_bs_ue(int n, int k, int src) { return t2_bs_ue_[idx3(n, k, src, ues_)]; }
    const CMatrix& t2_bs_ue(int n, int k, int src) const { return t2_bs_ue_[idx3(n, k, src, ues_)]; }
    CMatrix& t2_rn_ue(int n, int k, int src, int m) { return t2_rn_ue_[idx4(n, k, src, m)]; }
    const CMatrix& t2_rn_ue(int n, int k, int src, int m) const { return t2_rn_ue_[idx4(n, k, src, m)]; }

private:
    static std::size_t idx3(int n, int i, int src, int count);
    std::size_t idx4(int n, int k, int src, int m) const;

    int relays_ = 0;
    int ues_ = 0;
    std::vector<CMatrix> t1_bs_rn_;
    std::vector<CMatrix> t1_bs_ue_;
    std::vector<CMatrix> t2_bs_ue_;
    std::vector<CMatrix> t2_rn_ue_;
};

/// Throws InvalidInput on any dimension disagreement.
PrecodedChannels precode_channels(const ChannelSet& channels, const PrecoderSet& precoders);

/// Phase-2 candidate transmitter: 0 is the serving BS, m + 1 is RN m.
inline constexpr int kBsCandidate = 0;
inline constexpr int rn_candidate(int m) { return m + 1; }

struct Phase1Beamformers {
    std::vector<std::vector<CMatrix>> rn;  ///< [cell][m]
    std::vector<std::vector<CMatrix>> ue;  ///< [cell][k]
};

/// Receive beamformers of every RN and UE.
struct RxBfmSet {
    Phase1Beamformers t1;
    std::vector<std::vector<std::vector<CMatrix>>> ue_t2;  ///< [cell][k][candidate]
};

/// Interference seen by RN m (or UE k) of `cell` in phase 1 under full-IA:
/// the two other BSs' precoded channels side by side.
CMatrix phase1_rn_interference(const PrecodedChannels& h, int cell, int m);
CMatrix phase1_ue_interference(const PrecodedChannels& h, int cell, int k);

/// Interference concatenation of UE k of `cell` in phase 2, excluding the
/// candidate transmitter. Blocks are ordered BSs first, then RNs by cell and
/// index. Throws UnknownTransmitter for an invalid candidate.
CMatrix phase2_interference(Protocol protocol, const PrecodedChannels& h, int cell, int k,
                            int candidate);

Phase1Beamformers rx_bfm_phase1(Protocol protocol, const PrecodedChannels& h,
                                const DimensionPlan& plan);

CMatrix rx_bfm_phase2(Protocol protocol, const PrecodedChannels& h, const DimensionPlan& plan,
                      int cell, int k, int candidate);

/// Phase 1 for every receiver plus phase 2 for every UE and all 1 + M candidates.
RxBfmSet compute_beamformers(Protocol protocol, const PrecodedChannels& h,
                             const DimensionPlan& plan);

} // namespace iaese
