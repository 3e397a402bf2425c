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

#include "iaese/protocol.hpp"

#include "iaese/error.hpp"
#include "iaese/random.hpp"

#include <algorithm>
#include <cmath>

namespace iaese {

std::string_view to_string(Protocol protocol)
{
    return protocol == Protocol::full_ia ? "full" : "partial";
}

namespace {

int floor_div(int num, int den)
{
    return static_cast<int>(std::floor(static_cast<double>(num) / static_cast<double>(den)));
}

void mark_infeasible(DimensionPlan& plan, const std::string& why)
{
    if (plan.feasible) {
        plan.feasible = false;
        plan.reason = why;
    }
}

} // namespace

DimensionPlan plan_dimensions(Protocol protocol, const NetworkConfig& cfg)
{
    cfg.validate();
    const int l = cfg.subcarrier_blocks;
    const int m = cfg.relays;
    const int sr = cfg.s_r;
    const int su = cfg.s_u;
    const int tx_b = l * cfg.bs_antennas;
    const int rx_r = l * cfg.rn_antennas;
    const int rx_u = l * cfg.ue_antennas;

    DimensionPlan plan;
    plan.protocol = protocol;
    plan.s_r = sr;
    plan.s_u = su;
    plan.relays = m;
    plan.feasible = true;

    if (protocol == Protocol::full_ia) {
        plan.s_b_t1 = std::min(floor_div(std::min(rx_r - sr, rx_u - su), 2), tx_b);
        if (m > 0) {
            plan.s_b_t2 = std::min({floor_div(rx_u - su - 3 * m * sr, 2),
                                    floor_div(rx_u - su - (3 * m - 1) * sr, 3), tx_b});
        } else {
            // Without relays only the other two BSs interfere in phase 2.
            plan.s_b_t2 = std::min(floor_div(rx_u - su, 2), tx_b);
        }
        plan.rn_rx_t1 = rx_r - 2 * plan.s_b_t1;
        plan.ue_rx_t1 = rx_u - 2 * plan.s_b_t1;
        plan.ue_rx_t2_bs = rx_u - (2 * plan.s_b_t2 + 3 * m * sr);
        plan.ue_rx_t2_rn = m > 0 ? std::min(sr, rx_u - (3 * plan.s_b_t2 + (3 * m - 1) * sr)) : 0;
        if (m > 0 && !(rx_u - (3 * plan.s_b_t2 + 3 * m * sr) - sr > sr)) {
            mark_infeasible(plan, "relay-served UEs cannot null all co-channel interference");
        }
    } else {
        plan.s_b_t1 = tx_b;
        plan.s_b_t2 = std::min(rx_u - su - (m - 1) * sr, tx_b);
        plan.rn_rx_t1 = sr;
        plan.ue_rx_t1 = su;
        plan.ue_rx_t2_bs = rx_u - m * sr;
        plan.ue_rx_t2_rn = m > 0 ? std::min(sr, rx_u - (plan.s_b_t2 + (m - 1) * sr)) : 0;
    }

    if (plan.s_b_t1 < 1) {
        mark_infeasible(plan, "no phase-1 BS transmit dimension left");
    }
    if (plan.s_b_t2 < 1) {
        mark_infeasible(plan, "no phase-2 BS transmit dimension left");
    }
    if (plan.rn_rx_t1 < 0 || plan.ue_rx_t1 < 0 || plan.ue_rx_t2_bs < 0 || plan.ue_rx_t2_rn < 0) {
        mark_infeasible(plan, "negative receive dimension budget");
    }
    if (plan.ue_rx_t1 < su || plan.ue_rx_t2_bs < su || (m > 0 && plan.rn_rx_t1 < sr)) {
        mark_infeasible(plan, "guaranteed receive dimensions not met");
    }
    return plan;
}

namespace {

CMatrix random_precoder(Rng& rng, int rows, int cols)
{
    for (int attempt = 0; attempt < kPrecoderRetries; ++attempt) {
        CMatrix a = complex_normal_matrix(rng, rows, cols);
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            a.col(j).normalize();
        }
        if (cols == 0 || numerical_rank(ordered_svd(a).s) == static_cast<std::size_t>(cols)) {
            return a;
        }
    }
    throw GenerationFailure("generate_precoders: persistent rank deficiency");
}

} // namespace

PrecoderSet generate_precoders(const DimensionPlan& plan, const NetworkConfig& cfg,
                               std::uint64_t seed)
{
    if (!plan.feasible) {
        throw InvalidInput("generate_precoders: infeasible dimension plan (" + plan.reason + ")");
    }
    const int tx_b = cfg.subcarrier_blocks * cfg.bs_antennas;
    const int tx_r = cfg.subcarrier_blocks * cfg.rn_antennas;
    Rng rng(seed);

    PrecoderSet out;
    out.rn_t2.resize(kCells);
    for (int n = 0; n < kCells; ++n) {
        out.bs_t1.push_back(random_precoder(rng, tx_b, plan.s_b_t1));
        out.bs_t2.push_back(random_precoder(rng, tx_b, plan.s_b_t2));
        for (int m = 0; m < cfg.relays; ++m) {
            out.rn_t2[static_cast<std::size_t>(n)].push_back(random_precoder(rng, tx_r, plan.s_r));
        }
    }
    return out;
}

PrecodedChannels::PrecodedChannels(int relays, int ues)
    : relays_(relays), ues_(ues),
      t1_bs_rn_(static_cast<std::size_t>(kCells * relays * kCells)),
      t1_bs_ue_(static_cast<std::size_t>(kCells * ues * kCells)),
      t2_bs_ue_(static_cast<std::size_t>(kCells * ues * kCells)),
      t2_rn_ue_(static_cast<std::size_t>(kCells * ues * kCells * relays))
{
}

std::size_t PrecodedChannels::idx3(int n, int i, int src, int count)
{
    return static_cast<std::size_t>((n * count + i) * kCells + src);
}

std::size_t PrecodedChannels::idx4(int n, int k, int src, int m) const
{
    return static_cast<std::size_t>(((n * ues_ + k) * kCells + src) * relays_ + m);
}

PrecodedChannels precode_channels(const ChannelSet& channels, const PrecoderSet& precoders)
{
    const int relays = channels.relays();
    const int ues = channels.ues();
    if (precoders.bs_t1.size() != kCells || precoders.bs_t2.size() != kCells ||
        precoders.rn_t2.size() != kCells) {
        throw InvalidInput("precode_channels: precoder set does not cover three cells");
    }
    for (const auto& rns : precoders.rn_t2) {
        if (static_cast<int>(rns.size()) != relays) {
            throw InvalidInput("precode_channels: RN precoder count differs from channel set");
        }
    }

    PrecodedChannels out(relays, ues);
    for (int n = 0; n < kCells; ++n) {
        for (int src = 0; src < kCells; ++src) {
            const auto s = static_cast<std::size_t>(src);
            for (int m = 0; m < relays; ++m) {
                out.t1_bs_rn(n, m, src) = channels.bs_rn(n, m, src).times(precoders.bs_t1[s]);
            }
            for (int k = 0; k < ues; ++k) {
                out.t1_bs_ue(n, k, src) = channels.bs_ue(n, k, src).times(precoders.bs_t1[s]);
                out.t2_bs_ue(n, k, src) = channels.bs_ue(n, k, src).times(precoders.bs_t2[s]);
                for (int m = 0; m < relays; ++m) {
                    out.t2_rn_ue(n, k, src, m) =
                        channels.rn_ue(n, k, src, m).times(precoders.rn_t2[s][static_cast<std::size_t>(m)]);
                }
            }
        }
    }
    return out;
}

namespace {

CMatrix hconcat(const std::vector<const CMatrix*>& blocks, Eigen::Index rows)
{
    Eigen::Index cols = 0;
    for (const auto* b : blocks) {
        cols += b->cols();
    }
    CMatrix out(rows, cols);
    Eigen::Index c0 = 0;
    for (const auto* b : blocks) {
        if (b->rows() != rows) {
            throw InvalidInput("interference concatenation: row count mismatch");
        }
        out.middleCols(c0, b->cols()) = *b;
        c0 += b->cols();
    }
    return out;
}

} // namespace

CMatrix phase1_rn_interference(const PrecodedChannels& h, int cell, int m)
{
    std::vector<const CMatrix*> blocks;
    for (int src = 0; src < kCells; ++src) {
        if (src != cell) {
            blocks.push_back(&h.t1_bs_rn(cell, m, src));
        }
    }
    return hconcat(blocks, blocks.front()->rows());
}

CMatrix phase1_ue_interference(const PrecodedChannels& h, int cell, int k)
{
    std::vector<const CMatrix*> blocks;
    for (int src = 0; src < kCells; ++src) {
        if (src != cell) {
            blocks.push_back(&h.t1_bs_ue(cell, k, src));
        }
    }
    return hconcat(blocks, blocks.front()->rows());
}

CMatrix phase2_interference(Protocol protocol, const PrecodedChannels& h, int cell, int k,
                            int candidate)
{
    const int relays = h.relays();
    if (candidate < 0 || candidate > relays) {
        throw UnknownTransmitter("phase2_interference: candidate " + std::to_string(candidate) +
                                 " outside {BS, RN 1.." + std::to_string(relays) + "}");
    }
    const bool bs_serves = candidate == kBsCandidate;
    const int serving_rn = candidate - 1;

    std::vector<const CMatrix*> blocks;
    for (int src = 0; src < kCells; ++src) {
        const bool own = src == cell;
        const bool include = protocol == Protocol::full_ia ? (!own || !bs_serves) : (own && !bs_serves);
        if (include) {
            blocks.push_back(&h.t2_bs_ue(cell, k, src));
        }
    }
    for (int src = 0; src < kCells; ++src) {
        const bool own = src == cell;
        if (protocol == Protocol::partial_ia && !own) {
            continue;
        }
        for (int m = 0; m < relays; ++m) {
            if (own && m == serving_rn) {
                continue;
            }
            blocks.push_back(&h.t2_rn_ue(cell, k, src, m));
        }
    }
    const Eigen::Index rows = h.t2_bs_ue(cell, k, cell).rows();
    return hconcat(blocks, rows);
}

Phase1Beamformers rx_bfm_phase1(Protocol protocol, const PrecodedChannels& h,
                                const DimensionPlan& plan)
{
    if (!plan.feasible) {
        throw InvalidInput("rx_bfm_phase1: infeasible dimension plan");
    }
    Phase1Beamformers out;
    out.rn.resize(kCells);
    out.ue.resize(kCells);
    for (int n = 0; n < kCells; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        for (int m = 0; m < h.relays(); ++m) {
            if (protocol == Protocol::full_ia) {
                out.rn[cn].push_back(left_nullspace_basis(phase1_rn_interference(h, n, m),
                                                          static_cast<std::size_t>(plan.rn_rx_t1)));
            } else {
                out.rn[cn].push_back(dominant_left_singular_vectors(
                    h.t1_bs_rn(n, m, n), static_cast<std::size_t>(plan.rn_rx_t1)));
            }
        }
        for (int k = 0; k < h.ues(); ++k) {
            if (protocol == Protocol::full_ia) {
                out.ue[cn].push_back(left_nullspace_basis(phase1_ue_interference(h, n, k),
                                                          static_cast<std::size_t>(plan.ue_rx_t1)));
            } else {
                out.ue[cn].push_back(dominant_left_singular_vectors(
                    h.t1_bs_ue(n, k, n), static_cast<std::size_t>(plan.ue_rx_t1)));
            }
        }
    }
    return out;
}

CMatrix rx_bfm_phase2(Protocol protocol, const PrecodedChannels& h, const DimensionPlan& plan,
                      int cell, int k, int candidate)
{
    if (!plan.feasible) {
        throw InvalidInput("rx_bfm_phase2: infeasible dimension plan");
    }
    const CMatrix interference = phase2_interference(protocol, h, cell, k, candidate);
    const int dims = candidate == kBsCandidate ? plan.ue_rx_t2_bs : plan.ue_rx_t2_rn;
    return left_nullspace_basis(interference, static_cast<std::size_t>(dims));
}

RxBfmSet compute_beamformers(Protocol protocol, const PrecodedChannels& h,
                             const DimensionPlan& plan)
{
    RxBfmSet out;
    out.t1 = rx_bfm_phase1(protocol, h, plan);
    out.ue_t2.resize(kCells);
    for (int n = 0; n < kCells; ++n) {
        auto& cell = out.ue_t2[static_cast<std::size_t>(n)];
        cell.resize(static_cast<std::size_t>(h.ues()));
        for (int k = 0; k < h.ues(); ++k) {
            for (int c = 0; c <= h.relays(); ++c) {
                cell[static_cast<std::size_t>(k)].push_back(rx_bfm_phase2(protocol, h, plan, n, k, c));
            }
        }
    }
    return out;
}

} // namespace iaese
