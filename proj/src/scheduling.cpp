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

#include "iaese/scheduling.hpp"

#include "iaese/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>

namespace iaese {

namespace {

void append_rows(SmcPool& pool, RowKind kind, int ue, int rn, const CMatrix& r, const CMatrix& h)
{
    if (r.cols() == 0 || h.cols() == 0) {
        return;
    }
    const CMatrix eff = r.adjoint() * h;
    for (Eigen::Index i = 0; i < eff.rows(); ++i) {
        SmcRow row;
        row.kind = kind;
        row.cell = pool.cell;
        row.ue = ue;
        row.rn = rn;
        row.dim = static_cast<int>(i);
        row.h = eff.row(i);
        row.rx = r.col(i);
        row.norm = row.h.norm();
        if (row.norm >= kMinRowNorm) {
            pool.rows.push_back(std::move(row));
        }
    }
}

} // namespace

SmcPool build_smc_pool(const PrecodedChannels& h, const RxBfmSet& rx, int cell)
{
    const auto cn = static_cast<std::size_t>(cell);
    SmcPool pool;
    pool.cell = cell;
    for (int k = 0; k < h.ues(); ++k) {
        append_rows(pool, RowKind::direct_t1, k, -1, rx.t1.ue[cn][static_cast<std::size_t>(k)],
                    h.t1_bs_ue(cell, k, cell));
    }
    for (int m = 0; m < h.relays(); ++m) {
        append_rows(pool, RowKind::bs_rn_t1, -1, m, rx.t1.rn[cn][static_cast<std::size_t>(m)],
                    h.t1_bs_rn(cell, m, cell));
    }
    for (int k = 0; k < h.ues(); ++k) {
        const auto& candidates = rx.ue_t2[cn][static_cast<std::size_t>(k)];
        append_rows(pool, RowKind::direct_t2, k, -1, candidates[kBsCandidate], h.t2_bs_ue(cell, k, cell));
        for (int m = 0; m < h.relays(); ++m) {
            append_rows(pool, RowKind::rn_ue_t2, k, m,
                        candidates[static_cast<std::size_t>(rn_candidate(m))],
                        h.t2_rn_ue(cell, k, cell, m));
        }
    }
    return pool;
}

std::size_t SmcGroup::count(SmcKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(members.begin(), members.end(), [kind](const Smc& s) { return s.kind == kind; }));
}

GroupLimits group_limits(const DimensionPlan& plan, const NetworkConfig& cfg)
{
    const int l = cfg.subcarrier_blocks;
    const int ue_dims = cfg.ues * l * cfg.ue_antennas;
    return {std::min(plan.s_b_t1, ue_dims + cfg.relays * l * cfg.rn_antennas),
            std::min(plan.s_b_t2, ue_dims), std::min(plan.s_r, ue_dims)};
}

namespace {

double correlation(const SmcRow& a, const SmcRow& b)
{
    return std::abs(a.h.dot(b.h)) / (a.norm * b.norm);
}

// Rows of one transmit space in decreasing norm order; ties by (ue, rn, dim).
std::vector<std::size_t> ordered_rows(const SmcPool& pool, const std::function<bool(const SmcRow&)>& keep)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pool.rows.size(); ++i) {
        if (keep(pool.rows[i])) {
            out.push_back(i);
        }
    }
    std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
        const SmcRow& ra = pool.rows[a];
        const SmcRow& rb = pool.rows[b];
        if (ra.norm != rb.norm) {
            return ra.norm > rb.norm;
        }
        return std::tie(ra.ue, ra.rn, ra.dim) < std::tie(rb.ue, rb.rn, rb.dim);
    });
    return out;
}

std::vector<std::size_t> greedy_select(const SmcPool& pool, const std::vector<std::size_t>& order,
                                       std::size_t seed_pos, double alpha, int limit,
                                       const std::function<bool(const SmcRow&)>& admissible,
                                       const std::function<void(const SmcRow&)>& on_admit)
{
    std::vector<std::size_t> admitted;
    if (limit <= 0 || order.empty()) {
        return admitted;
    }
    auto try_admit = [&](std::size_t idx) {
        const SmcRow& row = pool.rows[idx];
        if (!admissible(row)) {
            return;
        }
        for (const auto a : admitted) {
            if (correlation(pool.rows[a], row) >= alpha) {
                return;
            }
        }
        admitted.push_back(idx);
        on_admit(row);
    };

    try_admit(order[seed_pos % order.size()]);
    for (const auto idx : order) {
        if (static_cast<int>(admitted.size()) >= limit) {
            break;
        }
        if (std::find(admitted.begin(), admitted.end(), idx) == admitted.end()) {
            try_admit(idx);
        }
    }
    return admitted;
}

} // namespace

std::vector<SmcGroup> semi_orthogonal_groups(const SmcPool& pool, double alpha,
                                             const GroupLimits& limits, int max_groups,
                                             int relays)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidInput("semi_orthogonal_groups: alpha must lie in (0, 1)");
    }
    std::vector<SmcGroup> groups;
    if (pool.rows.empty() || max_groups <= 0) {
        return groups;
    }

    const auto t1_order = ordered_rows(pool, [](const SmcRow& r) {
        return r.kind == RowKind::direct_t1 || r.kind == RowKind::bs_rn_t1;
    });
    const auto t2_order = ordered_rows(pool, [](const SmcRow& r) { return r.kind == RowKind::direct_t2; });
    std::vector<std::vector<std::size_t>> rn_order;
    for (int m = 0; m < relays; ++m) {
        rn_order.push_back(ordered_rows(
            pool, [m](const SmcRow& r) { return r.kind == RowKind::rn_ue_t2 && r.rn == m; }));
    }

    std::size_t seeds = std::max(t1_order.size(), t2_order.size());
    for (const auto& o : rn_order) {
        seeds = std::max(seeds, o.size());
    }
    seeds = std::min(seeds, static_cast<std::size_t>(max_groups));

    const auto any = [](const SmcRow&) { return true; };
    const auto ignore = [](const SmcRow&) {};
    std::set<std::tuple<std::vector<std::size_t>, std::vector<std::size_t>,
                        std::vector<std::vector<std::size_t>>>>
        seen;

    for (std::size_t g = 0; g < seeds; ++g) {
        // RN hops first: they bound how many BS->RN rows are worth admitting.
        std::vector<std::vector<std::size_t>> rn_rows(static_cast<std::size_t>(relays));
        for (int m = 0; m < relays; ++m) {
            rn_rows[static_cast<std::size_t>(m)] =
                greedy_select(pool, rn_order[static_cast<std::size_t>(m)], g, alpha, limits.rn, any, ignore);
        }

        std::vector<int> feeds(static_cast<std::size_t>(relays), 0);
        const auto admissible_t1 = [&](const SmcRow& r) {
            if (r.kind != RowKind::bs_rn_t1) {
                return true;
            }
            const auto m = static_cast<std::size_t>(r.rn);
            return static_cast<std::size_t>(feeds[m]) < rn_rows[m].size();
        };
        const auto count_feed = [&](const SmcRow& r) {
            if (r.kind == RowKind::bs_rn_t1) {
                ++feeds[static_cast<std::size_t>(r.rn)];
            }
        };
        auto t1_rows = greedy_select(pool, t1_order, g, alpha, limits.bs_t1, admissible_t1, count_feed);
        auto t2_rows = greedy_select(pool, t2_order, g, alpha, limits.bs_t2, any, ignore);

        for (int m = 0; m < relays; ++m) {
            rn_rows[static_cast<std::size_t>(m)].resize(static_cast<std::size_t>(feeds[static_cast<std::size_t>(m)]));
        }

        auto key = std::make_tuple(t1_rows, t2_rows, rn_rows);
        std::sort(std::get<0>(key).begin(), std::get<0>(key).end());
        std::sort(std::get<1>(key).begin(), std::get<1>(key).end());
        if (!seen.insert(key).second) {
            continue;
        }

        SmcGroup group;
        group.cell = pool.cell;
        group.id = static_cast<int>(groups.size());
        group.bs_t1_rows = t1_rows;
        group.bs_t2_rows = t2_rows;
        group.rn_rows = rn_rows;

        for (const auto idx : t1_rows) {
            const SmcRow& r = pool.rows[idx];
            if (r.kind == RowKind::direct_t1) {
                group.members.push_back({SmcKind::direct_t1, pool.cell, r.ue, -1, idx, kNoRow});
            }
        }
        for (const auto idx : t2_rows) {
            group.members.push_back({SmcKind::direct_t2, pool.cell, pool.rows[idx].ue, -1, kNoRow, idx});
        }
        for (int m = 0; m < relays; ++m) {
            std::size_t pair = 0;
            for (const auto idx : t1_rows) {
                const SmcRow& r = pool.rows[idx];
                if (r.kind == RowKind::bs_rn_t1 && r.rn == m) {
                    const std::size_t hop2 = rn_rows[static_cast<std::size_t>(m)][pair++];
                    group.members.push_back(
                        {SmcKind::relay_pair, pool.cell, pool.rows[hop2].ue, m, idx, hop2});
                }
            }
        }
        if (!group.members.empty()) {
            groups.push_back(std::move(group));
        }
    }
    return groups;
}

namespace {

CMatrix stack_rows(const SmcPool& pool, const std::vector<std::size_t>& rows)
{
    const Eigen::Index cols = pool.rows[rows.front()].h.size();
    CMatrix out(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = pool.rows[rows[i]].h;
    }
    return out;
}

int position(const std::vector<std::size_t>& rows, std::size_t idx)
{
    const auto it = std::find(rows.begin(), rows.end(), idx);
    return it == rows.end() ? -1 : static_cast<int>(it - rows.begin());
}

} // namespace

SmcGroup finalize_group(SmcGroup group, const SmcPool& pool)
{
    if (!group.bs_t1_rows.empty()) {
        auto zf = zf_right_inverse(stack_rows(pool, group.bs_t1_rows));
        group.zf_bs_t1 = std::move(zf.t);
        group.gains_bs_t1 = std::move(zf.gains);
    }
    if (!group.bs_t2_rows.empty()) {
        auto zf = zf_right_inverse(stack_rows(pool, group.bs_t2_rows));
        group.zf_bs_t2 = std::move(zf.t);
        group.gains_bs_t2 = std::move(zf.gains);
    }
    group.zf_rn.assign(group.rn_rows.size(), CMatrix());
    group.gains_rn.assign(group.rn_rows.size(), RVector());
    for (std::size_t m = 0; m < group.rn_rows.size(); ++m) {
        if (!group.rn_rows[m].empty()) {
            auto zf = zf_right_inverse(stack_rows(pool, group.rn_rows[m]));
            group.zf_rn[m] = std::move(zf.t);
            group.gains_rn[m] = std::move(zf.gains);
        }
    }

    for (auto& s : group.members) {
        switch (s.kind) {
        case SmcKind::direct_t1:
            s.stream_t1 = position(group.bs_t1_rows, s.row_t1);
            s.w_t1 = group.gains_bs_t1(s.stream_t1);
            break;
        case SmcKind::direct_t2:
            s.stream_t2 = position(group.bs_t2_rows, s.row_t2);
            s.w_t2 = group.gains_bs_t2(s.stream_t2);
            break;
        case SmcKind::relay_pair: {
            const auto m = static_cast<std::size_t>(s.rn);
            s.stream_t1 = position(group.bs_t1_rows, s.row_t1);
            s.stream_t2 = position(group.rn_rows[m], s.row_t2);
            s.w_t1 = group.gains_bs_t1(s.stream_t1);
            s.w_t2 = group.gains_rn[m](s.stream_t2);
            break;
        }
        }
    }
    return group;
}

std::vector<SmcGroup> finalize_groups(std::vector<SmcGroup> skeletons, const SmcPool& pool,
                                      std::vector<std::string>* dropped)
{
    std::vector<SmcGroup> out;
    for (auto& g : skeletons) {
        try {
            out.push_back(finalize_group(std::move(g), pool));
            out.back().id = static_cast<int>(out.size() - 1);
        } catch (const SingularGroup& e) {
            if (dropped != nullptr) {
                dropped->push_back("cell " + std::to_string(pool.cell) + ": " + e.what());
            }
        }
    }
    return out;
}

namespace {

std::vector<double> gains_through(const CRowVector& v, const CMatrix& zf)
{
    std::vector<double> out(static_cast<std::size_t>(zf.cols()));
    if (zf.cols() == 0) {
        return out;
    }
    const CRowVector prod = v * zf;
    for (Eigen::Index c = 0; c < zf.cols(); ++c) {
        out[static_cast<std::size_t>(c)] = std::norm(prod(c));
    }
    return out;
}

void clamp_aligned(std::vector<double>& gains, double own)
{
    for (auto& g : gains) {
        if (g < kAlignedFloor * own) {
            g = 0.0;
        }
    }
}

} // namespace

void compute_cross_gains(std::vector<std::vector<SmcGroup>>& groups,
                         const std::vector<SmcPool>& pools, const PrecodedChannels& h,
                         Protocol protocol, const CrossGainOptions& options)
{
    if (groups.size() != kCells || pools.size() != kCells) {
        throw InvalidInput("compute_cross_gains: expected three cells");
    }
    const bool clamp = options.zero_aligned && protocol == Protocol::full_ia;
    const int relays = h.relays();

    for (int n = 0; n < kCells; ++n) {
        const SmcPool& pool = pools[static_cast<std::size_t>(n)];
        for (auto& group : groups[static_cast<std::size_t>(n)]) {
            group.cross.assign(group.members.size(), MemberCrossGains{});
            for (std::size_t i = 0; i < group.members.size(); ++i) {
                const Smc& s = group.members[i];
                auto& cross = group.cross[i];
                for (int src = 0; src < kCells; ++src) {
                    if (src == n) {
                        continue;
                    }
                    const auto cs = static_cast<std::size_t>(src);
                    const auto& foreign = groups[cs];

                    if (s.row_t1 != kNoRow) {
                        const SmcRow& row = pool.rows[s.row_t1];
                        const CMatrix& hs = row.kind == RowKind::direct_t1 ? h.t1_bs_ue(n, row.ue, src)
                                                                            : h.t1_bs_rn(n, row.rn, src);
                        const CRowVector v = row.rx.adjoint() * hs;
                        for (const auto& fg : foreign) {
                            SourceGains sg;
                            sg.bs = gains_through(v, fg.zf_bs_t1);
                            if (clamp) {
                                clamp_aligned(sg.bs, s.w_t1);
                            }
                            cross.t1[cs].push_back(std::move(sg));
                        }
                    }
                    if (s.row_t2 != kNoRow) {
                        const SmcRow& row = pool.rows[s.row_t2];
                        const CRowVector vb = row.rx.adjoint() * h.t2_bs_ue(n, row.ue, src);
                        std::vector<CRowVector> vr;
                        for (int m = 0; m < relays; ++m) {
                            vr.push_back(row.rx.adjoint() * h.t2_rn_ue(n, row.ue, src, m));
                        }
                        for (const auto& fg : foreign) {
                            SourceGains sg;
                            sg.bs = gains_through(vb, fg.zf_bs_t2);
                            if (clamp) {
                                clamp_aligned(sg.bs, s.w_t2);
                            }
                            for (int m = 0; m < relays; ++m) {
                                const auto cm = static_cast<std::size_t>(m);
                                sg.rn.push_back(cm < fg.zf_rn.size() ? gains_through(vr[cm], fg.zf_rn[cm])
                                                                     : std::vector<double>{});
                                if (clamp) {
                                    clamp_aligned(sg.rn.back(), s.w_t2);
                                }
                            }
                            cross.t2[cs].push_back(std::move(sg));
                        }
                    }
                }
            }
        }
    }
}

} // namespace iaese
