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

#include "iaese/metrics.hpp"

#include "iaese/error.hpp"

#include <cmath>
#include <numeric>

namespace iaese {

std::string_view to_string(Algorithm algorithm)
{
    return algorithm == Algorithm::esem ? "esem" : "epa";
}

StreamPowers stream_powers(const SmcGroup& group, const PowerSolution& solution)
{
    StreamPowers out;
    out.bs_t1.assign(static_cast<std::size_t>(group.zf_bs_t1.cols()), 0.0);
    out.bs_t2.assign(static_cast<std::size_t>(group.zf_bs_t2.cols()), 0.0);
    for (const auto& zf : group.zf_rn) {
        out.rn.emplace_back(static_cast<std::size_t>(zf.cols()), 0.0);
    }
    std::size_t d1 = 0;
    std::size_t d2 = 0;
    std::size_t r = 0;
    const AllocatedPowers& p = solution.physical;
    for (const auto& s : group.members) {
        switch (s.kind) {
        case SmcKind::direct_t1:
            out.bs_t1.at(static_cast<std::size_t>(s.stream_t1)) = p.direct_t1.at(d1++);
            break;
        case SmcKind::direct_t2:
            out.bs_t2.at(static_cast<std::size_t>(s.stream_t2)) = p.direct_t2.at(d2++);
            break;
        case SmcKind::relay_pair:
            out.bs_t1.at(static_cast<std::size_t>(s.stream_t1)) = p.relay_bs.at(r);
            out.rn.at(static_cast<std::size_t>(s.rn)).at(static_cast<std::size_t>(s.stream_t2)) =
                p.relay_rn.at(r);
            ++r;
            break;
        }
    }
    return out;
}

PowerSolution idle_solution(const NetworkConfig& cfg)
{
    PowerSolution sol;
    sol.t = 1.0 / cfg.fixed_power_w();
    sol.converged = true;
    return sol;
}

namespace {

double dot(const std::vector<double>& gains, const std::vector<double>& powers)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < gains.size() && i < powers.size(); ++i) {
        acc += gains[i] * powers[i];
    }
    return acc;
}

double half_log_rate(double sinr) { return 0.5 * std::log2(1.0 + sinr); }

} // namespace

TrialMetrics realized_metrics(const std::array<PowerSolution, kCells>& solutions,
                              const std::vector<std::vector<SmcGroup>>& groups,
                              const NetworkConfig& cfg)
{
    if (groups.size() != kCells) {
        throw InvalidInput("realized_metrics: expected three cells of groups");
    }
    std::array<StreamPowers, kCells> powers;
    for (int n = 0; n < kCells; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        const int j = solutions[cn].selected_group;
        if (j >= 0) {
            powers[cn] = stream_powers(groups[cn].at(static_cast<std::size_t>(j)), solutions[cn]);
        }
    }

    const double noise = cfg.noise_power_w();
    const double gap = cfg.snr_gap();
    TrialMetrics out;

    for (int n = 0; n < kCells; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        const PowerSolution& sol = solutions[cn];
        CellMetrics& cell = out.cells[cn];
        cell.iterations = sol.iterations;
        cell.converged = sol.converged;

        double bs_power = 0.0;
        double rn_power = 0.0;
        if (sol.selected_group >= 0) {
            const SmcGroup& group = groups[cn].at(static_cast<std::size_t>(sol.selected_group));
            if (group.cross.size() != group.members.size()) {
                throw InvalidInput("realized_metrics: cross gains missing for cell " + std::to_string(n));
            }
            const AllocatedPowers& p = sol.physical;
            bs_power = p.bs_t1_sum() + p.bs_t2_sum();
            rn_power = std::accumulate(p.relay_rn.begin(), p.relay_rn.end(), 0.0);

            auto interference = [&](std::size_t i, bool phase1) {
                double acc = 0.0;
                for (int src = 0; src < kCells; ++src) {
                    const auto cs = static_cast<std::size_t>(src);
                    const int j = solutions[cs].selected_group;
                    if (src == n || j < 0) {
                        continue;
                    }
                    const auto& per_group = phase1 ? group.cross[i].t1[cs] : group.cross[i].t2[cs];
                    const SourceGains& g = per_group.at(static_cast<std::size_t>(j));
                    acc += dot(g.bs, phase1 ? powers[cs].bs_t1 : powers[cs].bs_t2);
                    if (!phase1) {
                        for (std::size_t m = 0; m < g.rn.size() && m < powers[cs].rn.size(); ++m) {
                            acc += dot(g.rn[m], powers[cs].rn[m]);
                        }
                    }
                }
                return acc;
            };
            auto sinr = [&](double w, double pw, double i) { return w * pw / (gap * (noise + i)); };

            std::size_t d1 = 0;
            std::size_t d2 = 0;
            std::size_t r = 0;
            for (std::size_t i = 0; i < group.members.size(); ++i) {
                const Smc& s = group.members[i];
                MemberRealization mr;
                mr.kind = s.kind;
                switch (s.kind) {
                case SmcKind::direct_t1:
                    mr.sinr_t1 = sinr(s.w_t1, p.direct_t1.at(d1++), interference(i, true));
                    mr.rate = half_log_rate(mr.sinr_t1);
                    break;
                case SmcKind::direct_t2:
                    mr.sinr_t2 = sinr(s.w_t2, p.direct_t2.at(d2++), interference(i, false));
                    mr.rate = half_log_rate(mr.sinr_t2);
                    break;
                case SmcKind::relay_pair:
                    mr.sinr_t1 = sinr(s.w_t1, p.relay_bs.at(r), interference(i, true));
                    mr.sinr_t2 = sinr(s.w_t2, p.relay_rn.at(r), interference(i, false));
                    ++r;
                    mr.rate = half_log_rate(std::min(mr.sinr_t1, mr.sinr_t2));
                    break;
                }
                cell.ase_bps_hz += mr.rate;
                cell.members.push_back(mr);
            }
        }
        cell.p_total_w = cfg.fixed_power_w() + 0.5 * (cfg.xi_bs * bs_power + cfg.xi_rn * rn_power);
        cell.ese_bps_hz_j = cell.ase_bps_hz / cell.p_total_w;

        out.ase_bps_hz += cell.ase_bps_hz;
        out.ese_bps_hz_j += cell.ese_bps_hz_j;
        out.p_total_w += cell.p_total_w;
        out.converged = out.converged && cell.converged;
    }
    out.ase_bps_hz /= kCells;
    out.ese_bps_hz_j /= kCells;
    out.p_total_w /= kCells;
    return out;
}

} // namespace iaese
