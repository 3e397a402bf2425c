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

#include "iaese/esem.hpp"

#include "iaese/error.hpp"
#include "iaese/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace iaese {

GroupGains group_gains(const SmcGroup& group)
{
    GroupGains g;
    for (const auto& s : group.members) {
        switch (s.kind) {
        case SmcKind::direct_t1:
            g.direct_t1.push_back(s.w_t1);
            break;
        case SmcKind::direct_t2:
            g.direct_t2.push_back(s.w_t2);
            break;
        case SmcKind::relay_pair:
            g.relays.push_back({s.w_t1, s.w_t2, s.rn});
            break;
        }
    }
    return g;
}

CellProblem make_cell_problem(std::vector<GroupGains> groups, const NetworkConfig& cfg)
{
    CellProblem p;
    p.groups = std::move(groups);
    p.relays = cfg.relays;
    p.p_max_bs_w = cfg.p_max_bs_w;
    p.p_max_rn_w = cfg.p_max_rn_w;
    p.noise_w = cfg.effective_noise_w();
    p.xi_bs = cfg.xi_bs;
    p.xi_rn = cfg.xi_rn;
    p.p_fixed_w = cfg.fixed_power_w();
    return p;
}

DualState initial_duals(const CellProblem& problem)
{
    DualState d;
    d.nu.assign(static_cast<std::size_t>(problem.relays), 0.0);
    d.mu = 1.0 / problem.p_fixed_w;
    return d;
}

namespace {

double price_t1(const DualState& d, const CellProblem& p) { return p.xi_bs * d.mu + 2.0 * d.lambda_t1; }
double price_t2(const DualState& d, const CellProblem& p) { return p.xi_bs * d.mu + 2.0 * d.lambda_t2; }
double price_rn(const DualState& d, const CellProblem& p, int m)
{
    return p.xi_rn * d.mu + 2.0 * d.nu.at(static_cast<std::size_t>(m));
}

double level(double price) { return 1.0 / (price * std::numbers::ln2); }

double half_log_rate(double snr) { return 0.5 * std::log2(1.0 + snr); }

bool in_domain(const DualState& d, const CellProblem& p)
{
    if (!(price_t1(d, p) > 0.0) || !(price_t2(d, p) > 0.0)) {
        return false;
    }
    for (int m = 0; m < p.relays; ++m) {
        if (!(price_rn(d, p, m) > 0.0)) {
            return false;
        }
    }
    return std::isfinite(d.mu);
}

} // namespace

double waterfill(double w, double price, double noise_w)
{
    if (!(price > 0.0) || !std::isfinite(price)) {
        throw DualDomainError("waterfill: nonpositive dual price " + std::to_string(price));
    }
    if (!(w > 0.0)) {
        return 0.0;
    }
    return std::max(0.0, level(price) - noise_w / w);
}

double waterfill_direct(double w, const DualState& duals, Phase phase, const CellProblem& problem)
{
    const double price = phase == Phase::t1 ? price_t1(duals, problem) : price_t2(duals, problem);
    return waterfill(w, price, problem.noise_w);
}

RelayPower waterfill_relay(double w_br, double w_ru, int rn, const DualState& duals,
                           const CellProblem& problem)
{
    RelayPower out;
    const double pb = waterfill(w_br, price_t1(duals, problem), problem.noise_w);
    const double pr = waterfill(w_ru, price_rn(duals, problem, rn), problem.noise_w);
    if (!(w_br > 0.0) || !(w_ru > 0.0)) {
        return out;
    }
    out.bs_uncoupled = pb;
    out.rn_uncoupled = pr;
    out.bs = std::min(w_ru / w_br * pr, pb);
    out.rn = std::min(w_br / w_ru * pb, pr);
    return out;
}

double AllocatedPowers::bs_t1_sum() const
{
    return std::accumulate(direct_t1.begin(), direct_t1.end(), 0.0) +
           std::accumulate(relay_bs.begin(), relay_bs.end(), 0.0);
}

double AllocatedPowers::bs_t2_sum() const
{
    return std::accumulate(direct_t2.begin(), direct_t2.end(), 0.0);
}

std::vector<double> AllocatedPowers::rn_sums(const GroupGains& g, int relays) const
{
    std::vector<double> out(static_cast<std::size_t>(relays), 0.0);
    for (std::size_t i = 0; i < g.relays.size() && i < relay_rn.size(); ++i) {
        out.at(static_cast<std::size_t>(g.relays[i].rn)) += relay_rn[i];
    }
    return out;
}

GroupScore score_group(const GroupGains& group, const DualState& duals, const CellProblem& problem)
{
    GroupScore s;
    s.responsive_rn.assign(static_cast<std::size_t>(problem.relays), 0.0);
    const double n0 = problem.noise_w;

    for (const double w : group.direct_t1) {
        const double p = waterfill_direct(w, duals, Phase::t1, problem);
        const double r = p > 0.0 ? half_log_rate(w * p / n0) : 0.0;
        s.powers.direct_t1.push_back(p);
        s.rates_t1.push_back(r);
        s.rate += r;
        if (p > 0.0) {
            s.responsive_t1 += level(price_t1(duals, problem));
        }
    }
    for (const double w : group.direct_t2) {
        const double p = waterfill_direct(w, duals, Phase::t2, problem);
        const double r = p > 0.0 ? half_log_rate(w * p / n0) : 0.0;
        s.powers.direct_t2.push_back(p);
        s.rates_t2.push_back(r);
        s.rate += r;
        if (p > 0.0) {
            s.responsive_t2 += level(price_t2(duals, problem));
        }
    }
    for (const auto& g : group.relays) {
        const RelayPower rp = waterfill_relay(g.w_br, g.w_ru, g.rn, duals, problem);
        const double r = rp.bs > 0.0 ? half_log_rate(g.w_br * rp.bs / n0) : 0.0;
        s.powers.relay_bs.push_back(rp.bs);
        s.powers.relay_rn.push_back(rp.rn);
        s.rates_relay.push_back(r);
        s.rate += r;
        if (rp.bs > 0.0) {
            if (rp.bs == rp.bs_uncoupled) {
                s.responsive_t1 += level(price_t1(duals, problem));
            } else {
                s.responsive_rn[static_cast<std::size_t>(g.rn)] += level(price_rn(duals, problem, g.rn));
            }
        }
    }
    return s;
}

double optimal_t(const GroupGains& group, const AllocatedPowers& powers, const CellProblem& problem)
{
    const auto rn = powers.rn_sums(group, problem.relays);
    const double rn_total = std::accumulate(rn.begin(), rn.end(), 0.0);
    const double bs_total = powers.bs_t1_sum() + powers.bs_t2_sum();
    return 1.0 / (problem.p_fixed_w + 0.5 * (problem.xi_bs * bs_total + problem.xi_rn * rn_total));
}

Selection select_group_and_t(const std::vector<GroupScore>& scores, const CellProblem& problem)
{
    if (scores.empty() || scores.size() != problem.groups.size()) {
        throw InvalidInput("select_group_and_t: one score per group required");
    }
    Selection sel;
    double best = 0.0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        const double t = optimal_t(problem.groups[j], scores[j].powers, problem);
        if (sel.group < 0 || t * scores[j].rate > best) {
            sel.group = static_cast<int>(j);
            sel.t = t;
            best = t * scores[j].rate;
        }
    }
    return sel;
}

double StepSchedule::at(int iteration, int halvings) const
{
    return std::ldexp(a / (b + iteration), -halvings);
}

namespace {

double power_dual_update(double dual, double price, double used, double cap, double responsive,
                         double step)
{
    double scale = std::max(responsive, cap);
    if (!(scale > 0.0)) {
        scale = used;
    }
    if (!(scale > 0.0)) {
        return dual;
    }
    return std::max(0.0, dual + step * 0.5 * price * (used - cap) / scale);
}

} // namespace

DualState subgradient_step(const DualState& duals, const GroupGains& group, const GroupScore& score,
                           const CellProblem& problem, double step)
{
    DualState next = duals;
    next.iteration = duals.iteration + 1;

    const double t = optimal_t(group, score.powers, problem);
    next.mu = duals.mu + step * (score.rate * t - duals.mu);

    next.lambda_t1 = power_dual_update(duals.lambda_t1, price_t1(duals, problem), score.powers.bs_t1_sum(),
                                       problem.p_max_bs_w, score.responsive_t1, step);
    next.lambda_t2 = power_dual_update(duals.lambda_t2, price_t2(duals, problem), score.powers.bs_t2_sum(),
                                       problem.p_max_bs_w, score.responsive_t2, step);
    const auto rn = score.powers.rn_sums(group, problem.relays);
    for (int m = 0; m < problem.relays; ++m) {
        const auto cm = static_cast<std::size_t>(m);
        next.nu[cm] = power_dual_update(duals.nu[cm], price_rn(duals, problem, m), rn[cm],
                                        problem.p_max_rn_w, score.responsive_rn[cm], step);
    }
    return next;
}

namespace {

double max_delta(const DualState& a, const DualState& b)
{
    double d = std::max({std::abs(a.mu - b.mu), std::abs(a.lambda_t1 - b.lambda_t1),
                         std::abs(a.lambda_t2 - b.lambda_t2)});
    for (std::size_t m = 0; m < a.nu.size(); ++m) {
        d = std::max(d, std::abs(a.nu[m] - b.nu[m]));
    }
    return d;
}

AllocatedPowers scaled(const AllocatedPowers& p, double c)
{
    AllocatedPowers out = p;
    for (auto* v : {&out.direct_t1, &out.direct_t2, &out.relay_bs, &out.relay_rn}) {
        for (auto& x : *v) {
            x *= c;
        }
    }
    return out;
}

std::vector<double> scaled(std::vector<double> v, double c)
{
    for (auto& x : v) {
        x *= c;
    }
    return v;
}

// The last dual iterate can leave a budget exceeded by the residual of the
// dual step. Scale each exceeded budget back onto its cap, re-couple the
// relay hops and recompute the rates.
void restore_caps(const GroupGains& group, GroupScore& s, const CellProblem& problem)
{
    auto shrink = [](double used, double cap) { return used > cap ? cap / used : 1.0; };
    const double a1 = shrink(s.powers.bs_t1_sum(), problem.p_max_bs_w);
    const double a2 = shrink(s.powers.bs_t2_sum(), problem.p_max_bs_w);
    const auto rn = s.powers.rn_sums(group, problem.relays);
    if (a1 == 1.0 && a2 == 1.0 &&
        std::all_of(rn.begin(), rn.end(), [&](double u) { return u <= problem.p_max_rn_w; })) {
        return;
    }
    const double n0 = problem.noise_w;
    s.rate = 0.0;
    for (std::size_t i = 0; i < group.direct_t1.size(); ++i) {
        s.powers.direct_t1[i] *= a1;
        s.rates_t1[i] = half_log_rate(group.direct_t1[i] * s.powers.direct_t1[i] / n0);
        s.rate += s.rates_t1[i];
    }
    for (std::size_t i = 0; i < group.direct_t2.size(); ++i) {
        s.powers.direct_t2[i] *= a2;
        s.rates_t2[i] = half_log_rate(group.direct_t2[i] * s.powers.direct_t2[i] / n0);
        s.rate += s.rates_t2[i];
    }
    for (std::size_t i = 0; i < group.relays.size(); ++i) {
        const auto& g = group.relays[i];
        const double b = shrink(rn[static_cast<std::size_t>(g.rn)], problem.p_max_rn_w);
        const double snr = std::min(g.w_br * s.powers.relay_bs[i] * a1, g.w_ru * s.powers.relay_rn[i] * b);
        s.powers.relay_bs[i] = snr > 0.0 ? snr / g.w_br : 0.0;
        s.powers.relay_rn[i] = snr > 0.0 ? snr / g.w_ru : 0.0;
        s.rates_relay[i] = half_log_rate(snr / n0);
        s.rate += s.rates_relay[i];
    }
}

PowerSolution assemble(const CellProblem& problem, int j, const GroupScore& score)
{
    PowerSolution sol;
    sol.selected_group = j;
    sol.t = optimal_t(problem.groups[static_cast<std::size_t>(j)], score.powers, problem);
    sol.s_tilde = sol.t;
    sol.physical = score.powers;
    sol.p_tilde = scaled(score.powers, sol.t);
    sol.c_tilde_t1 = scaled(score.rates_t1, sol.t);
    sol.c_tilde_t2 = scaled(score.rates_t2, sol.t);
    sol.c_tilde_relay = scaled(score.rates_relay, sol.t);
    sol.rate = score.rate;
    sol.objective = sol.t * score.rate;
    return sol;
}

} // namespace

PowerSolution solve_esem(const CellProblem& problem, const SolverOptions& options)
{
    if (problem.groups.empty()) {
        throw InvalidInput("solve_esem: cell has no SMC groups");
    }
    const std::size_t count = problem.groups.size();
    std::vector<DualState> duals(count, initial_duals(problem));
    std::vector<bool> settled(count, false);
    bool converged = false;
    int iterations = 0;

    for (int it = 0; it < options.max_iterations; ++it) {
        iterations = it + 1;
        bool stalled = false;
        for (std::size_t j = 0; j < count && !stalled; ++j) {
            if (settled[j]) {
                continue;
            }
            const GroupScore score = score_group(problem.groups[j], duals[j], problem);
            stalled = true;
            for (int h = 0; h <= options.max_halvings; ++h) {
                DualState next =
                    subgradient_step(duals[j], problem.groups[j], score, problem, options.steps.at(it, h));
                if (in_domain(next, problem)) {
                    settled[j] = max_delta(duals[j], next) < options.tolerance;
                    duals[j] = std::move(next);
                    stalled = false;
                    break;
                }
            }
        }
        if (stalled) {
            break;
        }
        if (std::all_of(settled.begin(), settled.end(), [](bool b) { return b; })) {
            converged = true;
            break;
        }
    }

    std::vector<GroupScore> scores;
    scores.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        scores.push_back(score_group(problem.groups[j], duals[j], problem));
        restore_caps(problem.groups[j], scores.back(), problem);
    }
    const Selection sel = select_group_and_t(scores, problem);
    PowerSolution sol = assemble(problem, sel.group, scores[static_cast<std::size_t>(sel.group)]);
    sol.duals = duals[static_cast<std::size_t>(sel.group)];
    sol.converged = converged;
    sol.iterations = iterations;
    return sol;
}

PowerSolution solve_epa(const CellProblem& problem, std::uint64_t seed)
{
    if (problem.groups.empty()) {
        throw InvalidInput("solve_epa: cell has no SMC groups");
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, problem.groups.size() - 1);
    const std::size_t j = pick(rng);
    const GroupGains& g = problem.groups[j];
    const double n0 = problem.noise_w;

    GroupScore s;
    const std::size_t t1_count = g.direct_t1.size() + g.relays.size();
    const double p_t1 = t1_count > 0 ? problem.p_max_bs_w / static_cast<double>(t1_count) : 0.0;
    const double p_t2 = g.direct_t2.empty() ? 0.0 : problem.p_max_bs_w / static_cast<double>(g.direct_t2.size());
    std::vector<int> per_rn(static_cast<std::size_t>(problem.relays), 0);
    for (const auto& r : g.relays) {
        ++per_rn.at(static_cast<std::size_t>(r.rn));
    }

    for (const double w : g.direct_t1) {
        s.powers.direct_t1.push_back(p_t1);
        s.rates_t1.push_back(half_log_rate(w * p_t1 / n0));
    }
    for (const double w : g.direct_t2) {
        s.powers.direct_t2.push_back(p_t2);
        s.rates_t2.push_back(half_log_rate(w * p_t2 / n0));
    }
    for (const auto& r : g.relays) {
        const double p_rn = problem.p_max_rn_w / per_rn[static_cast<std::size_t>(r.rn)];
        s.powers.relay_bs.push_back(p_t1);
        s.powers.relay_rn.push_back(p_rn);
        s.rates_relay.push_back(half_log_rate(std::min(r.w_br * p_t1, r.w_ru * p_rn) / n0));
    }
    for (const auto* v : {&s.rates_t1, &s.rates_t2, &s.rates_relay}) {
        s.rate += std::accumulate(v->begin(), v->end(), 0.0);
    }

    PowerSolution sol = assemble(problem, static_cast<int>(j), s);
    sol.duals = initial_duals(problem);
    sol.converged = true;
    return sol;
}

double perspective_rate(double s_tilde, double p_tilde, double w, double noise_w)
{
    if (!(s_tilde > 0.0)) {
        return 0.0;
    }
    return s_tilde * half_log_rate(w * p_tilde / (s_tilde * noise_w));
}

double perspective_relay_rate(double s_tilde, double p_bs, double p_rn, const RelayGains& g,
                              double noise_w)
{
    if (!(s_tilde > 0.0)) {
        return 0.0;
    }
    return s_tilde * half_log_rate(std::min(g.w_br * p_bs, g.w_ru * p_rn) / (s_tilde * noise_w));
}

double transformed_objective(const GroupGains& group, double s_tilde, const AllocatedPowers& p_tilde,
                             double noise_w)
{
    double total = 0.0;
    for (std::size_t i = 0; i < group.direct_t1.size(); ++i) {
        total += perspective_rate(s_tilde, p_tilde.direct_t1.at(i), group.direct_t1[i], noise_w);
    }
    for (std::size_t i = 0; i < group.direct_t2.size(); ++i) {
        total += perspective_rate(s_tilde, p_tilde.direct_t2.at(i), group.direct_t2[i], noise_w);
    }
    for (std::size_t i = 0; i < group.relays.size(); ++i) {
        total += perspective_relay_rate(s_tilde, p_tilde.relay_bs.at(i), p_tilde.relay_rn.at(i),
                                        group.relays[i], noise_w);
    }
    return total;
}

} // namespace iaese
