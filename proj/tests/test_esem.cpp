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

#include "doctest.h"

#include "iaese/error.hpp"
#include "iaese/esem.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace iaese;

namespace {

// Prices of exactly 1/ln2 on every budget: water level 1.
CellProblem unit_level_problem(double noise)
{
    CellProblem p;
    p.relays = 1;
    p.p_max_bs_w = 10.0;
    p.p_max_rn_w = 10.0;
    p.noise_w = noise;
    p.xi_bs = 1.0;
    p.xi_rn = 1.0;
    p.p_fixed_w = 1.0;
    return p;
}

DualState unit_level_duals()
{
    DualState d;
    d.mu = 1.0 / std::numbers::ln2;
    d.nu = {0.0};
    return d;
}

CellProblem reference_problem(std::vector<GroupGains> groups)
{
    return make_cell_problem(std::move(groups), NetworkConfig::defaults());
}

} // namespace

TEST_CASE("waterfill_direct closed form")
{
    const auto p = unit_level_problem(0.25);
    const auto d = unit_level_duals();
    CHECK(waterfill_direct(1.0, d, Phase::t1, p) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(waterfill_direct(0.25, d, Phase::t2, p) == 0.0);
    CHECK(waterfill_direct(0.1, d, Phase::t1, p) == 0.0);
    CHECK(waterfill_direct(0.0, d, Phase::t1, p) == 0.0);

    DualState bad = d;
    bad.mu = 0.0;
    CHECK_THROWS_AS(waterfill_direct(1.0, bad, Phase::t1, p), DualDomainError);
    bad.mu = -1.0;
    bad.lambda_t1 = 0.1;
    CHECK_THROWS_AS(waterfill_direct(1.0, bad, Phase::t1, p), DualDomainError);
}

TEST_CASE("waterfill_relay coupling")
{
    const auto p = unit_level_problem(0.25);
    const auto d = unit_level_duals();
    const auto r = waterfill_relay(4.0, 1.0, 0, d, p);
    CHECK(r.bs_uncoupled == doctest::Approx(0.9375).epsilon(1e-14));
    CHECK(r.rn_uncoupled == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r.bs == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(r.rn == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(4.0 * r.bs / 0.25 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(1.0 * r.rn / 0.25 == doctest::Approx(3.0).epsilon(1e-14));

    const auto sym = waterfill_relay(2.0, 2.0, 0, d, p);
    CHECK(sym.bs == sym.bs_uncoupled);
    CHECK(sym.rn == sym.rn_uncoupled);

    const auto dead = waterfill_relay(0.0, 2.0, 0, d, p);
    CHECK(dead.bs == 0.0);
    CHECK(dead.rn == 0.0);
}

TEST_CASE("score_group")
{
    const auto d = unit_level_duals();
    SUBCASE("no usable stream")
    {
        const auto p = unit_level_problem(0.25);
        GroupGains g;
        g.direct_t1 = {0.0};
        g.relays = {{0.0, 1.0, 0}};
        CHECK(score_group(g, d, p).rate == 0.0);
    }
    SUBCASE("direct stream at SNR 3")
    {
        // Water level 1, noise/w = 0.25 -> p = 0.75, SNR = 0.75 / 0.25 = 3.
        const auto p = unit_level_problem(0.25);
        GroupGains g;
        g.direct_t2 = {1.0};
        CHECK(score_group(g, d, p).rate == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("relay pair counted once")
    {
        const auto p = unit_level_problem(0.25);
        GroupGains g;
        g.relays = {{4.0, 1.0, 0}};
        const auto s = score_group(g, d, p);
        CHECK(s.rate == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(s.rates_relay.size() == 1);
    }
}

TEST_CASE("select_group_and_t")
{
    SUBCASE("idle group gives the fixed-power t")
    {
        auto prob = reference_problem({GroupGains{}});
        const auto d = initial_duals(prob);
        const auto sel = select_group_and_t({score_group(prob.groups[0], d, prob)}, prob);
        CHECK(sel.group == 0);
        CHECK(sel.t == doctest::Approx(1.0 / 304.216).epsilon(1e-12));
        CHECK(sel.t == doctest::Approx(3.2872e-3).epsilon(1e-4));
    }
    SUBCASE("positive group wins, ties go low")
    {
        const auto p = unit_level_problem(0.25);
        const auto d = unit_level_duals();
        GroupGains zero;
        zero.direct_t1 = {0.0};
        GroupGains live;
        live.direct_t1 = {1.0};
        CellProblem prob = p;
        prob.groups = {zero, live, live};
        std::vector<GroupScore> scores;
        for (const auto& g : prob.groups) {
            scores.push_back(score_group(g, d, prob));
        }
        CHECK(select_group_and_t(scores, prob).group == 1);
    }
}

TEST_CASE("subgradient_step directions")
{
    auto prob = reference_problem({});
    GroupGains g;
    g.direct_t1 = {1e-12, 5e-13};
    g.direct_t2 = {2e-12};
    g.relays = {{1e-10, 1e-12, 0}};
    prob.groups = {g};

    DualState d = initial_duals(prob);
    d.mu = 0.05;
    d.lambda_t1 = 0.3;
    d.lambda_t2 = 0.2;
    d.nu = {0.4, 0.7};
    const auto s = score_group(g, d, prob);

    SUBCASE("fixed point when every constraint is tight")
    {
        GroupGains only_t1;
        only_t1.direct_t1 = g.direct_t1;
        CellProblem tight = prob;
        DualState at = initial_duals(prob);
        at.lambda_t1 = 0.3;
        // Settle mu on its own fixed point first, then make phase 1 exactly tight.
        for (int i = 0; i < 100; ++i) {
            const auto st = score_group(only_t1, at, tight);
            at.mu = st.rate * optimal_t(only_t1, st.powers, tight);
        }
        const auto s2 = score_group(only_t1, at, tight);
        tight.p_max_bs_w = s2.powers.bs_t1_sum();
        const auto next = subgradient_step(at, only_t1, s2, tight, 0.5);
        CHECK(std::abs(next.mu - at.mu) < 1e-12);
        CHECK(next.lambda_t1 == at.lambda_t1);
        CHECK(next.lambda_t2 == 0.0);
        CHECK(next.nu[0] == 0.0);
        CHECK(next.nu[1] == 0.0);
    }
    SUBCASE("overshoot raises lambda, slack lowers nu")
    {
        CellProblem small = prob;
        small.p_max_bs_w = 0.5 * s.powers.bs_t1_sum();
        small.p_max_rn_w = 1e3;
        const auto next = subgradient_step(d, g, s, small, 0.5);
        CHECK(next.lambda_t1 > d.lambda_t1);
        CHECK(next.nu[0] < d.nu[0]);
        CHECK(next.nu[1] < d.nu[1]);
        CHECK(next.nu[1] >= 0.0);
        CHECK(next.iteration == d.iteration + 1);
    }
}

TEST_CASE("single direct stream matches a 1-D search")
{
    const double w = 2e-14;
    auto prob = reference_problem({GroupGains{{w}, {}, {}}});
    prob.p_max_bs_w = 1e6;  // inactive cap: the optimum is interior
    const auto sol = solve_esem(prob);
    REQUIRE(sol.converged);
    auto ese = [&](double p) {
        return 0.5 * std::log2(1.0 + w * p / prob.noise_w) / (prob.p_fixed_w + 0.5 * prob.xi_bs * p);
    };
    const double best = oracle::golden_section_max(ese, 0.0, 1e6);
    CHECK(sol.physical.direct_t1[0] == doctest::Approx(best).epsilon(1e-6));
    CHECK(sol.objective == doctest::Approx(ese(best)).epsilon(1e-6));
}

TEST_CASE("vanishing power budget")
{
    GroupGains g;
    g.direct_t1 = {1e-11, 3e-12};
    g.direct_t2 = {5e-12};
    g.relays = {{1e-9, 1e-12, 1}};
    double last = 1.0;
    for (const double cap : {1e-3, 1e-6, 1e-9, 1e-12}) {
        auto prob = reference_problem({g});
        prob.p_max_bs_w = cap;
        prob.p_max_rn_w = cap;
        const auto sol = solve_esem(prob);
        CHECK(sol.physical.bs_t1_sum() <= cap * (1.0 + 1e-6));
        CHECK(sol.physical.bs_t2_sum() <= cap * (1.0 + 1e-6));
        CHECK(sol.objective < last);
        last = sol.objective;
    }
    CHECK(last < 1e-4);
}

TEST_CASE("small instance against the grid oracle")
{
    GroupGains a;
    a.direct_t1 = {4e-14, 1e-14};
    a.direct_t2 = {2e-14};
    GroupGains b;
    b.direct_t1 = {3e-14};
    b.relays = {{5e-13, 8e-14, 0}};
    const auto prob = reference_problem({a, b});
    const auto sol = solve_esem(prob);
    REQUIRE(sol.converged);
    const double grid = oracle::grid_search_ese(prob, 0.01);
    CHECK(sol.objective >= grid * (1.0 - 0.01));
}

TEST_CASE("converged solutions satisfy the constraints and KKT")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lg(-15.0, -11.0);
    for (int trial = 0; trial < 30; ++trial) {
        GroupGains g;
        for (int i = 0; i < 3; ++i) {
            g.direct_t1.push_back(std::pow(10.0, lg(rng)));
            g.direct_t2.push_back(std::pow(10.0, lg(rng)));
        }
        g.relays = {{std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)), trial % 2}};
        const auto prob = reference_problem({g});
        const auto sol = solve_esem(prob);
        REQUIRE(sol.converged);
        const double cap = prob.p_max_bs_w;
        CHECK(sol.physical.bs_t1_sum() <= cap * (1.0 + 1e-6));
        CHECK(sol.physical.bs_t2_sum() <= cap * (1.0 + 1e-6));
        for (const double r : sol.physical.rn_sums(g, prob.relays)) {
            CHECK(r <= prob.p_max_rn_w * (1.0 + 1e-6));
        }
        // The optimal-t expression makes the normalization hold by construction.
        const double denom = prob.p_fixed_w + 0.5 * (prob.xi_bs * (sol.physical.bs_t1_sum() + sol.physical.bs_t2_sum()) +
                                                     prob.xi_rn * sol.physical.relay_rn[0]);
        CHECK(std::abs(sol.t * denom - 1.0) < 1e-8);

        const DualState& d = sol.duals;
        auto check_kkt = [&](double w, double p, double price) {
            const double marginal = 0.5 * w / ((prob.noise_w + w * p) * std::numbers::ln2);
            if (p > 0.0) {
                CHECK(marginal == doctest::Approx(0.5 * price).epsilon(1e-6));
            } else {
                CHECK(marginal <= 0.5 * price * (1.0 + 1e-9));
            }
        };
        for (std::size_t i = 0; i < 3; ++i) {
            check_kkt(g.direct_t1[i], sol.physical.direct_t1[i], prob.xi_bs * d.mu + 2.0 * d.lambda_t1);
            check_kkt(g.direct_t2[i], sol.physical.direct_t2[i], prob.xi_bs * d.mu + 2.0 * d.lambda_t2);
        }
    }
}

TEST_CASE("objective never drops as the BS budget grows")
{
    GroupGains g;
    g.direct_t1 = {2e-14, 7e-15};
    g.direct_t2 = {1e-14, 4e-15};
    g.relays = {{3e-13, 5e-14, 0}};
    double last = 0.0;
    for (const double dbm : {10.0, 20.0, 30.0, 40.0, 50.0, 60.0}) {
        auto prob = reference_problem({g});
        prob.p_max_bs_w = dbm_to_watt(dbm);
        const auto sol = solve_esem(prob);
        CHECK(sol.objective >= last * (1.0 - 1e-9));
        last = sol.objective;
    }
}

TEST_CASE("EPA splits power equally")
{
    GroupGains g;
    g.direct_t1 = {1e-13, 1e-13, 1e-13};
    g.relays = {{1e-12, 1e-13, 0}};
    g.direct_t2 = {1e-13};
    auto prob = reference_problem({g});
    const auto sol = solve_epa(prob, 3);
    CHECK(sol.selected_group == 0);
    for (const double p : sol.physical.direct_t1) {
        CHECK(p == doctest::Approx(0.25));
    }
    CHECK(sol.physical.relay_bs[0] == doctest::Approx(0.25));
    CHECK(sol.physical.relay_rn[0] == doctest::Approx(prob.p_max_rn_w));
    CHECK(sol.physical.direct_t2[0] == doctest::Approx(1.0));
    const auto rn = sol.physical.rn_sums(g, prob.relays);
    CHECK(rn[1] == 0.0);

    auto many = reference_problem(std::vector<GroupGains>(6, g));
    CHECK(solve_epa(many, 11).selected_group == solve_epa(many, 11).selected_group);
    CHECK_THROWS_AS(solve_epa(reference_problem({}), 1), InvalidInput);
    CHECK_THROWS_AS(solve_esem(reference_problem({})), InvalidInput);
}
