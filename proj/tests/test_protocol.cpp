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
#include "iaese/protocol.hpp"

#include <cmath>

using namespace iaese;

namespace {

struct Fixture {
    NetworkConfig cfg = NetworkConfig::defaults();
    DimensionPlan plan;
    PrecodedChannels h;
    RxBfmSet rx;

    explicit Fixture(Protocol protocol, std::uint64_t seed = 4)
    {
        plan = plan_dimensions(protocol, cfg);
        const Layout layout = generate_layout(cfg, seed);
        const ChannelSet ch = sample_channels(layout, cfg, seed + 1);
        h = precode_channels(ch, generate_precoders(plan, cfg, seed + 2));
        rx = compute_beamformers(protocol, h, plan);
    }
};

double orthonormality_error(const CMatrix& r)
{
    return (r.adjoint() * r - CMatrix::Identity(r.cols(), r.cols())).norm();
}

} // namespace

TEST_CASE("full-IA budgets at the reference configuration")
{
    const auto plan = plan_dimensions(Protocol::full_ia, NetworkConfig::defaults());
    CHECK(plan.feasible);
    CHECK(plan.s_b_t1 == 23);
    CHECK(plan.s_b_t2 == 13);
    // 48 - (3 * 13 + 6) - 1 = 2 > 1
    CHECK(48 - (3 * plan.s_b_t2 + 6) - 1 == 2);
    CHECK(plan.rn_rx_t1 == 2);
    CHECK(plan.ue_rx_t1 == 2);
    CHECK(plan.ue_rx_t2_bs == 16);
    CHECK(plan.ue_rx_t2_rn == 1);
}

TEST_CASE("partial-IA budgets at the reference configuration")
{
    const auto plan = plan_dimensions(Protocol::partial_ia, NetworkConfig::defaults());
    CHECK(plan.feasible);
    CHECK(plan.s_b_t1 == 48);
    CHECK(plan.s_b_t2 == 45);
    CHECK(plan.ue_rx_t2_bs == 46);
    CHECK(plan.ue_rx_t2_rn == 1);
}

TEST_CASE("forced infeasibility")
{
    auto cfg = NetworkConfig::defaults();
    cfg.subcarrier_blocks = 1;
    cfg.ue_antennas = 2;
    cfg.s_u = 2;
    cfg.relays = 1;
    cfg.s_r = 1;
    const auto plan = plan_dimensions(Protocol::full_ia, cfg);
    CHECK_FALSE(plan.feasible);
    CHECK_FALSE(plan.reason.empty());
}

TEST_CASE("plans without relays")
{
    auto cfg = NetworkConfig::defaults();
    cfg.relays = 0;
    const auto full = plan_dimensions(Protocol::full_ia, cfg);
    CHECK(full.feasible);
    CHECK(full.s_b_t2 == 23);
    const auto partial = plan_dimensions(Protocol::partial_ia, cfg);
    CHECK(partial.feasible);
    CHECK(partial.s_b_t2 == 47);
}

TEST_CASE("precoders are normalized, full rank and seeded")
{
    const auto cfg = NetworkConfig::defaults();
    const auto plan = plan_dimensions(Protocol::full_ia, cfg);
    const auto a = generate_precoders(plan, cfg, 77);
    const auto b = generate_precoders(plan, cfg, 77);
    REQUIRE(a.bs_t1.size() == 3);
    for (int n = 0; n < 3; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        CHECK(a.bs_t1[cn].cols() == 23);
        CHECK(a.bs_t2[cn].cols() == 13);
        for (const CMatrix* m : {&a.bs_t1[cn], &a.bs_t2[cn], &a.rn_t2[cn][0], &a.rn_t2[cn][1]}) {
            for (Eigen::Index j = 0; j < m->cols(); ++j) {
                CHECK(std::abs(m->col(j).norm() - 1.0) < 1e-12);
            }
            CHECK(numerical_rank(ordered_svd(*m).s) == static_cast<std::size_t>(m->cols()));
        }
        CHECK((a.bs_t1[cn] - b.bs_t1[cn]).norm() == 0.0);
    }
}

TEST_CASE("precoded channels")
{
    auto cfg = NetworkConfig::defaults();
    const auto plan = plan_dimensions(Protocol::full_ia, cfg);
    const Layout layout = generate_layout(cfg, 1);
    ChannelSet ch = sample_channels(layout, cfg, 2);
    for (auto& blk : ch.bs_ue(0, 0, 1).blocks) {
        blk.setZero();
    }
    const auto pre = generate_precoders(plan, cfg, 3);
    const auto h = precode_channels(ch, pre);
    CHECK(h.t1_bs_ue(0, 0, 1).norm() == 0.0);
    const CMatrix raw = ch.bs_ue(0, 1, 2).assembled();
    const CMatrix& prod = h.t1_bs_ue(0, 1, 2);
    CHECK((prod - raw * pre.bs_t1[2]).norm() < 1e-12 * raw.norm());
    CHECK(prod.operatorNorm() <= raw.operatorNorm() * pre.bs_t1[2].operatorNorm() * (1.0 + 1e-12));

    PrecoderSet bad = pre;
    bad.bs_t1[0] = CMatrix::Identity(5, 5);
    CHECK_THROWS_AS(precode_channels(ch, bad), InvalidInput);
}

TEST_CASE("full-IA receive beamformers null the interference")
{
    const Fixture f(Protocol::full_ia);
    for (int n = 0; n < 3; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        for (int m = 0; m < 2; ++m) {
            const CMatrix& r = f.rx.t1.rn[cn][static_cast<std::size_t>(m)];
            const CMatrix oci = phase1_rn_interference(f.h, n, m);
            CHECK(r.cols() >= f.cfg.s_r);
            CHECK((r.adjoint() * oci).norm() < 1e-10 * oci.norm());
            CHECK(orthonormality_error(r) < 1e-10);
        }
        for (int k = 0; k < 6; ++k) {
            const CMatrix& r = f.rx.t1.ue[cn][static_cast<std::size_t>(k)];
            const CMatrix oci = phase1_ue_interference(f.h, n, k);
            CHECK(r.cols() >= f.cfg.s_u);
            CHECK((r.adjoint() * oci).norm() < 1e-10 * oci.norm());

            const CMatrix bs_case = phase2_interference(Protocol::full_ia, f.h, n, k, kBsCandidate);
            CHECK(bs_case.cols() == 2 * 13 + 3 * 2 * 1);
            const CMatrix& r2 = f.rx.ue_t2[cn][static_cast<std::size_t>(k)][kBsCandidate];
            CHECK(r2.cols() == 16);
            CHECK((r2.adjoint() * bs_case).norm() < 1e-10 * bs_case.norm());

            const CMatrix rn_case = phase2_interference(Protocol::full_ia, f.h, n, k, rn_candidate(1));
            const CMatrix& r3 = f.rx.ue_t2[cn][static_cast<std::size_t>(k)][static_cast<std::size_t>(rn_candidate(1))];
            CHECK(rn_case.cols() == 3 * 13 + 5);
            CHECK((r3.adjoint() * rn_case).norm() < 1e-10 * rn_case.norm());
            CHECK(orthonormality_error(r3) < 1e-10);
        }
    }
}

TEST_CASE("partial-IA phase-1 beamformers are matched filters")
{
    const Fixture f(Protocol::partial_ia);
    for (int n = 0; n < 3; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        for (int k = 0; k < 6; ++k) {
            const CMatrix& own = f.h.t1_bs_ue(n, k, n);
            const CMatrix& r = f.rx.t1.ue[cn][static_cast<std::size_t>(k)];
            REQUIRE(r.cols() == 2);
            const auto svd = ordered_svd(own);
            const double top = svd.s(0) * svd.s(0) + svd.s(1) * svd.s(1);
            CHECK((r.adjoint() * own).squaredNorm() == doctest::Approx(top).epsilon(1e-9));
            CHECK(orthonormality_error(r) < 1e-10);
        }
        for (int m = 0; m < 2; ++m) {
            CHECK(f.rx.t1.rn[cn][static_cast<std::size_t>(m)].cols() == 1);
        }
        CHECK(f.rx.ue_t2[cn][0][kBsCandidate].cols() == 46);
    }
}

TEST_CASE("partial-IA phase-2 interference is own-cell only")
{
    auto cfg = NetworkConfig::defaults();
    cfg.relays = 1;
    const auto plan = plan_dimensions(Protocol::partial_ia, cfg);
    const Layout layout = generate_layout(cfg, 8);
    const auto h = precode_channels(sample_channels(layout, cfg, 9), generate_precoders(plan, cfg, 10));
    const CMatrix hi = phase2_interference(Protocol::partial_ia, h, 0, 0, rn_candidate(0));
    CHECK(hi.cols() == plan.s_b_t2);
    CHECK((hi - h.t2_bs_ue(0, 0, 0)).norm() == 0.0);
    CHECK_THROWS_AS(phase2_interference(Protocol::partial_ia, h, 0, 0, 5), UnknownTransmitter);
}
