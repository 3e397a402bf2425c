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
#include "iaese/network.hpp"
#include "iaese/random.hpp"

#include <cmath>

using namespace iaese;

TEST_CASE("unit conversions")
{
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dbm_to_watt(20.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(watt_to_dbm(1e-3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(db_to_linear(0.0) == 1.0);
}

TEST_CASE("noise power of the reference configuration")
{
    const auto cfg = NetworkConfig::defaults();
    // 10^(-17.4) mW/Hz * 12 * 180 kHz.
    CHECK(cfg.noise_power_w() == doctest::Approx(std::pow(10.0, -17.4) * 2.16e6 * 1e-3).epsilon(1e-12));
    CHECK(cfg.noise_power_w() == doctest::Approx(8.60e-15).epsilon(2e-3));
    CHECK(cfg.fixed_power_w() == doctest::Approx(304.216).epsilon(1e-12));
}

TEST_CASE("path loss curves")
{
    CHECK(path_loss_db(LinkType::bs_ue, 1.0) == doctest::Approx(131.1));
    CHECK(path_loss_db(LinkType::rn_ue, 1.0) == doctest::Approx(131.1));
    CHECK(path_loss_db(LinkType::bs_rn, 1.0) == doctest::Approx(103.4));
    CHECK(path_loss_db(LinkType::bs_ue, 10.0) - path_loss_db(LinkType::bs_ue, 1.0) == doctest::Approx(42.8));
    CHECK_THROWS_AS(path_loss_db(LinkType::bs_ue, 0.0), InvalidInput);
    CHECK_THROWS_AS(path_loss_db(LinkType::bs_rn, -1.0), InvalidInput);
}

TEST_CASE("config validation")
{
    auto cfg = NetworkConfig::defaults();
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = NetworkConfig::defaults();
    cfg.rn_distance_ratio = 1.2;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = NetworkConfig::defaults();
    cfg.ues = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("layout geometry")
{
    const auto cfg = NetworkConfig::defaults();
    const Layout a = generate_layout(cfg, 42);
    CHECK(a.cell_radius_km == doctest::Approx(1.5 / std::sqrt(3.0)));
    for (int n = 0; n < kCells; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        CHECK(std::hypot(a.bs[cn].x, a.bs[cn].y) == doctest::Approx(a.cell_radius_km));
        REQUIRE(a.rn[cn].size() == 2);
        for (const auto& rn : a.rn[cn]) {
            CHECK(distance(rn, a.bs[cn]) == doctest::Approx(0.7 * a.cell_radius_km).epsilon(1e-12));
            CHECK(a.in_sector(n, rn));
        }
        REQUIRE(a.ue[cn].size() == 6);
        for (const auto& ue : a.ue[cn]) {
            CHECK(a.in_sector(n, ue));
            CHECK(distance(ue, a.bs[cn]) >= kMinUeDistanceKm);
        }
    }
    // Neighbouring BSs are one ISD apart.
    CHECK(distance(a.bs[0], a.bs[1]) == doctest::Approx(1.5).epsilon(1e-12));

    const Layout b = generate_layout(cfg, 42);
    for (std::size_t n = 0; n < kCells; ++n) {
        for (std::size_t k = 0; k < a.ue[n].size(); ++k) {
            CHECK(a.ue[n][k].x == b.ue[n][k].x);
            CHECK(a.ue[n][k].y == b.ue[n][k].y);
        }
    }
}

TEST_CASE("layout without relays")
{
    auto cfg = NetworkConfig::defaults();
    cfg.relays = 0;
    const Layout l = generate_layout(cfg, 1);
    for (const auto& rn : l.rn) {
        CHECK(rn.empty());
    }
}

TEST_CASE("sample_channels is deterministic and block diagonal")
{
    const auto cfg = NetworkConfig::defaults();
    const Layout layout = generate_layout(cfg, 3);
    const ChannelSet a = sample_channels(layout, cfg, 9);
    const ChannelSet b = sample_channels(layout, cfg, 9);
    const CMatrix ha = a.bs_ue(1, 2, 0).assembled();
    CHECK((ha - b.bs_ue(1, 2, 0).assembled()).norm() == 0.0);
    CHECK((a.rn_ue(2, 5, 1, 1).assembled() - b.rn_ue(2, 5, 1, 1).assembled()).norm() == 0.0);
    REQUIRE(ha.rows() == 48);
    REQUIRE(ha.cols() == 48);
    for (Eigen::Index i = 0; i < 48; ++i) {
        for (Eigen::Index j = 0; j < 48; ++j) {
            if (i / 4 != j / 4) {
                CHECK(ha(i, j) == Complex(0.0, 0.0));
            }
        }
    }
    const CMatrix x = CMatrix::Random(48, 3);
    CHECK((a.bs_ue(1, 2, 0).times(x) - ha * x).norm() < 1e-12 * ha.norm() * x.norm());
}

TEST_CASE("channel power matches the path-loss gain")
{
    auto cfg = NetworkConfig::defaults();
    cfg.relays = 0;
    cfg.ues = 1;
    const Layout layout = generate_layout(cfg, 17);
    const double d = std::max(distance(layout.ue[0][0], layout.bs[1]), kMinUeDistanceKm);
    const double gain = std::pow(10.0, -path_loss_db(LinkType::bs_ue, d) / 10.0);

    // 640 snapshots: 122880 draws in total, 10240 pairs for subcarrier 0 vs 1.
    double acc = 0.0;
    std::size_t count = 0;
    Complex cross(0.0, 0.0);
    double p0 = 0.0;
    double p1 = 0.0;
    for (std::uint64_t s = 0; s < 640; ++s) {
        const ChannelSet ch = sample_channels(layout, cfg, 1000 + s);
        const LinkChannel& link = ch.bs_ue(0, 0, 1);
        for (const auto& blk : link.blocks) {
            acc += blk.squaredNorm();
            count += static_cast<std::size_t>(blk.size());
        }
        for (Eigen::Index i = 0; i < 16; ++i) {
            const Complex x = link.blocks[0](i % 4, i / 4);
            const Complex y = link.blocks[1](i % 4, i / 4);
            cross += x * std::conj(y);
            p0 += std::norm(x);
            p1 += std::norm(y);
        }
    }
    CHECK(count >= 100000);
    CHECK(acc / static_cast<double>(count) == doctest::Approx(gain).epsilon(0.02));
    CHECK(std::abs(cross) / std::sqrt(p0 * p1) < 0.05);
}

TEST_CASE("derive_seed separates substreams")
{
    CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
    CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
    CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
}
