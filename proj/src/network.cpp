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

#include "iaese/network.hpp"

#include "iaese/error.hpp"
#include "iaese/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace iaese {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Point polar(double radius, double angle_rad)
{
    return {radius * std::cos(angle_rad), radius * std::sin(angle_rad)};
}

Point add(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }

// Angle of BS n seen from the OCI region centre.
double bs_angle(int cell) { return (90.0 + 120.0 * cell) * kDeg; }

// Direction from BS n towards the region centre (the sector boresight).
double boresight(int cell) { return bs_angle(cell) + std::numbers::pi; }

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw InvalidInput("NetworkConfig: " + what);
    }
}

} // namespace

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void NetworkConfig::rescale_power_model()
{
    p_fixed_bs_w = 32.306 * bs_antennas;
    p_fixed_rn_w = 21.874 * rn_antennas;
    xi_bs = 3.24 * bs_antennas;
    xi_rn = 4.04 * rn_antennas;
}

void NetworkConfig::validate() const
{
    require(subcarrier_blocks >= 1, "L must be >= 1");
    require(block_bandwidth_hz > 0.0, "W must be positive");
    require(relays >= 0, "M must be >= 0");
    require(ues >= 1, "K must be >= 1");
    require(bs_antennas >= 1 && rn_antennas >= 1 && ue_antennas >= 1, "antenna counts must be >= 1");
    require(isd_km > 0.0, "ISD must be positive");
    require(rn_distance_ratio > 0.0 && rn_distance_ratio < 1.0, "D_r must lie in (0, 1)");
    require(std::isfinite(noise_psd_dbm_hz) && std::isfinite(snr_gap_db), "N0 and gap must be finite");
    require(p_max_bs_w > 0.0 && p_max_rn_w > 0.0, "maximum powers must be positive");
    require(p_fixed_bs_w > 0.0 && p_fixed_rn_w > 0.0, "fixed powers must be positive");
    require(xi_bs > 0.0 && xi_rn > 0.0, "PA slopes must be positive");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    require(s_r >= 0 && s_u >= 0, "S^R and S^U must be >= 0");
    require(s_u <= subcarrier_blocks * ue_antennas, "S^U exceeds L * N_U");
    require(s_r <= subcarrier_blocks * rn_antennas, "S^R exceeds L * N_R");
}

double NetworkConfig::cell_radius_km() const { return isd_km / std::sqrt(3.0); }

double NetworkConfig::noise_power_w() const
{
    return dbm_to_watt(noise_psd_dbm_hz) * subcarrier_blocks * block_bandwidth_hz;
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Layout::in_sector(int cell, const Point& p, double tol) const
{
    // p - bs = a * R * u(theta - 60) + b * R * u(theta + 60)
    const double theta = boresight(cell);
    const Point e1 = polar(cell_radius_km, theta - 60.0 * kDeg);
    const Point e2 = polar(cell_radius_km, theta + 60.0 * kDeg);
    const double dx = p.x - bs[static_cast<std::size_t>(cell)].x;
    const double dy = p.y - bs[static_cast<std::size_t>(cell)].y;
    const double det = e1.x * e2.y - e1.y * e2.x;
    const double a = (dx * e2.y - dy * e2.x) / det;
    const double b = (e1.x * dy - e1.y * dx) / det;
    return a >= -tol && a <= 1.0 + tol && b >= -tol && b <= 1.0 + tol;
}

Layout generate_layout(const NetworkConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Layout out;
    out.cell_radius_km = cfg.cell_radius_km();
    const double radius = out.cell_radius_km;
    out.rn.resize(kCells);
    out.ue.resize(kCells);

    for (int n = 0; n < kCells; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        out.bs[cn] = polar(radius, bs_angle(n));
        const double theta = boresight(n);

        for (int m = 0; m < cfg.relays; ++m) {
            const double offset = -60.0 + 120.0 * (m + 0.5) / cfg.relays;
            out.rn[cn].push_back(
                add(out.bs[cn], polar(cfg.rn_distance_ratio * radius, theta + offset * kDeg)));
        }

        const Point e1 = polar(radius, theta - 60.0 * kDeg);
        const Point e2 = polar(radius, theta + 60.0 * kDeg);
        for (int k = 0; k < cfg.ues; ++k) {
            Point p;
            do {
                const double a = unit(rng);
                const double b = unit(rng);
                p = {out.bs[cn].x + a * e1.x + b * e2.x, out.bs[cn].y + a * e1.y + b * e2.y};
            } while (distance(p, out.bs[cn]) < kMinUeDistanceKm);
            out.ue[cn].push_back(p);
        }
    }
    return out;
}

double path_loss_db(LinkType link, double distance_km)
{
    if (!(distance_km > 0.0) || !std::isfinite(distance_km)) {
        throw InvalidInput("path_loss_db: distance must be positive");
    }
    switch (link) {
    case LinkType::bs_ue:
    case LinkType::rn_ue:
        return 131.1 + 42.8 * std::log10(distance_km);
    case LinkType::bs_rn:
        return 103.4 + 24.2 * std::log10(distance_km);
    }
    throw InvalidInput("path_loss_db: unknown link type");
}

CMatrix LinkChannel::times(const CMatrix& a) const
{
    if (blocks.empty()) {
        throw InvalidInput("LinkChannel::times: empty channel");
    }
    const Eigen::Index rb = blocks.front().rows();
    const Eigen::Index cb = blocks.front().cols();
    const auto nblocks = static_cast<Eigen::Index>(blocks.size());
    if (a.rows() != cb * nblocks) {
        throw InvalidInput("LinkChannel::times: dimension mismatch");
    }
    CMatrix out(rb * nblocks, a.cols());
    for (Eigen::Index l = 0; l < nblocks; ++l) {
        out.middleRows(l * rb, rb).noalias() =
            blocks[static_cast<std::size_t>(l)] * a.middleRows(l * cb, cb);
    }
    return out;
}

ChannelSet::ChannelSet(int relays, int ues)
    : relays_(relays), ues_(ues),
      bs_rn_(static_cast<std::size_t>(kCells * relays * kCells)),
      bs_ue_(static_cast<std::size_t>(kCells * ues * kCells)),
      rn_ue_(static_cast<std::size_t>(kCells * ues * kCells * relays))
{
}

std::size_t ChannelSet::bs_rn_index(int n, int m, int src) const
{
    return static_cast<std::size_t>((n * relays_ + m) * kCells + src);
}

std::size_t ChannelSet::bs_ue_index(int n, int k, int src) const
{
    return static_cast<std::size_t>((n * ues_ + k) * kCells + src);
}

std::size_t ChannelSet::rn_ue_index(int n, int k, int src, int m) const
{
    return static_cast<std::size_t>(((n * ues_ + k) * kCells + src) * relays_ + m);
}

namespace {

LinkChannel draw_link(Rng& rng, const NetworkConfig& cfg, LinkType type, double d_km, int rx,
                      int tx)
{
    const double gain = std::pow(10.0, -path_loss_db(type, std::max(d_km, kMinUeDistanceKm)) / 10.0);
    const double amp = std::sqrt(gain);
    LinkChannel link;
    link.blocks.reserve(static_cast<std::size_t>(cfg.subcarrier_blocks));
    for (int l = 0; l < cfg.subcarrier_blocks; ++l) {
        link.blocks.push_back(amp * complex_normal_matrix(rng, rx, tx));
    }
    return link;
}

} // namespace

ChannelSet sample_channels(const Layout& layout, const NetworkConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    if (static_cast<int>(layout.ue.size()) != kCells || static_cast<int>(layout.rn.size()) != kCells) {
        throw InvalidInput("sample_channels: layout does not describe three cells");
    }
    for (int n = 0; n < kCells; ++n) {
        if (static_cast<int>(layout.ue[static_cast<std::size_t>(n)].size()) != cfg.ues ||
            static_cast<int>(layout.rn[static_cast<std::size_t>(n)].size()) != cfg.relays) {
            throw InvalidInput("sample_channels: layout inconsistent with config");
        }
    }

    Rng rng(seed);
    ChannelSet out(cfg.relays, cfg.ues);
    for (int n = 0; n < kCells; ++n) {
        const auto cn = static_cast<std::size_t>(n);
        for (int m = 0; m < cfg.relays; ++m) {
            const Point& rn = layout.rn[cn][static_cast<std::size_t>(m)];
            for (int src = 0; src < kCells; ++src) {
                out.bs_rn(n, m, src) =
                    draw_link(rng, cfg, LinkType::bs_rn, distance(rn, layout.bs[static_cast<std::size_t>(src)]),
                              cfg.rn_antennas, cfg.bs_antennas);
            }
        }
        for (int k = 0; k < cfg.ues; ++k) {
            const Point& ue = layout.ue[cn][static_cast<std::size_t>(k)];
            for (int src = 0; src < kCells; ++src) {
                const auto cs = static_cast<std::size_t>(src);
                out.bs_ue(n, k, src) = draw_link(rng, cfg, LinkType::bs_ue, distance(ue, layout.bs[cs]),
                                                 cfg.ue_antennas, cfg.bs_antennas);
                for (int m = 0; m < cfg.relays; ++m) {
                    out.rn_ue(n, k, src, m) =
                        draw_link(rng, cfg, LinkType::rn_ue, distance(ue, layout.rn[cs][static_cast<std::size_t>(m)]),
                                  cfg.ue_antennas, cfg.rn_antennas);
                }
            }
        }
    }
    return out;
}

} // namespace iaese
