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
#include <cstdint>
#include <vector>

#include "iaese/linalg.hpp"

namespace iaese {

/// Number of cells (sectors) meeting in one OCI region.
inline constexpr int kCells = 3;

/// UEs never lie closer than this to their serving BS [km].
inline constexpr double kMinUeDistanceKm = 0.035;

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);

/// System parameters of one network snapshot. Powers in watts, bandwidth in Hz.
struct NetworkConfig {
    int subcarrier_blocks = 12;      // L
    double block_bandwidth_hz = 180e3;  // W
    int relays = 2;                  // M, per cell
    int ues = 6;                     // K, per cell
    int bs_antennas = 4;             // N_B
    int rn_antennas = 4;             // N_R
    int ue_antennas = 4;             // N_U
    double isd_km = 1.5;
    double rn_distance_ratio = 0.7;  // D_r
    double noise_psd_dbm_hz = -174.0;
    double snr_gap_db = 0.0;         // delta gamma
    double p_max_bs_w = 1.0;         // 30 dBm
    double p_max_rn_w = 0.1;         // 20 dBm
    double p_fixed_bs_w = 32.306 * 4;
    double p_fixed_rn_w = 21.874 * 4;
    double xi_bs = 3.24 * 4;
    double xi_rn = 4.04 * 4;
    double alpha = 0.1;              // semi-orthogonality threshold
    int s_r = 1;                     // minimum receive dimensions at each RN
    int s_u = 2;                     // minimum receive dimensions at each UE

    /// Reference simulation values with P_max^B = 30 dBm and P_max^R = 20 dBm.
    static NetworkConfig defaults() { return {}; }

    /// Fixed-power ratings and PA slopes scaled by the antenna counts.
    void rescale_power_model();

    /// Throws InvalidInput when an invariant is violated.
    void validate() const;

    double cell_radius_km() const;
    /// N0 * L * W in watts.
    double noise_power_w() const;
    double snr_gap() const { return db_to_linear(snr_gap_db); }
    /// Delta gamma * N0 * L * W, the effective noise floor of every SMC.
    double effective_noise_w() const { return snr_gap() * noise_power_w(); }
    /// P_C^B + M * P_C^R.
    double fixed_power_w() const { return p_fixed_bs_w + relays * p_fixed_rn_w; }
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct Layout {
    double cell_radius_km = 0.0;
    std::array<Point, kCells> bs;
    std::vector<std::vector<Point>> rn;  // [cell][m]
    std::vector<std::vector<Point>> ue;  // [cell][k]

    /// Whether p lies in the 120-degree sector (a rhombus) served by `cell`.
    bool in_sector(int cell, const Point& p, double tol = 1e-9) const;
};

/// Three BSs at alternate vertices of the hexagonal OCI region, each sector
/// pointing to its centre. RNs sit on a ring of radius D_r * R evenly spread
/// over the sector; UEs are uniform in the sector.
Layout generate_layout(const NetworkConfig& cfg, std::uint64_t seed);

enum class LinkType { bs_ue, rn_ue, bs_rn };

/// NLOS for BS-UE and RN-UE links, LOS for BS-RN links. Throws InvalidInput
/// for a nonpositive distance.
double path_loss_db(LinkType link, double distance_km);

/// Per-subcarrier channel blocks of one link.
struct LinkChannel {
    std::vector<CMatrix> blocks;

    CMatrix assembled() const { return block_diagonal(blocks); }
    /// blockdiag(blocks) * a without materialising the block diagonal.
    CMatrix times(const CMatrix& a) const;
};

class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(int relays, int ues);

    int relays() const { return relays_; }
    int ues() const { return ues_; }

    /// BS `src` to RN m of cell n.
    LinkChannel& bs_rn(int n, int m, int src) { return bs_rn_[bs_rn_index(n, m, src)]; }
    const LinkChannel& bs_rn(int n, int m, int src) const { return bs_rn_[bs_rn_index(n, m, src)]; }

    /// BS `src` to UE k of cell n.
    LinkChannel& bs_ue(int n, int k, int src) { return bs_ue_[bs_ue_index(n, k, src)]; }
    const LinkChannel& bs_ue(int n, int k, int src) const { return bs_ue_[bs_ue_index(n, k, src)]; }

    /// RN m' of cell `src` to UE k of cell n.
    LinkChannel& rn_ue(int n, int k, int src, int m)
    {
        return rn_ue_[rn_ue_index(n, k, src, m)];
    }
    const LinkChannel& rn_ue(int n, int k, int src, int m) const
    {
        return rn_ue_[rn_ue_index(n, k, src, m)];
    }

private:
    std::size_t bs_rn_index(int n, int m, int src) const;
    std::size_t bs_ue_index(int n, int k, int src) const;
    std::size_t rn_ue_index(int n, int k, int src, int m) const;

    int relays_ = 0;
    int ues_ = 0;
    std::vector<LinkChannel> bs_rn_;
    std::vector<LinkChannel> bs_ue_;
    std::vector<LinkChannel> rn_ue_;
};

/// Entries are sqrt(path-loss gain) * CN(0,1), independent over antennas,
/// subcarriers and links. Distances below kMinUeDistanceKm are clamped.
ChannelSet sample_channels(const Layout& layout, const NetworkConfig& cfg, std::uint64_t seed);

} // namespace iaese
