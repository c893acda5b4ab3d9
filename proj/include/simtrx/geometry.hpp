// simtrx - wave-domain MIMO transceiver simulator for stacked metasurfaces
// Copyright (C) 2026 simtrx project contributors
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

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace simtrx {

inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s

/// Static description of one stacked-metasurface transceiver.
///
/// Lengths with a zero default are resolved against the carrier wavelength:
/// thickness 5*lambda, element spacing lambda/2, atom area (lambda/2)^2.
struct SimConfig {
    double carrier_frequency_hz = 28e9;
    int num_layers = 7;       // L
    int atoms_per_layer = 49; // N, must be a perfect square
    int num_antennas = 4;     // M
    int num_users = 4;        // K
    double sim_thickness_m = 0.0;
    double element_spacing_m = 0.0;
    double atom_area_m2 = 0.0;
    double bs_height_m = 10.0;
    int phase_levels = 0; // 0 = continuous

    double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }
    double thickness() const { return sim_thickness_m > 0.0 ? sim_thickness_m : 5.0 * wavelength(); }
    double spacing() const { return element_spacing_m > 0.0 ? element_spacing_m : 0.5 * wavelength(); }
    double atom_area() const
    {
        double half = 0.5 * wavelength();
        return atom_area_m2 > 0.0 ? atom_area_m2 : half * half;
    }

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

/// 3-D layout of the metasurface stack and the antenna array.
///
/// Frame: the antenna array is a uniform linear array along +x at height
/// bs_height; layers are square grids in planes below it, normal (0,0,-1),
/// ordered from the antenna side (layer 1) to the free-space side (layer L).
/// Layer l sits at distance l * inter_layer_gap from the array plane, so the
/// outermost layer is at exactly the configured thickness.
struct SimGeometry {
    std::vector<Eigen::Matrix3Xd> layers; // layers[l-1] is 3 x N, columns are atoms
    Eigen::Matrix3Xd antennas;            // 3 x M
    Eigen::Vector3d layer_normal;         // unit, points from array through the stack
    double inter_layer_gap = 0.0;

    int num_layers() const { return int(layers.size()); }
    int atoms_per_layer() const { return int(layers.front().cols()); }
    const Eigen::Matrix3Xd &outer_layer() const { return layers.back(); }
    Eigen::Vector3d outer_layer_center() const { return outer_layer().rowwise().mean(); }
};

SimGeometry build_sim_geometry(const SimConfig &config);

/// Helper for the no-SIM baselines: a lambda/2 uniform linear array along +x
/// at the BS height, same frame as build_sim_geometry.
Eigen::Matrix3Xd uniform_linear_array(int num_antennas, double spacing, double height);

enum class ScenarioKind { multiuser, doa };

/// Coverage quadrants, counterclockwise: A = {x>0, y>0}, B = {x<0, y>0},
/// C = {x<0, y<0}, D = {x>0, y<0}.
enum class Quadrant : int { A = 0, B = 1, C = 2, D = 3 };

Quadrant quadrant_of(double x, double y);
char quadrant_name(Quadrant q);

struct Scenario {
    ScenarioKind kind = ScenarioKind::multiuser;
    std::vector<Eigen::Vector3d> user_positions; // multiuser only, K points
    double coverage_side_m = 100.0;              // doa only, square side
    double tx_power_dbm = 20.0;
    double noise_power_dbm = -100.0;
    double path_loss_exponent = 3.5;
};

struct ScenarioOverrides {
    std::optional<std::vector<Eigen::Vector3d>> user_positions;
    std::optional<double> user_standoff_m; // default 50
    std::optional<double> user_spacing_m;  // default 20
    std::optional<double> coverage_side_m; // default 100
    std::optional<double> tx_power_dbm;
    std::optional<double> noise_power_dbm;
    std::optional<double> path_loss_exponent;
};

/// Multiuser default: K users on the ground on a line parallel to the array,
/// 20 m apart, centered at a 50 m standoff in front of the BS.  DOA default:
/// BS at the center of a 100 m x 100 m ground square.
Scenario build_scenario(ScenarioKind kind, const SimConfig &config,
                        const ScenarioOverrides &overrides = {});

} // namespace simtrx
