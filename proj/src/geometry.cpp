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

#include "simtrx/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace simtrx {

static int integer_sqrt(int n)
{
    int r = int(std::lround(std::sqrt(double(n))));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

void SimConfig::validate() const
{
    if (carrier_frequency_hz <= 0.0)
        throw std::invalid_argument("carrier frequency must be positive");
    if (num_layers < 1)
        throw std::invalid_argument("number of layers must be >= 1");
    if (atoms_per_layer < 1)
        throw std::invalid_argument("atoms per layer must be >= 1");
    int s = integer_sqrt(atoms_per_layer);
    if (s * s != atoms_per_layer)
        throw std::invalid_argument("atoms per layer must be a perfect square, got " +
                                    std::to_string(atoms_per_layer));
    if (num_antennas < 1)
        throw std::invalid_argument("number of antennas must be >= 1");
    if (num_users < 1)
        throw std::invalid_argument("number of users must be >= 1");
    if (thickness() <= 0.0)
        throw std::invalid_argument("SIM thickness must be positive");
    if (spacing() <= 0.0)
        throw std::invalid_argument("element spacing must be positive");
    if (atom_area() <= 0.0)
        throw std::invalid_argument("meta-atom area must be positive");
    if (phase_levels != 0 && phase_levels < 2)
        throw std::invalid_argument("phase levels must be 0 (continuous) or >= 2");
}

SimGeometry build_sim_geometry(const SimConfig &config)
{
    config.validate();

    const int side = integer_sqrt(config.atoms_per_layer);
    const double pitch = config.spacing();
    const double gap = config.thickness() / config.num_layers;

    SimGeometry geom;
    geom.layer_normal = Eigen::Vector3d(0.0, 0.0, -1.0);
    geom.inter_layer_gap = gap;

    // Antenna ULA along +x, lambda/2 pitch, centered on the boresight axis.
    geom.antennas = uniform_linear_array(config.num_antennas, 0.5 * config.wavelength(),
                                         config.bs_height_m);

    geom.layers.reserve(config.num_layers);
    for (int l = 1; l <= config.num_layers; ++l)
    {
        Eigen::Matrix3Xd layer(3, config.atoms_per_layer);
        const double z = config.bs_height_m - double(l) * gap;
        for (int gy = 0; gy < side; ++gy)
        {
            for (int gx = 0; gx < side; ++gx)
            {
                int n = gy * side + gx;
                layer.col(n) = Eigen::Vector3d((gx - 0.5 * (side - 1)) * pitch,
                                               (gy - 0.5 * (side - 1)) * pitch, z);
            }
        }
        geom.layers.push_back(std::move(layer));
    }
    return geom;
}

Eigen::Matrix3Xd uniform_linear_array(int num_antennas, double spacing, double height)
{
    Eigen::Matrix3Xd array(3, num_antennas);
    for (int m = 0; m < num_antennas; ++m)
        array.col(m) = Eigen::Vector3d((m - 0.5 * (num_antennas - 1)) * spacing, 0.0, height);
    return array;
}

Quadrant quadrant_of(double x, double y)
{
    if (x >= 0.0)
        return y >= 0.0 ? Quadrant::A : Quadrant::D;
    return y >= 0.0 ? Quadrant::B : Quadrant::C;
}

char quadrant_name(Quadrant q) { return char('A' + int(q)); }

Scenario build_scenario(ScenarioKind kind, const SimConfig &config,
                        const ScenarioOverrides &overrides)
{
    config.validate();

    Scenario sc;
    sc.kind = kind;
    sc.tx_power_dbm = overrides.tx_power_dbm.value_or(20.0);
    sc.path_loss_exponent = overrides.path_loss_exponent.value_or(3.5);

    if (kind == ScenarioKind::multiuser)
    {
        sc.noise_power_dbm = overrides.noise_power_dbm.value_or(-100.0);
        if (overrides.user_positions)
        {
            if (int(overrides.user_positions->size()) != config.num_users)
                throw std::invalid_argument(
                    "scenario provides " + std::to_string(overrides.user_positions->size()) +
                    " user positions but the config has K = " + std::to_string(config.num_users));
            sc.user_positions = *overrides.user_positions;
        }
        else
        {
            const double standoff = overrides.user_standoff_m.value_or(50.0);
            const double spacing = overrides.user_spacing_m.value_or(20.0);
            const int k_users = config.num_users;
            sc.user_positions.reserve(k_users);
            for (int k = 0; k < k_users; ++k)
                sc.user_positions.emplace_back((k - 0.5 * (k_users - 1)) * spacing, standoff, 0.0);
        }
    }
    else
    {
        sc.noise_power_dbm = overrides.noise_power_dbm.value_or(-140.0);
        sc.coverage_side_m = overrides.coverage_side_m.value_or(100.0);
        if (sc.coverage_side_m <= 0.0)
            throw std::invalid_argument("coverage side must be positive");
    }

    if (!std::isfinite(sc.tx_power_dbm) || !std::isfinite(sc.noise_power_dbm))
        throw std::invalid_argument("tx power and noise power must be finite");
    return sc;
}

} // namespace simtrx
