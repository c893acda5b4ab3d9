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

#include "simtrx/geometry.hpp"
#include "simtrx/rng.hpp"

namespace simtrx {

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

/// Distance-power law with a free-space 1 m reference:
/// gain = (lambda / 4 pi)^2 * d^(-exponent).  Rejects d < 1 m.
double path_loss(double distance_m, double exponent, double wavelength);

/// Isotropic-scattering spatial correlation for a planar aperture:
/// R[i,j] = sinc(2 d_ij / lambda), eigenvalues clamped at zero to form the
/// principal square root.
struct CorrelationModel {
    Eigen::MatrixXd r;
    Eigen::MatrixXd sqrt_r;
};
CorrelationModel spatial_correlation(const Eigen::Matrix3Xd &positions, double wavelength);

/// One stochastic downlink realization: h is K x N (or K x M for the direct
/// baseline), noise power sigma^2 in linear mW.
struct ChannelRealization {
    Eigen::MatrixXcd h;
    double noise_mw = 0.0;
    Eigen::VectorXd per_user_pathloss;
};

/// Correlated Rayleigh rows: h_k = sqrt(pathloss_k) * (R^{1/2} z_k)^T with
/// z_k i.i.d. CN(0, 1) entries.
ChannelRealization sample_fading(Philox &rng, const CorrelationModel &corr,
                                 const Eigen::VectorXd &pathloss, double noise_mw);

/// Same statistical model, correlated over the antenna positions; used by the
/// no-SIM zero-forcing baseline.
ChannelRealization direct_channel(Philox &rng, const Eigen::Matrix3Xd &antenna_positions,
                                  const Scenario &scenario, double wavelength);

/// Per-user path-loss gains for a multiuser scenario, measured from a
/// reference point (outer-layer center for SIM links, array center for the
/// direct baseline).
Eigen::VectorXd scenario_pathloss(const Scenario &scenario, const Eigen::Vector3d &reference,
                                  double wavelength);

/// Deterministic free-space LoS uplink from a radiating target to the outer
/// layer: entry n = (lambda / 4 pi d_n) e^{-j 2 pi d_n / lambda}.
Eigen::VectorXcd los_uplink(const Eigen::Vector3d &target, const Eigen::Matrix3Xd &outer_positions,
                            double wavelength);

} // namespace simtrx
