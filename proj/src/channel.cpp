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

#include "simtrx/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace simtrx {

using std::numbers::pi;

double path_loss(double distance_m, double exponent, double wavelength)
{
    if (distance_m < 1.0)
        throw std::invalid_argument("path_loss: distance below the 1 m reference");
    const double ref = wavelength / (4.0 * pi);
    return ref * ref * std::pow(distance_m, -exponent);
}

static double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    return std::sin(pi * x) / (pi * x);
}

CorrelationModel spatial_correlation(const Eigen::Matrix3Xd &positions, double wavelength)
{
    const int n = int(positions.cols());
    CorrelationModel model;
    model.r.resize(n, n);
    for (int i = 0; i < n; ++i)
    {
        model.r(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j)
        {
            double d = (positions.col(i) - positions.col(j)).norm();
            double v = sinc(2.0 * d / wavelength);
            model.r(i, j) = v;
            model.r(j, i) = v;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(model.r);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("spatial_correlation: eigendecomposition failed");
    Eigen::VectorXd evals = eig.eigenvalues();
    for (int i = 0; i < n; ++i)
    {
        if (evals(i) < -1e-10)
            throw std::runtime_error("spatial_correlation: correlation matrix is not PSD");
        evals(i) = evals(i) > 0.0 ? std::sqrt(evals(i)) : 0.0;
    }
    model.sqrt_r = eig.eigenvectors() * evals.asDiagonal() * eig.eigenvectors().transpose();
    return model;
}

ChannelRealization sample_fading(Philox &rng, const CorrelationModel &corr,
                                 const Eigen::VectorXd &pathloss, double noise_mw)
{
    if (noise_mw <= 0.0)
        throw std::invalid_argument("sample_fading: noise power must be positive");
    const int n = int(corr.r.rows());
    const int k_users = int(pathloss.size());

    ChannelRealization ch;
    ch.noise_mw = noise_mw;
    ch.per_user_pathloss = pathloss;
    ch.h.resize(k_users, n);
    Eigen::VectorXcd z(n);
    for (int k = 0; k < k_users; ++k)
    {
        for (int i = 0; i < n; ++i)
            z(i) = rng.cgauss();
        ch.h.row(k) = std::sqrt(pathloss(k)) * (corr.sqrt_r * z).transpose();
    }
    return ch;
}

Eigen::VectorXd scenario_pathloss(const Scenario &scenario, const Eigen::Vector3d &reference,
                                  double wavelength)
{
    Eigen::VectorXd gains(scenario.user_positions.size());
    for (int k = 0; k < int(scenario.user_positions.size()); ++k)
    {
        double d = (scenario.user_positions[k] - reference).norm();
        gains(k) = path_loss(d, scenario.path_loss_exponent, wavelength);
    }
    return gains;
}

ChannelRealization direct_channel(Philox &rng, const Eigen::Matrix3Xd &antenna_positions,
                                  const Scenario &scenario, double wavelength)
{
    CorrelationModel corr = spatial_correlation(antenna_positions, wavelength);
    Eigen::Vector3d center = antenna_positions.rowwise().mean();
    Eigen::VectorXd gains = scenario_pathloss(scenario, center, wavelength);
    return sample_fading(rng, corr, gains, dbm_to_mw(scenario.noise_power_dbm));
}

Eigen::VectorXcd los_uplink(const Eigen::Vector3d &target, const Eigen::Matrix3Xd &outer_positions,
                            double wavelength)
{
    const int n = int(outer_positions.cols());
    Eigen::VectorXcd u(n);
    for (int i = 0; i < n; ++i)
    {
        double d = (outer_positions.col(i) - target).norm();
        if (d < 1.0)
            throw std::invalid_argument("los_uplink: target closer than the 1 m reference");
        double amp = wavelength / (4.0 * pi * d);
        double phase = -2.0 * pi * d / wavelength;
        u(i) = amp * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return u;
}

} // namespace simtrx
