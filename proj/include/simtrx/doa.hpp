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
#include <array>
#include <cstdint>
#include <vector>

#include "simtrx/channel.hpp"
#include "simtrx/propagation.hpp"

namespace simtrx {

/// One labeled training/testing point: a radiating target on the ground and
/// its free-space uplink to the outer metasurface layer.
struct DoaSample {
    Eigen::Vector3d position;
    Quadrant label = Quadrant::A;
    Eigen::VectorXcd uplink;
};

/// Receive-side SIM classifier: the antenna with maximum energy names the
/// quadrant.  antenna_map[q] is the antenna assigned to quadrant q
/// (identity by convention: A->0, B->1, C->2, D->3).
struct DoaModel {
    PhaseState phases;
    TransferStack stack;
    std::array<int, 4> antenna_map{0, 1, 2, 3};
};

struct TrainReport {
    std::vector<double> loss_trace; // epoch-mean loss of the kept model
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    int epochs = 0;
    std::uint64_t seed = 0;
};

struct TrainOptions {
    enum class Method { gradient_descent, spsa };
    Method method = Method::gradient_descent;
    int batch_size = 32;
    int max_epochs = 200;
    double improvement_tol = 1e-5;
    double armijo_shrink = 0.5;
    double armijo_c = 1e-4;
    double tx_power_dbm = 20.0;
    // SPSA gain schedule (only used by Method::spsa)
    double spsa_a = 0.5;
    double spsa_c = 0.1;
    double spsa_alpha = 0.602;
    double spsa_gamma = 0.101;
};

/// Targets i.i.d. uniform over the coverage square, excluding a 1 m disk
/// around the BS ground point; labels follow the quadrant convention.
std::vector<DoaSample> generate_samples(Philox &rng, const Scenario &scenario,
                                        const Eigen::Matrix3Xd &outer_positions,
                                        double wavelength, int count);

/// Received energies e_m = |y_m|^2 with y = G^T (sqrt(P_tx) uplink) + noise.
/// The receive direction is the transpose of the transmit cascade
/// (reciprocal inter-layer hops, same phase shifts).
Eigen::Vector4d readout(const DoaModel &model, const DoaSample &sample, double tx_power_dbm,
                        double noise_power_dbm, Philox &rng);

/// Normalized-energy MSE against the one-hot target: ||e/sum(e) - 1_q||^2/4.
double doa_loss(const Eigen::Vector4d &energies, Quadrant label);

/// Mean noiseless loss of a batch, the training objective.
double doa_batch_loss(const TransferStack &stack, const PhaseState &phases,
                      const std::array<int, 4> &antenna_map, const std::vector<DoaSample> &samples,
                      const std::vector<int> &indices, double tx_power_mw);

/// Analytic gradient of doa_batch_loss w.r.t. the phases, L x N.
Eigen::MatrixXd doa_batch_gradient(const TransferStack &stack, const PhaseState &phases,
                                   const std::array<int, 4> &antenna_map,
                                   const std::vector<DoaSample> &samples,
                                   const std::vector<int> &indices, double tx_power_mw);

/// Mini-batch descent on the noiseless objective with backtracking on the
/// batch loss; epochs that do not improve the full-set loss are rolled back,
/// so the reported loss trace is non-increasing.
TrainReport train(DoaModel &model, const std::vector<DoaSample> &train_samples,
                  const TrainOptions &opts, Philox &rng);

/// Fraction of samples whose argmax-energy antenna maps to the true quadrant;
/// ties count as errors.
double evaluate(const DoaModel &model, const std::vector<DoaSample> &samples, double tx_power_dbm,
                double noise_power_dbm, Philox &rng);

} // namespace simtrx
