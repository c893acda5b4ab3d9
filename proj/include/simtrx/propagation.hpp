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
#include <complex>
#include <string>
#include <vector>

#include "simtrx/geometry.hpp"
#include "simtrx/rng.hpp"

namespace simtrx {

/// Programmable per-atom phase shifts, one row per layer, each in [0, 2*pi).
/// Transmission coefficients are unit modulus: e^{j*theta}.
struct PhaseState {
    Eigen::MatrixXd theta; // L x N

    int num_layers() const { return int(theta.rows()); }
    int atoms_per_layer() const { return int(theta.cols()); }

    static PhaseState zeros(int layers, int atoms);
    static PhaseState random(int layers, int atoms, Philox &rng); // Uniform[0, 2*pi)

    /// Canonical wrap of every entry into [0, 2*pi).
    void wrap();
};

double wrap_phase(double theta);

/// Fixed inter-layer diffraction matrices of one stack.
///
/// w1 is N x M (antennas -> layer 1); w(l) for l >= 2 is N x N
/// (layer l-1 -> layer l).  Immutable after construction and safe to share
/// across threads.
struct TransferStack {
    Eigen::MatrixXcd w1;
    std::vector<Eigen::MatrixXcd> w_upper; // w_upper[i] = w(i+2)
    double wavelength = 0.0;

    int num_layers() const { return 1 + int(w_upper.size()); }
    int atoms_per_layer() const { return int(w1.rows()); }
    int num_antennas() const { return int(w1.cols()); }
    const Eigen::MatrixXcd &w(int layer) const { return layer == 1 ? w1 : w_upper[layer - 2]; }
};

/// Rayleigh-Sommerfeld coupling coefficient between a secondary point source
/// at src and a point dst on the next layer:
///
///   w = (A_t * cos(chi) / r) * (1/(2*pi*r) - j/lambda) * e^{j*2*pi*r/lambda}
///
/// with r = |dst - src| and cos(chi) the obliquity along the layer normal.
/// Rejects r = 0 and backward propagation (cos(chi) <= 0).
std::complex<double> rs_coefficient(const Eigen::Vector3d &src, const Eigen::Vector3d &dst,
                                    const Eigen::Vector3d &normal, double atom_area,
                                    double wavelength);

TransferStack build_transfer_stack(const SimGeometry &geom, const SimConfig &config);

/// Unit-modulus diagonal for one layer's phases.
Eigen::VectorXcd phase_diagonal(const Eigen::MatrixXd &theta, int layer_index);

/// End-to-end programmable response G = Phi^L W^L ... Phi^1 W^1 (N x M).
/// Rows index outer-layer atoms, columns index antennas.
Eigen::MatrixXcd sim_response(const TransferStack &stack, const PhaseState &phases);

/// Forward cascade with per-layer prefixes, shared by the analytic gradients:
/// v[l-1] = W^l Phi^{l-1} ... Phi^1 W^1 (N x M) and g = Phi^L v[L-1].
struct CascadeStack {
    std::vector<Eigen::MatrixXcd> v;
    Eigen::MatrixXcd g;
};
CascadeStack cascade_with_prefixes(const TransferStack &stack, const PhaseState &phases);

/// Snap every phase to the nearest of {2*pi*k/levels}, ties toward smaller k.
PhaseState quantize_phases(const PhaseState &phases, int levels);

/// Text model file: "simtrx-phases v1 <L> <N>" header then one theta per line,
/// row-major, 17 significant digits.
void save_phases(const PhaseState &phases, const std::string &path);
PhaseState load_phases(const std::string &path);

} // namespace simtrx
