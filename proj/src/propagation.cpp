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

#include "simtrx/propagation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace simtrx {

using std::numbers::pi;

PhaseState PhaseState::zeros(int layers, int atoms)
{
    PhaseState s;
    s.theta = Eigen::MatrixXd::Zero(layers, atoms);
    return s;
}

PhaseState PhaseState::random(int layers, int atoms, Philox &rng)
{
    PhaseState s;
    s.theta.resize(layers, atoms);
    for (int l = 0; l < layers; ++l)
        for (int n = 0; n < atoms; ++n)
            s.theta(l, n) = rng.uniform() * 2.0 * pi;
    return s;
}

double wrap_phase(double theta)
{
    double t = theta - 2.0 * pi * std::floor(theta / (2.0 * pi));
    if (t >= 2.0 * pi) // floor rounding can land exactly on 2*pi
        t -= 2.0 * pi;
    return t;
}

void PhaseState::wrap()
{
    for (int l = 0; l < theta.rows(); ++l)
        for (int n = 0; n < theta.cols(); ++n)
            theta(l, n) = wrap_phase(theta(l, n));
}

std::complex<double> rs_coefficient(const Eigen::Vector3d &src, const Eigen::Vector3d &dst,
                                    const Eigen::Vector3d &normal, double atom_area,
                                    double wavelength)
{
    const Eigen::Vector3d d = dst - src;
    const double r = d.norm();
    if (r <= 0.0)
        throw std::invalid_argument("rs_coefficient: coincident source and destination");
    const double cos_chi = d.dot(normal) / r;
    if (cos_chi <= 0.0)
        throw std::invalid_argument("rs_coefficient: destination is behind the source plane");

    const double amp = atom_area * cos_chi / r;
    const std::complex<double> inner(1.0 / (2.0 * pi * r), -1.0 / wavelength);
    const double phase = 2.0 * pi * r / wavelength;
    return amp * inner * std::complex<double>(std::cos(phase), std::sin(phase));
}

TransferStack build_transfer_stack(const SimGeometry &geom, const SimConfig &config)
{
    const int n_atoms = geom.atoms_per_layer();
    const int n_ant = int(geom.antennas.cols());
    const double area = config.atom_area();
    const double lambda = config.wavelength();

    TransferStack stack;
    stack.wavelength = lambda;

    stack.w1.resize(n_atoms, n_ant);
    for (int n = 0; n < n_atoms; ++n)
        for (int m = 0; m < n_ant; ++m)
            stack.w1(n, m) = rs_coefficient(geom.antennas.col(m), geom.layers[0].col(n),
                                            geom.layer_normal, area, lambda);

    stack.w_upper.reserve(geom.num_layers() - 1);
    for (int l = 2; l <= geom.num_layers(); ++l)
    {
        Eigen::MatrixXcd w(n_atoms, n_atoms);
        for (int n = 0; n < n_atoms; ++n)
            for (int m = 0; m < n_atoms; ++m)
                w(n, m) = rs_coefficient(geom.layers[l - 2].col(m), geom.layers[l - 1].col(n),
                                         geom.layer_normal, area, lambda);
        stack.w_upper.push_back(std::move(w));
    }
    return stack;
}

Eigen::VectorXcd phase_diagonal(const Eigen::MatrixXd &theta, int layer_index)
{
    const int n = int(theta.cols());
    Eigen::VectorXcd d(n);
    for (int i = 0; i < n; ++i)
    {
        double t = theta(layer_index, i);
        d(i) = std::complex<double>(std::cos(t), std::sin(t));
    }
    return d;
}

Eigen::MatrixXcd sim_response(const TransferStack &stack, const PhaseState &phases)
{
    if (phases.num_layers() != stack.num_layers() ||
        phases.atoms_per_layer() != stack.atoms_per_layer())
        throw std::invalid_argument("sim_response: phase state does not match the stack");

    Eigen::MatrixXcd g = phase_diagonal(phases.theta, 0).asDiagonal() * stack.w1;
    for (int l = 2; l <= stack.num_layers(); ++l)
        g = phase_diagonal(phases.theta, l - 1).asDiagonal() * (stack.w(l) * g);
    return g;
}

CascadeStack cascade_with_prefixes(const TransferStack &stack, const PhaseState &phases)
{
    if (phases.num_layers() != stack.num_layers() ||
        phases.atoms_per_layer() != stack.atoms_per_layer())
        throw std::invalid_argument("cascade: phase state does not match the stack");

    CascadeStack cs;
    cs.v.reserve(stack.num_layers());
    cs.v.push_back(stack.w1);
    Eigen::MatrixXcd cum = phase_diagonal(phases.theta, 0).asDiagonal() * stack.w1;
    for (int l = 2; l <= stack.num_layers(); ++l)
    {
        cs.v.push_back(stack.w(l) * cum);
        cum = phase_diagonal(phases.theta, l - 1).asDiagonal() * cs.v.back();
    }
    cs.g = std::move(cum);
    return cs;
}

PhaseState quantize_phases(const PhaseState &phases, int levels)
{
    if (levels < 2)
        throw std::invalid_argument("quantize_phases: need at least 2 levels");

    PhaseState out = phases;
    for (int l = 0; l < out.theta.rows(); ++l)
    {
        for (int n = 0; n < out.theta.cols(); ++n)
        {
            double frac = out.theta(l, n) / (2.0 * pi);
            frac -= std::floor(frac); // [0, 1)
            // round half down so exact midpoints pick the smaller k
            long k = long(std::ceil(frac * levels - 0.5));
            k %= levels;
            if (k < 0)
                k += levels;
            out.theta(l, n) = 2.0 * pi * double(k) / double(levels);
        }
    }
    return out;
}

void save_phases(const PhaseState &phases, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << "simtrx-phases v1 " << phases.num_layers() << " " << phases.atoms_per_layer() << "\n";
    char buf[64];
    for (int l = 0; l < phases.num_layers(); ++l)
    {
        for (int n = 0; n < phases.atoms_per_layer(); ++n)
        {
            std::snprintf(buf, sizeof buf, "%.17g\n", phases.theta(l, n));
            out << buf;
        }
    }
    if (!out)
        throw std::runtime_error("failed writing " + path);
}

PhaseState load_phases(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::string magic, version;
    int layers = 0, atoms = 0;
    in >> magic >> version >> layers >> atoms;
    if (!in || magic != "simtrx-phases" || version != "v1" || layers < 1 || atoms < 1)
        throw std::runtime_error("not a simtrx phase file: " + path);
    PhaseState s;
    s.theta.resize(layers, atoms);
    for (int l = 0; l < layers; ++l)
        for (int n = 0; n < atoms; ++n)
            if (!(in >> s.theta(l, n)))
                throw std::runtime_error("truncated phase file: " + path);
    return s;
}

} // namespace simtrx
