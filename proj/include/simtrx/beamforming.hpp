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
#include <string>
#include <utility>
#include <vector>

#include "simtrx/channel.hpp"
#include "simtrx/propagation.hpp"

namespace simtrx {

/// Per-stream transmit powers under a total budget, linear mW.
struct PowerAllocation {
    Eigen::VectorXd p;
    double total_budget = 0.0;

    static PowerAllocation uniform(int streams, double total);
};

struct RateReport {
    Eigen::VectorXd sinr;          // linear, per user
    Eigen::VectorXd per_user_rate; // bps/Hz, log2(1 + sinr)
    double sum_rate = 0.0;         // bps/Hz
    std::string scheme;
    int iterations = 0;
    bool converged = true;
    std::vector<double> trace; // objective after each accepted step / round
};

/// End-to-end gain B = H G; B[k,m] is antenna m as seen by user k.
Eigen::MatrixXcd effective_matrix(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &g);

/// Stream m feeds antenna m and user k detects stream k (K = M):
/// sinr_k = p_k |B_kk|^2 / (sum_{i != k} p_i |B_ki|^2 + sigma^2).
RateReport sum_rate(const Eigen::MatrixXcd &b, const PowerAllocation &pa, double noise_mw);

/// Analytic d(sum_rate)/d(theta_{l,n}) through the full cascade, L x N.
/// Agrees with central finite differences to 1e-5 relative error.
Eigen::MatrixXd sumrate_gradient(const TransferStack &stack, const PhaseState &phases,
                                 const Eigen::MatrixXcd &h, const PowerAllocation &pa,
                                 double noise_mw);

struct WbfOptions {
    int max_iters = 500;
    int restarts = 4;
    double armijo_shrink = 0.5;
    double armijo_c = 1e-4;
    double improvement_tol = 1e-4;     // bps/Hz
    std::optional<PhaseState> init;    // when set, a single run from this state
};

/// Gradient ascent on the phases with backtracking line search; the returned
/// trace is non-decreasing.  Best restart wins.
std::pair<PhaseState, RateReport> optimize_wbf(const TransferStack &stack,
                                               const Eigen::MatrixXcd &h,
                                               const PowerAllocation &pa, double noise_mw,
                                               const WbfOptions &opts, Philox &rng);

/// One water-filling step against fixed interference-plus-noise levels:
/// p_k = max(0, mu - (sigma^2 + interference_k) / gain_k), with mu matching
/// the budget to 1e-9 * total.
PowerAllocation waterfill(const Eigen::VectorXd &diag_gains, const Eigen::VectorXd &interference,
                          double noise_mw, double total);

/// Water-filling iterated to a self-consistent interference fixed point.
PowerAllocation waterfill_fixed_point(const Eigen::MatrixXcd &b, double noise_mw, double total,
                                      const PowerAllocation &start, int max_iters = 50,
                                      double tol_factor = 1e-6);

/// Scheme i: alternate wave-domain beamforming and iterative water-filling.
/// Power-allocation updates are kept only when they do not reduce the
/// objective, so the outer trace is non-decreasing.
RateReport joint_optimize(const TransferStack &stack, const Eigen::MatrixXcd &h, double noise_mw,
                          double total, const WbfOptions &opts, Philox &rng,
                          PhaseState *phases_out = nullptr, PowerAllocation *pa_out = nullptr);

/// Scheme ii: optimize the beamforming once under the uniform allocation.
RateReport average_pa_scheme(const TransferStack &stack, const Eigen::MatrixXcd &h,
                             double noise_mw, double total, const WbfOptions &opts, Philox &rng,
                             PhaseState *phases_out = nullptr);

/// Scheme iii: best of a random codebook of 10*L*N full-stack configurations
/// under uniform power, then water-filling on the winner.
RateReport codebook_scheme(const TransferStack &stack, const Eigen::MatrixXcd &h, double noise_mw,
                           double total, Philox &rng, PhaseState *phases_out = nullptr);

/// Scheme iv: digital zero-forcing without an SIM, water-filled powers.
RateReport zf_baseline(const Eigen::MatrixXcd &h_direct, double noise_mw, double total);

} // namespace simtrx
