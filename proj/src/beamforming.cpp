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

#include "simtrx/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace simtrx {

using std::numbers::pi;

PowerAllocation PowerAllocation::uniform(int streams, double total)
{
    PowerAllocation pa;
    pa.p = Eigen::VectorXd::Constant(streams, total / streams);
    pa.total_budget = total;
    return pa;
}

Eigen::MatrixXcd effective_matrix(const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &g)
{
    if (h.cols() != g.rows())
        throw std::invalid_argument("effective_matrix: inner dimensions disagree");
    return h * g;
}

RateReport sum_rate(const Eigen::MatrixXcd &b, const PowerAllocation &pa, double noise_mw)
{
    const int k_users = int(b.rows());
    if (b.cols() != b.rows())
        throw std::invalid_argument("sum_rate: needs K = M");
    if (noise_mw <= 0.0)
        throw std::invalid_argument("sum_rate: noise power must be positive");

    RateReport rep;
    rep.sinr.resize(k_users);
    rep.per_user_rate.resize(k_users);
    for (int k = 0; k < k_users; ++k)
    {
        double signal = pa.p(k) * std::norm(b(k, k));
        double interference = 0.0;
        for (int i = 0; i < k_users; ++i)
            if (i != k)
                interference += pa.p(i) * std::norm(b(k, i));
        rep.sinr(k) = signal / (interference + noise_mw);
        rep.per_user_rate(k) = std::log2(1.0 + rep.sinr(k));
    }
    rep.sum_rate = rep.per_user_rate.sum();
    return rep;
}

// d(sum_rate)/d|B_ki|^2, the K x M sensitivity of the objective to the
// squared magnitudes.
static Eigen::MatrixXd rate_weights(const Eigen::MatrixXcd &b, const PowerAllocation &pa,
                                    double noise_mw)
{
    const int k_users = int(b.rows());
    const double inv_ln2 = 1.0 / std::log(2.0);
    Eigen::MatrixXd psi(k_users, k_users);
    for (int k = 0; k < k_users; ++k)
    {
        double den = noise_mw;
        for (int i = 0; i < k_users; ++i)
            if (i != k)
                den += pa.p(i) * std::norm(b(k, i));
        double num = pa.p(k) * std::norm(b(k, k));
        double sinr = num / den;
        double common = inv_ln2 / (1.0 + sinr);
        for (int i = 0; i < k_users; ++i)
            psi(k, i) = (i == k) ? common * pa.p(k) / den : -common * sinr * pa.p(i) / den;
    }
    return psi;
}

Eigen::MatrixXd sumrate_gradient(const TransferStack &stack, const PhaseState &phases,
                                 const Eigen::MatrixXcd &h, const PowerAllocation &pa,
                                 double noise_mw)
{
    const int layers = stack.num_layers();
    const int atoms = stack.atoms_per_layer();
    if (h.cols() != atoms)
        throw std::invalid_argument("sumrate_gradient: channel width does not match the stack");

    CascadeStack cs = cascade_with_prefixes(stack, phases);
    const Eigen::MatrixXcd b = h * cs.g;
    const Eigen::MatrixXd psi = rate_weights(b, pa, noise_mw);
    const Eigen::MatrixXcd d = b.conjugate().cwiseProduct(psi.cast<std::complex<double>>());

    // z = D^T H U_l, M x N, swept backward through the stack
    Eigen::MatrixXcd z = d.transpose() * h;
    Eigen::MatrixXd grad(layers, atoms);
    for (int l = layers; l >= 1; --l)
    {
        const Eigen::VectorXcd phi = phase_diagonal(phases.theta, l - 1);
        // row_dots(n) = sum_m V_l[n,m] Z_l[m,n]
        const Eigen::VectorXcd row_dots =
            cs.v[l - 1].cwiseProduct(z.transpose()).rowwise().sum();
        grad.row(l - 1) = -2.0 * phi.cwiseProduct(row_dots).imag().transpose();
        if (l > 1)
            z = (z * phi.asDiagonal()) * stack.w(l);
    }
    return grad;
}

struct AscentResult {
    PhaseState phases;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

// Monotone gradient ascent with backtracking; only improving steps are taken.
static AscentResult ascend(const TransferStack &stack, const Eigen::MatrixXcd &h,
                           const PowerAllocation &pa, double noise_mw, PhaseState phases,
                           const WbfOptions &opts)
{
    AscentResult res;
    double value = sum_rate(h * sim_response(stack, phases), pa, noise_mw).sum_rate;
    res.trace.push_back(value);

    double step = 1.0;
    for (int iter = 0; iter < opts.max_iters; ++iter)
    {
        Eigen::MatrixXd grad = sumrate_gradient(stack, phases, h, pa, noise_mw);
        double gnorm2 = grad.squaredNorm();
        if (gnorm2 == 0.0)
        {
            res.converged = true;
            break;
        }

        step = std::min(step * 2.0, 1e3); // retry a larger step than last accepted
        double improved = -1.0;
        PhaseState trial;
        while (step > 1e-14)
        {
            trial.theta = phases.theta + step * grad;
            trial.wrap();
            double trial_value =
                sum_rate(h * sim_response(stack, trial), pa, noise_mw).sum_rate;
            if (trial_value >= value + opts.armijo_c * step * gnorm2)
            {
                improved = trial_value;
                break;
            }
            step *= opts.armijo_shrink;
        }
        if (improved < 0.0)
        {
            res.converged = true; // no ascent direction at line-search resolution
            break;
        }

        double gain = improved - value;
        phases = std::move(trial);
        value = improved;
        res.trace.push_back(value);
        res.iterations = iter + 1;
        if (gain < opts.improvement_tol)
        {
            res.converged = true;
            break;
        }
    }
    res.phases = std::move(phases);
    res.objective = value;
    return res;
}

std::pair<PhaseState, RateReport> optimize_wbf(const TransferStack &stack,
                                               const Eigen::MatrixXcd &h,
                                               const PowerAllocation &pa, double noise_mw,
                                               const WbfOptions &opts, Philox &rng)
{
    const int layers = stack.num_layers();
    const int atoms = stack.atoms_per_layer();
    const int runs = opts.init ? 1 : std::max(1, opts.restarts);

    AscentResult best;
    best.objective = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < runs; ++r)
    {
        PhaseState init = opts.init ? *opts.init : PhaseState::random(layers, atoms, rng);
        AscentResult res = ascend(stack, h, pa, noise_mw, std::move(init), opts);
        if (res.objective > best.objective)
            best = std::move(res);
    }

    RateReport rep = sum_rate(h * sim_response(stack, best.phases), pa, noise_mw);
    rep.scheme = "wbf";
    rep.iterations = best.iterations;
    rep.converged = best.converged;
    rep.trace = std::move(best.trace);
    return {std::move(best.phases), std::move(rep)};
}

PowerAllocation waterfill(const Eigen::VectorXd &diag_gains, const Eigen::VectorXd &interference,
                          double noise_mw, double total)
{
    const int k_users = int(diag_gains.size());
    if ((diag_gains.array() < 0.0).any())
        throw std::invalid_argument("waterfill: gains must be nonnegative");
    if (diag_gains.maxCoeff() <= 0.0)
        throw std::invalid_argument("waterfill: all channel gains are zero");

    PowerAllocation pa;
    pa.total_budget = total;
    pa.p = Eigen::VectorXd::Zero(k_users);
    if (total <= 0.0)
        return pa;

    // inverse channel quality a_k; zero-gain channels never receive power
    Eigen::VectorXd a(k_users);
    double a_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_users; ++k)
    {
        a(k) = diag_gains(k) > 0.0 ? (noise_mw + interference(k)) / diag_gains(k)
                                   : std::numeric_limits<double>::infinity();
        a_min = std::min(a_min, a(k));
    }

    auto poured = [&](double mu) {
        double s = 0.0;
        for (int k = 0; k < k_users; ++k)
            if (std::isfinite(a(k)) && mu > a(k))
                s += mu - a(k);
        return s;
    };

    double lo = a_min, hi = a_min + total;
    for (int it = 0; it < 200; ++it)
    {
        double mid = 0.5 * (lo + hi);
        if (poured(mid) < total)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * (std::abs(a_min) + total))
            break;
    }

    // settle the active set and solve the water level exactly over it
    double mu = 0.5 * (lo + hi);
    for (int pass = 0; pass < 8; ++pass)
    {
        double a_active = 0.0;
        int active = 0;
        for (int k = 0; k < k_users; ++k)
            if (std::isfinite(a(k)) && mu > a(k))
            {
                a_active += a(k);
                ++active;
            }
        if (active == 0)
            break;
        double mu_next = (total + a_active) / active;
        if (mu_next == mu)
            break;
        mu = mu_next;
    }
    for (int k = 0; k < k_users; ++k)
        if (std::isfinite(a(k)) && mu > a(k))
            pa.p(k) = mu - a(k);
    return pa;
}

PowerAllocation waterfill_fixed_point(const Eigen::MatrixXcd &b, double noise_mw, double total,
                                      const PowerAllocation &start, int max_iters,
                                      double tol_factor)
{
    const int k_users = int(b.rows());
    Eigen::VectorXd gains(k_users);
    for (int k = 0; k < k_users; ++k)
        gains(k) = std::norm(b(k, k));

    PowerAllocation pa = start;
    for (int it = 0; it < max_iters; ++it)
    {
        Eigen::VectorXd interference = Eigen::VectorXd::Zero(k_users);
        for (int k = 0; k < k_users; ++k)
            for (int i = 0; i < k_users; ++i)
                if (i != k)
                    interference(k) += pa.p(i) * std::norm(b(k, i));
        PowerAllocation next = waterfill(gains, interference, noise_mw, total);
        double delta = (next.p - pa.p).cwiseAbs().maxCoeff();
        pa = std::move(next);
        if (delta <= tol_factor * total)
            break;
    }
    return pa;
}

RateReport joint_optimize(const TransferStack &stack, const Eigen::MatrixXcd &h, double noise_mw,
                          double total, const WbfOptions &opts, Philox &rng,
                          PhaseState *phases_out, PowerAllocation *pa_out)
{
    const int k_users = int(h.rows());
    PowerAllocation pa = PowerAllocation::uniform(k_users, total);

    std::vector<double> outer_trace;
    PhaseState phases;
    double value = -std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;

    WbfOptions round_opts = opts;
    for (int round = 0; round < 20; ++round)
    {
        auto [ph, rep] = optimize_wbf(stack, h, pa, noise_mw, round_opts, rng);
        phases = std::move(ph);
        iterations += rep.iterations;
        double after_wbf = rep.sum_rate;

        // water-filling to a fixed point; kept only when it does not hurt
        Eigen::MatrixXcd b = h * sim_response(stack, phases);
        PowerAllocation refined = waterfill_fixed_point(b, noise_mw, total, pa);
        double after_pa = sum_rate(b, refined, noise_mw).sum_rate;
        if (after_pa >= after_wbf)
            pa = std::move(refined);
        double round_value = std::max(after_wbf, after_pa);

        outer_trace.push_back(round_value);
        double gain = round_value - (outer_trace.size() > 1 ? value : round_value);
        value = round_value;
        round_opts.init = phases; // later rounds refine instead of restarting
        if (outer_trace.size() > 1 && gain < 1e-3)
        {
            converged = true;
            break;
        }
    }

    RateReport rep = sum_rate(h * sim_response(stack, phases), pa, noise_mw);
    rep.scheme = "joint";
    rep.iterations = iterations;
    rep.converged = converged;
    rep.trace = std::move(outer_trace);
    if (phases_out)
        *phases_out = std::move(phases);
    if (pa_out)
        *pa_out = std::move(pa);
    return rep;
}

RateReport average_pa_scheme(const TransferStack &stack, const Eigen::MatrixXcd &h,
                             double noise_mw, double total, const WbfOptions &opts, Philox &rng,
                             PhaseState *phases_out)
{
    PowerAllocation pa = PowerAllocation::uniform(int(h.rows()), total);
    auto [phases, rep] = optimize_wbf(stack, h, pa, noise_mw, opts, rng);
    rep.scheme = "average-PA";
    if (phases_out)
        *phases_out = std::move(phases);
    return rep;
}

RateReport codebook_scheme(const TransferStack &stack, const Eigen::MatrixXcd &h, double noise_mw,
                           double total, Philox &rng, PhaseState *phases_out)
{
    const int layers = stack.num_layers();
    const int atoms = stack.atoms_per_layer();
    const int size = 10 * layers * atoms;
    PowerAllocation uniform = PowerAllocation::uniform(int(h.rows()), total);

    PhaseState best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < size; ++c)
    {
        PhaseState cand = PhaseState::random(layers, atoms, rng);
        double value = sum_rate(h * sim_response(stack, cand), uniform, noise_mw).sum_rate;
        if (value > best_value)
        {
            best_value = value;
            best = std::move(cand);
        }
    }

    Eigen::MatrixXcd b = h * sim_response(stack, best);
    PowerAllocation refined = waterfill_fixed_point(b, noise_mw, total, uniform);
    RateReport with_wf = sum_rate(b, refined, noise_mw);
    RateReport rep = with_wf.sum_rate >= best_value ? with_wf : sum_rate(b, uniform, noise_mw);
    rep.scheme = "codebook";
    rep.iterations = size;
    if (phases_out)
        *phases_out = std::move(best);
    return rep;
}

RateReport zf_baseline(const Eigen::MatrixXcd &h_direct, double noise_mw, double total)
{
    const int k_users = int(h_direct.rows());
    const int antennas = int(h_direct.cols());
    if (antennas < k_users)
        throw std::invalid_argument("zf_baseline: needs at least as many antennas as users");

    Eigen::MatrixXcd gram = h_direct * h_direct.adjoint();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (!lu.isInvertible())
        throw std::runtime_error("zf_baseline: rank-deficient channel");
    Eigen::MatrixXcd f = h_direct.adjoint() * lu.inverse();

    Eigen::VectorXd gains(k_users);
    for (int k = 0; k < k_users; ++k)
    {
        double nrm2 = f.col(k).squaredNorm();
        f.col(k) /= std::sqrt(nrm2);
        gains(k) = 1.0 / nrm2; // post-normalization diagonal power gain
    }

    PowerAllocation pa = waterfill(gains, Eigen::VectorXd::Zero(k_users), noise_mw, total);

    RateReport rep;
    rep.sinr.resize(k_users);
    rep.per_user_rate.resize(k_users);
    for (int k = 0; k < k_users; ++k)
    {
        rep.sinr(k) = pa.p(k) * gains(k) / noise_mw; // interference is nulled exactly
        rep.per_user_rate(k) = std::log2(1.0 + rep.sinr(k));
    }
    rep.sum_rate = rep.per_user_rate.sum();
    rep.scheme = "ZF";
    return rep;
}

} // namespace simtrx
