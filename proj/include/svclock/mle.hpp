// Copyright 2026 The svclock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVCLOCK_MLE_HPP
#define SVCLOCK_MLE_HPP

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "svclock/errors.hpp"
#include "svclock/tomography.hpp"

namespace svclock {

// Maximum-likelihood density-matrix reconstruction from homodyne marginals:
// the standard R rho R fixed-point iteration over a binned quadrature POVM.
// Each phase's marginal is represented by a Gaussian fitted to its samples
// (mean and variance), matching how the homodyne statistics are modelled
// throughout this library; a raw-histogram mode exists for comparison.

/// Harmonic-oscillator position wavefunctions psi_0..psi_nmax at the given
/// points (Var x = 1/2 convention, psi_0 = pi^{-1/4} exp(-x^2/2)), by the
/// stable two-term recurrence.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> oscillator_wavefunctions(
    const Eigen::Array<Real, Eigen::Dynamic, 1>& x, int n_max) {
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> psi(n_max + 1, x.size());
    const Real norm0 = std::pow(pi_v<Real>, Real(-0.25));
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        psi(0, j) = norm0 * std::exp(-x(j) * x(j) / 2);
        if (n_max >= 1) {
            psi(1, j) = std::sqrt(Real(2)) * x(j) * psi(0, j);
        }
        for (int n = 2; n <= n_max; ++n) {
            psi(n, j) = std::sqrt(Real(2) / Real(n)) * x(j) * psi(n - 1, j) -
                        std::sqrt(Real(n - 1) / Real(n)) * psi(n - 2, j);
        }
    }
    return psi;
}

template <typename Real>
struct MleOptions {
    Real bin_width = Real(0.1);
    Real range = 14;        ///< quadrature axis covered: [-range, range]
    bool smooth = true;     ///< Gaussian-marginal weights (else raw histogram)
    bool sinusoid = false;  ///< additionally constrain the per-phase Gaussian
                            ///< parameters to their smooth phase dependence
    Real tolerance = 0;     ///< stop when the log-likelihood gain per
                            ///< iteration falls below tolerance * |ll| (0:
                            ///< always run all iterations)
};

template <typename Real>
struct MleResult {
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> rho;
    std::vector<Real> log_likelihoods;  ///< one entry per iteration
    bool converged;                     ///< tolerance reached within the budget

    int dimension() const { return int(rho.rows()); }
};

/// Checks the density-matrix contract: Hermitian, unit trace, eigenvalues
/// bounded below by -tol.
template <typename Real>
bool is_valid_density_matrix(
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& rho,
    Real tol = Real(1e-10)) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    if (std::abs(rho.trace() - std::complex<Real>(1)) > tol) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>>
        es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -tol;
}

namespace detail {

template <typename Real>
Real gaussian_cdf(Real x, Real mu, Real sigma) {
    return (1 + std::erf((x - mu) / (sigma * std::sqrt(Real(2))))) / 2;
}

}  // namespace detail

/// Iterative maximum-likelihood reconstruction.
///
/// POVM: quadrature projectors |x, phi><x, phi| integrated over bins of
/// opts.bin_width (midpoint rule), through <n|x, phi> = e^{i n phi} psi_n(x).
/// Weights: expected bin counts of the per-phase Gaussian (opts.smooth) or
/// raw histogram counts. Iteration: rho <- R rho R / tr, with
/// R = sum (w/p) Pi. The log-likelihood sum w log p is recorded every
/// iteration and is non-decreasing for this scheme.
template <typename Real>
MleResult<Real> mle_reconstruct(const HomodyneDataset<Real>& data, int n_max, int n_iterations,
                                const MleOptions<Real>& opts = {}) {
    if (n_max < 2) {
        throw ParameterError("mle_reconstruct: n_max >= 2 required");
    }
    if (n_iterations < 1) {
        throw ParameterError("mle_reconstruct: need at least one iteration");
    }
    data.validate();
    using C = std::complex<Real>;
    using MatrixXc = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
    using VectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

    const int nb = int(std::round(2 * opts.range / opts.bin_width));
    Eigen::Array<Real, Eigen::Dynamic, 1> centers(nb);
    for (int b = 0; b < nb; ++b) {
        centers(b) = -opts.range + (Real(b) + Real(0.5)) * opts.bin_width;
    }
    const auto psi = oscillator_wavefunctions(centers, n_max);

    const size_t n_phases = data.records.size();
    std::vector<Real> mus(n_phases), vars(n_phases);
    for (size_t k = 0; k < n_phases; ++k) {
        const auto& xs = data.records[k].samples;
        Real mu = 0;
        for (const Real x : xs) {
            mu += x;
        }
        mu /= Real(xs.size());
        Real var = 0;
        for (const Real x : xs) {
            var += (x - mu) * (x - mu);
        }
        var /= Real(std::max<size_t>(xs.size() - 1, 1));
        mus[k] = mu;
        vars[k] = std::max(var, Real(1e-3));
    }
    if (opts.sinusoid) {
        // Project the per-phase Gaussian parameters onto their smooth phase
        // dependence: var = a + b cos 2 phi + c sin 2 phi, mean = d cos phi +
        // e sin phi. Makes the marginals mutually consistent with one
        // Gaussian state.
        Eigen::Matrix<Real, Eigen::Dynamic, 3> av(n_phases, 3);
        Eigen::Matrix<Real, Eigen::Dynamic, 2> am(n_phases, 2);
        VectorX bv(n_phases), bm(n_phases);
        for (size_t k = 0; k < n_phases; ++k) {
            const Real phi = data.records[k].phi;
            av(Eigen::Index(k), 0) = 1;
            av(Eigen::Index(k), 1) = std::cos(2 * phi);
            av(Eigen::Index(k), 2) = std::sin(2 * phi);
            am(Eigen::Index(k), 0) = std::cos(phi);
            am(Eigen::Index(k), 1) = std::sin(phi);
            bv(Eigen::Index(k)) = vars[k];
            bm(Eigen::Index(k)) = mus[k];
        }
        Eigen::Matrix<Real, 3, 1> cv = av.colPivHouseholderQr().solve(bv);
        Eigen::Matrix<Real, 2, 1> cm = am.colPivHouseholderQr().solve(bm);
        for (size_t k = 0; k < n_phases; ++k) {
            vars[k] = std::max((av.row(Eigen::Index(k)) * cv)(0), Real(1e-3));
            mus[k] = (am.row(Eigen::Index(k)) * cm)(0);
        }
    }

    // Assemble pruned POVM columns and weights.
    std::vector<MatrixXc> blocks;
    std::vector<Real> weights;
    Real total_weight = 0;
    for (size_t k = 0; k < n_phases; ++k) {
        const auto& rec = data.records[k];
        const Real n = Real(rec.samples.size());
        VectorX w(nb);
        if (opts.smooth) {
            const Real sg = std::sqrt(vars[k]);
            for (int b = 0; b < nb; ++b) {
                const Real lo = centers(b) - opts.bin_width / 2;
                const Real hi = centers(b) + opts.bin_width / 2;
                w(b) = n * (detail::gaussian_cdf(hi, mus[k], sg) -
                            detail::gaussian_cdf(lo, mus[k], sg));
            }
        } else {
            w.setZero();
            for (const Real x : rec.samples) {
                const int b = int(std::floor((x + opts.range) / opts.bin_width));
                if (b >= 0 && b < nb) {
                    w(b) += 1;
                }
            }
        }
        int kept = 0;
        for (int b = 0; b < nb; ++b) {
            kept += w(b) > Real(1e-12) * n ? 1 : 0;
        }
        MatrixXc v(n_max + 1, kept);
        Eigen::Matrix<C, Eigen::Dynamic, 1> phase_factors(n_max + 1);
        for (int m = 0; m <= n_max; ++m) {
            phase_factors(m) = std::polar(Real(1), Real(m) * rec.phi);
        }
        int col = 0;
        for (int b = 0; b < nb; ++b) {
            if (w(b) > Real(1e-12) * n) {
                v.col(col) = (phase_factors.array() *
                              psi.col(b).template cast<C>().array() *
                              std::sqrt(opts.bin_width))
                                 .matrix();
                weights.push_back(w(b));
                total_weight += w(b);
                ++col;
            }
        }
        blocks.push_back(std::move(v));
    }
    Eigen::Index n_cols = Eigen::Index(weights.size());
    MatrixXc v_all(n_max + 1, n_cols);
    Eigen::Index at = 0;
    for (const auto& blk : blocks) {
        v_all.middleCols(at, blk.cols()) = blk;
        at += blk.cols();
    }
    Eigen::Map<const VectorX> w_all(weights.data(), n_cols);

    MleResult<Real> result;
    result.converged = false;
    result.rho = MatrixXc::Identity(n_max + 1, n_max + 1) / Real(n_max + 1);
    result.log_likelihoods.reserve(size_t(n_iterations));
    for (int it = 0; it < n_iterations; ++it) {
        MatrixXc t = result.rho * v_all;
        VectorX p(n_cols);
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            p(c) = std::max(std::real(v_all.col(c).dot(t.col(c))), Real(1e-300));
        }
        Real ll = 0;
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            ll += w_all(c) * std::log(p(c));
        }
        result.log_likelihoods.push_back(ll);
        if (opts.tolerance > 0 && it > 0 &&
            ll - result.log_likelihoods[size_t(it - 1)] <
                opts.tolerance * std::abs(ll)) {
            result.converged = true;
            break;
        }
        MatrixXc r = (v_all * (w_all.array() / p.array()).matrix().asDiagonal() *
                      v_all.adjoint()) /
                     total_weight;
        MatrixXc next = r * result.rho * r;
        next /= next.trace();
        result.rho = (next + next.adjoint()) / Real(2);
    }
    return result;
}

}  // namespace svclock

#endif
