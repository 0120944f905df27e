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

#ifndef SVCLOCK_FOCK_ORACLE_HPP
#define SVCLOCK_FOCK_ORACLE_HPP

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "svclock/errors.hpp"

namespace svclock {

// Brute-force number-basis oracle for the pair-creation drive
// H = Omega (a+^dag a-^dag + a+ a-).
//
// Starting from two-mode vacuum, the drive only reaches the pair-correlated
// states |n, n>, so the evolution is done exactly on that subspace, where H
// is the tridiagonal matrix T[n][n+1] = Omega (n+1). The symmetric mode
// g = (a+ + a-)/sqrt(2) then has
//   <g^dag g> = <n>,   <g^2> = sum_n  conj(c[n-1]) c[n] * n,
//   Var X_g(phi) = 1/2 + <g^dag g> + Re(e^{-2 i phi} <g^2>),
// and the antisymmetric mode a = (a+ - a-)/sqrt(2) has <a^2> = -<g^2>, so its
// variances are those of g rotated by pi/2. This module exists purely to
// validate the closed-form Gaussian statistics used elsewhere.

template <typename Real>
struct FockState {
    int cutoff = 0;  ///< highest pair index n kept (state spans n = 0..cutoff)
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> amplitudes;  ///< c[n] over |n,n>

    Real cutoff_population() const { return std::norm(amplitudes(cutoff)); }

    Real mean_occupation() const {  // per mode: <n+> = <n->
        Real acc = 0;
        for (int n = 1; n <= cutoff; ++n) {
            acc += Real(n) * std::norm(amplitudes(n));
        }
        return acc;
    }

    std::complex<Real> mean_g_squared() const {
        std::complex<Real> acc = 0;
        for (int n = 1; n <= cutoff; ++n) {
            acc += std::conj(amplitudes(n - 1)) * amplitudes(n) * Real(n);
        }
        return acc;
    }

    Real var_x_g(Real phi) const {
        const std::complex<Real> rot = std::polar(Real(1), -2 * phi);
        return Real(0.5) + mean_occupation() + std::real(rot * mean_g_squared());
    }

    Real var_x_a(Real phi) const {
        const std::complex<Real> rot = std::polar(Real(1), -2 * phi);
        return Real(0.5) + mean_occupation() - std::real(rot * mean_g_squared());
    }
};

/// Evolves two-mode vacuum under the pair-creation Hamiltonian for time t on
/// the pair subspace truncated at n_max. No adequacy check; see
/// fock_spin_dynamics for the checked entry point.
template <typename Real>
FockState<Real> pair_basis_evolve(Real omega, Real t, int n_max) {
    if (n_max < 1) {
        throw ParameterError("pair_basis_evolve: n_max >= 1 required");
    }
    if (!(t >= 0)) {
        throw ParameterError("pair_basis_evolve: negative duration");
    }
    using MatrixX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    MatrixX h = MatrixX::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n < n_max; ++n) {
        h(n, n + 1) = omega * Real(n + 1);
        h(n + 1, n) = omega * Real(n + 1);
    }
    Eigen::SelfAdjointEigenSolver<MatrixX> es(h);
    // c = V exp(-i t lambda) V^T e0
    Eigen::Matrix<Real, Eigen::Dynamic, 1> first_row = es.eigenvectors().row(0).transpose();
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> phases =
        (std::complex<Real>(0, -t) * es.eigenvalues().template cast<std::complex<Real>>().array())
            .exp();
    FockState<Real> state;
    state.cutoff = n_max;
    state.amplitudes =
        es.eigenvectors().template cast<std::complex<Real>>() *
        (phases.array() * first_row.template cast<std::complex<Real>>().array()).matrix();
    return state;
}

/// Checked oracle evolution: requires the truncation to actually hold the
/// state (population at the cutoff level below `adequacy`).
template <typename Real>
FockState<Real> fock_spin_dynamics(Real omega, Real t, int n_max, Real adequacy = Real(1e-6)) {
    FockState<Real> state = pair_basis_evolve(omega, t, n_max);
    const Real population = state.cutoff_population();
    if (!(population < adequacy)) {
        throw CutoffError("fock_spin_dynamics: cutoff population " + std::to_string(population) +
                              " at n_max " + std::to_string(n_max),
                          double(population));
    }
    return state;
}

}  // namespace svclock

#endif
