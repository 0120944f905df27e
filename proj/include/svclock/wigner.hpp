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

#ifndef SVCLOCK_WIGNER_HPP
#define SVCLOCK_WIGNER_HPP

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "svclock/errors.hpp"
#include "svclock/mle.hpp"
#include "svclock/tomography.hpp"

namespace svclock {

// Wigner function of a Fock-basis density matrix. Convention: [x, p] = i,
// vacuum W(x, p) = exp(-x^2 - p^2)/pi (Var x = 1/2).
//
// Closed form per matrix element (n >= m), with z = x + i p and s = |z|^2:
//   W_{m n}(x, p) = (1/pi) (-1)^m sqrt(m!/n!) (sqrt(2) z)^{n-m}
//                   e^{-s} L_m^{n-m}(2 s),
// accumulated as W = sum_{m n} rho_{n m} W_{m n} (the n < m half follows by
// conjugation). Validated in the tests against the position-representation
// integral W(x,p) = (1/pi) int dy e^{2 i p y} rho(x + y, x - y).

/// W(x, p) of a single density matrix at one phase-space point.
template <typename Real>
Real wigner_point(const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& rho,
                  Real x, Real p) {
    using C = std::complex<Real>;
    const int d = int(rho.rows());
    const C z = C(x, p);
    const Real s = x * x + p * p;
    const Real gauss = std::exp(-s) / pi_v<Real>;
    const Real u = 2 * s;
    C total = 0;
    // Precompute ladder of sqrt-factorial ratios along each diagonal.
    for (int k = 0; k < d; ++k) {  // k = n - m >= 0
        // sqrt(m!/(m+k)!) for m = 0: 1/sqrt(k!)
        Real ratio = 1;
        C zk = 1;
        for (int j = 1; j <= k; ++j) {
            ratio /= std::sqrt(Real(j));
            zk *= std::sqrt(Real(2)) * z;
        }
        Real lag_prev = 0;  // L_{m-1}^k
        Real lag = 1;       // L_0^k
        for (int m = 0; m + k < d; ++m) {
            if (m >= 1) {
                // L_m^k(u) by the three-term recurrence.
                const Real next =
                    ((Real(2 * m - 1 + k) - u) * lag - Real(m - 1 + k) * lag_prev) / Real(m);
                lag_prev = lag;
                lag = next;
                ratio *= std::sqrt(Real(m) / Real(m + k));
            }
            const Real sign = (m % 2 == 0) ? Real(1) : Real(-1);
            const C element = sign * ratio * zk * lag;  // W_{m, m+k} / (gauss)
            if (k == 0) {
                total += rho(m, m) * element;
            } else {
                total += rho(m + k, m) * element + rho(m, m + k) * std::conj(element);
            }
        }
    }
    return gauss * std::real(total);
}

/// Wigner function of rho on a rectangular grid.
template <typename Real>
WignerGrid<Real> wigner_from_density(
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& rho,
    const GridSpec<Real>& grid) {
    if (rho.rows() < 1 || rho.rows() != rho.cols()) {
        throw ParameterError("wigner_from_density: square density matrix required");
    }
    grid.validate();
    WignerGrid<Real> w;
    w.x_axis = linspace(grid.x_min, grid.x_max, grid.nx);
    w.p_axis = linspace(grid.p_min, grid.p_max, grid.np);
    w.values.resize(grid.nx, grid.np);
    for (int i = 0; i < grid.nx; ++i) {
        for (int j = 0; j < grid.np; ++j) {
            w.values(i, j) = wigner_point(rho, w.x_axis(i), w.p_axis(j));
        }
    }
    return w;
}

/// Reference evaluation through the position-representation integral
/// W(x, p) = (1/pi) int dy e^{2 i p y} rho(x+y, x-y), by trapezoidal
/// quadrature. Slow; used to validate wigner_point.
template <typename Real>
Real wigner_point_integral(
    const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>& rho, Real x, Real p,
    Real y_range = 10, int n_y = 2001) {
    using C = std::complex<Real>;
    const int n_max = int(rho.rows()) - 1;
    Eigen::Array<Real, Eigen::Dynamic, 1> y =
        Eigen::Array<Real, Eigen::Dynamic, 1>::LinSpaced(n_y, -y_range, y_range);
    const Real dy = y(1) - y(0);
    Eigen::Array<Real, Eigen::Dynamic, 1> plus = x + y;
    Eigen::Array<Real, Eigen::Dynamic, 1> minus = x - y;
    const auto psi_plus = oscillator_wavefunctions(plus, n_max);
    const auto psi_minus = oscillator_wavefunctions(minus, n_max);
    C acc = 0;
    for (int iy = 0; iy < n_y; ++iy) {
        C rho_xy = 0;
        for (int m = 0; m <= n_max; ++m) {
            for (int n = 0; n <= n_max; ++n) {
                rho_xy += rho(m, n) * psi_plus(m, iy) * psi_minus(n, iy);
            }
        }
        const Real weight = (iy == 0 || iy == n_y - 1) ? Real(0.5) : Real(1);
        acc += weight * std::polar(Real(1), 2 * p * y(iy)) * rho_xy;
    }
    return std::real(acc) * dy / pi_v<Real>;
}

/// Minimum of W over the grid (used by the positivity checks).
template <typename Real>
Real wigner_minimum(const WignerGrid<Real>& w) {
    return w.values.minCoeff();
}

/// Fock-basis density matrix of the squeezed vacuum with squeeze parameter r
/// and squeezed-axis angle phi_sq (pure state; even levels only). Useful as
/// ground truth in tests and for fidelity checks.
template <typename Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> squeezed_vacuum_density(
    Real r, Real phi_sq, int n_max) {
    using C = std::complex<Real>;
    Eigen::Matrix<C, Eigen::Dynamic, 1> c = Eigen::Matrix<C, Eigen::Dynamic, 1>::Zero(n_max + 1);
    // |sq> = (1/sqrt(cosh r)) sum_m (-e^{i xi} tanh r)^m sqrt((2m)!)/(2^m m!) |2m>,
    // with xi chosen so the squeezed quadrature sits at angle phi_sq.
    const Real t = std::tanh(r);
    const C phase = std::polar(Real(1), 2 * phi_sq);
    C factor = 1;
    Real coeff = 1;
    for (int m = 0; 2 * m <= n_max; ++m) {
        if (m > 0) {
            factor *= -phase * t;
            coeff *= std::sqrt(Real(2 * m) * Real(2 * m - 1)) / (2 * Real(m));
        }
        c(2 * m) = factor * coeff;
    }
    c /= c.norm();  // includes the 1/sqrt(cosh r) and heals the truncation
    return c * c.adjoint();
}

}  // namespace svclock

#endif
