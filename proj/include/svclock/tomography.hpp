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

#ifndef SVCLOCK_TOMOGRAPHY_HPP
#define SVCLOCK_TOMOGRAPHY_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "svclock/errors.hpp"
#include "svclock/squeezed_vacuum.hpp"
#include "svclock/units.hpp"

namespace svclock {

// Homodyne tomography: filtered back-projection of quadrature marginals onto
// a Wigner-function grid, and a Gaussian fit of the result that accounts for
// the reconstruction's band limit.

template <typename Real>
struct PhaseSamples {
    Real phi;                   ///< local-oscillator phase (rad)
    std::vector<Real> samples;  ///< quadrature values
};

/// Per-phase collections of quadrature samples. Phases are canonicalized to
/// [0, pi): phi and phi + pi label the same quadrature up to the reflection
/// X -> -X.
template <typename Real>
struct HomodyneDataset {
    std::vector<PhaseSamples<Real>> records;

    void canonicalize() {
        for (auto& rec : records) {
            Real phi = std::fmod(rec.phi, two_pi_v<Real>);
            if (phi < 0) {
                phi += two_pi_v<Real>;
            }
            if (phi >= pi_v<Real>) {
                phi -= pi_v<Real>;
                for (Real& x : rec.samples) {
                    x = -x;
                }
            }
            rec.phi = phi;
        }
    }

    void validate() const {
        std::int64_t distinct = 0;
        for (size_t i = 0; i < records.size(); ++i) {
            if (records[i].samples.empty()) {
                throw DataError("HomodyneDataset: phase with no samples");
            }
            bool duplicate = false;
            for (size_t j = 0; j < i; ++j) {
                duplicate = duplicate || records[j].phi == records[i].phi;
            }
            distinct += duplicate ? 0 : 1;
        }
        if (distinct < 2) {
            throw DataError("HomodyneDataset: need at least two distinct phases");
        }
    }

    std::int64_t total_samples() const {
        std::int64_t n = 0;
        for (const auto& rec : records) {
            n += std::int64_t(rec.samples.size());
        }
        return n;
    }
};

/// Simulates the experimental dataset: n_phases local-oscillator phases
/// evenly spaced over a pi interval, n_samples homodyne shots each.
template <typename Real>
HomodyneDataset<Real> sample_homodyne_dataset(SqueezedVacuumSpec<Real> spec,
                                              std::int64_t n_phases, std::int64_t n_samples,
                                              std::uint64_t seed) {
    if (n_phases < 2 || n_samples < 1) {
        throw ParameterError("sample_homodyne_dataset: need >= 2 phases and >= 1 sample");
    }
    HomodyneDataset<Real> data;
    data.records.reserve(size_t(n_phases));
    for (std::int64_t k = 0; k < n_phases; ++k) {
        spec.phi = pi_v<Real> * Real(k) / Real(n_phases);
        data.records.push_back(
            {spec.phi, sample_homodyne(spec, n_samples, substream_seed(seed, std::uint64_t(k)))});
    }
    return data;
}

/// Band-limited back-projection kernel
///   K(x) = [cos(k_c x) + k_c x sin(k_c x) - 1] / x^2,
/// evaluated through its Taylor series k_c^2 (1/2 - u^2/8 + u^4/144),
/// u = k_c x, near the removable singularity (limit k_c^2/2 at x = 0).
template <typename Real>
Real radon_kernel(Real x, Real k_c) {
    if (!(k_c > 0)) {
        throw ParameterError("radon_kernel: k_c must be positive");
    }
    const Real u = k_c * x;
    if (std::abs(u) < Real(1e-2)) {
        const Real u2 = u * u;
        return k_c * k_c * (Real(0.5) - u2 / 8 + u2 * u2 / 144);
    }
    return (std::cos(u) + u * std::sin(u) - 1) / (x * x);
}

template <typename Real>
struct GridSpec {
    Real x_min = -4, x_max = 4;
    int nx = 61;
    Real p_min = -4, p_max = 4;
    int np = 61;

    void validate() const {
        if (nx < 2 || np < 2 || !(x_max > x_min) || !(p_max > p_min)) {
            throw ParameterError("GridSpec: need >= 2 points per axis and increasing bounds");
        }
    }
};

template <typename Real>
struct WignerGrid {
    Eigen::Array<Real, Eigen::Dynamic, 1> x_axis;
    Eigen::Array<Real, Eigen::Dynamic, 1> p_axis;
    /// values(i, j) = W(x_axis(i), p_axis(j)).
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> values;

    /// Trapezoidal integral over the grid.
    Real integral() const {
        Eigen::Array<Real, Eigen::Dynamic, 1> wx =
            Eigen::Array<Real, Eigen::Dynamic, 1>::Ones(x_axis.size());
        Eigen::Array<Real, Eigen::Dynamic, 1> wp =
            Eigen::Array<Real, Eigen::Dynamic, 1>::Ones(p_axis.size());
        wx(0) = wx(x_axis.size() - 1) = Real(0.5);
        wp(0) = wp(p_axis.size() - 1) = Real(0.5);
        const Real dx = (x_axis(x_axis.size() - 1) - x_axis(0)) / Real(x_axis.size() - 1);
        const Real dp = (p_axis(p_axis.size() - 1) - p_axis(0)) / Real(p_axis.size() - 1);
        return (wx.matrix().transpose() * values * wp.matrix())(0, 0) * dx * dp;
    }
};

template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, 1> linspace(Real lo, Real hi, int n) {
    return Eigen::Array<Real, Eigen::Dynamic, 1>::LinSpaced(n, lo, hi);
}

/// Filtered back-projection estimator over raw samples:
///   W(X,P) = (1/2 pi^2) (pi/n_phases) sum_phi (1/n_samples) sum_j
///            K(X cos phi + P sin phi - X_j).
template <typename Real>
WignerGrid<Real> reconstruct_wigner(const HomodyneDataset<Real>& data, const GridSpec<Real>& grid,
                                    Real k_c) {
    data.validate();
    grid.validate();
    WignerGrid<Real> w;
    w.x_axis = linspace(grid.x_min, grid.x_max, grid.nx);
    w.p_axis = linspace(grid.p_min, grid.p_max, grid.np);
    w.values.setZero(grid.nx, grid.np);
    for (const auto& rec : data.records) {
        const Real c = std::cos(rec.phi);
        const Real s = std::sin(rec.phi);
        const Real norm = Real(1) / Real(rec.samples.size());
        for (int i = 0; i < grid.nx; ++i) {
            for (int j = 0; j < grid.np; ++j) {
                const Real proj = w.x_axis(i) * c + w.p_axis(j) * s;
                Real acc = 0;
                for (const Real x : rec.samples) {
                    acc += radon_kernel(proj - x, k_c);
                }
                w.values(i, j) += acc * norm;
            }
        }
    }
    w.values *= pi_v<Real> / Real(data.records.size()) / (2 * pi_v<Real> * pi_v<Real>);
    return w;
}

/// Histogram-based variant of the estimator: samples are binned per phase and
/// the kernel is applied to bin centers with count weights. Gives the same
/// result as the raw-sample sum in the limit of small bins.
template <typename Real>
WignerGrid<Real> reconstruct_wigner_histogram(const HomodyneDataset<Real>& data,
                                              const GridSpec<Real>& grid, Real k_c,
                                              Real bin_width) {
    if (!(bin_width > 0)) {
        throw ParameterError("reconstruct_wigner_histogram: bin width must be positive");
    }
    data.validate();
    grid.validate();
    HomodyneDataset<Real> binned;
    binned.records.reserve(data.records.size());
    for (const auto& rec : data.records) {
        // Replace each sample by its bin center; identical phases keep their
        // sample counts, so the estimator normalization is unchanged.
        PhaseSamples<Real> b{rec.phi, {}};
        b.samples.reserve(rec.samples.size());
        for (const Real x : rec.samples) {
            b.samples.push_back((std::floor(x / bin_width) + Real(0.5)) * bin_width);
        }
        binned.records.push_back(std::move(b));
    }
    return reconstruct_wigner(binned, grid, k_c);
}

/// Gaussian description of a reconstructed state: covariance matrix
/// [[c_xx, c_xp], [c_xp, c_pp]], its eigenvalues (squeezed / anti-squeezed
/// variances) and the squeezed axis angle.
template <typename Real>
struct GaussianFit {
    Real c_xx, c_xp, c_pp;
    Real amplitude;  ///< fitted total weight (1 for a normalized state)
    Real var_min, var_max;
    Real angle_min;  ///< direction of the smallest-variance axis (rad)
    int iterations;
};

namespace detail {

/// Band-limited Gaussian model: the covariance-C Gaussian convolved with the
/// hard k-space cutoff |k| < k_c that the back-projection kernel applies.
/// Evaluated by quadrature of its characteristic function on a k grid.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> band_limited_gaussian(
    Real c_xx, Real c_xp, Real c_pp, Real k_c,
    const Eigen::Array<Real, Eigen::Dynamic, 1>& x_axis,
    const Eigen::Array<Real, Eigen::Dynamic, 1>& p_axis) {
    using C = std::complex<Real>;
    using MatrixXc = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
    const int nk = 64;
    Eigen::Array<Real, Eigen::Dynamic, 1> k = linspace(-k_c, k_c, nk);
    const Real dk = k(1) - k(0);
    MatrixXc mk(nk, nk);
    for (int a = 0; a < nk; ++a) {
        for (int b = 0; b < nk; ++b) {
            const Real kx = k(a), kp = k(b);
            if (kx * kx + kp * kp <= k_c * k_c) {
                mk(a, b) = std::exp(C(-(c_xx * kx * kx + 2 * c_xp * kx * kp + c_pp * kp * kp) / 2, 0));
            } else {
                mk(a, b) = 0;
            }
        }
    }
    MatrixXc ex(x_axis.size(), nk), ep(p_axis.size(), nk);
    for (int a = 0; a < nk; ++a) {
        for (Eigen::Index i = 0; i < x_axis.size(); ++i) {
            ex(i, a) = std::polar(Real(1), -x_axis(i) * k(a));
        }
        for (Eigen::Index j = 0; j < p_axis.size(); ++j) {
            ep(j, a) = std::polar(Real(1), -p_axis(j) * k(a));
        }
    }
    return (ex * mk * ep.transpose()).real() * dk * dk /
           (4 * pi_v<Real> * pi_v<Real>);
}

}  // namespace detail

/// Second moments of a Wigner grid (normalized by its own integral).
template <typename Real>
void grid_moments(const WignerGrid<Real>& w, Real& c_xx, Real& c_xp, Real& c_pp) {
    Real tot = 0, xx = 0, xp = 0, pp = 0;
    for (Eigen::Index i = 0; i < w.x_axis.size(); ++i) {
        for (Eigen::Index j = 0; j < w.p_axis.size(); ++j) {
            const Real v = w.values(i, j);
            tot += v;
            xx += v * w.x_axis(i) * w.x_axis(i);
            xp += v * w.x_axis(i) * w.p_axis(j);
            pp += v * w.p_axis(j) * w.p_axis(j);
        }
    }
    c_xx = xx / tot;
    c_xp = xp / tot;
    c_pp = pp / tot;
}

/// Least-squares fit of a reconstructed grid against the band-limited
/// Gaussian model (Gauss-Newton over c_xx, c_xp, c_pp and an amplitude).
/// Recovers the underlying state's covariance free of the band-limit bias
/// that plain grid moments suffer from.
template <typename Real>
GaussianFit<Real> fit_gaussian(const WignerGrid<Real>& w, Real k_c) {
    Real c_xx, c_xp, c_pp;
    grid_moments(w, c_xx, c_xp, c_pp);
    // The cutoff's point-spread function adds an isotropic ~0.25 to the
    // moments on this grid; subtracting it gives a good starting point.
    Eigen::Matrix<Real, 4, 1> theta(std::max(c_xx - Real(0.25), Real(0.05)), c_xp,
                                    std::max(c_pp - Real(0.25), Real(0.05)), Real(1));
    const Eigen::Index n_pix = w.x_axis.size() * w.p_axis.size();
    Eigen::Matrix<Real, Eigen::Dynamic, 1> resid(n_pix);
    Eigen::Matrix<Real, Eigen::Dynamic, 4> jac(n_pix, 4);
    const Real eps = Real(1e-4);
    int it = 0;
    for (; it < 30; ++it) {
        auto model = detail::band_limited_gaussian(theta(0), theta(1), theta(2), k_c, w.x_axis,
                                                   w.p_axis);
        Eigen::Index row = 0;
        for (Eigen::Index i = 0; i < w.x_axis.size(); ++i) {
            for (Eigen::Index j = 0; j < w.p_axis.size(); ++j, ++row) {
                resid(row) = w.values(i, j) - theta(3) * model(i, j);
            }
        }
        for (int parameter = 0; parameter < 3; ++parameter) {
            Eigen::Matrix<Real, 4, 1> bumped = theta;
            bumped(parameter) += eps;
            auto model_bumped = detail::band_limited_gaussian(bumped(0), bumped(1), bumped(2), k_c,
                                                              w.x_axis, w.p_axis);
            row = 0;
            for (Eigen::Index i = 0; i < w.x_axis.size(); ++i) {
                for (Eigen::Index j = 0; j < w.p_axis.size(); ++j, ++row) {
                    jac(row, parameter) = theta(3) * (model_bumped(i, j) - model(i, j)) / eps;
                }
            }
        }
        row = 0;
        for (Eigen::Index i = 0; i < w.x_axis.size(); ++i) {
            for (Eigen::Index j = 0; j < w.p_axis.size(); ++j, ++row) {
                jac(row, 3) = model(i, j);
            }
        }
        Eigen::Matrix<Real, 4, 1> step = jac.colPivHouseholderQr().solve(resid);
        theta += step;
        if (step.norm() < Real(1e-10)) {
            break;
        }
    }
    GaussianFit<Real> fit;
    fit.c_xx = theta(0);
    fit.c_xp = theta(1);
    fit.c_pp = theta(2);
    fit.amplitude = theta(3);
    fit.iterations = it;
    Eigen::Matrix<Real, 2, 2> cov;
    cov << theta(0), theta(1), theta(1), theta(2);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Real, 2, 2>> es(cov);
    fit.var_min = es.eigenvalues()(0);
    fit.var_max = es.eigenvalues()(1);
    fit.angle_min = std::atan2(es.eigenvectors()(1, 0), es.eigenvectors()(0, 0));
    return fit;
}

/// Marginal of a Wigner grid along p (the phi = 0 quadrature distribution).
template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, 1> marginal_x(const WignerGrid<Real>& w) {
    const Real dp = (w.p_axis(w.p_axis.size() - 1) - w.p_axis(0)) / Real(w.p_axis.size() - 1);
    Eigen::Array<Real, Eigen::Dynamic, 1> weights =
        Eigen::Array<Real, Eigen::Dynamic, 1>::Ones(w.p_axis.size());
    weights(0) = weights(w.p_axis.size() - 1) = Real(0.5);
    return (w.values * weights.matrix()).array() * dp;
}

}  // namespace svclock

#endif
