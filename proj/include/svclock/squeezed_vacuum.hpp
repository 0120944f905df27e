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

#ifndef SVCLOCK_SQUEEZED_VACUUM_HPP
#define SVCLOCK_SQUEEZED_VACUUM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "svclock/errors.hpp"
#include "svclock/rng.hpp"
#include "svclock/units.hpp"

namespace svclock {

// Gaussian statistics of the squeezed-vacuum mode feeding the clock
// interferometer's empty port, and how its quadrature fluctuations map to
// fraction and phase uncertainty at the fringe.
//
// Quadrature convention: vacuum has Var X = 1/2. The squeezed direction sits
// at local-oscillator phase phi == phi_sq (default pi/4), where
// Var X = exp(-2 r)/2.

template <typename Real>
struct SqueezedVacuumSpec {
    Real r = 0;                             ///< squeeze parameter
    Real phi = 0;                           ///< local-oscillator phase (rad)
    std::int64_t n_atoms = 10000;           ///< total atom number N
    Real phi_sq = pi_v<Real> / 4;           ///< squeezed-quadrature angle

    void validate() const {
        if (!(r >= 0) || n_atoms < 1 || !std::isfinite(phi) || !std::isfinite(phi_sq)) {
            throw ParameterError("SqueezedVacuumSpec: r >= 0 and N >= 1 required");
        }
    }
};

/// r = Omega * t for the pair-creation drive.
template <typename Real>
Real squeeze_parameter(Real omega, Real t) {
    if (!(t >= 0)) {
        throw ParameterError("squeeze_parameter: negative duration");
    }
    return omega * t;
}

/// Mean occupation sinh^2(r) of each Zeeman mode.
template <typename Real>
Real mean_pair_population(Real r) {
    if (!(r >= 0)) {
        throw ParameterError("mean_pair_population: negative squeeze parameter");
    }
    const Real s = std::sinh(r);
    return s * s;
}

/// Var X(phi) = [exp(-2r) cos^2(phi - phi_sq) + exp(+2r) sin^2(phi - phi_sq)] / 2.
template <typename Real>
Real quadrature_variance(const SqueezedVacuumSpec<Real>& spec) {
    spec.validate();
    const Real c = std::cos(spec.phi - spec.phi_sq);
    const Real s = std::sin(spec.phi - spec.phi_sq);
    return (std::exp(-2 * spec.r) * c * c + std::exp(2 * spec.r) * s * s) / 2;
}

/// Gaussian homodyne samples of the quadrature at spec.phi. Deterministic for
/// a fixed seed; sample j always comes from substream j of the seed.
template <typename Real>
std::vector<Real> sample_homodyne(const SqueezedVacuumSpec<Real>& spec, std::int64_t n_samples,
                                  std::uint64_t seed) {
    if (n_samples < 1) {
        throw ParameterError("sample_homodyne: need at least one sample");
    }
    const Real sigma = std::sqrt(quadrature_variance(spec));
    std::vector<Real> out(static_cast<size_t>(n_samples));
    for (std::int64_t j = 0; j < n_samples; ++j) {
        out[size_t(j)] = Real(shot_stream(seed, std::uint64_t(j))(0.0, double(sigma)));
    }
    return out;
}

/// Mean and variance of the transferred fraction at interferometer phase
/// theta: f_bar = sin^2(theta/2), (Delta f)^2 = Var X(phi) sin^2(theta)/(2N).
template <typename Real>
struct FractionStatistics {
    Real mean;
    Real variance;
};

template <typename Real>
FractionStatistics<Real> fraction_statistics(Real theta, const SqueezedVacuumSpec<Real>& spec) {
    spec.validate();
    const Real half = std::sin(theta / 2);
    const Real s = std::sin(theta);
    return {half * half, quadrature_variance(spec) * s * s / (2 * Real(spec.n_atoms))};
}

/// One simulated clock shot.
template <typename Real>
struct ShotRecord {
    Real phi;       ///< local-oscillator phase (rad)
    Real theta;     ///< interferometer phase (rad)
    Real f;         ///< measured fraction, clipped to [0,1]
    Real x_sample;  ///< the quadrature value behind the fraction
};

/// Simulates homodyne clock shots at interferometer phase theta:
///   f = sin^2(theta/2) + sin(theta) * X / sqrt(2 N) + detection noise,
/// where X is the sampled quadrature and the detection noise is an
/// independent Gaussian of detection_sigma atoms on each of the two output
/// populations (variance 2 detection_sigma^2 / N^2 in fraction units).
template <typename Real>
std::vector<ShotRecord<Real>> simulate_shots(Real theta, const SqueezedVacuumSpec<Real>& spec,
                                             std::int64_t n_shots, Real detection_sigma,
                                             std::uint64_t seed) {
    if (n_shots < 1) {
        throw ParameterError("simulate_shots: need at least one shot");
    }
    spec.validate();
    const Real sigma_x = std::sqrt(quadrature_variance(spec));
    const Real f_mean = std::sin(theta / 2) * std::sin(theta / 2);
    const Real scale = std::sin(theta) / std::sqrt(2 * Real(spec.n_atoms));
    const Real detect_fraction_sigma =
        detection_sigma * std::sqrt(Real(2)) / Real(spec.n_atoms);
    std::vector<ShotRecord<Real>> out(static_cast<size_t>(n_shots));
    for (std::int64_t j = 0; j < n_shots; ++j) {
        GaussianSampler gauss = shot_stream(seed, std::uint64_t(j));
        const Real x = Real(gauss(0.0, double(sigma_x)));
        Real f = f_mean + scale * x;
        if (detect_fraction_sigma > 0) {
            f += Real(gauss(0.0, double(detect_fraction_sigma)));
        }
        f = std::clamp(f, Real(0), Real(1));
        out[size_t(j)] = {spec.phi, theta, f, x};
    }
    return out;
}

/// (Delta theta)^2 = (Delta f)^2 / slope^2.
template <typename Real>
Real phase_uncertainty(Real var_f, Real slope) {
    if (slope == 0) {
        throw DegenerateSlopeError("phase_uncertainty: fringe slope is zero");
    }
    return var_f / (slope * slope);
}

/// Fringe slope d f_bar / d theta = sin(theta)/2.
template <typename Real>
Real fringe_slope(Real theta) {
    return std::sin(theta) / 2;
}

/// 10 log10(N * (Delta theta)^2); negative is below the standard quantum
/// limit.
template <typename Real>
Real db_vs_sql(Real var_theta, std::int64_t n_atoms) {
    if (!(var_theta > 0) || n_atoms < 1) {
        throw ParameterError("db_vs_sql: variance must be positive");
    }
    return 10 * std::log10(Real(n_atoms) * var_theta);
}

/// Mean-field map onto the collective pseudo-spin:
/// Jx = sqrt(N) x, Jy = sqrt(N) p, Jz = N/2.
template <typename Real>
struct PseudoSpin {
    Real jx, jy, jz;
};

template <typename Real>
PseudoSpin<Real> quadrature_to_pseudospin(Real x, Real p, std::int64_t n_atoms) {
    if (n_atoms < 1) {
        throw ParameterError("quadrature_to_pseudospin: N >= 1 required");
    }
    const Real root = std::sqrt(Real(n_atoms));
    return {root * x, root * p, Real(n_atoms) / 2};
}

/// Sample variance (unbiased) of a shot ensemble's fractions.
template <typename Real>
Real fraction_sample_variance(const std::vector<ShotRecord<Real>>& shots) {
    if (shots.size() < 2) {
        throw ParameterError("fraction_sample_variance: need at least two shots");
    }
    Real mean = 0;
    for (const auto& s : shots) {
        mean += s.f;
    }
    mean /= Real(shots.size());
    Real acc = 0;
    for (const auto& s : shots) {
        acc += (s.f - mean) * (s.f - mean);
    }
    return acc / Real(shots.size() - 1);
}

}  // namespace svclock

#endif
