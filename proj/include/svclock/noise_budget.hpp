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

#ifndef SVCLOCK_NOISE_BUDGET_HPP
#define SVCLOCK_NOISE_BUDGET_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "svclock/atom_model.hpp"
#include "svclock/errors.hpp"
#include "svclock/rng.hpp"
#include "svclock/squeezed_vacuum.hpp"
#include "svclock/units.hpp"

namespace svclock {

// Monte-Carlo technical-noise model of the clock output.
//
// Shot-to-shot magnetic field fluctuations give the two Zeeman levels a
// differential phase delta_phi during the interrogation, rotating part of
// the symmetric-mode population into the antisymmetric mode, which the final
// readout pulse cannot bring back: those atoms inflate the measured fraction,
//   f = f_id + (1 - f_id) N_a / N.
// Each shot composes four independent noise sources -- quadrature (quantum),
// antisymmetric counting, detection, and an optional flat technical floor --
// so the total variance has a closed-form quadrature sum the Monte Carlo can
// be checked against.

template <typename Real>
struct NoiseSpec {
    Real sigma_B = Real(100e-6);           ///< field fluctuation, shot-to-shot std dev (G)
    Real kappa_B = Real(7.0e5);            ///< differential Zeeman coefficient (Hz/G)
    Real detection_sigma = 16;             ///< detection noise per output population (atoms)
    Real technical_fraction_sigma = 0;     ///< flat extra fraction noise (calibration floor)
    Real pulse_area_sigma = 0;             ///< shot-to-shot pulse-area jitter (rad)
    std::int64_t n_shots = 10000;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(sigma_B >= 0) || n_shots < 1 || !(detection_sigma >= 0) ||
            !(technical_fraction_sigma >= 0) || !(pulse_area_sigma >= 0)) {
            throw ParameterError("NoiseSpec: sigma_B >= 0 and n_shots >= 1 required");
        }
    }
};

/// Differential phase accumulated between |1,+1> and |1,0> (and opposite for
/// |1,-1>) from a field excursion delta_B over time t.
template <typename Real>
Real differential_phase(Real delta_B, Real t, Real kappa_B) {
    if (!(t >= 0)) {
        throw ParameterError("differential_phase: negative duration");
    }
    return two_pi_v<Real> * kappa_B * delta_B * t;
}

/// Population weights of the symmetric/antisymmetric modes after the state
/// cos(delta_phi)|g> + i sin(delta_phi)|a>.
template <typename Real>
std::pair<Real, Real> antisymmetric_mixing(Real delta_phi) {
    const Real c = std::cos(delta_phi);
    const Real s = std::sin(delta_phi);
    return {c * c, s * s};
}

/// f = f_id + (1 - f_id) N_a / N.
template <typename Real>
Real noisy_fraction(Real f_id, Real n_a, Real n_total) {
    if (!(f_id >= 0 && f_id <= 1) || !(n_a >= 0) || !(n_a <= n_total)) {
        throw ParameterError("noisy_fraction: need 0 <= f_id <= 1 and 0 <= N_a <= N");
    }
    return f_id + (1 - f_id) * n_a / n_total;
}

/// Moments of s = sin^2(delta_phi) for delta_phi ~ N(0, sigma_phi):
/// E[s] = (1 - e^{-2 s2})/2, E[s^2] = (3 - 4 e^{-2 s2} + e^{-8 s2})/8 with
/// s2 = sigma_phi^2 (from E[cos k phi] = e^{-k^2 s2 / 2}).
template <typename Real>
struct MixingMoments {
    Real mean_s;
    Real mean_s2;
};

template <typename Real>
MixingMoments<Real> mixing_moments(Real sigma_phi) {
    const Real s2 = sigma_phi * sigma_phi;
    const Real e2 = std::exp(-2 * s2);
    const Real e8 = std::exp(-8 * s2);
    return {(1 - e2) / 2, (3 - 4 * e2 + e8) / 8};
}

/// Analytic variance of N_a ~ Binomial(M, s) with random s = sin^2(delta_phi).
template <typename Real>
Real antisymmetric_count_variance(std::int64_t m_atoms, Real sigma_phi) {
    const auto mm = mixing_moments(sigma_phi);
    const Real m = Real(m_atoms);
    return m * (mm.mean_s - mm.mean_s2) + m * m * (mm.mean_s2 - mm.mean_s * mm.mean_s);
}

template <typename Real>
struct NoiseBudgetRow {
    Real delta_hz;       ///< microwave detuning of this row (Hz)
    Real theta;          ///< effective interferometer phase 2 pi delta (tau_R + tau_mw)
    Real f_id;           ///< noiseless model fraction at this detuning
    Real mc_mean;        ///< Monte-Carlo mean fraction
    Real mc_variance;    ///< Monte-Carlo fraction variance (unbiased)
    Real mc_fourth_central;  ///< central fourth moment, for standard-error estimates
    Real analytic_mean;
    Real analytic_variance;  ///< quadrature sum of the four terms below
    Real quantum_term;
    Real antisymmetric_term;
    Real detection_term;
    Real technical_term;
    Real var_theta;  ///< mc_variance / slope^2 (NaN where the slope vanishes)
    Real db;         ///< 10 log10(N var_theta) (NaN where undefined)
};

/// Monte-Carlo fraction statistics versus microwave detuning, with the
/// analytic decomposition evaluated alongside.
///
/// Per shot (all from per-shot substreams of noise.seed, so the result is
/// independent of how shots are batched):
///   X ~ N(0, Var X(phi)); B ~ N(0, sigma_B);
///   N_a ~ Binomial(M, sin^2(delta_phi(B))) with M = round(N/2 + sinh^2 r)
///   (the rf-transferred half of the ensemble plus the antisymmetric pair
///   population, exposed to the mixing during the hold);
///   f = f_id + 2 sqrt(f_id (1-f_id)) X / sqrt(2N) + (1-f_id) N_a / N
///       + detection + technical floor, clipped to [0, 1].
/// The quadrature scale uses sin(theta) = 2 sqrt(f_id (1-f_id)) so the
/// quantum term follows the model fringe exactly.
template <typename Real>
std::vector<NoiseBudgetRow<Real>> variance_vs_detuning(const ClockTimings<Real>& timings,
                                                       const NoiseSpec<Real>& noise,
                                                       const std::vector<Real>& deltas_hz,
                                                       const SqueezedVacuumSpec<Real>& spec) {
    noise.validate();
    spec.validate();
    if (noise.n_shots < 100) {
        throw ParameterError("variance_vs_detuning: need at least 100 shots");
    }
    const Real n_atoms = Real(spec.n_atoms);
    const Real var_x = quadrature_variance(spec);
    const Real t_mix = timings.tau_ramsey + timings.tau_mw;
    const Real sigma_phi = differential_phase(noise.sigma_B, t_mix, noise.kappa_B);
    const std::int64_t m_atoms =
        std::llround(n_atoms / 2 + mean_pair_population(spec.r));
    const Real detect_sigma_f = noise.detection_sigma * std::sqrt(Real(2)) / n_atoms;
    const auto mm = mixing_moments(sigma_phi);
    const Real var_na = antisymmetric_count_variance(m_atoms, sigma_phi);

    StateVec4<Real> initial = StateVec4<Real>::Zero();
    initial(1) = 1;

    std::vector<NoiseBudgetRow<Real>> rows;
    rows.reserve(deltas_hz.size());
    for (const Real delta_hz : deltas_hz) {
        NoiseBudgetRow<Real> row{};
        row.delta_hz = delta_hz;
        row.theta = two_pi_v<Real> * delta_hz * (timings.tau_ramsey + timings.tau_mw);
        const auto seq = build_clock_sequence(timings, hz_to_angular(delta_hz));
        row.f_id = populations(run_sequence(seq, initial)).ramsey_fraction();

        const Real sin_theta = 2 * std::sqrt(std::max(row.f_id * (1 - row.f_id), Real(0)));
        const Real quad_scale = sin_theta / std::sqrt(2 * n_atoms);
        const Real leak = 1 - row.f_id;

        // Analytic decomposition.
        row.quantum_term = quad_scale * quad_scale * var_x;
        row.antisymmetric_term = leak * leak * var_na / (n_atoms * n_atoms);
        row.detection_term = detect_sigma_f * detect_sigma_f;
        row.technical_term = noise.technical_fraction_sigma * noise.technical_fraction_sigma +
                             sin_theta * sin_theta * noise.pulse_area_sigma * noise.pulse_area_sigma;
        row.analytic_variance =
            row.quantum_term + row.antisymmetric_term + row.detection_term + row.technical_term;
        row.analytic_mean = row.f_id + leak * Real(m_atoms) * mm.mean_s / n_atoms;

        // Monte Carlo.
        Real sum = 0;
        std::vector<Real> fs(size_t(noise.n_shots));
        for (std::int64_t j = 0; j < noise.n_shots; ++j) {
            GaussianSampler gauss = shot_stream(noise.seed, std::uint64_t(2 * j));
            SplitMix64 aux(substream_seed(noise.seed, std::uint64_t(2 * j + 1)));
            const Real x = Real(gauss(0.0, double(std::sqrt(var_x))));
            const Real b = Real(gauss(0.0, double(noise.sigma_B)));
            const Real dphi = differential_phase(b, t_mix, noise.kappa_B);
            const Real s = antisymmetric_mixing(dphi).second;
            const Real n_a = Real(binomial_sample(aux, std::uint64_t(m_atoms), double(s)));
            Real f = noisy_fraction(row.f_id, n_a, n_atoms) + quad_scale * x;
            if (noise.detection_sigma > 0) {
                f += Real(gauss(0.0, double(detect_sigma_f)));
            }
            if (noise.technical_fraction_sigma > 0) {
                f += Real(gauss(0.0, double(noise.technical_fraction_sigma)));
            }
            if (noise.pulse_area_sigma > 0) {
                f += sin_theta * Real(gauss(0.0, double(noise.pulse_area_sigma)));
            }
            f = std::clamp(f, Real(0), Real(1));
            fs[size_t(j)] = f;
            sum += f;
        }
        row.mc_mean = sum / Real(noise.n_shots);
        Real m2 = 0, m4 = 0;
        for (const Real f : fs) {
            const Real d = f - row.mc_mean;
            m2 += d * d;
            m4 += d * d * d * d;
        }
        row.mc_variance = m2 / Real(noise.n_shots - 1);
        row.mc_fourth_central = m4 / Real(noise.n_shots);

        const Real slope = sin_theta / 2;
        if (slope > Real(1e-9)) {
            row.var_theta = row.mc_variance / (slope * slope);
            row.db = db_vs_sql(row.var_theta, spec.n_atoms);
        } else {
            row.var_theta = std::numeric_limits<Real>::quiet_NaN();
            row.db = std::numeric_limits<Real>::quiet_NaN();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace svclock

#endif
