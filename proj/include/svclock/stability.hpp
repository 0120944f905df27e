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

#ifndef SVCLOCK_STABILITY_HPP
#define SVCLOCK_STABILITY_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "svclock/errors.hpp"
#include "svclock/units.hpp"

namespace svclock {

// Allan-deviation analysis of clock output series. The non-overlapping
// estimator is used throughout: it is exactly the two-sample variance of the
// block averages, which is the drift-rejecting statistic the clock
// comparison relies on.

template <typename Real>
struct TimeSeries {
    std::vector<Real> values;
    Real dt = 1;  ///< seconds between samples

    void validate(size_t min_length) const {
        if (values.size() < min_length) {
            throw ParameterError("TimeSeries: series too short");
        }
        if (!(dt > 0)) {
            throw ParameterError("TimeSeries: dt must be positive");
        }
    }
};

namespace detail {

/// Half the mean of squared successive differences: the shared accumulation
/// behind both two_sample_variance and every Allan point, so the tau = dt
/// Allan point equals the two-sample result bit for bit.
template <typename Real>
Real half_mean_sq_successive_diff(const std::vector<Real>& values) {
    Real acc = 0;
    for (size_t k = 0; k + 1 < values.size(); ++k) {
        const Real d = values[k + 1] - values[k];
        acc += d * d;
    }
    return acc / (2 * Real(values.size() - 1));
}

}  // namespace detail

/// Two-sample (Allan) variance of the raw series.
template <typename Real>
Real two_sample_variance(const TimeSeries<Real>& series) {
    series.validate(2);
    return detail::half_mean_sq_successive_diff(series.values);
}

/// Ordinary (unbiased) sample variance, for drift-rejection comparisons.
template <typename Real>
Real ordinary_variance(const TimeSeries<Real>& series) {
    series.validate(2);
    Real mean = 0;
    for (const Real v : series.values) {
        mean += v;
    }
    mean /= Real(series.values.size());
    Real acc = 0;
    for (const Real v : series.values) {
        acc += (v - mean) * (v - mean);
    }
    return acc / Real(series.values.size() - 1);
}

template <typename Real>
struct AllanCurve {
    std::vector<Real> taus;             ///< averaging times (s), strictly increasing
    std::vector<Real> sigmas;           ///< Allan standard deviations
    std::vector<std::int64_t> counts;   ///< number of block differences per point
    std::vector<Real> skipped_taus;     ///< requested taus the series could not supply
};

/// Non-overlapping Allan standard deviation over contiguous blocks of
/// length tau/dt. Taus that are not a multiple of dt raise; taus with fewer
/// than two blocks are reported in skipped_taus instead of failing the whole
/// curve.
template <typename Real>
AllanCurve<Real> allan_deviation(const TimeSeries<Real>& series, const std::vector<Real>& taus) {
    series.validate(3);
    AllanCurve<Real> curve;
    for (const Real tau : taus) {
        const Real ratio = tau / series.dt;
        const auto m = std::int64_t(std::llround(ratio));
        if (m < 1 || std::abs(ratio - Real(m)) > Real(1e-6) * ratio) {
            throw ParameterError("allan_deviation: tau must be a positive multiple of dt");
        }
        const auto n_blocks = std::int64_t(series.values.size()) / m;
        if (n_blocks < 2) {
            curve.skipped_taus.push_back(tau);
            continue;
        }
        std::vector<Real> block_means(static_cast<size_t>(n_blocks));
        for (std::int64_t b = 0; b < n_blocks; ++b) {
            Real acc = 0;
            for (std::int64_t i = 0; i < m; ++i) {
                acc += series.values[size_t(b * m + i)];
            }
            block_means[size_t(b)] = acc / Real(m);
        }
        curve.taus.push_back(tau);
        curve.sigmas.push_back(std::sqrt(detail::half_mean_sq_successive_diff(block_means)));
        curve.counts.push_back(n_blocks - 1);
    }
    return curve;
}

/// Octave-spaced taus dt, 2 dt, 4 dt, ... while at least two blocks fit.
template <typename Real>
std::vector<Real> default_taus(const TimeSeries<Real>& series) {
    series.validate(3);
    std::vector<Real> taus;
    for (std::int64_t m = 1; m * 2 <= std::int64_t(series.values.size()); m *= 2) {
        taus.push_back(Real(m) * series.dt);
    }
    return taus;
}

/// Both variance estimators side by side; on a series with an added slow
/// drift the ordinary variance inflates while the two-sample one does not.
template <typename Real>
struct DriftComparison {
    Real ordinary;
    Real two_sample;
};

template <typename Real>
DriftComparison<Real> drift_rejection_gain(const TimeSeries<Real>& series) {
    series.validate(3);
    return {ordinary_variance(series), two_sample_variance(series)};
}

/// Per-shot fractional frequency instability
/// sigma_y = delta_theta / (2 pi nu_clock tau_phase).
template <typename Real>
Real fractional_instability(Real delta_theta, Real nu_clock_hz, Real tau_phase) {
    if (!(delta_theta >= 0) || !(nu_clock_hz > 0) || !(tau_phase > 0)) {
        throw ParameterError("fractional_instability: positive inputs required");
    }
    return delta_theta / (two_pi_v<Real> * nu_clock_hz * tau_phase);
}

/// Least-squares slope of log10(sigma) vs log10(tau) — the white-noise
/// scaling check.
template <typename Real>
Real loglog_slope(const AllanCurve<Real>& curve) {
    if (curve.taus.size() < 2) {
        throw ParameterError("loglog_slope: need at least two Allan points");
    }
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    const Real n = Real(curve.taus.size());
    for (size_t i = 0; i < curve.taus.size(); ++i) {
        const Real x = std::log10(curve.taus[i]);
        const Real y = std::log10(curve.sigmas[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace svclock

#endif
