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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "svclock/noise_budget.hpp"

using namespace svclock;
using doctest::Approx;

namespace {

// Standard error of a sample variance from the measured fourth moment.
double variance_se(const NoiseBudgetRow<double>& row, double n_shots) {
    return std::sqrt(std::max(
        row.mc_fourth_central - row.mc_variance * row.mc_variance, 0.0) / n_shots);
}

ClockTimings<double> operating_timings() {
    ClockTimings<double> t;
    t.tau_ramsey = 250e-6;
    return t;
}

}  // namespace

TEST_CASE("differential phase of the reference field noise") {
    // 100 uG at 7e5 Hz/G over tau_R + tau_mw = 295.2 us.
    const double sigma_phi = differential_phase(100e-6, 295.2e-6, 7e5);
    CHECK(sigma_phi == Approx(0.1298357412).epsilon(1e-9));
    CHECK(differential_phase(0.0, 295.2e-6, 7e5) == 0.0);
    CHECK_THROWS_AS(differential_phase(1e-4, -1.0, 7e5), ParameterError);
}

TEST_CASE("antisymmetric mixing weights") {
    const auto [g, a] = antisymmetric_mixing(0.0);
    CHECK(g == 1.0);
    CHECK(a == 0.0);
    const auto [g2, a2] = antisymmetric_mixing(0.3);
    CHECK(g2 + a2 == Approx(1.0).epsilon(1e-12));
    CHECK(a2 == Approx(std::sin(0.3) * std::sin(0.3)).epsilon(1e-12));
}

TEST_CASE("noisy fraction composition") {
    CHECK(noisy_fraction(0.5, 100.0, 10000.0) == Approx(0.5 + 0.5 * 0.01).epsilon(1e-12));
    CHECK(noisy_fraction(0.0, 0.0, 10000.0) == 0.0);
    CHECK(noisy_fraction(1.0, 500.0, 10000.0) == 1.0);  // leak factor vanishes
    CHECK_THROWS_AS(noisy_fraction(1.2, 0.0, 1e4), ParameterError);
    CHECK_THROWS_AS(noisy_fraction(0.5, -1.0, 1e4), ParameterError);
    CHECK_THROWS_AS(noisy_fraction(0.5, 2e4, 1e4), ParameterError);
}

TEST_CASE("sin^2 mixing moments against brute force") {
    // Closed form frozen at the reference sigma_phi.
    const auto mm = mixing_moments(0.12983574118755897);
    CHECK(mm.mean_s == Approx(0.01657631728).epsilon(1e-9));
    CHECK(mm.mean_s2 == Approx(8.062549020e-4).epsilon(1e-8));
    // Limits: no noise -> no mixing; strong noise -> uniform phase averages
    // E[s] = 1/2 and E[s^2] = 3/8.
    const auto none = mixing_moments(0.0);
    CHECK(none.mean_s == 0.0);
    CHECK(none.mean_s2 == 0.0);
    const auto strong = mixing_moments(50.0);
    CHECK(strong.mean_s == Approx(0.5).epsilon(1e-9));
    CHECK(strong.mean_s2 == Approx(0.375).epsilon(1e-9));
    // Brute-force Monte Carlo of s = sin^2(N(0, sigma)).
    GaussianSampler gauss(17);
    const int n = 400000;
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        const double s = std::sin(gauss(0.0, 0.12983574118755897));
        acc += s * s;
    }
    CHECK(std::abs(acc / n - mm.mean_s) < 5 * 3.7e-5);
}

TEST_CASE("antisymmetric count variance closed form") {
    CHECK(antisymmetric_count_variance(5001, 0.12983574118755897) ==
          Approx(13371.1966).epsilon(1e-6));
    CHECK(antisymmetric_count_variance(5001, 0.0) == 0.0);
    // Scales like M^2 once the collective term dominates.
    const double small = antisymmetric_count_variance(500, 0.13);
    const double large = antisymmetric_count_variance(5000, 0.13);
    CHECK(large / small > 50.0);
}

TEST_CASE("monte carlo matches the analytic budget at the operating point") {
    const auto timings = operating_timings();
    NoiseSpec<double> noise;
    noise.n_shots = 20000;
    noise.seed = 90;
    SqueezedVacuumSpec<double> spec;  // vacuum port, N = 10^4
    // Mid-fringe detunings on both sides plus a near-top point.
    const std::vector<double> deltas = {-847.0, 847.0, 1300.0};
    const auto rows = variance_vs_detuning(timings, noise, deltas, spec);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(std::abs(row.mc_variance - row.analytic_variance) <
              5 * variance_se(row, double(noise.n_shots)));
        CHECK(std::abs(row.mc_mean - row.analytic_mean) <
              5 * std::sqrt(row.mc_variance / double(noise.n_shots)));
        CHECK(row.analytic_variance ==
              Approx(row.quantum_term + row.antisymmetric_term + row.detection_term +
                     row.technical_term).epsilon(1e-12));
        CHECK(row.f_id > 0.0);
        CHECK(row.f_id < 1.0);
    }
    // At mid-fringe the antisymmetric term is comparable to the quantum term.
    CHECK(rows[0].antisymmetric_term == Approx(3.34e-5).epsilon(0.05));
    CHECK(rows[0].quantum_term == Approx(2.5e-5).epsilon(0.05));
}

TEST_CASE("field noise strictly inflates the variance") {
    const auto timings = operating_timings();
    SqueezedVacuumSpec<double> spec;
    NoiseSpec<double> quiet;
    quiet.sigma_B = 0;
    quiet.detection_sigma = 0;
    quiet.n_shots = 20000;
    quiet.seed = 3;
    NoiseSpec<double> noisy = quiet;
    noisy.sigma_B = 100e-6;
    const std::vector<double> deltas = {847.0};
    const auto q = variance_vs_detuning(timings, quiet, deltas, spec);
    const auto n = variance_vs_detuning(timings, noisy, deltas, spec);
    CHECK(n[0].analytic_variance > q[0].analytic_variance);
    CHECK(n[0].mc_variance > q[0].mc_variance);
    // The quiet run is pure quadrature noise at the standard quantum limit.
    CHECK(q[0].analytic_variance == Approx(q[0].quantum_term).epsilon(1e-12));
    const double n_var = double(spec.n_atoms) * q[0].var_theta;
    CHECK(std::abs(n_var - 1.0) < 4 * std::sqrt(2.0 / double(quiet.n_shots)) + 0.05);
}

TEST_CASE("technical floor and pulse-area jitter enter the analytic sum") {
    const auto timings = operating_timings();
    SqueezedVacuumSpec<double> spec;
    NoiseSpec<double> noise;
    noise.technical_fraction_sigma = 2e-3;
    noise.pulse_area_sigma = 1e-2;
    noise.n_shots = 5000;
    const auto rows = variance_vs_detuning(timings, noise, {847.0}, spec);
    const double sin_theta = 2 * std::sqrt(rows[0].f_id * (1 - rows[0].f_id));
    CHECK(rows[0].technical_term ==
          Approx(4e-6 + sin_theta * sin_theta * 1e-4).epsilon(1e-9));
}

TEST_CASE("slope guard yields NaN at a dark fringe") {
    ClockTimings<double> timings = operating_timings();
    timings.calibration_delta = 0;  // resonant calibration: delta = 0 is dark
    NoiseSpec<double> noise;
    noise.n_shots = 200;
    SqueezedVacuumSpec<double> spec;
    const auto rows = variance_vs_detuning(timings, noise, {0.0}, spec);
    CHECK(std::isnan(rows[0].var_theta));
    CHECK(std::isnan(rows[0].db));
}

TEST_CASE("determinism and batching independence") {
    const auto timings = operating_timings();
    NoiseSpec<double> noise;
    noise.n_shots = 500;
    noise.seed = 77;
    SqueezedVacuumSpec<double> spec;
    const auto a = variance_vs_detuning(timings, noise, {847.0}, spec);
    const auto b = variance_vs_detuning(timings, noise, {847.0}, spec);
    CHECK(a[0].mc_mean == b[0].mc_mean);
    CHECK(a[0].mc_variance == b[0].mc_variance);
}

TEST_CASE("input validation") {
    const auto timings = operating_timings();
    SqueezedVacuumSpec<double> spec;
    NoiseSpec<double> bad;
    bad.sigma_B = -1;
    CHECK_THROWS_AS(variance_vs_detuning(timings, bad, {100.0}, spec), ParameterError);
    NoiseSpec<double> few;
    few.n_shots = 50;
    CHECK_THROWS_AS(variance_vs_detuning(timings, few, {100.0}, spec), ParameterError);
}
