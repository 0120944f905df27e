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

#include "svclock/tomography.hpp"
#include "svclock/units.hpp"

using namespace svclock;
using doctest::Approx;

namespace {

SqueezedVacuumSpec<double> reference_spec() {
    SqueezedVacuumSpec<double> spec;
    spec.r = 0.7841415263360124;
    return spec;
}

constexpr double kVarMin = 0.10420134590079191;  // e^{-2r}/2
constexpr double kVarMax = 2.3992012563640026;   // e^{+2r}/2

}  // namespace

TEST_CASE("back-projection kernel values") {
    // K(0) = k_c^2 / 2.
    CHECK(radon_kernel(0.0, 2.0) == Approx(2.0).epsilon(1e-12));
    CHECK(radon_kernel(0.0, 1.0) == Approx(0.5).epsilon(1e-12));
    // K(pi/2) at k_c = 2: cos(pi) - 1 over (pi/2)^2.
    CHECK(radon_kernel(pi_v<double> / 2, 2.0) == Approx(-0.8105694691).epsilon(1e-9));
    // Even function.
    CHECK(radon_kernel(0.7, 2.0) == Approx(radon_kernel(-0.7, 2.0)).epsilon(1e-12));
    // The series patch joins the direct evaluation smoothly at u = 1e-2.
    const double boundary = 1e-2 / 2.0;
    CHECK(radon_kernel(boundary * 0.999, 2.0) ==
          Approx(radon_kernel(boundary * 1.001, 2.0)).epsilon(1e-7));
    CHECK_THROWS_AS(radon_kernel(0.1, 0.0), ParameterError);
}

TEST_CASE("dataset canonicalization and validation") {
    HomodyneDataset<double> data;
    data.records.push_back({3 * pi_v<double> / 2, {1.0, -2.0}});
    data.records.push_back({-pi_v<double> / 4, {0.5}});
    data.canonicalize();
    CHECK(data.records[0].phi == Approx(pi_v<double> / 2).epsilon(1e-12));
    CHECK(data.records[0].samples[0] == Approx(-1.0));
    CHECK(data.records[0].samples[1] == Approx(2.0));
    CHECK(data.records[1].phi == Approx(3 * pi_v<double> / 4).epsilon(1e-12));
    CHECK(data.records[1].samples[0] == Approx(-0.5));
    CHECK(data.total_samples() == 3);
    CHECK_NOTHROW(data.validate());

    HomodyneDataset<double> single;
    single.records.push_back({0.0, {1.0}});
    CHECK_THROWS_AS(single.validate(), DataError);
    HomodyneDataset<double> empty_phase;
    empty_phase.records.push_back({0.0, {1.0}});
    empty_phase.records.push_back({0.5, {}});
    CHECK_THROWS_AS(empty_phase.validate(), DataError);
}

TEST_CASE("sampled dataset layout and determinism") {
    const auto spec = reference_spec();
    const auto data = sample_homodyne_dataset(spec, 20, 50, 9);
    REQUIRE(data.records.size() == 20);
    for (size_t k = 0; k < data.records.size(); ++k) {
        CHECK(data.records[k].phi ==
              Approx(pi_v<double> * double(k) / 20.0).epsilon(1e-12));
        CHECK(data.records[k].samples.size() == 50);
    }
    const auto again = sample_homodyne_dataset(spec, 20, 50, 9);
    CHECK(again.records[7].samples == data.records[7].samples);
    const auto other = sample_homodyne_dataset(spec, 20, 50, 10);
    CHECK(other.records[7].samples != data.records[7].samples);
    CHECK_THROWS_AS(sample_homodyne_dataset(spec, 1, 50, 9), ParameterError);
}

TEST_CASE("vacuum reconstruction: peak, integral, boundedness") {
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 20, 2000, 21);
    GridSpec<double> grid;
    const auto w = reconstruct_wigner(data, grid, 2.0);
    REQUIRE(w.x_axis.size() == 61);
    REQUIRE(w.p_axis.size() == 61);
    CHECK(w.x_axis(0) == Approx(-4.0));
    CHECK(w.x_axis(60) == Approx(4.0));
    // Band-limited vacuum peak: (1 - e^{-1})/pi = 0.201221.
    CHECK(std::abs(w.values(30, 30) - 0.2012) < 0.02);
    CHECK(w.integral() == Approx(1.0).epsilon(0.1));
    // The kernel rings but stays well above the Gaussian's negative envelope.
    CHECK(w.values.minCoeff() > -0.35 * w.values.maxCoeff());
    // Determinism.
    const auto w2 = reconstruct_wigner(data, grid, 2.0);
    CHECK(w2.values == w.values);
}

TEST_CASE("reconstruction is linear in the dataset") {
    SqueezedVacuumSpec<double> vac;
    auto data = sample_homodyne_dataset(vac, 4, 50, 77);
    GridSpec<double> grid;
    grid.nx = grid.np = 11;
    const auto w = reconstruct_wigner(data, grid, 2.0);
    // Duplicating every sample leaves the estimator unchanged.
    HomodyneDataset<double> doubled = data;
    for (auto& rec : doubled.records) {
        auto copy = rec.samples;
        rec.samples.insert(rec.samples.end(), copy.begin(), copy.end());
    }
    const auto wd = reconstruct_wigner(doubled, grid, 2.0);
    CHECK((wd.values - w.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("histogram variant approximates the raw-sample estimator") {
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 10, 500, 5);
    GridSpec<double> grid;
    grid.nx = grid.np = 21;
    const auto raw = reconstruct_wigner(data, grid, 2.0);
    const auto binned = reconstruct_wigner_histogram(data, grid, 2.0, 0.1);
    CHECK((raw.values - binned.values).cwiseAbs().maxCoeff() < 0.01);
    CHECK_THROWS_AS(reconstruct_wigner_histogram(data, grid, 2.0, 0.0), ParameterError);
}

TEST_CASE("band-limited model fit recovers exact synthetic covariances") {
    GridSpec<double> grid;
    WignerGrid<double> w;
    w.x_axis = linspace(grid.x_min, grid.x_max, grid.nx);
    w.p_axis = linspace(grid.p_min, grid.p_max, grid.np);
    const double c_xx = 0.2, c_xp = 0.05, c_pp = 0.7;
    w.values = detail::band_limited_gaussian(c_xx, c_xp, c_pp, 2.0, w.x_axis, w.p_axis);
    const auto fit = fit_gaussian(w, 2.0);
    CHECK(fit.c_xx == Approx(c_xx).epsilon(1e-4));
    CHECK(fit.c_xp == Approx(c_xp).epsilon(1e-3));
    CHECK(fit.c_pp == Approx(c_pp).epsilon(1e-4));
    CHECK(fit.amplitude == Approx(1.0).epsilon(1e-4));
    CHECK(fit.var_min < fit.var_max);
}

TEST_CASE("plain grid moments carry the band-limit bias the fit removes") {
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 20, 2000, 21);
    GridSpec<double> grid;
    const auto w = reconstruct_wigner(data, grid, 2.0);
    double m_xx, m_xp, m_pp;
    grid_moments(w, m_xx, m_xp, m_pp);
    // Moments of the reconstruction are inflated by the kernel's point-spread
    // function; the model fit is not.
    CHECK(m_xx - 0.5 > 0.1);
    const auto fit = fit_gaussian(w, 2.0);
    CHECK(std::abs(fit.c_xx - 0.5) / 0.5 < 0.1);
    CHECK(std::abs(fit.c_pp - 0.5) / 0.5 < 0.1);
}

TEST_CASE("squeezed-state fit at high statistics recovers both variances") {
    const auto spec = reference_spec();
    const auto data = sample_homodyne_dataset(spec, 20, 2000, 31);
    GridSpec<double> grid;
    const auto w = reconstruct_wigner(data, grid, 2.0);
    const auto fit = fit_gaussian(w, 2.0);
    CHECK(std::abs(fit.var_min - kVarMin) / kVarMin < 0.1);
    CHECK(std::abs(fit.var_max - kVarMax) / kVarMax < 0.1);
    // Squeezed axis at phi_sq = pi/4 (angle defined mod pi).
    double angle = std::fmod(fit.angle_min + pi_v<double>, pi_v<double>);
    CHECK(std::abs(angle - pi_v<double> / 4) < 0.1);
    CHECK(w.integral() == Approx(1.0).epsilon(0.1));
}

TEST_CASE("squeezed-state fit at low statistics stays within a quarter") {
    const auto spec = reference_spec();
    const auto data = sample_homodyne_dataset(spec, 20, 100, 5);
    GridSpec<double> grid;
    const auto w = reconstruct_wigner(data, grid, 2.0);
    const auto fit = fit_gaussian(w, 2.0);
    CHECK(std::abs(fit.var_min - kVarMin) / kVarMin < 0.25);
    CHECK(std::abs(fit.var_max - kVarMax) / kVarMax < 0.25);
}

TEST_CASE("rotation covariance: squeezing along x") {
    auto spec = reference_spec();
    spec.phi_sq = 0.0;  // squeezed quadrature at phi = 0
    const auto data = sample_homodyne_dataset(spec, 20, 2000, 51);
    GridSpec<double> grid;
    const auto w = reconstruct_wigner(data, grid, 2.0);
    const auto fit = fit_gaussian(w, 2.0);
    CHECK(std::abs(fit.var_min - kVarMin) / kVarMin < 0.1);
    // Minimum-variance axis along x: angle 0 mod pi.
    double angle = std::fmod(fit.angle_min + 1.5 * pi_v<double>, pi_v<double>) -
                   pi_v<double> / 2;
    CHECK(std::abs(angle) < 0.1);
    CHECK(std::abs(fit.c_xp) < 0.05);
}

TEST_CASE("marginal of the vacuum reconstruction matches the quadrature law") {
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 20, 2000, 21);
    GridSpec<double> grid;
    const auto w = reconstruct_wigner(data, grid, 2.0);
    const auto marg = marginal_x(w);
    const double dx = 8.0 / 60.0;
    double total = 0, peak_err = 0;
    for (Eigen::Index i = 0; i < marg.size(); ++i) {
        total += marg(i) * dx;
        const double x = w.x_axis(i);
        const double truth = std::exp(-x * x) / std::sqrt(pi_v<double>);
        peak_err = std::max(peak_err, std::abs(marg(i) - truth));
    }
    CHECK(std::abs(total - 1.0) < 0.1);
    // The hard cutoff rings at the 0.09 level even with infinite statistics;
    // sampling noise adds a little on top.
    CHECK(peak_err < 0.13);
}

TEST_CASE("grid validation") {
    GridSpec<double> bad;
    bad.nx = 1;
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 4, 10, 1);
    CHECK_THROWS_AS(reconstruct_wigner(data, bad, 2.0), ParameterError);
    GridSpec<double> inverted;
    inverted.x_min = 4;
    inverted.x_max = -4;
    CHECK_THROWS_AS(reconstruct_wigner(data, inverted, 2.0), ParameterError);
}
