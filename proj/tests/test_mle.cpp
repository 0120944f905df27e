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
#include <complex>

#include <Eigen/Dense>

#include "svclock/mle.hpp"
#include "svclock/wigner.hpp"

using namespace svclock;
using doctest::Approx;
using Mat = Eigen::MatrixXcd;

namespace {

constexpr double kR = 0.7841415263360124;
constexpr double kVarMin = 0.10420134590079191;
constexpr double kVarMax = 2.3992012563640026;

Mat lowering(int d) {
    Mat a = Mat::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(double(n));
    }
    return a;
}

double quadrature_variance_of(const Mat& rho, double phi) {
    const int d = int(rho.rows());
    const Mat a = lowering(d);
    const Mat x = (a * std::polar(1.0, -phi) + a.adjoint() * std::polar(1.0, phi)) /
                  std::sqrt(2.0);
    return std::real((rho * x * x).trace());
}

// Deterministic dense test state (no library RNG involved).
Mat scrambled_density(int d) {
    Mat a(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            a(i, j) = std::complex<double>(std::sin(1.7 * i + 0.3 * j + 0.25),
                                           std::cos(0.9 * i - 1.1 * j));
        }
    }
    Mat rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

bool nondecreasing(const std::vector<double>& ll) {
    for (size_t i = 1; i < ll.size(); ++i) {
        if (ll[i] < ll[i - 1] - 1e-9 * std::abs(ll[i])) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("oscillator wavefunctions are orthonormal") {
    const int n_pts = 2001;
    Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(n_pts, -10.0, 10.0);
    const double dx = x(1) - x(0);
    const auto psi = oscillator_wavefunctions(x, 10);
    CHECK(psi(0, 1000) == Approx(std::pow(pi_v<double>, -0.25)).epsilon(1e-12));
    for (int m = 0; m <= 10; ++m) {
        for (int n = m; n <= 10; ++n) {
            double overlap = 0;
            for (int j = 0; j < n_pts; ++j) {
                overlap += psi(m, j) * psi(n, j);
            }
            overlap *= dx;
            CHECK(std::abs(overlap - (m == n ? 1.0 : 0.0)) < 1e-6);
        }
    }
}

TEST_CASE("wigner closed form equals the position-representation integral") {
    const Mat rho = scrambled_density(6);
    double worst = 0;
    for (double x = -2; x <= 2.01; x += 0.8) {
        for (double p = -2; p <= 2.01; p += 0.8) {
            worst = std::max(worst,
                             std::abs(wigner_point(rho, x, p) - wigner_point_integral(rho, x, p)));
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("wigner anchors: vacuum and single excitation") {
    Mat vac = Mat::Zero(3, 3);
    vac(0, 0) = 1;
    CHECK(wigner_point(vac, 0.0, 0.0) == Approx(1 / pi_v<double>).epsilon(1e-12));
    CHECK(wigner_point(vac, 1.0, 0.5) ==
          Approx(std::exp(-1.25) / pi_v<double>).epsilon(1e-12));
    Mat one = Mat::Zero(3, 3);
    one(1, 1) = 1;
    CHECK(wigner_point(one, 0.0, 0.0) == Approx(-1 / pi_v<double>).epsilon(1e-12));
    GridSpec<double> grid;
    const auto w = wigner_from_density(one, grid);
    CHECK(wigner_minimum(w) == Approx(-1 / pi_v<double>).epsilon(1e-9));
    CHECK(w.integral() == Approx(1.0).epsilon(1e-3));
    Mat rect(2, 3);
    CHECK_THROWS_AS(wigner_from_density(rect, grid), ParameterError);
}

TEST_CASE("squeezed vacuum density matrix") {
    const int n_max = 40;
    const Mat rho = squeezed_vacuum_density(kR, pi_v<double> / 4, n_max);
    CHECK(std::abs(rho.trace() - std::complex<double>(1)) < 1e-12);
    // Pure state.
    CHECK(std::real((rho * rho).trace()) == Approx(1.0).epsilon(1e-12));
    // Even levels only.
    for (int n = 1; n <= n_max; n += 2) {
        CHECK(std::abs(rho(n, n)) < 1e-15);
    }
    // Renormalization absorbs the ~6e-9 truncated tail into the amplitudes.
    CHECK(std::real(rho(0, 0)) == Approx(1 / std::cosh(kR)).epsilon(1e-7));
    // Quadrature variances on and off the squeezed axis.
    CHECK(quadrature_variance_of(rho, pi_v<double> / 4) == Approx(kVarMin).epsilon(1e-6));
    CHECK(quadrature_variance_of(rho, 3 * pi_v<double> / 4) == Approx(kVarMax).epsilon(1e-5));
    // Pure Gaussian state centered at the origin peaks at 1/pi.
    CHECK(wigner_point(rho, 0.0, 0.0) == Approx(1 / pi_v<double>).epsilon(1e-9));
}

TEST_CASE("fock truncation rings at a level set by the cutoff") {
    GridSpec<double> grid;
    // The exact squeezed vacuum is Gaussian (positive everywhere); its
    // truncated expansion dips negative at a depth that falls fast with the
    // cutoff. These floors bound what any reconstruction in the same basis
    // can promise.
    const auto w32 =
        wigner_from_density(squeezed_vacuum_density(kR, pi_v<double> / 4, 32), grid);
    CHECK(wigner_minimum(w32) < -1e-5);
    CHECK(wigner_minimum(w32) > -1e-4);
    const auto w64 =
        wigner_from_density(squeezed_vacuum_density(kR, pi_v<double> / 4, 64), grid);
    CHECK(wigner_minimum(w64) > -1e-6);
}

TEST_CASE("density matrix validity checks") {
    Mat good = Mat::Zero(3, 3);
    good(0, 0) = 0.6;
    good(1, 1) = 0.4;
    CHECK(is_valid_density_matrix(good));
    Mat traceless = good;
    traceless(1, 1) = 0.3;
    CHECK_FALSE(is_valid_density_matrix(traceless));
    Mat nonhermitian = good;
    nonhermitian(0, 1) = 0.2;
    CHECK_FALSE(is_valid_density_matrix(nonhermitian));
    Mat negative = good;
    negative(0, 0) = 1.4;
    negative(2, 2) = -0.4;
    CHECK_FALSE(is_valid_density_matrix(negative));
}

TEST_CASE("mle on vacuum data recovers the vacuum") {
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 20, 500, 3);
    const auto res = mle_reconstruct(data, 12, 100, MleOptions<double>{});
    CHECK(is_valid_density_matrix(res.rho));
    CHECK(std::real(res.rho(0, 0)) > 0.95);
    CHECK(nondecreasing(res.log_likelihoods));
    CHECK(res.log_likelihoods.size() == 100);
    CHECK_FALSE(res.converged);  // tolerance 0 never triggers the early stop
}

TEST_CASE("mle on squeezed data recovers the squeezing") {
    SqueezedVacuumSpec<double> spec;
    spec.r = kR;
    const auto data = sample_homodyne_dataset(spec, 20, 500, 8);
    const auto res = mle_reconstruct(data, 32, 150, MleOptions<double>{});
    CHECK(is_valid_density_matrix(res.rho));
    CHECK(nondecreasing(res.log_likelihoods));
    // Ground-truth rho00 = 1/cosh(r) = 0.756.
    CHECK(std::real(res.rho(0, 0)) == Approx(0.7556).epsilon(0.1));
    double even = 0;
    for (int n = 0; n < res.dimension(); n += 2) {
        even += std::real(res.rho(n, n));
    }
    CHECK(even > 0.95);
    CHECK(std::abs(quadrature_variance_of(res.rho, pi_v<double> / 4) - kVarMin) / kVarMin < 0.15);
    CHECK(std::abs(quadrature_variance_of(res.rho, 3 * pi_v<double> / 4) - kVarMax) / kVarMax < 0.1);
    // The reconstruction dips no deeper than the basis truncation itself.
    GridSpec<double> grid;
    const auto w = wigner_from_density(res.rho, grid);
    CHECK(wigner_minimum(w) > -2e-4);
    CHECK(w.integral() == Approx(1.0).epsilon(0.05));
}

TEST_CASE("histogram weights work without the Gaussian smoothing") {
    SqueezedVacuumSpec<double> spec;
    spec.r = kR;
    const auto data = sample_homodyne_dataset(spec, 20, 500, 8);
    MleOptions<double> opts;
    opts.smooth = false;
    const auto res = mle_reconstruct(data, 24, 80, opts);
    CHECK(is_valid_density_matrix(res.rho));
    CHECK(nondecreasing(res.log_likelihoods));
    // Raw histogram weights are noisier than the Gaussian-marginal mode; this
    // only checks the mode is functional, not precise.
    CHECK(std::abs(quadrature_variance_of(res.rho, pi_v<double> / 4) - kVarMin) / kVarMin < 0.4);
}

TEST_CASE("sinusoid projection of the marginal parameters") {
    SqueezedVacuumSpec<double> spec;
    spec.r = kR;
    const auto data = sample_homodyne_dataset(spec, 20, 500, 8);
    MleOptions<double> opts;
    opts.sinusoid = true;
    const auto res = mle_reconstruct(data, 24, 80, opts);
    CHECK(is_valid_density_matrix(res.rho));
    CHECK(std::abs(quadrature_variance_of(res.rho, pi_v<double> / 4) - kVarMin) / kVarMin < 0.2);
}

TEST_CASE("tolerance-based early stop") {
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 20, 500, 3);
    MleOptions<double> opts;
    opts.tolerance = 1e-9;
    const auto res = mle_reconstruct(data, 12, 500, opts);
    CHECK(res.converged);
    CHECK(res.log_likelihoods.size() < 500);
}

TEST_CASE("mle determinism") {
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 10, 200, 4);
    const auto a = mle_reconstruct(data, 8, 40, MleOptions<double>{});
    const auto b = mle_reconstruct(data, 8, 40, MleOptions<double>{});
    CHECK((a.rho - b.rho).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.log_likelihoods == b.log_likelihoods);
}

TEST_CASE("mle input validation") {
    SqueezedVacuumSpec<double> vac;
    const auto data = sample_homodyne_dataset(vac, 4, 50, 1);
    CHECK_THROWS_AS(mle_reconstruct(data, 1, 10, MleOptions<double>{}), ParameterError);
    CHECK_THROWS_AS(mle_reconstruct(data, 8, 0, MleOptions<double>{}), ParameterError);
    HomodyneDataset<double> single;
    single.records.push_back({0.0, {1.0, 2.0}});
    CHECK_THROWS_AS(mle_reconstruct(single, 8, 10, MleOptions<double>{}), DataError);
}
