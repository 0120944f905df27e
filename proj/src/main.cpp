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

// svclock - squeezed-vacuum clock simulation toolkit, command line front end.
//
// Subcommands:
//   fringe         Ramsey fringes of the four-level clock sequence
//   variance-scan  shot-variance of the output fraction vs LO phase
//   sensitivity    classical vs squeezed phase variance at mid-fringe
//   tomo           homodyne tomography (inverse Radon or MLE) -> Wigner grid
//   allan          Allan deviation of a measured or synthesized series
//   noise-budget   Monte-Carlo vs analytic fraction variance vs detuning
//   validate       resolve parameters, print derived quantities and warnings
//
// All outputs are deterministic for a fixed (config, seed): every double is
// printed through the same "%.12g" formatter and every random draw comes from
// a counter-based substream of the master seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "svclock/atom_model.hpp"
#include "svclock/fock_oracle.hpp"
#include "svclock/io.hpp"
#include "svclock/mle.hpp"
#include "svclock/noise_budget.hpp"
#include "svclock/parse.hpp"
#include "svclock/rng.hpp"
#include "svclock/squeezed_vacuum.hpp"
#include "svclock/stability.hpp"
#include "svclock/tomography.hpp"
#include "svclock/units.hpp"
#include "svclock/wigner.hpp"

#ifndef SVCLOCK_VERSION
#define SVCLOCK_VERSION "dev"
#endif

namespace {

using svclock::DataError;
using svclock::IoError;
using svclock::ParameterError;
using Params = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) { return svclock::format_double(v); }

// ----------------------------------------------------------------- output

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
};

struct Table {
    Params params;                         // resolved parameters, in order
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(const std::string& key, double value) { params.emplace_back(key, fmt(value)); }
    void add(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
};

void write_manifest(const GlobalOpts& g, const std::string& command, const Params& params) {
    nlohmann::ordered_json m;
    m["tool"] = "svclock";
    m["version"] = SVCLOCK_VERSION;
    m["command"] = command;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) {
        p[k] = v;
    }
    m["params"] = p;
    m["seed"] = g.seed;
    const std::string path = g.out + ".manifest.json";
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open manifest for writing: " + path);
    }
    out << m.dump(2) << "\n";
}

/// Writes the table to g.out as CSV or JSON, plus the run manifest.
void emit(const GlobalOpts& g, const std::string& command, const Table& t) {
    if (g.format == "csv") {
        svclock::CsvWriter csv(g.out, t.params, t.columns);
        for (const auto& row : t.rows) {
            csv.row(row);
        }
        csv.close();
    } else {
        nlohmann::ordered_json j;
        nlohmann::ordered_json p = nlohmann::ordered_json::object();
        for (const auto& [k, v] : t.params) {
            p[k] = v;
        }
        j["params"] = p;
        j["seed"] = g.seed;
        nlohmann::ordered_json data = nlohmann::ordered_json::object();
        for (size_t c = 0; c < t.columns.size(); ++c) {
            nlohmann::ordered_json col = nlohmann::ordered_json::array();
            for (const auto& row : t.rows) {
                col.push_back(row[c]);
            }
            data[t.columns[c]] = col;
        }
        j["data"] = data;
        std::ofstream out(g.out);
        if (!out) {
            throw IoError("cannot open output for writing: " + g.out);
        }
        out << j.dump(2) << "\n";
    }
    write_manifest(g, command, t.params);
}

std::vector<double> range_points(const svclock::FrequencyRange& range, int points) {
    if (points < 2) {
        throw ParameterError("--points: need at least 2 scan points");
    }
    std::vector<double> out(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        out[size_t(i)] = range.lo_hz + (range.hi_hz - range.lo_hz) * double(i) / double(points - 1);
    }
    return out;
}

// ----------------------------------------------------------- shared options

/// Physical parameters shared across subcommands, with the experiment's
/// defaults: N = 1e4 atoms, pair-creation rate Omega = 2 pi 3.9 1/s applied
/// for t_spin = 32 ms (r = 0.784), tau_mw = 45.2 us, tau_rf = 47 us,
/// calibration detuning -5.5 kHz, sigma_B = 100 uG, detection 16 atoms,
/// k_c = 2.
struct PhysOpts {
    double omega_hz = 3.9;       ///< pair-creation rate / 2 pi (Hz)
    std::string t_spin = "32ms";
    double r_override = -1;      ///< explicit r; negative = derive omega*t
    std::int64_t n_atoms = 10000;
    std::string tau_rf = "47us";
    std::string tau_mw = "45.2us";
    std::string tau_ramsey = "0s";
    std::string cal_delta = "-5.5k";
    double phi_sq = svclock::pi_v<double> / 4;
    double sigma_B = 100e-6;     ///< shot-to-shot field noise (G)
    double kappa_B = 7.0e5;      ///< differential Zeeman coefficient (Hz/G)
    double detection_sigma = 16; ///< detection noise per output port (atoms)
    double k_c = 2.0;

    double r() const {
        if (r_override >= 0) {
            return r_override;
        }
        return svclock::squeeze_parameter(svclock::hz_to_angular(omega_hz),
                                          svclock::parse_duration(t_spin));
    }
    svclock::ClockTimings<double> timings() const {
        svclock::ClockTimings<double> t;
        t.tau_rf = svclock::parse_duration(tau_rf);
        t.tau_mw = svclock::parse_duration(tau_mw);
        t.tau_ramsey = svclock::parse_duration(tau_ramsey);
        t.calibration_delta = svclock::hz_to_angular(svclock::parse_frequency(cal_delta));
        return t;
    }
};

void add_pulse_options(CLI::App* sub, PhysOpts& phys) {
    sub->add_option("--tau-rf", phys.tau_rf, "rf pi/2 pulse duration (e.g. 47us)")->capture_default_str();
    sub->add_option("--tau-mw", phys.tau_mw, "microwave pulse duration (e.g. 45.2us)")->capture_default_str();
    sub->add_option("--tau-R", phys.tau_ramsey, "Ramsey hold duration (e.g. 250us)")->capture_default_str();
    sub->add_option("--cal-delta", phys.cal_delta,
                    "detuning the mw pulse area is calibrated at (e.g. -5.5k)")->capture_default_str();
}

void add_squeeze_options(CLI::App* sub, PhysOpts& phys) {
    sub->add_option("--omega", phys.omega_hz, "pair-creation rate Omega/2pi (Hz)")->capture_default_str();
    sub->add_option("--t-spin", phys.t_spin, "spin-dynamics duration (e.g. 32ms)")->capture_default_str();
    sub->add_option("--r", phys.r_override, "squeeze parameter override (else Omega*t_spin)");
    sub->add_option("--n-atoms", phys.n_atoms, "total atom number N")->capture_default_str();
    sub->add_option("--phi-sq", phys.phi_sq, "squeezed-quadrature angle (rad)")->capture_default_str();
}

// ------------------------------------------------------------- subcommands

struct FringeOpts {
    std::string delta = "-20k..20k";
    int points = 401;
    double leak_plus = 0;
    double leak_minus = 0;
};

int run_fringe(const GlobalOpts& g, const PhysOpts& phys, const FringeOpts& o) {
    const auto timings = phys.timings();
    const auto deltas = range_points(svclock::parse_frequency_range(o.delta), o.points);
    const auto curve = svclock::ramsey_scan(timings, deltas);

    Table t;
    t.add("tau_rf_s", timings.tau_rf);
    t.add("tau_mw_s", timings.tau_mw);
    t.add("tau_ramsey_s", timings.tau_ramsey);
    t.add("calibration_delta_hz", svclock::angular_to_hz(timings.calibration_delta));
    t.add("omega_rf_rad_s", timings.rf_coupling());
    t.add("omega_mw_rad_s", timings.mw_coupling());
    t.add("leak_plus", o.leak_plus);
    t.add("leak_minus", o.leak_minus);
    t.columns = {"delta_hz", "f_minus1", "f_zero", "f_plus1", "f_e", "f_ramsey"};
    for (Eigen::Index i = 0; i < curve.detunings_hz.size(); ++i) {
        svclock::LevelFractions<double> f{curve.fractions(i, 0), curve.fractions(i, 1),
                                          curve.fractions(i, 2), curve.fractions(i, 3)};
        f = svclock::leakage_correction(f, o.leak_plus, o.leak_minus);
        t.rows.push_back({curve.detunings_hz(i), f.f_minus1, f.f_zero, f.f_plus1, f.f_e,
                          f.f_minus1 + f.f_plus1});
    }
    emit(g, "fringe", t);
    return 0;
}

struct VarianceScanOpts {
    std::int64_t shots = 1000;
    int points = 49;
    double nu_adj = 1.0 / (8 * 300e-6);  ///< phase-adjustment rate (Hz)
    double phi0 = 0;
    double t_max = -1;  ///< scan end (s); negative = one full period 1/nu_adj
};

int run_variance_scan(const GlobalOpts& g, const PhysOpts& phys, const VarianceScanOpts& o) {
    const double r = phys.r();
    const double theta = svclock::pi_v<double> / 2;
    const double t_max = o.t_max > 0 ? o.t_max : 1.0 / o.nu_adj;
    if (o.points < 2 || o.shots < 2) {
        throw ParameterError("variance-scan: need >= 2 points and >= 2 shots");
    }
    svclock::SqueezedVacuumSpec<double> spec;
    spec.r = r;
    spec.n_atoms = phys.n_atoms;
    spec.phi_sq = phys.phi_sq;
    const double n = double(phys.n_atoms);
    const double detect_var = 2 * phys.detection_sigma * phys.detection_sigma / (n * n);
    const double slope = svclock::fringe_slope(theta);

    Table t;
    t.add("r", r);
    t.add("n_atoms", double(phys.n_atoms));
    t.add("theta_rad", theta);
    t.add("shots_per_point", double(o.shots));
    t.add("nu_adj_hz", o.nu_adj);
    t.add("phi0_rad", o.phi0);
    t.add("detection_sigma_atoms", phys.detection_sigma);
    t.columns = {"t_s",     "phi_rad",        "var_f_mc", "var_f_analytic",
                 "nvar_theta", "db_vs_sql"};
    for (int i = 0; i < o.points; ++i) {
        const double time = t_max * double(i) / double(o.points - 1);
        spec.phi = o.phi0 + svclock::two_pi_v<double> * o.nu_adj * time;
        const auto shots = svclock::simulate_shots(theta, spec, o.shots, phys.detection_sigma,
                                                   svclock::substream_seed(g.seed, std::uint64_t(i)));
        const double var_f = svclock::fraction_sample_variance(shots);
        const double var_analytic = svclock::fraction_statistics(theta, spec).variance + detect_var;
        const double var_theta = svclock::phase_uncertainty(var_f, slope);
        t.rows.push_back({time, spec.phi, var_f, var_analytic, n * var_theta,
                          svclock::db_vs_sql(var_theta, phys.n_atoms)});
    }
    emit(g, "variance-scan", t);
    return 0;
}

struct SensitivityOpts {
    std::int64_t shots = 100000;
    double technical_nvar = 0.48;  ///< technical noise budget, in N*(dTheta)^2 units
    double detection_sigma = 0;    ///< extra detection noise (atoms) on top of the budget
};

int run_sensitivity(const GlobalOpts& g, const PhysOpts& phys, const SensitivityOpts& o) {
    const double r = phys.r();
    const double theta = svclock::pi_v<double> / 2;
    const double n = double(phys.n_atoms);
    if (o.technical_nvar < 0 || o.detection_sigma < 0) {
        throw ParameterError("sensitivity: noise terms must be >= 0");
    }
    // The flat technical budget T (in N*(dTheta)^2 units) maps to a fraction
    // variance T/(4N) at mid-fringe, i.e. an equivalent per-port detection
    // noise of sqrt(T N / 8) atoms; combined in quadrature with any explicit
    // detection noise.
    const double sigma_comb = std::sqrt(o.detection_sigma * o.detection_sigma +
                                        o.technical_nvar * n / 8);
    const double slope = svclock::fringe_slope(theta);

    svclock::SqueezedVacuumSpec<double> spec;
    spec.n_atoms = phys.n_atoms;
    spec.phi = phys.phi_sq;  // read out the squeezed quadrature
    spec.phi_sq = phys.phi_sq;

    Table t;
    t.add("r", r);
    t.add("n_atoms", n);
    t.add("theta_rad", theta);
    t.add("shots", double(o.shots));
    t.add("technical_nvar", o.technical_nvar);
    t.add("detection_sigma_atoms", o.detection_sigma);
    t.add("case_0", "classical (r = 0, technical noise on)");
    t.add("case_1", "squeezed (technical noise on)");
    t.add("case_2", "ideal squeezed (analytic, no technical noise)");
    t.columns = {"case_id", "r", "var_f", "nvar_theta", "db_vs_sql"};

    const auto run_case = [&](double case_id, double r_case, std::uint64_t stream) {
        spec.r = r_case;
        const auto shots =
            svclock::simulate_shots(theta, spec, o.shots, sigma_comb,
                                    svclock::substream_seed(g.seed, stream));
        const double var_f = svclock::fraction_sample_variance(shots);
        const double var_theta = svclock::phase_uncertainty(var_f, slope);
        t.rows.push_back(
            {case_id, r_case, var_f, n * var_theta, svclock::db_vs_sql(var_theta, phys.n_atoms)});
    };
    run_case(0, 0.0, 0);
    run_case(1, r, 1);
    const double ideal_var_theta = std::exp(-2 * r) / n;
    t.rows.push_back({2, r, ideal_var_theta * slope * slope, n * ideal_var_theta,
                      svclock::db_vs_sql(ideal_var_theta, phys.n_atoms)});
    emit(g, "sensitivity", t);
    return 0;
}

struct TomoOpts {
    std::int64_t phases = 20;
    std::int64_t samples = 100;
    double grid_range = 4;
    int grid_points = 61;
    bool mle = false;
    int mle_nmax = 64;
    int mle_iters = 250;
    double bin_width = 0.1;
    std::string input;         ///< read a dataset instead of simulating
    std::string dump_dataset;  ///< also write the (simulated or read) samples
};

int run_tomo(const GlobalOpts& g, const PhysOpts& phys, const TomoOpts& o) {
    const double r = phys.r();
    svclock::SqueezedVacuumSpec<double> spec;
    spec.r = r;
    spec.n_atoms = phys.n_atoms;
    spec.phi_sq = phys.phi_sq;

    svclock::HomodyneDataset<double> data;
    if (!o.input.empty()) {
        data = svclock::read_homodyne_dataset<double>(o.input);
    } else {
        data = svclock::sample_homodyne_dataset(spec, o.phases, o.samples, g.seed);
    }
    if (!o.dump_dataset.empty()) {
        svclock::write_homodyne_dataset(o.dump_dataset, data,
                                        {"svclock tomo dataset", "r = " + fmt(r)});
    }

    svclock::GridSpec<double> grid;
    grid.x_min = grid.p_min = -o.grid_range;
    grid.x_max = grid.p_max = o.grid_range;
    grid.nx = grid.np = o.grid_points;
    grid.validate();

    Table t;
    t.add("method", o.mle ? std::string("mle") : std::string("fbp"));
    t.add("r", r);
    t.add("phi_sq_rad", phys.phi_sq);
    t.add("k_c", phys.k_c);
    t.add("n_phases", double(data.records.size()));
    t.add("n_samples_total", double(data.total_samples()));
    t.add("grid_range", o.grid_range);
    t.add("grid_points", double(o.grid_points));

    svclock::WignerGrid<double> w;
    if (o.mle) {
        svclock::MleOptions<double> opts;
        opts.bin_width = o.bin_width;
        const auto res = svclock::mle_reconstruct(data, o.mle_nmax, o.mle_iters, opts);
        w = svclock::wigner_from_density(res.rho, grid);
        double c_xx = 0, c_xp = 0, c_pp = 0;
        svclock::grid_moments(w, c_xx, c_xp, c_pp);
        const double half_tr = (c_xx + c_pp) / 2;
        const double disc = std::sqrt((c_xx - c_pp) * (c_xx - c_pp) / 4 + c_xp * c_xp);
        t.add("mle_nmax", double(o.mle_nmax));
        t.add("mle_iterations", double(res.log_likelihoods.size()));
        t.add("log_likelihood", res.log_likelihoods.back());
        t.add("var_min", half_tr - disc);
        t.add("var_max", half_tr + disc);
    } else {
        w = svclock::reconstruct_wigner(data, grid, phys.k_c);
        const auto fit = svclock::fit_gaussian(w, phys.k_c);
        t.add("var_min", fit.var_min);
        t.add("var_max", fit.var_max);
        t.add("angle_min_rad", fit.angle_min);
        t.add("fit_amplitude", fit.amplitude);
    }
    t.add("wigner_min", svclock::wigner_minimum(w));
    t.add("wigner_integral", w.integral());

    t.columns = {"x", "p", "w"};
    for (Eigen::Index i = 0; i < w.x_axis.size(); ++i) {
        for (Eigen::Index j = 0; j < w.p_axis.size(); ++j) {
            t.rows.push_back({w.x_axis(i), w.p_axis(j), w.values(i, j)});
        }
    }
    emit(g, "tomo", t);
    return 0;
}

struct AllanOpts {
    std::string input;
    int column = -1;
    std::string dt = "1s";
    std::int64_t points = 100000;
    double sigma = 0.01;
    double drift = 0;  ///< added linear drift per sample (synthesis only)
    std::string taus;  ///< comma-separated averaging times; empty = octaves
    bool phase_to_frequency = false;
    double nu_clock_hz = 6.834682611e9;
    std::string tau_phase = "90.4us";
};

int run_allan(const GlobalOpts& g, const AllanOpts& o) {
    svclock::TimeSeries<double> series;
    series.dt = svclock::parse_duration(o.dt);
    Table t;
    if (!o.input.empty()) {
        series.values = svclock::read_series<double>(o.input, o.column);
        t.add("input", o.input);
        t.add("column", double(o.column));
    } else {
        if (o.points < 3) {
            throw ParameterError("allan: need at least 3 synthesized points");
        }
        series.values.resize(size_t(o.points));
        for (std::int64_t i = 0; i < o.points; ++i) {
            auto gauss = svclock::shot_stream(g.seed, std::uint64_t(i));
            series.values[size_t(i)] = gauss(0.0, o.sigma) + o.drift * double(i);
        }
        t.add("synth_points", double(o.points));
        t.add("synth_sigma", o.sigma);
        t.add("synth_drift_per_sample", o.drift);
    }
    if (o.phase_to_frequency) {
        const double scale = svclock::fractional_instability(1.0, o.nu_clock_hz,
                                                             svclock::parse_duration(o.tau_phase));
        for (auto& v : series.values) {
            v *= scale;
        }
        t.add("nu_clock_hz", o.nu_clock_hz);
        t.add("tau_phase_s", svclock::parse_duration(o.tau_phase));
    }

    std::vector<double> taus;
    if (!o.taus.empty()) {
        std::stringstream ss(o.taus);
        std::string item;
        while (std::getline(ss, item, ',')) {
            taus.push_back(svclock::parse_duration(item));
        }
    } else {
        taus = svclock::default_taus(series);
    }
    const auto curve = svclock::allan_deviation(series, taus);
    const auto drift_cmp = svclock::drift_rejection_gain(series);

    t.add("dt_s", series.dt);
    t.add("n_samples", double(series.values.size()));
    t.add("two_sample_deviation", std::sqrt(drift_cmp.two_sample));
    t.add("ordinary_deviation", std::sqrt(drift_cmp.ordinary));
    if (curve.taus.size() >= 2) {
        t.add("loglog_slope", svclock::loglog_slope(curve));
    }
    t.add("skipped_taus", double(curve.skipped_taus.size()));
    t.columns = {"tau", "sigma", "count"};
    for (size_t i = 0; i < curve.taus.size(); ++i) {
        t.rows.push_back({curve.taus[i], curve.sigmas[i], double(curve.counts[i])});
    }
    emit(g, "allan", t);
    return 0;
}

struct NoiseBudgetOpts {
    std::string delta = "200..2k";
    int points = 19;
    std::int64_t shots = 10000;
    double technical_sigma_f = 0;
    double pulse_area_sigma = 0;
};

int run_noise_budget(const GlobalOpts& g, const PhysOpts& phys, const NoiseBudgetOpts& o) {
    const auto timings = phys.timings();
    const auto deltas = range_points(svclock::parse_frequency_range(o.delta), o.points);

    svclock::SqueezedVacuumSpec<double> spec;
    spec.r = phys.r_override >= 0 ? phys.r_override : 0;  // classical clock by default
    spec.n_atoms = phys.n_atoms;
    spec.phi = phys.phi_sq;
    spec.phi_sq = phys.phi_sq;

    svclock::NoiseSpec<double> noise;
    noise.sigma_B = phys.sigma_B;
    noise.kappa_B = phys.kappa_B;
    noise.detection_sigma = phys.detection_sigma;
    noise.technical_fraction_sigma = o.technical_sigma_f;
    noise.pulse_area_sigma = o.pulse_area_sigma;
    noise.n_shots = o.shots;
    noise.seed = g.seed;

    const auto rows = svclock::variance_vs_detuning(timings, noise, deltas, spec);

    Table t;
    t.add("r", spec.r);
    t.add("n_atoms", double(phys.n_atoms));
    t.add("tau_ramsey_s", timings.tau_ramsey);
    t.add("tau_mw_s", timings.tau_mw);
    t.add("sigma_B_G", noise.sigma_B);
    t.add("kappa_B_hz_per_G", noise.kappa_B);
    t.add("detection_sigma_atoms", noise.detection_sigma);
    t.add("technical_sigma_f", noise.technical_fraction_sigma);
    t.add("pulse_area_sigma_rad", noise.pulse_area_sigma);
    t.add("shots_per_point", double(o.shots));
    t.columns = {"delta_hz",         "theta_rad",      "f_id",
                 "mc_mean",          "mc_variance",    "analytic_variance",
                 "quantum_term",     "antisymmetric_term", "detection_term",
                 "technical_term",   "var_theta",      "db_vs_sql"};
    for (const auto& row : rows) {
        t.rows.push_back({row.delta_hz, row.theta, row.f_id, row.mc_mean, row.mc_variance,
                          row.analytic_variance, row.quantum_term, row.antisymmetric_term,
                          row.detection_term, row.technical_term, row.var_theta, row.db});
    }
    emit(g, "noise-budget", t);
    return 0;
}

struct ValidateOpts {
    int n_max = 40;
};

int run_validate(const GlobalOpts& g, const PhysOpts& phys, const ValidateOpts& o) {
    std::ostringstream report;
    if (phys.n_atoms < 1) {
        throw ParameterError("--n-atoms: N >= 1 required (got " +
                             std::to_string(phys.n_atoms) + ")");
    }
    const auto timings = phys.timings();
    const double t_spin = svclock::parse_duration(phys.t_spin);
    const double r = phys.r();
    const double cal_delta_hz = svclock::parse_frequency(phys.cal_delta);
    const double theta_mid = svclock::two_pi_v<double> * timings.tau_mw * std::abs(cal_delta_hz);

    report << "svclock " << SVCLOCK_VERSION << " configuration report\n";
    report << "n_atoms = " << phys.n_atoms << "\n";
    report << "omega_hz = " << fmt(phys.omega_hz) << "\n";
    report << "t_spin_s = " << fmt(t_spin) << "\n";
    report << "r = " << fmt(r) << "\n";
    report << "sinh2_r = " << fmt(svclock::mean_pair_population(r)) << "\n";
    report << "tau_rf_s = " << fmt(timings.tau_rf) << "\n";
    report << "tau_mw_s = " << fmt(timings.tau_mw) << "\n";
    report << "tau_ramsey_s = " << fmt(timings.tau_ramsey) << "\n";
    report << "calibration_delta_hz = " << fmt(cal_delta_hz) << "\n";
    report << "omega_rf_rad_s = " << fmt(timings.rf_coupling()) << "\n";
    report << "omega_mw_rad_s = " << fmt(timings.mw_coupling()) << "\n";
    report << "theta_mid_fringe_rad = " << fmt(theta_mid) << "\n";
    report << "theta_mid_fringe_vs_pi_half = " << fmt(theta_mid / (svclock::pi_v<double> / 2))
           << "\n";
    svclock::SqueezedVacuumSpec<double> spec;
    spec.r = r;
    spec.n_atoms = phys.n_atoms;
    spec.phi = phys.phi_sq;
    spec.phi_sq = phys.phi_sq;
    report << "var_x_squeezed = " << fmt(svclock::quadrature_variance(spec)) << "\n";
    spec.phi = phys.phi_sq + svclock::pi_v<double> / 2;
    report << "var_x_antisqueezed = " << fmt(svclock::quadrature_variance(spec)) << "\n";
    report << "ideal_db_vs_sql = " << fmt(10 * std::log10(std::exp(-2 * r))) << "\n";
    const double sigma_phi = svclock::differential_phase(
        phys.sigma_B, timings.tau_ramsey + timings.tau_mw, phys.kappa_B);
    report << "sigma_phi_mixing_rad = " << fmt(sigma_phi) << "\n";
    report << "fock_n_max = " << o.n_max << "\n";
    // Pair-basis population beyond the cutoff: sum_{n > n_max} tanh^{2n}(r) / cosh^2(r)
    // telescopes to tanh^{2(n_max+1)}(r).
    const double tail = std::pow(std::tanh(r), 2.0 * (o.n_max + 1));
    report << "fock_cutoff_tail = " << fmt(tail) << "\n";
    if (r == 0) {
        report << "warning: vacuum input (classical clock)\n";
    }
    if (tail > 1e-6) {
        report << "warning: Fock cutoff n_max = " << o.n_max
               << " inadequate for r = " << fmt(r) << " (tail " << fmt(tail)
               << " > 1e-06); increase n_max\n";
    }
    std::cout << report.str();
    if (!g.out.empty()) {
        std::ofstream out(g.out);
        if (!out) {
            throw IoError("cannot open output for writing: " + g.out);
        }
        out << report.str();
        Params params = {{"n_atoms", std::to_string(phys.n_atoms)},
                         {"r", fmt(r)},
                         {"n_max", std::to_string(o.n_max)}};
        write_manifest(g, "validate", params);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"svclock: squeezed-vacuum atomic clock simulation toolkit"};
    app.set_version_flag("--version", std::string("svclock ") + SVCLOCK_VERSION);
    app.set_config("--config", "", "configuration file (key=value lines; flags win)");
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master random seed (64-bit)")->capture_default_str();
    app.add_option("--out", g.out, "output file path");
    app.add_option("--format", g.format, "output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));

    PhysOpts phys;
    FringeOpts fringe_opts;
    VarianceScanOpts var_opts;
    SensitivityOpts sens_opts;
    TomoOpts tomo_opts;
    AllanOpts allan_opts;
    NoiseBudgetOpts nb_opts;
    ValidateOpts val_opts;

    auto* fringe = app.add_subcommand("fringe", "Ramsey fringes of the clock sequence");
    fringe->fallthrough();
    add_pulse_options(fringe, phys);
    fringe->add_option("--delta", fringe_opts.delta, "detuning scan range (e.g. -20k..20k)")->capture_default_str();
    fringe->add_option("--points", fringe_opts.points, "number of scan points")->capture_default_str();
    fringe->add_option("--leak-plus", fringe_opts.leak_plus,
                       "|2,0> leakage fraction detected as |1,-1>")->capture_default_str();
    fringe->add_option("--leak-minus", fringe_opts.leak_minus,
                       "|2,0> leakage fraction detected as |1,+1>")->capture_default_str();

    auto* vscan = app.add_subcommand("variance-scan",
                                     "output-fraction variance vs local-oscillator phase");
    vscan->fallthrough();
    add_squeeze_options(vscan, phys);
    vscan->add_option("--shots", var_opts.shots, "shots per phase point")->capture_default_str();
    vscan->add_option("--points", var_opts.points, "number of phase points")->capture_default_str();
    vscan->add_option("--nu-adj", var_opts.nu_adj, "phase-adjustment rate (Hz)")->capture_default_str();
    vscan->add_option("--phi0", var_opts.phi0, "phase at t = 0 (rad)")->capture_default_str();
    vscan->add_option("--t-max", var_opts.t_max, "scan end time (s); < 0 for one period");
    vscan->add_option("--detection-sigma", phys.detection_sigma,
                      "detection noise per output port (atoms)")->capture_default_str();

    auto* sens = app.add_subcommand("sensitivity",
                                    "classical vs squeezed phase variance at mid-fringe");
    sens->fallthrough();
    add_squeeze_options(sens, phys);
    sens->add_option("--shots", sens_opts.shots, "Monte-Carlo shots per case")->capture_default_str();
    sens->add_option("--technical-nvar", sens_opts.technical_nvar,
                     "flat technical budget in N*(dTheta)^2 units")->capture_default_str();
    sens->add_option("--detection-sigma", sens_opts.detection_sigma,
                     "extra detection noise (atoms)")->capture_default_str();

    auto* tomo = app.add_subcommand("tomo", "homodyne tomography -> Wigner grid");
    tomo->fallthrough();
    add_squeeze_options(tomo, phys);
    tomo->add_option("--phases", tomo_opts.phases, "number of local-oscillator phases")->capture_default_str();
    tomo->add_option("--samples", tomo_opts.samples, "homodyne samples per phase")->capture_default_str();
    tomo->add_option("--kc", phys.k_c, "back-projection band limit k_c")->capture_default_str();
    tomo->add_option("--grid-range", tomo_opts.grid_range, "grid half-extent in x and p")->capture_default_str();
    tomo->add_option("--grid-points", tomo_opts.grid_points, "grid points per axis")->capture_default_str();
    tomo->add_flag("--mle", tomo_opts.mle, "reconstruct by maximum likelihood instead of FBP");
    tomo->add_option("--mle-nmax", tomo_opts.mle_nmax, "Fock cutoff of the MLE density matrix")->capture_default_str();
    tomo->add_option("--mle-iters", tomo_opts.mle_iters, "MLE iterations")->capture_default_str();
    tomo->add_option("--bin-width", tomo_opts.bin_width, "MLE quadrature bin width")->capture_default_str();
    tomo->add_option("--input", tomo_opts.input, "read a homodyne dataset instead of simulating");
    tomo->add_option("--dump-dataset", tomo_opts.dump_dataset,
                     "write the homodyne samples to this path");

    auto* allan = app.add_subcommand("allan", "Allan deviation of a series");
    allan->fallthrough();
    allan->add_option("--input", allan_opts.input, "series file (one value per line, or CSV)");
    allan->add_option("--column", allan_opts.column, "CSV column (0-based; -1 = whole line)")->capture_default_str();
    allan->add_option("--dt", allan_opts.dt, "sample spacing (e.g. 1s)")->capture_default_str();
    allan->add_option("--points", allan_opts.points, "synthesized series length")->capture_default_str();
    allan->add_option("--sigma", allan_opts.sigma, "synthesized white-noise sigma")->capture_default_str();
    allan->add_option("--drift", allan_opts.drift, "synthesized drift per sample")->capture_default_str();
    allan->add_option("--taus", allan_opts.taus,
                      "comma-separated averaging times (e.g. 1s,2s,4s); default octaves");
    allan->add_flag("--phase-to-frequency", allan_opts.phase_to_frequency,
                    "scale phase samples to fractional frequency");
    allan->add_option("--nu-clock", allan_opts.nu_clock_hz, "clock frequency (Hz)")->capture_default_str();
    allan->add_option("--tau-phase", allan_opts.tau_phase, "phase accumulation time")->capture_default_str();

    auto* nb = app.add_subcommand("noise-budget",
                                  "Monte-Carlo vs analytic variance vs detuning");
    nb->fallthrough();
    add_pulse_options(nb, phys);
    add_squeeze_options(nb, phys);
    nb->add_option("--delta", nb_opts.delta, "detuning scan range (e.g. 200..2k)")->capture_default_str();
    nb->add_option("--points", nb_opts.points, "number of detunings")->capture_default_str();
    nb->add_option("--shots", nb_opts.shots, "Monte-Carlo shots per detuning")->capture_default_str();
    nb->add_option("--sigma-B", phys.sigma_B, "field noise sigma (G)")->capture_default_str();
    nb->add_option("--kappa-B", phys.kappa_B, "differential Zeeman coefficient (Hz/G)")->capture_default_str();
    nb->add_option("--detection-sigma", phys.detection_sigma,
                   "detection noise per output port (atoms)")->capture_default_str();
    nb->add_option("--technical-sigma-f", nb_opts.technical_sigma_f,
                   "flat technical fraction noise")->capture_default_str();
    nb->add_option("--pulse-area-sigma", nb_opts.pulse_area_sigma,
                   "shot-to-shot pulse-area jitter (rad)")->capture_default_str();

    auto* val = app.add_subcommand("validate", "resolve and report the configuration");
    val->fallthrough();
    add_pulse_options(val, phys);
    add_squeeze_options(val, phys);
    val->add_option("--sigma-B", phys.sigma_B, "field noise sigma (G)")->capture_default_str();
    val->add_option("--kappa-B", phys.kappa_B, "differential Zeeman coefficient (Hz/G)")->capture_default_str();
    val->add_option("--n-max", val_opts.n_max, "Fock cutoff to check")->capture_default_str();

    // tau-R defaults differ per subcommand: the noise budget interrogates with
    // a 250 us hold like the detuning scans, the fringe default stays at 0.
    nb->get_option("--tau-R")->default_str("250us");
    nb->parse_complete_callback([&] {
        if (nb->count("--tau-R") == 0) {
            phys.tau_ramsey = "250us";
        }
    });

    CLI11_PARSE(app, argc, argv);

    const bool needs_out = !app.got_subcommand(val);
    if (needs_out && g.out.empty()) {
        std::cerr << "error: --out is required for data-producing subcommands\n";
        return 2;
    }

    try {
        if (app.got_subcommand(fringe)) {
            return run_fringe(g, phys, fringe_opts);
        }
        if (app.got_subcommand(vscan)) {
            return run_variance_scan(g, phys, var_opts);
        }
        if (app.got_subcommand(sens)) {
            return run_sensitivity(g, phys, sens_opts);
        }
        if (app.got_subcommand(tomo)) {
            return run_tomo(g, phys, tomo_opts);
        }
        if (app.got_subcommand(allan)) {
            return run_allan(g, allan_opts);
        }
        if (app.got_subcommand(nb)) {
            return run_noise_budget(g, phys, nb_opts);
        }
        if (app.got_subcommand(val)) {
            return run_validate(g, phys, val_opts);
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
