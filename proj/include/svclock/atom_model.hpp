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

#ifndef SVCLOCK_ATOM_MODEL_HPP
#define SVCLOCK_ATOM_MODEL_HPP

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "svclock/errors.hpp"
#include "svclock/units.hpp"

namespace svclock {

// Single-atom four-level model of the clock interferometer.
//
// Basis order everywhere: [|1,+1>, |1,0>, |1,-1>, |2,0>]. The rf field
// couples |1,0> to |1,+1> and |1,-1>; the microwave field couples |1,0> to
// |2,0>. All frequencies are angular (rad/s).

template <typename Real>
using Matrix4 = Eigen::Matrix<std::complex<Real>, 4, 4>;
template <typename Real>
using StateVec4 = Eigen::Matrix<std::complex<Real>, 4, 1>;

/// Couplings, detunings and quadratic shift of the four-level Hamiltonian.
/// Coupling phases are carried separately so magnitudes stay real.
template <typename Real>
struct AtomParams {
    Real omega_rf = 0;   ///< rf coupling magnitude (rad/s)
    Real omega_mw = 0;   ///< microwave coupling magnitude (rad/s)
    Real delta_rf = 0;   ///< rf detuning (rad/s)
    Real delta = 0;      ///< microwave (clock) detuning (rad/s)
    Real q = 0;          ///< quadratic Zeeman shift (rad/s)
    Real phase_rf = 0;   ///< rf coupling phase (rad)
    Real phase_mw = 0;   ///< microwave coupling phase (rad)
};

/// Per-level population fractions with explicit names (no index juggling).
template <typename Real>
struct LevelFractions {
    Real f_plus1 = 0;
    Real f_zero = 0;
    Real f_minus1 = 0;
    Real f_e = 0;

    Real sum() const { return f_plus1 + f_zero + f_minus1 + f_e; }
    /// Fraction transferred out of |1,0> into the Zeeman pair, the clock
    /// observable.
    Real ramsey_fraction() const { return f_plus1 + f_minus1; }
};

template <typename Real>
bool all_finite(const AtomParams<Real>& p) {
    return std::isfinite(p.omega_rf) && std::isfinite(p.omega_mw) && std::isfinite(p.delta_rf) &&
           std::isfinite(p.delta) && std::isfinite(p.q) && std::isfinite(p.phase_rf) &&
           std::isfinite(p.phase_mw);
}

/// The four-level Hamiltonian in matrix form:
///   diag(delta_rf + q/2, 0, -delta_rf + q/2, -delta),
///   omega_rf/(2*sqrt(2)) linking |1,+-1> <-> |1,0>,
///   omega_mw/2          linking |1,0>  <-> |2,0>.
/// Hermitian by construction.
template <typename Real>
Matrix4<Real> build_hamiltonian(const AtomParams<Real>& p) {
    if (!all_finite(p)) {
        throw ParameterError("build_hamiltonian: non-finite AtomParams field");
    }
    using C = std::complex<Real>;
    const C c = std::polar(p.omega_rf / (2 * std::sqrt(Real(2))), p.phase_rf);
    const C m = std::polar(p.omega_mw / 2, p.phase_mw);
    Matrix4<Real> h = Matrix4<Real>::Zero();
    h(0, 0) = p.delta_rf + p.q / 2;
    h(2, 2) = -p.delta_rf + p.q / 2;
    h(3, 3) = -p.delta;
    h(0, 1) = c;
    h(1, 0) = std::conj(c);
    h(1, 2) = c;
    h(2, 1) = std::conj(c);
    h(1, 3) = m;
    h(3, 1) = std::conj(m);
    return h;
}

/// U(t) = exp(-i t H) by spectral decomposition of the Hermitian matrix.
template <typename Real>
Matrix4<Real> evolve(const Matrix4<Real>& h, Real t) {
    if (!(t >= 0)) {
        throw ParameterError("evolve: negative duration");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4<Real>> es(h);
    Eigen::Matrix<std::complex<Real>, 4, 1> phases =
        (std::complex<Real>(0, -t) * es.eigenvalues().template cast<std::complex<Real>>().array())
            .exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

enum class SegmentKind { rf, microwave, hold };

template <typename Real>
struct Segment {
    SegmentKind kind = SegmentKind::hold;
    Real duration = 0;  ///< seconds
    AtomParams<Real> params;
};

template <typename Real>
using PulseSequence = std::vector<Segment<Real>>;

/// Convenience constructors that zero the coupling the segment kind does not
/// drive, so a sequence reads like the experimental timing diagram.
template <typename Real>
Segment<Real> rf_segment(Real duration, AtomParams<Real> p) {
    p.omega_mw = 0;
    return {SegmentKind::rf, duration, p};
}
template <typename Real>
Segment<Real> microwave_segment(Real duration, AtomParams<Real> p) {
    p.omega_rf = 0;
    return {SegmentKind::microwave, duration, p};
}
template <typename Real>
Segment<Real> hold_segment(Real duration, AtomParams<Real> p) {
    p.omega_rf = 0;
    p.omega_mw = 0;
    return {SegmentKind::hold, duration, p};
}

/// Applies the per-segment unitaries in order.
template <typename Real>
StateVec4<Real> run_sequence(const PulseSequence<Real>& seq, const StateVec4<Real>& initial) {
    if (seq.empty()) {
        throw ParameterError("run_sequence: empty sequence");
    }
    if (std::abs(initial.norm() - Real(1)) > Real(1e-9)) {
        throw ParameterError("run_sequence: initial state not normalized");
    }
    StateVec4<Real> state = initial;
    for (const Segment<Real>& seg : seq) {
        if (!(seg.duration >= 0)) {
            throw ParameterError("run_sequence: negative segment duration");
        }
        state = (evolve(build_hamiltonian(seg.params), seg.duration) * state).eval();
    }
    return state;
}

template <typename Real>
LevelFractions<Real> populations(const StateVec4<Real>& state) {
    return {std::norm(state(0)), std::norm(state(1)), std::norm(state(2)), std::norm(state(3))};
}

/// rf coupling magnitude that makes a pulse of the given duration an
/// effective pi/2 on the |1,0> <-> symmetric-pair transition (25/50/25
/// population split). The effective two-mode coupling is omega_rf/2.
template <typename Real>
Real rf_pi_half_coupling(Real tau_rf) {
    return pi_v<Real> / (2 * tau_rf);
}

/// Microwave coupling magnitude for a complete (generalized) population
/// transfer of duration tau at operating detuning delta_op: the generalized
/// Rabi frequency sqrt(omega^2 + delta^2) must integrate to pi.
template <typename Real>
Real mw_pi_coupling(Real tau_mw, Real delta_op) {
    const Real total = pi_v<Real> / tau_mw;
    if (std::abs(delta_op) >= total) {
        throw ParameterError("mw_pi_coupling: detuning too large for a pi pulse of this duration");
    }
    return std::sqrt(total * total - delta_op * delta_op);
}

/// Timing and calibration of the five-segment clock sequence
/// (rf, microwave, hold, microwave, rf).
template <typename Real>
struct ClockTimings {
    Real tau_rf = Real(47e-6);
    Real tau_mw = Real(45.2e-6);
    Real tau_ramsey = 0;
    Real delta_rf = 0;
    Real q = 0;
    /// Detuning the microwave pulse area is calibrated at (rad/s).
    Real calibration_delta = hz_to_angular(Real(-5.5e3));
    /// Overrides; non-positive means "derive from the timing above".
    Real omega_rf = 0;
    Real omega_mw = 0;

    Real rf_coupling() const {
        return omega_rf > 0 ? omega_rf : rf_pi_half_coupling(tau_rf);
    }
    Real mw_coupling() const {
        return omega_mw > 0 ? omega_mw : mw_pi_coupling(tau_mw, calibration_delta);
    }
};

/// Builds the clock sequence at microwave detuning `delta` (rad/s).
template <typename Real>
PulseSequence<Real> build_clock_sequence(const ClockTimings<Real>& timings, Real delta) {
    AtomParams<Real> base;
    base.delta_rf = timings.delta_rf;
    base.q = timings.q;
    base.delta = delta;
    AtomParams<Real> rf = base;
    rf.omega_rf = timings.rf_coupling();
    AtomParams<Real> mw = base;
    mw.omega_mw = timings.mw_coupling();
    return {
        rf_segment(timings.tau_rf, rf),
        microwave_segment(timings.tau_mw, mw),
        hold_segment(timings.tau_ramsey, base),
        microwave_segment(timings.tau_mw, mw),
        rf_segment(timings.tau_rf, rf),
    };
}

/// Redistributes the |2,0> fraction over the F=1 levels per the detection
/// rule: a fraction p_plus joins |1,-1>, p_minus joins |1,+1>, the remainder
/// joins |1,0>.
template <typename Real>
LevelFractions<Real> leakage_correction(const LevelFractions<Real>& in, Real p_plus, Real p_minus) {
    auto in_unit = [](Real x) { return x >= 0 && x <= 1; };
    if (!in_unit(in.f_plus1) || !in_unit(in.f_zero) || !in_unit(in.f_minus1) || !in_unit(in.f_e) ||
        !in_unit(p_plus) || !in_unit(p_minus) || p_plus + p_minus > 1) {
        throw ParameterError("leakage_correction: fractions outside [0,1]");
    }
    LevelFractions<Real> out = in;
    out.f_minus1 += p_plus * in.f_e;
    out.f_plus1 += p_minus * in.f_e;
    out.f_zero += (1 - p_plus - p_minus) * in.f_e;
    out.f_e = 0;
    return out;
}

/// Fringe of the ideal (instantaneous-pulse) Ramsey law.
template <typename Real>
Real ideal_fringe(Real delta_hz, Real tau) {
    const Real s = std::sin(pi_v<Real> * delta_hz * tau);
    return s * s;
}

template <typename Real>
struct FringeCurve {
    Eigen::Array<Real, Eigen::Dynamic, 1> detunings_hz;
    /// Columns: f_minus1, f_zero, f_plus1, f_e.
    Eigen::Array<Real, Eigen::Dynamic, 4> fractions;

    Eigen::Array<Real, Eigen::Dynamic, 1> ramsey_fraction() const {
        return fractions.col(0) + fractions.col(2);
    }
};

/// Scans the clock sequence over microwave detunings (Hz).
template <typename Real>
FringeCurve<Real> ramsey_scan(const ClockTimings<Real>& timings,
                              const std::vector<Real>& deltas_hz) {
    if (deltas_hz.empty()) {
        throw ParameterError("ramsey_scan: empty detuning list");
    }
    FringeCurve<Real> curve;
    curve.detunings_hz.resize(Eigen::Index(deltas_hz.size()));
    curve.fractions.resize(Eigen::Index(deltas_hz.size()), 4);
    StateVec4<Real> initial = StateVec4<Real>::Zero();
    initial(1) = 1;
    for (Eigen::Index i = 0; i < curve.detunings_hz.size(); ++i) {
        const Real delta_hz = deltas_hz[size_t(i)];
        curve.detunings_hz(i) = delta_hz;
        const auto seq = build_clock_sequence(timings, hz_to_angular(delta_hz));
        const LevelFractions<Real> f = populations(run_sequence(seq, initial));
        curve.fractions(i, 0) = f.f_minus1;
        curve.fractions(i, 1) = f.f_zero;
        curve.fractions(i, 2) = f.f_plus1;
        curve.fractions(i, 3) = f.f_e;
    }
    return curve;
}

}  // namespace svclock

#endif
