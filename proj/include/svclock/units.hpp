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

#ifndef SVCLOCK_UNITS_HPP
#define SVCLOCK_UNITS_HPP

#include <numbers>

namespace svclock {

// Every frequency-like quantity inside the library is angular (rad/s).
// Interfaces that speak Hz convert at the boundary through these helpers so
// that no factor of 2*pi is ever applied implicitly.

template <typename Real>
inline constexpr Real pi_v = std::numbers::pi_v<Real>;

template <typename Real>
inline constexpr Real two_pi_v = Real(2) * std::numbers::pi_v<Real>;

template <typename Real>
constexpr Real hz_to_angular(Real f_hz) {
    return two_pi_v<Real> * f_hz;
}

template <typename Real>
constexpr Real angular_to_hz(Real omega) {
    return omega / two_pi_v<Real>;
}

}  // namespace svclock

#endif
