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

#ifndef SVCLOCK_ERRORS_HPP
#define SVCLOCK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace svclock {

/// Invalid argument to a physics operation (non-finite value, out-of-range
/// fraction, empty sequence, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Phase can not be inferred because the fringe slope vanishes.
struct DegenerateSlopeError : ParameterError {
    using ParameterError::ParameterError;
};

/// A Fock-space truncation is too small for the requested evolution. Carries
/// the population found at the cutoff level as a diagnostic.
struct CutoffError : std::runtime_error {
    CutoffError(const std::string& what, double population)
        : std::runtime_error(what), cutoff_population(population) {}
    double cutoff_population;
};

/// Malformed or empty input dataset.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem-level failure while reading or writing artifacts.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace svclock

#endif
