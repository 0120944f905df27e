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

#ifndef SVCLOCK_PARSE_HPP
#define SVCLOCK_PARSE_HPP

#include <cctype>
#include <string>

#include "svclock/errors.hpp"

namespace svclock {

// Human-friendly quantity syntax for the command line:
//   durations    "250us", "45.2us", "32ms", "1.5s", "90ns", bare = seconds
//   frequencies  "5.5k", "-20k", "2M", "300", bare = Hz
//   ranges       "LO..HI" with either syntax per endpoint

namespace detail {

inline double parse_number_prefix(const std::string& text, size_t& consumed,
                                  const char* what) {
    try {
        const double v = std::stod(text, &consumed);
        return v;
    } catch (const std::exception&) {
        throw ParameterError(std::string(what) + ": cannot parse '" + text + "'");
    }
}

}  // namespace detail

/// "250us" -> 2.5e-4. Suffixes: ns, us, ms, s (bare numbers are seconds).
inline double parse_duration(const std::string& text) {
    size_t consumed = 0;
    const double value = detail::parse_number_prefix(text, consumed, "duration");
    std::string suffix = text.substr(consumed);
    while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.front()))) {
        suffix.erase(suffix.begin());
    }
    if (suffix.empty() || suffix == "s") {
        return value;
    }
    if (suffix == "ms") {
        return value * 1e-3;
    }
    if (suffix == "us") {
        return value * 1e-6;
    }
    if (suffix == "ns") {
        return value * 1e-9;
    }
    throw ParameterError("duration: unknown suffix '" + suffix + "' in '" + text + "'");
}

/// "5.5k" -> 5500. Suffixes: k, M, G, optionally followed by "Hz" (bare
/// numbers are Hz).
inline double parse_frequency(const std::string& text) {
    size_t consumed = 0;
    const double value = detail::parse_number_prefix(text, consumed, "frequency");
    std::string suffix = text.substr(consumed);
    while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.front()))) {
        suffix.erase(suffix.begin());
    }
    if (suffix.size() >= 2 && suffix.substr(suffix.size() - 2) == "Hz") {
        suffix.resize(suffix.size() - 2);
    }
    if (suffix.empty()) {
        return value;
    }
    if (suffix == "k") {
        return value * 1e3;
    }
    if (suffix == "M") {
        return value * 1e6;
    }
    if (suffix == "G") {
        return value * 1e9;
    }
    throw ParameterError("frequency: unknown suffix '" + suffix + "' in '" + text + "'");
}

struct FrequencyRange {
    double lo_hz;
    double hi_hz;
};

/// "-20k..20k" -> {-20000, 20000}.
inline FrequencyRange parse_frequency_range(const std::string& text) {
    const size_t sep = text.find("..");
    if (sep == std::string::npos) {
        throw ParameterError("range: expected 'LO..HI' in '" + text + "'");
    }
    FrequencyRange range{parse_frequency(text.substr(0, sep)),
                         parse_frequency(text.substr(sep + 2))};
    if (!(range.hi_hz > range.lo_hz)) {
        throw ParameterError("range: upper bound must exceed lower bound in '" + text + "'");
    }
    return range;
}

}  // namespace svclock

#endif
