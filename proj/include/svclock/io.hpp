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

#ifndef SVCLOCK_IO_HPP
#define SVCLOCK_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "svclock/errors.hpp"
#include "svclock/stability.hpp"
#include "svclock/tomography.hpp"

namespace svclock {

// File formats:
//   CSV       comma separated, '.' decimal, one header row, '#' metadata
//             lines first (schema line "# svclock-csv v1").
//   dataset   one "phi_radians x_sample" pair per line, '#' comments.
//   series    one value per line, or a CSV column.
// All writers format through "%.12g" so identical runs give identical bytes.

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline constexpr const char* kCsvSchemaLine = "# svclock-csv v1";

/// Streams a CSV file with deterministic formatting.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::pair<std::string, std::string>>& metadata,
              const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) {
            throw IoError("cannot open for writing: " + path);
        }
        out_ << kCsvSchemaLine << "\n";
        for (const auto& [key, value] : metadata) {
            out_ << "# " << key << " = " << value << "\n";
        }
        for (size_t i = 0; i < header.size(); ++i) {
            out_ << (i ? "," : "") << header[i];
        }
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i) {
            out_ << (i ? "," : "") << format_double(values[i]);
        }
        out_ << "\n";
    }

    void close() {
        out_.close();
        if (!out_) {
            throw IoError("failed while writing CSV");
        }
    }

  private:
    std::ofstream out_;
};

template <typename Real>
void write_homodyne_dataset(const std::string& path, const HomodyneDataset<Real>& data,
                            const std::vector<std::string>& comments = {}) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << "# svclock homodyne dataset: phi_radians x_sample\n";
    for (const auto& comment : comments) {
        out << "# " << comment << "\n";
    }
    for (const auto& rec : data.records) {
        for (const Real x : rec.samples) {
            out << format_double(double(rec.phi)) << " " << format_double(double(x)) << "\n";
        }
    }
    if (!out) {
        throw IoError("failed while writing dataset: " + path);
    }
}

template <typename Real>
HomodyneDataset<Real> read_homodyne_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    HomodyneDataset<Real> data;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        double phi = 0, x = 0;
        if (!(fields >> phi >> x)) {
            throw DataError("dataset parse error at " + path + ":" + std::to_string(line_no));
        }
        if (data.records.empty() || data.records.back().phi != Real(phi)) {
            // Try to append to an earlier record with the same phase first.
            bool found = false;
            for (auto& rec : data.records) {
                if (rec.phi == Real(phi)) {
                    rec.samples.push_back(Real(x));
                    found = true;
                    break;
                }
            }
            if (!found) {
                data.records.push_back({Real(phi), {Real(x)}});
            }
        } else {
            data.records.back().samples.push_back(Real(x));
        }
    }
    if (data.records.empty()) {
        throw DataError("dataset is empty: " + path);
    }
    return data;
}

/// Reads a series from single-column text, or from CSV column `column`
/// (0-based) when column >= 0. '#' lines and a non-numeric header row are
/// skipped.
template <typename Real>
std::vector<Real> read_series(const std::string& path, int column = -1) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::vector<Real> values;
    std::string line;
    while (std::getline(in, line)) {
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::string cell = line;
        if (column >= 0) {
            int at = 0;
            size_t begin = 0;
            cell.clear();
            while (begin <= line.size()) {
                size_t end = line.find(',', begin);
                if (end == std::string::npos) {
                    end = line.size();
                }
                if (at == column) {
                    cell = line.substr(begin, end - begin);
                    break;
                }
                begin = end + 1;
                ++at;
            }
            if (cell.empty()) {
                continue;
            }
        }
        try {
            size_t used = 0;
            const double v = std::stod(cell, &used);
            values.push_back(Real(v));
        } catch (const std::exception&) {
            // Header row or stray text: skip.
            continue;
        }
    }
    if (values.empty()) {
        throw DataError("no numeric values found in " + path);
    }
    return values;
}

template <typename Real>
void write_allan_csv(const std::string& path, const AllanCurve<Real>& curve,
                     const std::vector<std::pair<std::string, std::string>>& metadata = {}) {
    CsvWriter csv(path, metadata, {"tau", "sigma", "count"});
    for (size_t i = 0; i < curve.taus.size(); ++i) {
        csv.row({double(curve.taus[i]), double(curve.sigmas[i]), double(curve.counts[i])});
    }
    csv.close();
}

template <typename Real>
void write_wigner_csv(const std::string& path, const WignerGrid<Real>& grid,
                      const std::vector<std::pair<std::string, std::string>>& metadata = {}) {
    CsvWriter csv(path, metadata, {"x", "p", "w"});
    for (Eigen::Index i = 0; i < grid.x_axis.size(); ++i) {
        for (Eigen::Index j = 0; j < grid.p_axis.size(); ++j) {
            csv.row({double(grid.x_axis(i)), double(grid.p_axis(j)), double(grid.values(i, j))});
        }
    }
    csv.close();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace svclock

#endif
