// Copyright 2026 The qpca-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// File formats used across the project:
//   matrix/state JSON:  {"dim": d, "entries": [[re, im], ...]}  row-major,
//                       d*d pairs for operators, d pairs for state vectors
//   dataset JSON:       {"vectors": [[[re, im], ...], ...], "labels": [...]}
//   dataset CSV:        one real vector per row (zero imaginary parts)
// Numeric output carries 17 significant digits so doubles round-trip exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpca/states.hpp"

namespace qpca {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot open file for writing: " + path.string());
  }
  out << contents;
  if (!out) {
    throw FormatError("write failed: " + path.string());
  }
}

/// Shortest text that parses back to exactly the same double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw FormatError(what + ": invalid JSON");
  }
  return j;
}

// ---------------------------------------------------------------------------
// matrix / state JSON

namespace detail {

inline double json_finite_number(const json& v, const std::string& what) {
  if (!v.is_number()) {
    throw FormatError(what + ": entry component is not a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ValidationError(what + ": non-finite entry");
  }
  return x;
}

inline std::vector<cxd> json_entry_list(const json& j, long expected,
                                        const std::string& what) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw FormatError(what + ": expected object with dim/entries");
  }
  if (!j["entries"].is_array()) {
    throw FormatError(what + ": entries must be an array");
  }
  if (long(j["entries"].size()) != expected) {
    throw FormatError(what + ": expected " + std::to_string(expected) +
                      " entries, got " + std::to_string(j["entries"].size()));
  }
  std::vector<cxd> out;
  out.reserve(size_t(expected));
  for (const auto& pair : j["entries"]) {
    if (!pair.is_array() || pair.size() != 2) {
      throw FormatError(what + ": entries must be [re, im] pairs");
    }
    out.emplace_back(json_finite_number(pair[0], what),
                     json_finite_number(pair[1], what));
  }
  return out;
}

inline long json_dim(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer()) {
    throw FormatError(what + ": missing integer dim");
  }
  const long d = j["dim"].get<long>();
  if (d < 1) {
    throw FormatError(what + ": dim must be >= 1");
  }
  return d;
}

}  // namespace detail

inline json matrix_to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    for (long k = 0; k < m.cols(); ++k) {
      entries.push_back({m(i, k).real(), m(i, k).imag()});
    }
  }
  return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

inline ComplexMatrix json_to_matrix(const json& j,
                                    const std::string& what = "matrix") {
  const long d = detail::json_dim(j, what);
  const auto entries = detail::json_entry_list(j, d * d, what);
  ComplexMatrix m(d, d);
  for (long i = 0; i < d; ++i) {
    for (long k = 0; k < d; ++k) {
      m(i, k) = entries[size_t(i * d + k)];
    }
  }
  return m;
}

inline json state_to_json(const PureState& s) {
  json entries = json::array();
  for (long i = 0; i < s.dim(); ++i) {
    entries.push_back({s.amplitudes()(i).real(), s.amplitudes()(i).imag()});
  }
  return json{{"dim", s.dim()}, {"entries", std::move(entries)}};
}

inline PureState json_to_state(const json& j,
                               const std::string& what = "state") {
  const long d = detail::json_dim(j, what);
  const auto entries = detail::json_entry_list(j, d, what);
  ComplexVector v(d);
  for (long i = 0; i < d; ++i) v(i) = entries[size_t(i)];
  return PureState(std::move(v));
}

inline DensityMatrix load_density(const std::filesystem::path& path) {
  return DensityMatrix(
      json_to_matrix(parse_json(read_file(path), path.string()), path.string()));
}

inline void save_density(const std::filesystem::path& path,
                         const DensityMatrix& rho) {
  write_file(path, matrix_to_json(rho.matrix()).dump(2) + "\n");
}

inline PureState load_state(const std::filesystem::path& path) {
  return json_to_state(parse_json(read_file(path), path.string()),
                       path.string());
}

inline void save_state(const std::filesystem::path& path, const PureState& s) {
  write_file(path, state_to_json(s).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// CSV

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) {
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
    columns_ = header.size();
  }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_) {
      throw InternalError("CsvWriter: row width mismatch");
    }
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_double(values[i]);
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  size_t columns_ = 0;
};

/// Parses a numeric CSV with one header line; returns rows of doubles.
inline std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qpca
