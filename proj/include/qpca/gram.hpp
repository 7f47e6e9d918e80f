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

// Gram-form data encoding. Classical vectors a_1..a_m become the pure state
//   |psi> = sum_i |a_i| |e_i> (x) |a_i-bar> / sqrt(sum_i |a_i|^2),
// whose first (index) register reduces to exactly the normalized Gram matrix
// A^dag A and whose second (data) register reduces to the normalized
// second-moment matrix of the data. The data register carries the complex
// conjugates of the vectors; with the un-conjugated convention the index
// register would reduce to the transpose of A^dag A instead (the two agree
// for real data).

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qpca/io.hpp"
#include "qpca/states.hpp"

namespace qpca {

/// Raw data vectors, arbitrary norms. Labels are optional; when present there
/// is one per vector.
struct Dataset {
  std::vector<ComplexVector> vectors;
  std::vector<std::string> labels;

  long size() const { return long(vectors.size()); }
  long dim() const { return vectors.empty() ? 0 : vectors.front().size(); }

  void validate() const {
    if (vectors.empty()) {
      throw ValidationError("Dataset: no vectors");
    }
    const long d = vectors.front().size();
    if (d < 1) {
      throw ValidationError("Dataset: empty vector");
    }
    bool any_nonzero = false;
    for (const auto& v : vectors) {
      if (v.size() != d) {
        throw ValidationError("Dataset: vectors have mixed dimensions");
      }
      if (!all_finite(v)) {
        throw ValidationError("Dataset: non-finite entry");
      }
      if (v.squaredNorm() > 0.0) any_nonzero = true;
    }
    if (!any_nonzero) {
      throw ValidationError("Dataset: all vectors have zero norm");
    }
    if (!labels.empty() && long(labels.size()) != size()) {
      throw ValidationError("Dataset: label count does not match vector count");
    }
  }
};

struct GramEncoding {
  PureState purification;        // index (x) data registers, dim m*d
  DensityMatrix gram_density;    // m x m, the index register
  DensityMatrix covariance_density;  // d x d, the data register
  double norm_scale = 0.0;       // sum of squared vector norms pre-normalization
  long vectors_kept = 0;
  std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// file I/O

inline json dataset_to_json(const Dataset& data) {
  json vectors = json::array();
  for (const auto& v : data.vectors) {
    json vec = json::array();
    for (long k = 0; k < v.size(); ++k) {
      vec.push_back({v(k).real(), v(k).imag()});
    }
    vectors.push_back(std::move(vec));
  }
  json out{{"vectors", std::move(vectors)}};
  if (!data.labels.empty()) out["labels"] = data.labels;
  return out;
}

inline Dataset json_to_dataset(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("vectors") || !j["vectors"].is_array()) {
    throw FormatError(what + ": expected object with a vectors array");
  }
  if (j["vectors"].empty()) {
    throw FormatError(what + ": empty dataset");
  }
  Dataset data;
  long d = -1;
  for (const auto& vec : j["vectors"]) {
    if (!vec.is_array() || vec.empty()) {
      throw FormatError(what + ": each vector must be a nonempty array");
    }
    if (d < 0) d = long(vec.size());
    if (long(vec.size()) != d) {
      throw FormatError(what + ": ragged rows (expected dimension " +
                        std::to_string(d) + ")");
    }
    ComplexVector v(d);
    long k = 0;
    for (const auto& pair : vec) {
      if (!pair.is_array() || pair.size() != 2) {
        throw FormatError(what + ": amplitudes must be [re, im] pairs");
      }
      v(k++) = cxd(detail::json_finite_number(pair[0], what),
                   detail::json_finite_number(pair[1], what));
    }
    data.vectors.push_back(std::move(v));
  }
  if (j.contains("labels")) {
    if (!j["labels"].is_array() ||
        j["labels"].size() != j["vectors"].size()) {
      throw FormatError(what + ": labels must match vectors one-to-one");
    }
    for (const auto& label : j["labels"]) {
      data.labels.push_back(label.get<std::string>());
    }
  }
  data.validate();
  return data;
}

inline Dataset parse_csv_dataset(const std::string& text,
                                 const std::string& what) {
  Dataset data;
  std::istringstream in(text);
  std::string line;
  long d = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        size_t used = 0;
        const double x = std::stod(cell, &used);
        row.push_back(x);
      } catch (const std::exception&) {
        throw FormatError(what + ": unparseable CSV cell '" + cell + "'");
      }
    }
    if (row.empty()) continue;
    if (d < 0) d = long(row.size());
    if (long(row.size()) != d) {
      throw FormatError(what + ": ragged CSV rows");
    }
    ComplexVector v(d);
    for (long k = 0; k < d; ++k) v(k) = cxd(row[size_t(k)], 0.0);
    data.vectors.push_back(std::move(v));
  }
  if (data.vectors.empty()) {
    throw FormatError(what + ": empty dataset");
  }
  data.validate();
  return data;
}

/// Loads a dataset; .csv paths parse as real vectors (one per row), anything
/// else as the JSON format.
inline Dataset load_dataset(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".csv") {
    return parse_csv_dataset(text, path.string());
  }
  Dataset data = json_to_dataset(parse_json(text, path.string()), path.string());
  return data;
}

inline void save_dataset(const std::filesystem::path& path,
                         const Dataset& data) {
  write_file(path, dataset_to_json(data).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// encoding

/// Builds the purification and both reduced densities. Normalization makes
/// the Gram eigenvalues sum to 1; norm_scale retains the raw total squared
/// norm. Zero-norm vectors are dropped with a warning and indices re-based.
inline GramEncoding build_encoding(const Dataset& data) {
  data.validate();
  std::vector<const ComplexVector*> kept;
  std::vector<std::string> warnings;
  for (long i = 0; i < data.size(); ++i) {
    const ComplexVector& v = data.vectors[size_t(i)];
    if (v.squaredNorm() == 0.0) {
      warnings.push_back("vector " + std::to_string(i) +
                         " has zero norm; dropped");
      continue;
    }
    kept.push_back(&v);
  }
  const long m = long(kept.size());
  const long d = kept.front()->size();
  check_dimension(m * d, "build_encoding");

  double norm_scale = 0.0;
  for (const auto* v : kept) norm_scale += v->squaredNorm();

  ComplexVector purification(m * d);
  const double inv_root = 1.0 / std::sqrt(norm_scale);
  for (long i = 0; i < m; ++i) {
    for (long k = 0; k < d; ++k) {
      purification(i * d + k) = std::conj((*kept[size_t(i)])(k)) * inv_root;
    }
  }
  const ComplexMatrix joint = purification * purification.adjoint();
  ComplexMatrix gram = partial_trace(joint, Subsystem::second, m, d);
  ComplexMatrix covariance = partial_trace(joint, Subsystem::first, m, d);

  // Cross-check the index register against the direct Gram formula
  // (i,j) -> |a_i| |a_j| <a_i|a_j> / norm_scale.
  for (long i = 0; i < m; ++i) {
    for (long j = 0; j < m; ++j) {
      const cxd direct =
          (kept[size_t(i)]->adjoint() * (*kept[size_t(j)]))(0, 0) / norm_scale;
      if (std::abs(direct - gram(i, j)) > 1e-10) {
        throw InternalError("build_encoding: partial trace disagrees with the "
                            "direct Gram formula");
      }
    }
  }

  GramEncoding out{PureState(std::move(purification)),
                   DensityMatrix(std::move(gram)),
                   DensityMatrix(std::move(covariance)),
                   norm_scale,
                   m,
                   std::move(warnings)};
  return out;
}

struct PcaComponent {
  double eigenvalue = 0.0;
  PureState component;
};

struct PcaReference {
  std::vector<PcaComponent> components;
  std::vector<std::string> warnings;
};

/// Classical reference: top-k eigenpairs of the data-register density.
inline PcaReference pca_reference(const Dataset& data, long top_k) {
  const GramEncoding encoding = build_encoding(data);
  const long d = encoding.covariance_density.dim();
  if (top_k < 1 || top_k > d) {
    throw ValidationError("pca_reference: top_k must lie in [1, d]");
  }
  const SpectralDecomposition eig =
      hermitian_eig(encoding.covariance_density.matrix());
  PcaReference out;
  for (long i = 0; i < top_k; ++i) {
    out.components.push_back(
        {eig.eigenvalues(i), eig.eigenvectors[size_t(i)]});
  }
  for (long i = 0; i + 1 < top_k; ++i) {
    if (eig.eigenvalues(i) - eig.eigenvalues(i + 1) < tol::kDegenerateGap) {
      out.warnings.push_back("eigenvalues " + std::to_string(i) + " and " +
                             std::to_string(i + 1) +
                             " are degenerate; components are not unique");
    }
  }
  return out;
}

}  // namespace qpca
