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

#include <stdexcept>
#include <string>

namespace qpca {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid numerical content: broken density-matrix invariants, bad norms,
/// non-Hermitian inputs where Hermitian is required, and the like.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Incompatible matrix/vector dimensions.
class ShapeError : public ValidationError {
 public:
  explicit ShapeError(const std::string& what) : ValidationError(what) {}
};

/// Malformed input file (unparseable, ragged rows, wrong-length entry arrays).
class FormatError : public ValidationError {
 public:
  explicit FormatError(const std::string& what) : ValidationError(what) {}
};

/// A user-supplied function produced a non-finite value on its domain.
class DomainError : public ValidationError {
 public:
  explicit DomainError(const std::string& what) : ValidationError(what) {}
};

/// Lookup of a spectral bin that carries no probability mass.
class EmptyBinError : public ValidationError {
 public:
  explicit EmptyBinError(const std::string& what) : ValidationError(what) {}
};

/// A requested operation would exceed the configured Hilbert-dimension cap.
class DimensionLimitError : public Error {
 public:
  explicit DimensionLimitError(const std::string& what) : Error(what) {}
};

/// A postcondition the library guarantees failed to hold; indicates a bug.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace qpca
