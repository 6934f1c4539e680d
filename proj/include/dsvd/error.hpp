// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsvd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Numerical degeneracy: repeated singular values, singular systems, zero pivots.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

class RepeatedSingularValueError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

class DegeneratePivotError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

class NearZeroSigmaError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

class RankError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

class ConvergenceError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

// Triplet no longer satisfies its governing equations for the given matrix.
class StaleTripletError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  static constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);

  explicit ParseError(const std::string& what) : Error(what), offset_(kNoOffset) {}
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsvd
