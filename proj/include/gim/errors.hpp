#pragma once

#include <stdexcept>
#include <string>

namespace gim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error in the expression DSL. `offset` is a byte offset into the source.
struct ParseError : Error {
  ParseError(std::size_t offset_, const std::string& what_, std::string hint_ = {})
      : Error(what_), offset(offset_), hint(std::move(hint_)) {}
  std::size_t offset;
  std::string hint;
};

/// Static validation failure (variable out of range, non-constant exponent,
/// scenario schema violation). `field` locates the offending item.
struct ValidationError : Error {
  ValidationError(const std::string& what_, std::string field_ = {})
      : Error(what_), field(std::move(field_)) {}
  std::string field;
};

/// Evaluation left the domain of an elementary function (log of nonpositive,
/// sqrt of negative, division by zero) at the base point.
struct DomainError : Error {
  DomainError(std::size_t offset_, const std::string& what_) : Error(what_), offset(offset_) {}
  std::size_t offset;
};

/// Point does not satisfy the ambient quadric constraint.
struct ModelError : Error {
  ModelError(double residual_, const std::string& what_) : Error(what_), residual(residual_) {}
  double residual;
};

/// The differential of the immersion is rank deficient at the point.
struct RankError : Error {
  RankError(double min_eigenvalue_, const std::string& what_)
      : Error(what_), min_eigenvalue(min_eigenvalue_) {}
  double min_eigenvalue;
};

/// The Obata operator fails the invertibility threshold.
struct RegularityError : Error {
  RegularityError(double w_min_, const std::string& what_) : Error(what_), w_min(w_min_) {}
  double w_min;
};

/// Eigenvalue clusters of the Weingarten family are too close to resolve.
struct ClusterError : Error {
  ClusterError(double gap_, const std::string& what_) : Error(what_), gap(gap_) {}
  double gap;
};

struct UsageError : Error {
  using Error::Error;
};

}  // namespace gim
