#pragma once

#include <stdexcept>
#include <string>

namespace ucpoint {

enum class Severity { Warning, Error };

enum class FitErrorCode { InsufficientData, InvalidData, SingularJacobian };

class FitError : public std::runtime_error {
 public:
  FitError(FitErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  FitErrorCode code() const { return code_; }

 private:
  FitErrorCode code_;
};

enum class MetricErrorCode {
  EmptyDataset,
  LengthMismatch,
  NonPositiveActual,
  NonPositiveEstimate,
  TooFewPoints,
  ZeroVariance,
};

class MetricError : public std::invalid_argument {
 public:
  MetricError(MetricErrorCode code, const std::string& what)
      : std::invalid_argument(what), code_(code) {}
  MetricErrorCode code() const { return code_; }

 private:
  MetricErrorCode code_;
};

// A model produced a non-finite value.
class EvaluationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace ucpoint
