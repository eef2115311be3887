#pragma once

// Estimation accuracy criteria over paired (actual, estimated) efforts.
// Errors are signed estimated - actual: positive means overestimate.

#include <Eigen/Core>

#include <array>
#include <optional>

#include "ucpoint/errors.hpp"

namespace ucpoint {

using EffortVector = Eigen::Ref<const Eigen::VectorXd>;

// mean |actual - estimated| / actual. Actuals must be positive.
double mmre(const EffortVector& actual, const EffortVector& estimated);

// mean |actual - estimated| / estimated. Estimates must be positive.
double mmer(const EffortVector& actual, const EffortVector& estimated);

// Percentage of pairs whose relative error |a - e| / a is at most x / 100.
double pred(const EffortVector& actual, const EffortVector& estimated, double x);

struct MeanErrorCI {
  double mean_error = 0.0;
  double margin = 0.0;
  double level = 0.95;
};

// Mean of (estimated - actual) and the Student t half-width at `level`.
// Needs at least two pairs.
MeanErrorCI mean_error_ci(const EffortVector& actual, const EffortVector& estimated, double level = 0.95);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double dof);

// Inverse of student_t_cdf for 0 < p < 1.
double t_quantile(double p, double dof);

inline constexpr std::array<int, 4> kPredLevels = {25, 50, 75, 100};

struct EvaluationReport {
  std::size_t n = 0;
  double mmre = 0.0;
  std::optional<double> mmer;  // absent when some estimate is zero
  std::array<double, 4> pred{};  // at kPredLevels
  std::optional<MeanErrorCI> error_ci;  // absent when n < 2
};

EvaluationReport evaluate(const EffortVector& actual, const EffortVector& estimated, double level = 0.95);

}  // namespace ucpoint
