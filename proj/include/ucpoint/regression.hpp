#pragma once

// Nonlinear least-squares fitting of the four curve families, fit quality
// measures, and the three-range piecewise effort estimator.

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucpoint/adjustment.hpp"
#include "ucpoint/errors.hpp"
#include "ucpoint/model_forms.hpp"

namespace ucpoint {

struct ModelForm {
  ModelKind kind = ModelKind::Polynomial;
  Eigen::VectorXd params = Eigen::VectorXd::Zero(3);

  ModelForm() = default;
  ModelForm(ModelKind k, Eigen::VectorXd p);

  bool operator==(const ModelForm& other) const {
    return kind == other.kind && params.size() == other.params.size() && params == other.params;
  }
};

// Evaluates the form at x >= 0. Throws std::invalid_argument for negative
// or non-finite x and EvaluationError when the result is not finite.
double eval_model(const ModelForm& form, double x);

struct FitOptions {
  int max_iterations = 200;
  double initial_lambda = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 10.0;
  double step_tolerance = 1e-8;   // relative, scaled parameter step
  double cost_tolerance = 1e-10;  // relative decrease of the residual sum of squares
};

struct FitResult {
  ModelForm form;
  double r_squared = 0.0;
  double rms = 0.0;
  double initial_rms = 0.0;  // at the start point the returned solution came from
  int iterations = 0;
  bool converged = false;
  std::size_t n_points = 0;
};

// Levenberg-Marquardt on raw residuals with analytic Jacobians.
// Requires sizes >= 0 and efforts > 0. Throws FitError.
FitResult fit(ModelKind kind, const Eigen::Ref<const Eigen::VectorXd>& sizes,
              const Eigen::Ref<const Eigen::VectorXd>& efforts, const FitOptions& options = {});

// 1 - SS_res / SS_tot. Throws MetricError (ZeroVariance, LengthMismatch,
// EmptyDataset).
double r_squared(const Eigen::Ref<const Eigen::VectorXd>& actual,
                 const Eigen::Ref<const Eigen::VectorXd>& predicted);

// Root mean square of residuals. Throws MetricError on length mismatch or
// empty input.
double rms(const Eigen::Ref<const Eigen::VectorXd>& actual,
           const Eigen::Ref<const Eigen::VectorXd>& predicted);

// Minimum acceptable coefficient of determination for a fit.
inline constexpr double kAcceptableRSquared = 0.5;

enum class SizeRange { Small, Medium, Large };

inline constexpr std::array<SizeRange, 3> kAllRanges = {SizeRange::Small, SizeRange::Medium,
                                                        SizeRange::Large};
inline constexpr double kSmallUpper = 100.0;  // Small is size < 100
inline constexpr double kLargeLower = 300.0;  // Large is size > 300

std::string_view to_string(SizeRange range);
std::optional<SizeRange> parse_size_range(std::string_view token);

// Small < 100 <= Medium <= 300 < Large. Throws std::invalid_argument for
// negative or non-finite size.
SizeRange segment(double size);

constexpr ModelKind default_form(SizeRange range) {
  switch (range) {
    case SizeRange::Small: return ModelKind::Polynomial;
    case SizeRange::Medium: return ModelKind::Exp3;
    case SizeRange::Large: return ModelKind::Exp2;
  }
  return ModelKind::Polynomial;
}

struct Provenance {
  std::string dataset;
  std::string created;  // ISO 8601 UTC
  FitOptions options;
  std::array<std::size_t, 3> range_counts{};
};

struct PiecewiseEstimator {
  std::array<FitResult, 3> fits;  // indexed by SizeRange
  Provenance provenance;

  const FitResult& at(SizeRange r) const { return fits[static_cast<std::size_t>(r)]; }
  FitResult& at(SizeRange r) { return fits[static_cast<std::size_t>(r)]; }
  const FitResult& small() const { return at(SizeRange::Small); }
  const FitResult& medium() const { return at(SizeRange::Medium); }
  const FitResult& large() const { return at(SizeRange::Large); }
};

struct SizeEffort {
  double size = 0.0;
  double effort = 0.0;
};

struct PiecewiseOptions {
  FitOptions fit;
  std::array<ModelKind, 3> forms = {default_form(SizeRange::Small), default_form(SizeRange::Medium),
                                    default_form(SizeRange::Large)};
  bool all_forms = false;
  std::string dataset;
  std::string created;
};

// One attempted fit in the all-forms comparison.
struct FormAttempt {
  ModelKind kind = ModelKind::Polynomial;
  std::optional<FitResult> result;
  std::string error;
};

struct PiecewiseFit {
  PiecewiseEstimator estimator;
  // Per range, every form ranked by R^2 (failures last). Empty unless
  // all_forms was requested.
  std::array<std::vector<FormAttempt>, 3> comparison;
};

// Thrown when a range cannot be fitted; the message names the range.
class RangeFitError : public FitError {
 public:
  RangeFitError(SizeRange range, const FitError& cause);
  SizeRange range() const { return range_; }

 private:
  SizeRange range_;
};

std::array<std::vector<SizeEffort>, 3> split_by_range(const std::vector<SizeEffort>& data);

// Fits the chosen form in every range. Throws RangeFitError.
PiecewiseFit fit_piecewise(const std::vector<SizeEffort>& data, const PiecewiseOptions& options = {});

struct Prediction {
  double size = 0.0;
  SizeRange range = SizeRange::Small;
  ModelKind kind = ModelKind::Polynomial;
  double curve_effort = 0.0;  // raw curve output, may be negative
  AdjustmentFactors factors;
  double effort = 0.0;  // adjusted, never negative
  bool clamped = false;  // curve_effort was replaced by 0
};

// Routes size to its range's curve and scales by complexity / productivity.
// Negative curve output, and any curve output at size 0, is clamped to zero
// and flagged.
Prediction predict(const PiecewiseEstimator& est, double size, int level,
                   const ProductivityRatings& ratings);

}  // namespace ucpoint
