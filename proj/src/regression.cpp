#include "ucpoint/regression.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ucpoint {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Polynomial: return "polynomial";
    case ModelKind::Exp1: return "exp1";
    case ModelKind::Exp2: return "exp2";
    case ModelKind::Exp3: return "exp3";
  }
  return "polynomial";
}

std::optional<ModelKind> parse_model_kind(std::string_view token) {
  for (ModelKind k : kAllModelKinds)
    if (to_string(k) == token) return k;
  return std::nullopt;
}

ModelForm::ModelForm(ModelKind k, Eigen::VectorXd p) : kind(k), params(std::move(p)) {
  if (params.size() != parameter_count(kind))
    throw std::invalid_argument(std::string(to_string(kind)) + " takes " +
                                std::to_string(parameter_count(kind)) + " parameters");
  if (!params.allFinite()) throw std::invalid_argument("model parameters must be finite");
}

double eval_model(const ModelForm& form, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("size must be finite and nonnegative");
  const double y = model_value(form.kind, form.params, x);
  if (!std::isfinite(y)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << to_string(form.kind) << " is not finite at x=" << x << " with params [";
    for (Eigen::Index i = 0; i < form.params.size(); ++i) msg << (i ? ", " : "") << form.params(i);
    msg << "]";
    throw EvaluationError(msg.str());
  }
  return y;
}

double r_squared(const Eigen::Ref<const Eigen::VectorXd>& actual,
                 const Eigen::Ref<const Eigen::VectorXd>& predicted) {
  if (actual.size() != predicted.size()) throw MetricError(MetricErrorCode::LengthMismatch, "length mismatch");
  if (actual.size() == 0) throw MetricError(MetricErrorCode::EmptyDataset, "empty dataset");
  const double ss_tot = (actual.array() - actual.mean()).square().sum();
  if (ss_tot == 0.0) throw MetricError(MetricErrorCode::ZeroVariance, "actual values have zero variance");
  const double ss_res = (actual - predicted).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

double rms(const Eigen::Ref<const Eigen::VectorXd>& actual,
           const Eigen::Ref<const Eigen::VectorXd>& predicted) {
  if (actual.size() != predicted.size()) throw MetricError(MetricErrorCode::LengthMismatch, "length mismatch");
  if (actual.size() == 0) throw MetricError(MetricErrorCode::EmptyDataset, "empty dataset");
  return std::sqrt((actual - predicted).squaredNorm() / static_cast<double>(actual.size()));
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Problem {
  ModelKind kind;
  const Eigen::Ref<const VectorXd>& x;
  const Eigen::Ref<const VectorXd>& y;

  VectorXd residual(const VectorXd& p) const { return model_values(kind, p, x) - y; }
};

struct LmOutcome {
  VectorXd params;
  double cost = 0.0;          // sum of squared residuals
  double initial_cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Linear least squares with column equilibration.
VectorXd solve_linear(const MatrixXd& A, const VectorXd& b) {
  VectorXd scale = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (scale(j) == 0.0) scale(j) = 1.0;
  const MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  const VectorXd z = As.colPivHouseholderQr().solve(b);
  return z.cwiseQuotient(scale);
}

LmOutcome levenberg_marquardt(const Problem& prob, VectorXd p, const FitOptions& opt) {
  const Eigen::Index n = prob.x.size();
  const Eigen::Index m = p.size();

  LmOutcome out;
  VectorXd r = prob.residual(p);
  if (!r.allFinite()) throw FitError(FitErrorCode::SingularJacobian, "model is not finite at the start point");
  double cost = r.squaredNorm();
  out.initial_cost = cost;
  const double cost_floor = 1e-28 * std::max(prob.y.squaredNorm(), 1e-300);

  double lambda = opt.initial_lambda;
  int iter = 0;
  bool converged = cost <= cost_floor;
  int bad_solves = 0;

  while (!converged && iter < opt.max_iterations) {
    ++iter;
    const MatrixXd J = model_jacobian(prob.kind, p, prob.x);
    if (!J.allFinite()) throw FitError(FitErrorCode::SingularJacobian, "Jacobian is not finite");

    VectorXd col = J.colwise().norm().transpose();
    const double col_max = col.maxCoeff();
    if (!(col_max > 0.0)) throw FitError(FitErrorCode::SingularJacobian, "Jacobian is identically zero");
    for (Eigen::Index j = 0; j < m; ++j) col(j) = std::max(col(j), 1e-12 * col_max);

    MatrixXd A(n + m, m);
    VectorXd rhs = VectorXd::Zero(n + m);
    A.topRows(n) = J;
    rhs.head(n) = -r;

    bool accepted = false;
    while (!accepted) {
      A.bottomRows(m) = (std::sqrt(lambda) * col).asDiagonal();
      const VectorXd step = A.householderQr().solve(rhs);
      if (!step.allFinite()) {
        if (++bad_solves > 10) throw FitError(FitErrorCode::SingularJacobian, "damped system is singular");
        lambda *= opt.lambda_up;
        continue;
      }
      bad_solves = 0;
      const double rel_step = col.cwiseProduct(step).norm() / std::max(col.cwiseProduct(p).norm(), 1e-300);
      const VectorXd p_new = p + step;
      const VectorXd r_new = prob.residual(p_new);
      const double cost_new = r_new.allFinite() ? r_new.squaredNorm() : std::numeric_limits<double>::infinity();

      if (cost_new < cost) {
        const double rel_decrease = (cost - cost_new) / cost;
        p = p_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda / opt.lambda_down, 1e-15);
        accepted = true;
        if (rel_step < opt.step_tolerance || rel_decrease < opt.cost_tolerance || cost <= cost_floor)
          converged = true;
      } else {
        lambda *= opt.lambda_up;
        if (rel_step < opt.step_tolerance) {
          converged = true;
          break;
        }
        if (lambda > 1e30) break;
      }
    }
    if (!accepted && !converged) break;
  }

  out.params = std::move(p);
  out.cost = cost;
  out.iterations = iter;
  out.converged = converged;
  return out;
}

std::vector<VectorXd> polynomial_starts(const Problem& prob) {
  MatrixXd A(prob.x.size(), 3);
  A.col(0) = prob.x.array().square().matrix();
  A.col(1) = prob.x;
  A.col(2).setOnes();
  return {solve_linear(A, prob.y)};
}

// exp(a + b x) from a line through (x, ln y).
VectorXd exp3_start(const Problem& prob) {
  MatrixXd A(prob.x.size(), 2);
  A.col(0).setOnes();
  A.col(1) = prob.x;
  return solve_linear(A, prob.y.array().log().matrix());
}

// a + b exp(c x): c from the log-slope of the data shifted above zero,
// then (a, b) by a linear solve for each candidate c.
std::vector<VectorXd> exp1_starts(const Problem& prob) {
  const double lo = prob.y.minCoeff();
  const double span = std::max(prob.y.maxCoeff() - lo, 1e-12 * std::abs(lo) + 1e-300);
  const VectorXd shifted = (prob.y.array() - lo + 0.05 * span).matrix();
  MatrixXd L(prob.x.size(), 2);
  L.col(0).setOnes();
  L.col(1) = prob.x;
  const VectorXd line = solve_linear(L, shifted.array().log().matrix());
  const double c0 = line(1);

  std::vector<VectorXd> starts;
  for (double factor : {1.0, 0.5, 2.0}) {
    const double c = c0 * factor;
    MatrixXd A(prob.x.size(), 2);
    A.col(0).setOnes();
    A.col(1) = (c * prob.x.array()).exp().matrix();
    const VectorXd ab = solve_linear(A, prob.y);
    VectorXd p(3);
    p << ab(0), ab(1), c;
    if (p.allFinite()) starts.push_back(p);
  }
  const VectorXd e3 = exp3_start(prob);
  VectorXd p(3);
  p << 0.0, std::exp(e3(0)), e3(1);
  if (p.allFinite()) starts.push_back(p);
  return starts;
}

std::vector<VectorXd> exp2_starts(const Problem& prob) {
  const VectorXd e3 = exp3_start(prob);
  const double a = std::exp(e3(0));
  const double b = e3(1);
  VectorXd base(2);
  base << e3(0), e3(1);
  double amp = (model_values(ModelKind::Exp3, base, prob.x) - prob.y).norm() /
               std::sqrt(static_cast<double>(prob.x.size()));
  if (!(amp > 1e-3 * std::abs(prob.y.mean()))) amp = 1e-2 * std::abs(prob.y.mean());

  std::vector<VectorXd> starts;
  auto add = [&](double p0, double p1, double p2, double p3) {
    VectorXd p(4);
    p << p0, p1, p2, p3;
    if (p.allFinite()) starts.push_back(p);
  };
  add(a, b, amp, -b);
  add(a, b, -amp, -b);
  add(a, b, amp, 0.0);
  add(0.5 * a, b, 0.5 * a, 0.5 * b);
  add(0.5 * a, b, 0.5 * a, 1.5 * b);
  return starts;
}

void canonicalize(ModelForm& form) {
  if (form.kind != ModelKind::Exp2) return;
  auto& p = form.params;
  if (p(1) < p(3)) {
    std::swap(p(0), p(2));
    std::swap(p(1), p(3));
  }
}

}  // namespace

FitResult fit(ModelKind kind, const Eigen::Ref<const Eigen::VectorXd>& sizes,
              const Eigen::Ref<const Eigen::VectorXd>& efforts, const FitOptions& options) {
  const Eigen::Index n = sizes.size();
  if (efforts.size() != n) throw FitError(FitErrorCode::InvalidData, "sizes and efforts differ in length");
  if (n < parameter_count(kind))
    throw FitError(FitErrorCode::InsufficientData,
                   std::string(to_string(kind)) + " needs at least " + std::to_string(parameter_count(kind)) +
                       " points, got " + std::to_string(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(sizes(i) >= 0.0) || !std::isfinite(sizes(i)))
      throw FitError(FitErrorCode::InvalidData, "sizes must be finite and nonnegative");
    if (!(efforts(i) > 0.0) || !std::isfinite(efforts(i)))
      throw FitError(FitErrorCode::InvalidData, "efforts must be finite and positive");
  }

  const Problem prob{kind, sizes, efforts};
  std::vector<VectorXd> starts;
  switch (kind) {
    case ModelKind::Polynomial: starts = polynomial_starts(prob); break;
    case ModelKind::Exp1: starts = exp1_starts(prob); break;
    case ModelKind::Exp2: starts = exp2_starts(prob); break;
    case ModelKind::Exp3: starts = {exp3_start(prob)}; break;
  }

  std::optional<LmOutcome> best;
  std::optional<FitError> last_error;
  for (const auto& start : starts) {
    if (!start.allFinite()) continue;
    try {
      LmOutcome o = levenberg_marquardt(prob, start, options);
      if (!o.params.allFinite()) continue;
      if (!best || o.cost < best->cost) best = std::move(o);
    } catch (const FitError& e) {
      last_error = e;
    }
  }
  if (!best) {
    if (last_error) throw *last_error;
    throw FitError(FitErrorCode::SingularJacobian, "no usable start point");
  }

  FitResult res;
  res.form = ModelForm(kind, best->params);
  canonicalize(res.form);
  res.iterations = best->iterations;
  res.converged = best->converged;
  res.n_points = static_cast<std::size_t>(n);
  const VectorXd fitted = model_values(kind, res.form.params, sizes);
  res.rms = rms(efforts, fitted);
  res.initial_rms = std::sqrt(best->initial_cost / static_cast<double>(n));
  try {
    res.r_squared = r_squared(efforts, fitted);
  } catch (const MetricError&) {
    // Constant efforts: all variation explained only if the fit is exact.
    res.r_squared = res.rms == 0.0 ? 1.0 : 0.0;
  }
  return res;
}

std::string_view to_string(SizeRange range) {
  switch (range) {
    case SizeRange::Small: return "small";
    case SizeRange::Medium: return "medium";
    case SizeRange::Large: return "large";
  }
  return "small";
}

std::optional<SizeRange> parse_size_range(std::string_view token) {
  for (SizeRange r : kAllRanges)
    if (to_string(r) == token) return r;
  return std::nullopt;
}

SizeRange segment(double size) {
  if (!(size >= 0.0) || !std::isfinite(size)) throw std::invalid_argument("size must be finite and nonnegative");
  if (size < kSmallUpper) return SizeRange::Small;
  if (size <= kLargeLower) return SizeRange::Medium;
  return SizeRange::Large;
}

RangeFitError::RangeFitError(SizeRange range, const FitError& cause)
    : FitError(cause.code(), std::string(to_string(range)) + " range: " + cause.what()), range_(range) {}

std::array<std::vector<SizeEffort>, 3> split_by_range(const std::vector<SizeEffort>& data) {
  std::array<std::vector<SizeEffort>, 3> out;
  for (const auto& d : data) out[static_cast<std::size_t>(segment(d.size))].push_back(d);
  return out;
}

namespace {

FitResult fit_points(ModelKind kind, const std::vector<SizeEffort>& pts, const FitOptions& opt) {
  VectorXd x(static_cast<Eigen::Index>(pts.size()));
  VectorXd y(x.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) = pts[i].size;
    y(static_cast<Eigen::Index>(i)) = pts[i].effort;
  }
  return fit(kind, x, y, opt);
}

}  // namespace

PiecewiseFit fit_piecewise(const std::vector<SizeEffort>& data, const PiecewiseOptions& options) {
  const auto parts = split_by_range(data);
  PiecewiseFit out;
  out.estimator.provenance.dataset = options.dataset;
  out.estimator.provenance.created = options.created;
  out.estimator.provenance.options = options.fit;

  for (SizeRange range : kAllRanges) {
    const auto idx = static_cast<std::size_t>(range);
    out.estimator.provenance.range_counts[idx] = parts[idx].size();
    try {
      out.estimator.fits[idx] = fit_points(options.forms[idx], parts[idx], options.fit);
    } catch (const FitError& e) {
      throw RangeFitError(range, e);
    }

    if (!options.all_forms) continue;
    auto& attempts = out.comparison[idx];
    for (ModelKind k : kAllModelKinds) {
      FormAttempt a;
      a.kind = k;
      try {
        a.result = k == options.forms[idx] ? out.estimator.fits[idx] : fit_points(k, parts[idx], options.fit);
      } catch (const FitError& e) {
        a.error = e.what();
      }
      attempts.push_back(std::move(a));
    }
    std::stable_sort(attempts.begin(), attempts.end(), [](const FormAttempt& l, const FormAttempt& r) {
      if (l.result.has_value() != r.result.has_value()) return l.result.has_value();
      return l.result && l.result->r_squared > r.result->r_squared;
    });
  }
  return out;
}

Prediction predict(const PiecewiseEstimator& est, double size, int level, const ProductivityRatings& ratings) {
  Prediction p;
  p.size = size;
  p.range = segment(size);
  const FitResult& f = est.at(p.range);
  p.kind = f.form.kind;
  p.curve_effort = eval_model(f.form, size);
  p.factors = adjustment_factors(level, ratings);
  double base = p.curve_effort;
  // nothing to build, whatever the curve's intercept
  if (base < 0.0 || (size == 0.0 && base != 0.0)) {
    base = 0.0;
    p.clamped = true;
  }
  p.effort = adjusted_effort(base, level, ratings);
  return p;
}

}  // namespace ucpoint
