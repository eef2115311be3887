#include "ucpoint/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ucpoint {

namespace {

void check_pairs(const EffortVector& actual, const EffortVector& estimated) {
  if (actual.size() != estimated.size()) throw MetricError(MetricErrorCode::LengthMismatch, "length mismatch");
  if (actual.size() == 0) throw MetricError(MetricErrorCode::EmptyDataset, "empty dataset");
}

void check_positive_actuals(const EffortVector& actual) {
  if (!(actual.array() > 0.0).all())
    throw MetricError(MetricErrorCode::NonPositiveActual, "actual efforts must be positive");
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double mmre(const EffortVector& actual, const EffortVector& estimated) {
  check_pairs(actual, estimated);
  check_positive_actuals(actual);
  return ((actual - estimated).array().abs() / actual.array()).mean();
}

double mmer(const EffortVector& actual, const EffortVector& estimated) {
  check_pairs(actual, estimated);
  if (!(estimated.array() > 0.0).all())
    throw MetricError(MetricErrorCode::NonPositiveEstimate, "estimated efforts must be positive");
  return ((actual - estimated).array().abs() / estimated.array()).mean();
}

double pred(const EffortVector& actual, const EffortVector& estimated, double x) {
  check_pairs(actual, estimated);
  check_positive_actuals(actual);
  const double limit = x / 100.0;
  const auto mre = (actual - estimated).array().abs() / actual.array();
  const auto hits = (mre <= limit).count();
  return 100.0 * static_cast<double>(hits) / static_cast<double>(actual.size());
}

MeanErrorCI mean_error_ci(const EffortVector& actual, const EffortVector& estimated, double level) {
  if (actual.size() != estimated.size()) throw MetricError(MetricErrorCode::LengthMismatch, "length mismatch");
  if (actual.size() < 2) throw MetricError(MetricErrorCode::TooFewPoints, "confidence interval needs at least 2 pairs");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must lie in (0, 1)");
  const Eigen::VectorXd err = estimated - actual;
  const auto n = static_cast<double>(err.size());
  MeanErrorCI ci;
  ci.level = level;
  ci.mean_error = err.mean();
  const double var = (err.array() - ci.mean_error).square().sum() / (n - 1.0);
  const double t = t_quantile(1.0 - (1.0 - level) / 2.0, n - 1.0);
  ci.margin = t * std::sqrt(var) / std::sqrt(n);
  return ci;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

double t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("probability must lie in (0, 1)");
  if (!(dof > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, dof);

  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf(hi, dof) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 400 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, dof) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

EvaluationReport evaluate(const EffortVector& actual, const EffortVector& estimated, double level) {
  EvaluationReport r;
  r.n = static_cast<std::size_t>(actual.size());
  r.mmre = mmre(actual, estimated);
  if ((estimated.array() > 0.0).all()) r.mmer = mmer(actual, estimated);
  for (std::size_t i = 0; i < kPredLevels.size(); ++i) r.pred[i] = pred(actual, estimated, kPredLevels[i]);
  if (actual.size() >= 2) r.error_ci = mean_error_ci(actual, estimated, level);
  return r;
}

}  // namespace ucpoint
