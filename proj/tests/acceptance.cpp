// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "ucpoint/cli.hpp"
#include "ucpoint/dataset_io.hpp"
#include "ucpoint/metrics.hpp"
#include "ucpoint/regression.hpp"
#include "ucpoint/scenario_parser.hpp"
#include "ucpoint/sizing.hpp"

using namespace ucpoint;
using Eigen::VectorXd;

namespace {

// Tolerances.
constexpr double kRecoveryRelTol = 1e-4;
constexpr double kNoiselessMinR2 = 1.0 - 1e-9;
constexpr double kNoisyMinR2 = 0.9;
constexpr double kNoisyMinPred25 = 80.0;
constexpr double kNoiseFraction = 0.05;
constexpr int kPointsPerRange = 30;
constexpr double kFitterBudgetSeconds = 5.0;
constexpr double kEndToEndBudgetSeconds = 10.0;
constexpr double kTableBudgetSeconds = 1.0;
constexpr double kJacobianRelTol = 1e-4;
constexpr int kJacobianPoints = 100;
constexpr double kMetricRelTol = 1e-12;
constexpr double kTQuantileAbsTol = 1e-3;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool rel_close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(std::abs(want), 1e-300);
}

int run_cli_quiet(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  out = o.str();
  return code;
}

std::string value_after(const std::string& text, const std::string& label) {
  const auto pos = text.find(label);
  if (pos == std::string::npos) return {};
  const auto start = pos + label.size();
  return text.substr(start, text.find('\n', start) - start);
}

Outcome constant_tables() {
  Outcome o;
  const auto t0 = Clock::now();
  const double cw[] = {0.7, 0.85, 1.0, 1.15, 1.3};
  for (int level = 1; level <= 5; ++level)
    o.require(complexity_weight(level) == cw[level - 1], "complexity weight at level " + std::to_string(level));
  for (int s = kMinProductivitySum; s <= kMaxProductivitySum; ++s) {
    const double want = s <= 14 ? 0.7 : s <= 20 ? 0.85 : s <= 27 ? 1.0 : s <= 34 ? 1.15 : 1.3;
    o.require(productivity_value(s) == want, "productivity value at sum " + std::to_string(s));
  }
  for (std::uint64_t h = 0; h <= 80; ++h) {
    const double t = static_cast<double>(h) / 2;
    const int want = t <= 4 ? 5 : t <= 8 ? 10 : t <= 12 ? 15 : t <= 16 ? 20 : t <= 20 ? 25 : 30;
    o.require(classify_proposed(TransactionCount::from_half_steps(h)).weight == want,
              "class weight at " + fmt(t) + " transactions");
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < kTableBudgetSeconds, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "5 levels, 33 sums, 81 transaction counts";
  return o;
}

Outcome baseline_exactness() {
  Outcome o;
  test::TempDir dir("accept-baseline");
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const ProjectSpec s = test::random_spec(rng);
    const auto file = dir / ("p" + std::to_string(i) + ".ucp.txt");
    test::write_text(file, serialize_project(s));
    std::string out;
    const int code = run_cli_quiet({"estimate", file.string(), "--baseline", "ucp"}, out);
    o.require(code == 0, "estimate exited with " + std::to_string(code));
    const std::string text = value_after(out, "baseline effort (person-hours): ");
    const double got = text.empty() ? NAN : std::stod(text);
    const double want = 20.0 * legacy_ucp(s);
    o.require(got == want, "project " + std::to_string(i) + ": " + text + " vs " + fmt(want));
  }
  ProjectSpec big;
  big.name = "Two Fifty";
  for (int i = 0; i < 50; ++i) big.use_cases.push_back({"u" + std::to_string(i), UseCaseKind::Base, 2, 0});
  test::write_text(dir / "big.ucp.txt", serialize_project(big));
  std::string out;
  run_cli_quiet({"estimate", (dir / "big.ucp.txt").string(), "--baseline", "ucp"}, out);
  o.require(value_after(out, "legacy UCP: ") == "250", "legacy size of the 250 project");
  o.require(value_after(out, "baseline effort (person-hours): ") == "5000", "size 250 did not give 5000");
  if (o.pass) o.detail = "100 random projects bit-exact; 250 -> 5000";
  return o;
}

Outcome level_ratio(const PiecewiseEstimator& est) {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> size(0.0, 1500.0);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const ProjectSpec s = test::random_spec(rng);
    const double sz = i % 2 ? proposed_size(s).total_size : size(rng);
    const double l3 = predict(est, sz, 3, s.productivity).effort;
    const double l5 = predict(est, sz, 5, s.productivity).effort;
    if (l3 == 0) continue;
    ++checked;
    o.require(l5 == l3 * 1.3, "size " + fmt(sz) + ": level 5 is not level 3 times 1.3");
    const double ratio = l5 / l3;
    o.require(std::abs(ratio - 1.3) <= std::nextafter(1.3, 2.0) - 1.3, "ratio off by more than 1 ulp");
  }
  if (o.pass) o.detail = std::to_string(checked) + " size/rating combinations, level5 == level3 * 1.3";
  return o;
}

Outcome productivity_bounds() {
  Outcome o;
  int lo = 1000, hi = -1;
  const std::set<double> allowed = {0.7, 0.85, 1.0, 1.15, 1.3};
  std::size_t combos = 0;
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b)
      for (int c = 1; c <= 5; ++c)
        for (int d = 1; d <= 5; ++d)
          for (int e = 1; e <= 5; ++e) {
            const int s = productivity_sum({a, b, c, d, e});
            lo = std::min(lo, s);
            hi = std::max(hi, s);
            o.require(s >= 8 && s <= 40, "sum " + std::to_string(s) + " out of bounds");
            o.require(allowed.count(productivity_value(s)) == 1, "unexpected productivity value");
            ++combos;
          }
  o.require(lo == 8 && hi == 40, "extremes " + std::to_string(lo) + ".." + std::to_string(hi));
  if (o.pass) o.detail = std::to_string(combos) + " combinations, sums span [8, 40]";
  return o;
}

struct RecoveryCase {
  ModelKind kind;
  SizeRange range;
  VectorXd params;
};

VectorXd pv(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::vector<RecoveryCase> recovery_cases() {
  using K = ModelKind;
  using R = SizeRange;
  return {
      {K::Polynomial, R::Small, pv({0.08, 11, 30})},
      {K::Polynomial, R::Medium, pv({0.05, 15, 100})},
      {K::Polynomial, R::Large, pv({0.004, 18, 500})},
      {K::Exp1, R::Small, pv({200, 300, 0.015})},
      {K::Exp1, R::Medium, pv({500, 300, 0.006})},
      {K::Exp1, R::Large, pv({1000, 3000, 0.0012})},
      {K::Exp2, R::Small, pv({300, 0.02, 200, -0.01})},
      {K::Exp2, R::Medium, pv({2000, 0.004, 1000, -0.003})},
      {K::Exp2, R::Large, pv({4000, 0.00225, 2000, -0.001})},
      {K::Exp3, R::Small, pv({6, 0.02})},
      {K::Exp3, R::Medium, pv({6.88, 0.00723})},
      {K::Exp3, R::Large, pv({8, 0.0015})},
  };
}

double range_size(SizeRange r, double u) {
  switch (r) {
    case SizeRange::Small: return 10.0 + 90.0 * u;
    case SizeRange::Medium: return 100.0 + 200.0 * u;
    case SizeRange::Large: return 1500.0 - 1200.0 * u;
  }
  return 0.0;
}

Outcome fitter_recovery() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_rel = 0, worst_r2 = 1, worst_noisy_r2 = 1, worst_pred = 100;
  for (const auto& c : recovery_cases()) {
    const std::string tag = std::string(to_string(c.kind)) + "/" + std::string(to_string(c.range));
    const ModelForm truth{c.kind, c.params};
    VectorXd xs(kPointsPerRange), clean(kPointsPerRange), noisy(kPointsPerRange);
    for (int i = 0; i < kPointsPerRange; ++i) {
      xs(i) = range_size(c.range, u(rng));
      clean(i) = eval_model(truth, xs(i));
      noisy(i) = clean(i) * (1.0 + kNoiseFraction * (2.0 * u(rng) - 1.0));
    }
    try {
      const FitResult exact = fit(c.kind, xs, clean);
      for (Eigen::Index j = 0; j < c.params.size(); ++j) {
        const double rel = std::abs(exact.form.params(j) - c.params(j)) / std::abs(c.params(j));
        worst_rel = std::max(worst_rel, rel);
        o.require(rel <= kRecoveryRelTol, tag + " parameter " + std::to_string(j) + " off by " + fmt(rel));
      }
      worst_r2 = std::min(worst_r2, exact.r_squared);
      o.require(exact.r_squared >= kNoiselessMinR2, tag + " noiseless R^2 " + fmt(exact.r_squared));

      const FitResult rough = fit(c.kind, xs, noisy);
      VectorXd fitted(kPointsPerRange);
      for (int i = 0; i < kPointsPerRange; ++i) fitted(i) = std::max(0.0, eval_model(rough.form, xs(i)));
      const double p25 = pred(noisy, fitted, 25);
      worst_noisy_r2 = std::min(worst_noisy_r2, rough.r_squared);
      worst_pred = std::min(worst_pred, p25);
      o.require(rough.r_squared >= kNoisyMinR2, tag + " noisy R^2 " + fmt(rough.r_squared));
      o.require(p25 >= kNoisyMinPred25, tag + " noisy PRED(25) " + fmt(p25));
    } catch (const std::exception& e) {
      o.require(false, tag + ": " + e.what());
    }
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < kFitterBudgetSeconds, "took " + fmt(elapsed) + " s");
  if (o.pass)
    o.detail = "12 form/range cases; worst param rel err " + fmt(worst_rel) + ", noiseless R^2 >= " + fmt(worst_r2) +
               ", noisy R^2 >= " + fmt(worst_noisy_r2) + ", PRED(25) >= " + fmt(worst_pred) + "; " + fmt(elapsed) +
               " s";
  return o;
}

Outcome jacobian_check() {
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0), jitter(0.5, 1.5);
  double worst = 0;
  for (const auto& c : recovery_cases()) {
    for (int k = 0; k < kJacobianPoints; ++k) {
      LVec p = c.params.cast<long double>();
      for (Eigen::Index j = 0; j < p.size(); ++j) p(j) *= jitter(rng);
      const long double x = range_size(c.range, u(rng));
      const LVec g = model_gradient(c.kind, p, x);
      for (Eigen::Index j = 0; j < p.size(); ++j) {
        const long double h = 1e-7L * std::max(1.0L, std::fabs(p(j)));
        LVec hi = p, lo = p;
        hi(j) += h;
        lo(j) -= h;
        const long double fd = (model_value(c.kind, hi, x) - model_value(c.kind, lo, x)) / (2 * h);
        const double rel = static_cast<double>(std::fabs(fd - g(j)) / std::max(std::fabs(g(j)), 1e-12L));
        worst = std::max(worst, rel);
        o.require(rel <= kJacobianRelTol, std::string(to_string(c.kind)) + " d/dp" + std::to_string(j) +
                                              " rel err " + fmt(rel));
      }
    }
  }
  if (o.pass) o.detail = "4 forms x 3 parameter sets x 100 points; worst rel err " + fmt(worst);
  return o;
}

Outcome metric_oracles() {
  Outcome o;
  const VectorXd a2 = pv({100, 200}), e2 = pv({110, 150});
  o.require(rel_close(mmre(a2, e2), 0.175, kMetricRelTol), "2-pair MMRE");
  o.require(rel_close(mmer(a2, e2), 0.21212121212121213, kMetricRelTol), "2-pair MMER");
  o.require(pred(a2, e2, 25) == 100 && pred(a2, e2, 10) == 50, "2-pair PRED");
  const auto c2 = mean_error_ci(a2, e2);
  o.require(c2.mean_error == -20 && rel_close(c2.margin, 381.1861420852408, 1e-9), "2-pair CI");

  const VectorXd a5 = pv({100, 250, 400, 800, 1600}), e5 = pv({120, 200, 400, 1000, 1000});
  o.require(rel_close(mmre(a5, e5), 0.205, kMetricRelTol), "5-pair MMRE");
  o.require(rel_close(mmer(a5, e5), 0.24333333333333335, kMetricRelTol), "5-pair MMER");
  o.require(pred(a5, e5, 10) == 20 && pred(a5, e5, 25) == 80 && pred(a5, e5, 50) == 100, "5-pair PRED");
  const auto c5 = mean_error_ci(a5, e5);
  o.require(rel_close(c5.mean_error, -86, kMetricRelTol) && rel_close(c5.margin, 375.5494817412833, 1e-9),
            "5-pair CI");
  const double t = t_quantile(0.975, 1);
  o.require(std::abs(t - 12.7062) <= kTQuantileAbsTol, "t_quantile(0.975, 1) = " + fmt(t));
  if (o.pass) o.detail = "2-pair and 5-pair sets match; t(0.975, 1) = " + fmt(t);
  return o;
}

struct EstimatorScore {
  double mmre_all, mmre_large, pred50_all, pred50_large;
};

EstimatorScore score(const std::vector<ProjectRecord>& recs, const std::function<double(const ProjectRecord&)>& f) {
  VectorXd a(static_cast<Eigen::Index>(recs.size())), e(a.size());
  std::vector<Eigen::Index> large;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    a(k) = recs[i].actual_effort_ph;
    e(k) = f(recs[i]);
    if (segment(*recs[i].size_ucp) == SizeRange::Large) large.push_back(k);
  }
  VectorXd al(static_cast<Eigen::Index>(large.size())), el(al.size());
  for (std::size_t i = 0; i < large.size(); ++i) {
    al(static_cast<Eigen::Index>(i)) = a(large[i]);
    el(static_cast<Eigen::Index>(i)) = e(large[i]);
  }
  return {mmre(a, e), mmre(al, el), pred(a, e, 50), pred(al, el, 50)};
}

Outcome end_to_end(PiecewiseEstimator& fitted) {
  Outcome o;
  const auto t0 = Clock::now();
  const std::filesystem::path data = std::filesystem::path(UCPOINT_DATA_DIR) / "synthetic65.csv";
  try {
    const Dataset ds = load_dataset(data);
    o.require(ds.records.size() == 65, "dataset has " + std::to_string(ds.records.size()) + " rows");
    o.require(ds.records == generate_synthetic(42, {26, 21, 18}, 0.05), "bundled dataset differs from generator");
    fitted = fit_piecewise(size_effort_pairs(ds.records)).estimator;
    for (SizeRange r : kAllRanges) o.require(fitted.at(r).converged, std::string(to_string(r)) + " fit did not converge");
    const auto model = score(ds.records, [&](const ProjectRecord& r) {
      return predict(fitted, *r.size_ucp, r.complexity_level, r.productivity).effort;
    });
    const auto base = score(ds.records, [](const ProjectRecord& r) { return legacy_effort(*r.size_ucp); });
    o.require(model.mmre_all < base.mmre_all, "overall MMRE not lower");
    o.require(model.mmre_large < base.mmre_large, "Large MMRE not lower");
    o.require(model.pred50_all > base.pred50_all, "overall PRED(50) not higher");
    o.require(model.pred50_large > base.pred50_large, "Large PRED(50) not higher");
    const double elapsed = seconds_since(t0);
    o.require(elapsed < kEndToEndBudgetSeconds, "took " + fmt(elapsed) + " s");
    if (o.pass)
      o.detail = "MMRE " + fmt(model.mmre_all) + " vs " + fmt(base.mmre_all) + " (Large " + fmt(model.mmre_large) +
                 " vs " + fmt(base.mmre_large) + "), PRED(50) " + fmt(model.pred50_all) + " vs " +
                 fmt(base.pred50_all) + " (Large " + fmt(model.pred50_large) + " vs " + fmt(base.pred50_large) + ")";
  } catch (const std::exception& e) {
    o.require(false, e.what());
  }
  return o;
}

Outcome round_trips(const PiecewiseEstimator& est) {
  Outcome o;
  std::mt19937_64 rng(404);
  for (int i = 0; i < 200; ++i) {
    const ProjectSpec s = test::random_spec(rng);
    const auto r = parse_project(serialize_project(s));
    o.require(r.ok() && *r.project == s, "scenario round trip " + std::to_string(i));
  }
  test::TempDir dir("accept-roundtrip");
  save_estimator(est, dir / "m.json");
  const PiecewiseEstimator back = load_estimator(dir / "m.json");
  std::uniform_real_distribution<double> size(0.0, 2000.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = size(rng);
    const double a = predict(est, x, 1 + i % 5, {}).effort, b = predict(back, x, 1 + i % 5, {}).effort;
    o.require(a == b || std::nextafter(a, b) == b, "prediction at size " + fmt(x));
  }
  const auto recs = generate_synthetic(8, {10, 10, 10}, 0.2);
  write_dataset(recs, dir / "d.csv");
  o.require(load_dataset(dir / "d.csv").records == recs, "dataset round trip");
  if (o.pass) o.detail = "200 scenarios, 1000 predictions, 30-row dataset";
  return o;
}

Outcome fixture_corpus() {
  Outcome o;
  struct Hand {
    const char* file;
    double size;
    double uucp;
  };
  const Hand hand[] = {{"atm.ucp.txt", 15, 20},     {"library.ucp.txt", 20, 23}, {"shop.ucp.txt", 25, 27},
                       {"clinic.ucp.txt", 85, 51},  {"styles.ucp.txt", 10, 10},  {"empty.ucp.txt", 0, 0}};
  for (const auto& h : hand) {
    const auto r = parse_project(test::read_text(test::fixture(h.file)));
    if (!r.ok()) {
      o.require(false, std::string(h.file) + " did not parse");
      continue;
    }
    o.require(proposed_size(*r.project).total_size == h.size, std::string(h.file) + " size");
    o.require(legacy_uucp(*r.project) == h.uucp, std::string(h.file) + " legacy UUCP");
  }
  if (o.pass) o.detail = "6 scenario files match hand counts";
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* name, const Outcome& o) {
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    if (!o.pass) ++failures;
  };
  PiecewiseEstimator fitted;
  const Outcome e2e = end_to_end(fitted);

  report(1, "constant tables", constant_tables());
  report(2, "baseline is 20 x legacy size", baseline_exactness());
  report(3, "level 5 / level 3 = 1.3", level_ratio(fitted));
  report(4, "productivity bounds", productivity_bounds());
  report(5, "fitter recovery", fitter_recovery());
  report(6, "jacobian check", jacobian_check());
  report(7, "metric oracles", metric_oracles());
  report(8, "piecewise beats baseline on synthetic65", e2e);
  report(9, "round trips", round_trips(fitted));
  report(10, "scenario fixture corpus", fixture_corpus());
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
