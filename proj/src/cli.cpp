#include "ucpoint/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ucpoint/dataset_io.hpp"
#include "ucpoint/metrics.hpp"
#include "ucpoint/regression.hpp"
#include "ucpoint/scenario_parser.hpp"
#include "ucpoint/sizing.hpp"
#include "ucpoint/svg_plot.hpp"

namespace ucpoint {

namespace {

constexpr const char* kSignConvention = "error sign convention: error = estimated - actual (positive = overestimate)";

int code(ExitStatus s) { return static_cast<int>(s); }

// Shortest text that reads back to the same double.
std::string exact(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed(double v, int precision) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, ptr);
}

std::string general(double v, int precision) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, ptr);
}

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses a project file, printing diagnostics. Empty on failure.
std::optional<ProjectSpec> load_project(const std::string& path, std::ostream& err) {
  const auto text = read_text(path);
  if (!text) {
    err << "error: cannot read " << path << "\n";
    return std::nullopt;
  }
  ParseResult parsed = parse_project(*text);
  for (const auto& d : parsed.diagnostics) err << format_diagnostic(d, path) << "\n";
  return std::move(parsed.project);
}

void print_dataset_diagnostics(const Dataset& ds, const std::string& path, std::ostream& err) {
  for (const auto& d : ds.diagnostics) {
    err << path << ":" << d.line << ": " << (d.severity == Severity::Error ? "error: " : "warning: ");
    if (!d.column.empty()) err << d.column << ": ";
    err << d.message << "\n";
  }
}

// --- size -----------------------------------------------------------------

int cmd_size(const std::string& project_file, std::ostream& out, std::ostream& err) {
  const auto spec = load_project(project_file, err);
  if (!spec) return code(ExitStatus::Input);
  const SizeBreakdown size = proposed_size(*spec);
  for (const auto& w : size.warnings) err << "warning: " << w << "\n";

  out << "project: " << spec->name << "\n\n";
  out << std::left << std::setw(24) << "use case" << std::setw(9) << "kind" << std::right << std::setw(5) << "T_S"
      << std::setw(5) << "T_E" << std::setw(8) << "total" << std::setw(7) << "class" << std::setw(8) << "weight"
      << "\n";
  for (const auto& row : size.per_use_case) {
    out << std::left << std::setw(24) << row.name << std::setw(9) << to_string(row.kind) << std::right
        << std::setw(5) << row.t_s << std::setw(5) << row.t_e << std::setw(8) << fixed(row.transactions.value(), 1)
        << std::setw(7) << to_string(row.complexity.label) << std::setw(8) << row.complexity.weight << "\n";
  }
  const double uucp = legacy_uucp(*spec);
  const double ucp = legacy_ucp(*spec);
  out << "\nproposed size (UCP): " << exact(size.total_size) << "\n";
  out << "legacy UUCP: " << exact(uucp) << "\n";
  out << "legacy adjustment: " << exact(spec->legacy_adjustment) << "\n";
  out << "legacy UCP: " << exact(ucp) << "\n";
  out << "legacy effort (person-hours): " << exact(legacy_effort(ucp)) << "\n";
  return code(ExitStatus::Success);
}

// --- fit ------------------------------------------------------------------

struct FitArgs {
  std::string dataset;
  std::string range;
  std::string form;
  bool all_forms = false;
  std::string out;
  std::string created;
};

std::string params_text(const ModelForm& f) {
  static const char* names = "abcd";
  std::string s;
  for (Eigen::Index i = 0; i < f.params.size(); ++i)
    s += (i ? " " : "") + std::string(1, names[i]) + "=" + general(f.params(i), 10);
  return s;
}

void fit_row(std::ostream& out, const std::string& label, std::size_t n, const FitResult& f) {
  out << std::left << std::setw(8) << label << std::right << std::setw(5) << n << "  " << std::left << std::setw(12)
      << to_string(f.form.kind) << std::right << std::setw(14) << fixed(f.r_squared, 9) << std::setw(14)
      << general(f.rms, 8) << std::setw(6) << (f.converged ? "yes" : "no") << std::setw(6) << f.iterations << "  "
      << params_text(f.form) << (f.r_squared < kAcceptableRSquared ? "  [R^2 below 0.5]" : "") << "\n";
}

void fit_header(std::ostream& out) {
  out << std::left << std::setw(8) << "range" << std::right << std::setw(5) << "n" << "  " << std::left
      << std::setw(12) << "form" << std::right << std::setw(14) << "R^2" << std::setw(14) << "RMS" << std::setw(6)
      << "conv" << std::setw(6) << "iter" << "  params\n";
}

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<SizeRange> only;
  if (!a.range.empty()) only = parse_size_range(a.range);
  if (only && !a.out.empty()) {
    err << "error: --out needs all three ranges; drop --range to save a model\n";
    return code(ExitStatus::Usage);
  }
  Dataset ds;
  try {
    ds = load_dataset(a.dataset);
  } catch (const DatasetError& e) {
    err << "error: " << a.dataset << ": " << e.what() << "\n";
    return code(ExitStatus::Input);
  }
  print_dataset_diagnostics(ds, a.dataset, err);
  const auto pairs = size_effort_pairs(ds.records);
  const auto parts = split_by_range(pairs);

  PiecewiseOptions opt;
  opt.all_forms = a.all_forms;
  opt.dataset = a.dataset;
  opt.created = a.created.empty() ? now_utc() : a.created;
  if (!a.form.empty()) {
    const ModelKind k = *parse_model_kind(a.form);
    for (SizeRange r : kAllRanges)
      if (!only || *only == r) opt.forms[static_cast<std::size_t>(r)] = k;
  }

  out << "dataset: " << a.dataset << " (" << pairs.size() << " projects; small " << parts[0].size() << ", medium "
      << parts[1].size() << ", large " << parts[2].size() << ")\n";
  out << "R^2 acceptability threshold: " << kAcceptableRSquared << "\n\n";

  bool all_converged = true;
  auto warn_fit = [&](SizeRange r, const FitResult& f) {
    if (f.r_squared < kAcceptableRSquared)
      err << "warning: " << to_string(r) << " range R^2 = " << fixed(f.r_squared, 4)
          << " is below the acceptable value of 0.5\n";
    if (!f.converged) {
      err << "warning: " << to_string(r) << " range fit did not converge in " << f.iterations << " iterations\n";
      all_converged = false;
    }
  };

  if (only) {
    const auto idx = static_cast<std::size_t>(*only);
    std::vector<FormAttempt> attempts;
    const std::vector<ModelKind> kinds = a.all_forms ? std::vector<ModelKind>(std::begin(kAllModelKinds), std::end(kAllModelKinds))
                                                     : std::vector<ModelKind>{opt.forms[idx]};
    Eigen::VectorXd x(static_cast<Eigen::Index>(parts[idx].size())), y(x.size());
    for (std::size_t i = 0; i < parts[idx].size(); ++i) {
      x(static_cast<Eigen::Index>(i)) = parts[idx][i].size;
      y(static_cast<Eigen::Index>(i)) = parts[idx][i].effort;
    }
    fit_header(out);
    int status = code(ExitStatus::Success);
    for (ModelKind k : kinds) {
      try {
        const FitResult f = fit(k, x, y, opt.fit);
        fit_row(out, std::string(to_string(*only)), parts[idx].size(), f);
        if (k == opt.forms[idx]) warn_fit(*only, f);
      } catch (const FitError& e) {
        out << std::left << std::setw(8) << to_string(*only) << std::right << std::setw(5) << parts[idx].size() << "  "
            << std::left << std::setw(12) << to_string(k) << "failed: " << e.what() << "\n";
        if (k == opt.forms[idx]) {
          err << "error: " << to_string(*only) << " range: " << e.what() << "\n";
          status = code(ExitStatus::Computation);
        }
      }
    }
    if (status == 0 && !all_converged) status = code(ExitStatus::Computation);
    return status;
  }

  PiecewiseFit result;
  try {
    result = fit_piecewise(pairs, opt);
  } catch (const RangeFitError& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitStatus::Computation);
  }

  fit_header(out);
  for (SizeRange r : kAllRanges) {
    const auto idx = static_cast<std::size_t>(r);
    fit_row(out, std::string(to_string(r)), parts[idx].size(), result.estimator.at(r));
    warn_fit(r, result.estimator.at(r));
  }

  if (a.all_forms) {
    out << "\nall forms, ranked by R^2 within each range:\n";
    fit_header(out);
    for (SizeRange r : kAllRanges) {
      const auto idx = static_cast<std::size_t>(r);
      for (const auto& att : result.comparison[idx]) {
        if (att.result) {
          fit_row(out, std::string(to_string(r)), parts[idx].size(), *att.result);
        } else {
          out << std::left << std::setw(8) << to_string(r) << std::right << std::setw(5) << parts[idx].size() << "  "
              << std::left << std::setw(12) << to_string(att.kind) << "failed: " << att.error << "\n";
        }
      }
    }
  }

  if (!a.out.empty()) {
    try {
      save_estimator(result.estimator, a.out);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return code(ExitStatus::Input);
    }
    err << "model written to " << a.out << "\n";
  }
  return all_converged ? code(ExitStatus::Success) : code(ExitStatus::Computation);
}

// --- estimate -------------------------------------------------------------

int cmd_estimate(const std::string& project_file, const std::string& model_file, const std::string& baseline,
                 std::ostream& out, std::ostream& err) {
  if (model_file.empty() && baseline.empty()) {
    err << "error: give --model <file> or --baseline ucp\n";
    return code(ExitStatus::Usage);
  }
  const auto spec = load_project(project_file, err);
  if (!spec) return code(ExitStatus::Input);

  std::optional<PiecewiseEstimator> est;
  if (!model_file.empty()) {
    try {
      est = load_estimator(model_file);
    } catch (const EstimatorFileError& e) {
      err << "error: " << model_file << ": " << e.what() << "\n";
      return code(ExitStatus::Input);
    }
  }

  out << "project: " << spec->name << "\n";
  if (!baseline.empty()) {
    const double ucp = legacy_ucp(*spec);
    out << "legacy UUCP: " << exact(legacy_uucp(*spec)) << "\n";
    out << "legacy adjustment: " << exact(spec->legacy_adjustment) << "\n";
    out << "legacy UCP: " << exact(ucp) << "\n";
    out << "baseline effort (person-hours): " << exact(legacy_effort(ucp)) << "\n";
  }
  if (est) {
    const SizeBreakdown size = proposed_size(*spec);
    for (const auto& w : size.warnings) err << "warning: " << w << "\n";
    Prediction p;
    try {
      p = predict(*est, size.total_size, spec->complexity_level, spec->productivity);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return code(ExitStatus::Computation);
    }
    if (p.clamped)
      err << "warning: " << to_string(p.range) << " curve predicts " << exact(p.curve_effort)
          << " person-hours at size " << exact(p.size) << "; clamped to 0\n";
    out << "proposed size (UCP): " << exact(p.size) << "\n";
    out << "range: " << to_string(p.range) << "\n";
    out << "form: " << to_string(p.kind) << "\n";
    out << "curve effort (person-hours): " << exact(p.curve_effort) << "\n";
    out << "complexity level: " << p.factors.complexity_level << " (weight " << exact(p.factors.complexity_weight)
        << ")\n";
    out << "productivity sum: " << p.factors.productivity_sum << " (value " << exact(p.factors.productivity_value)
        << ")\n";
    out << "estimated effort (person-hours): " << exact(p.effort) << "\n";
  }
  return code(ExitStatus::Success);
}

// --- evaluate -------------------------------------------------------------

struct Estimator {
  std::string name;
  std::vector<double> estimates;
};

std::string cell(const std::optional<EvaluationReport>& r, int row) {
  if (!r) return "-";
  switch (row) {
    case 0: return std::to_string(r->n);
    case 1: return fixed(r->mmre, 3);
    case 2: return r->mmer ? fixed(*r->mmer, 3) : "n/a";
    case 3: case 4: case 5: case 6: return fixed(r->pred[static_cast<std::size_t>(row - 3)], 1);
    case 7: return r->error_ci ? fixed(r->error_ci->mean_error, 0) : "n/a";
    case 8: return r->error_ci ? fixed(r->error_ci->margin, 0) : "n/a";
  }
  return "";
}

int cmd_evaluate(const std::string& dataset, const std::string& model_file, const std::string& baseline,
                 const std::string& plot_file, double level, std::ostream& out, std::ostream& err) {
  if (model_file.empty() && baseline.empty()) {
    err << "error: give --model <file> and/or --baseline ucp\n";
    return code(ExitStatus::Usage);
  }
  if (!(level > 0.0 && level < 1.0)) {
    err << "error: --level must lie in (0, 1)\n";
    return code(ExitStatus::Usage);
  }
  Dataset ds;
  try {
    ds = load_dataset(dataset);
  } catch (const DatasetError& e) {
    err << "error: " << dataset << ": " << e.what() << "\n";
    return code(ExitStatus::Input);
  }
  print_dataset_diagnostics(ds, dataset, err);

  std::optional<PiecewiseEstimator> est;
  if (!model_file.empty()) {
    try {
      est = load_estimator(model_file);
    } catch (const EstimatorFileError& e) {
      err << "error: " << model_file << ": " << e.what() << "\n";
      return code(ExitStatus::Input);
    }
  }

  const auto& recs = ds.records;
  std::vector<Estimator> estimators;
  if (!baseline.empty()) {
    Estimator e{"UCP baseline", {}};
    for (const auto& r : recs) e.estimates.push_back(legacy_effort(r.legacy_ucp.value_or(*r.size_ucp)));
    estimators.push_back(std::move(e));
  }
  if (est) {
    Estimator e{"piecewise model", {}};
    std::size_t clamped = 0;
    try {
      for (const auto& r : recs) {
        const Prediction p = predict(*est, *r.size_ucp, r.complexity_level, r.productivity);
        clamped += p.clamped;
        e.estimates.push_back(p.effort);
      }
    } catch (const std::exception& ex) {
      err << "error: " << ex.what() << "\n";
      return code(ExitStatus::Computation);
    }
    if (clamped) err << "warning: " << clamped << " curve predictions clamped to 0 (negative, or size 0)\n";
    estimators.push_back(std::move(e));
  }

  // Column subsets: All, Small, Medium, Large.
  std::array<std::vector<std::size_t>, 4> subsets;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    subsets[0].push_back(i);
    subsets[1 + static_cast<std::size_t>(segment(*recs[i].size_ucp))].push_back(i);
  }
  std::vector<std::array<std::optional<EvaluationReport>, 4>> reports(estimators.size());
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    for (std::size_t s = 0; s < 4; ++s) {
      if (subsets[s].empty()) continue;
      Eigen::VectorXd actual(static_cast<Eigen::Index>(subsets[s].size())), estimated(actual.size());
      for (std::size_t k = 0; k < subsets[s].size(); ++k) {
        actual(static_cast<Eigen::Index>(k)) = recs[subsets[s][k]].actual_effort_ph;
        estimated(static_cast<Eigen::Index>(k)) = estimators[e].estimates[subsets[s][k]];
      }
      reports[e][s] = evaluate(actual, estimated, level);
    }
  }

  const int label_w = 16, col_w = 10;
  const std::string ci_label = "CI(" + general(100.0 * level, 4) + "%) +/-";
  const char* rows[] = {"n", "MMRE", "MMER", "PRED(25)", "PRED(50)", "PRED(75)", "PRED(100)", "mean error"};
  out << "dataset: " << dataset << " (" << recs.size() << " projects)\n";
  out << kSignConvention << "\n";
  out << "R^2 acceptability threshold: " << kAcceptableRSquared << "\n\n";
  out << std::left << std::setw(label_w) << "criteria";
  for (const auto& e : estimators) out << "| " << std::left << std::setw(4 * col_w - 2) << e.name;
  out << "\n" << std::setw(label_w) << "";
  for (std::size_t e = 0; e < estimators.size(); ++e)
    for (const char* r : {"All", "Small", "Medium", "Large"})
      out << std::right << std::setw(col_w) << r;
  out << "\n";
  for (int row = 0; row < 9; ++row) {
    out << std::left << std::setw(label_w) << (row < 8 ? rows[row] : ci_label.c_str());
    for (std::size_t e = 0; e < estimators.size(); ++e)
      for (std::size_t s = 0; s < 4; ++s) out << std::right << std::setw(col_w) << cell(reports[e][s], row);
    out << "\n";
  }

  if (!plot_file.empty()) {
    ScatterPlot plot;
    plot.title = "Actual effort vs size";
    for (const auto& r : recs) plot.points.push_back({*r.size_ucp, r.actual_effort_ph});
    if (!baseline.empty())
      plot.curves.push_back({"UCP baseline (20 x size)", "#1f77b4", [](double x) { return legacy_effort(x); }});
    if (est) {
      const PiecewiseEstimator model = *est;
      plot.curves.push_back({"piecewise model (level 3, average productivity)", "#2ca02c",
                             [model](double x) { return predict(model, x, 3, {}).effort; }});
    }
    std::ofstream svg(plot_file, std::ios::binary | std::ios::trunc);
    if (!svg || !(svg << render_svg(plot))) {
      err << "error: cannot write " << plot_file << "\n";
      return code(ExitStatus::Input);
    }
    err << "plot written to " << plot_file << "\n";
  }
  return code(ExitStatus::Success);
}

// --- generate -------------------------------------------------------------

int cmd_generate(std::uint64_t seed, const std::string& counts_text, double noise, const std::string& out_file,
                 std::ostream& out, std::ostream& err) {
  std::array<std::size_t, 3> counts{};
  {
    std::string_view s = counts_text;
    for (std::size_t i = 0; i < 3; ++i) {
      const std::size_t comma = s.find(',');
      const std::string_view tok = s.substr(0, comma);
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), counts[i]);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() || (i < 2) == (comma == std::string_view::npos)) {
        err << "error: --counts expects three comma-separated integers, e.g. 26,21,18\n";
        return code(ExitStatus::Usage);
      }
      s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
    }
  }
  if (!(noise >= 0.0 && noise < 1.0)) {
    err << "error: --noise must lie in [0, 1)\n";
    return code(ExitStatus::Usage);
  }
  const auto records = generate_synthetic(seed, {counts[0], counts[1], counts[2]}, noise);
  if (out_file.empty()) {
    out << format_dataset(records);
    return code(ExitStatus::Success);
  }
  try {
    write_dataset(records, out_file);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitStatus::Input);
  }
  err << records.size() << " synthetic projects written to " << out_file << "\n";
  return code(ExitStatus::Success);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Use-case based software size and effort estimation", "ucpoint"};
  app.require_subcommand(1);

  std::string project_file;
  auto* size = app.add_subcommand("size", "Size a use-case project file");
  size->add_option("project_file", project_file, "Project file (.ucp.txt)")->required();

  FitArgs fa;
  auto* fitc = app.add_subcommand("fit", "Fit per-range effort curves to a dataset");
  fitc->add_option("dataset", fa.dataset, "Dataset CSV")->required();
  fitc->add_option("--range", fa.range, "Fit only this range")->check(CLI::IsMember({"small", "medium", "large"}));
  fitc->add_option("--form", fa.form, "Curve family to fit")
      ->check(CLI::IsMember({"polynomial", "exp1", "exp2", "exp3"}));
  fitc->add_flag("--all-forms", fa.all_forms, "Also fit and rank all four forms per range");
  fitc->add_option("--out", fa.out, "Write the fitted model (JSON)");
  fitc->add_option("--created", fa.created, "Timestamp recorded in the model file (default: now, UTC)");

  std::string model_file, baseline;
  auto* estimate = app.add_subcommand("estimate", "Estimate effort for a project file");
  estimate->add_option("project_file", project_file, "Project file (.ucp.txt)")->required();
  estimate->add_option("--model", model_file, "Fitted model file");
  estimate->add_option("--baseline", baseline, "Legacy baseline (20 person-hours per UCP)")
      ->check(CLI::IsMember({"ucp"}));

  std::string dataset, plot_file;
  double level = 0.95;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score estimators against a dataset");
  evaluate_cmd->add_option("dataset", dataset, "Dataset CSV")->required();
  evaluate_cmd->add_option("--model", model_file, "Fitted model file");
  evaluate_cmd->add_option("--baseline", baseline, "Legacy baseline (20 person-hours per UCP)")
      ->check(CLI::IsMember({"ucp"}));
  evaluate_cmd->add_option("--plot", plot_file, "Write an SVG scatter plot");
  evaluate_cmd->add_option("--level", level, "Confidence level of the mean error interval");

  std::uint64_t seed = 42;
  std::string counts = "26,21,18";
  double noise = 0.05;
  std::string out_file;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("--seed", seed, "PRNG seed")->capture_default_str();
  generate->add_option("--counts", counts, "Projects per range: small,medium,large")->capture_default_str();
  generate->add_option("--noise", noise, "Multiplicative noise fraction")->capture_default_str();
  generate->add_option("--out", out_file, "Output CSV (default: stdout)");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("ucpoint");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return code(ExitStatus::Success);
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return code(ExitStatus::Success);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return code(ExitStatus::Usage);
  }

  try {
    if (*size) return cmd_size(project_file, out, err);
    if (*fitc) return cmd_fit(fa, out, err);
    if (*estimate) return cmd_estimate(project_file, model_file, baseline, out, err);
    if (*evaluate_cmd) return cmd_evaluate(dataset, model_file, baseline, plot_file, level, out, err);
    if (*generate) return cmd_generate(seed, counts, noise, out_file, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitStatus::Computation);
  }
  return code(ExitStatus::Usage);
}

}  // namespace ucpoint
