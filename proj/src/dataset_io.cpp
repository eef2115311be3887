#include "ucpoint/dataset_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "ucpoint/scenario_parser.hpp"
#include "ucpoint/sizing.hpp"

namespace ucpoint {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string digits17(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Fields may be double-quoted with "" as an escaped
// quote; embedded newlines are not supported.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::string(trim(field)));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::string(trim(field)));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::optional<double> to_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Dataset parse_dataset(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty() || trim(lines[0]).empty()) throw DatasetError("dataset has no header line");

  std::string_view header_line = lines[0];
  if (header_line.substr(0, 3) == "\xEF\xBB\xBF") header_line.remove_prefix(3);
  const auto header = split_csv(header_line);
  std::map<std::string, std::size_t, std::less<>> col;
  Dataset ds;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const bool known = std::find_if(kDatasetColumns.begin(), kDatasetColumns.end(),
                                    [&](const char* c) { return header[i] == c; }) != kDatasetColumns.end();
    if (!known) ds.diagnostics.push_back({1, header[i], Severity::Warning, "unknown column ignored"});
    if (!col.emplace(header[i], i).second) throw DatasetError("duplicate column '" + header[i] + "'");
  }
  for (const char* required : {"project_id", "size_ucp", "spec_file", "actual_effort_ph"})
    if (!col.count(required)) throw DatasetError(std::string("missing required column '") + required + "'");

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    if (trim(lines[li]).empty()) continue;
    const auto cells = split_csv(lines[li]);
    auto cell = [&](std::string_view name) -> std::string {
      auto it = col.find(name);
      if (it == col.end() || it->second >= cells.size()) return {};
      return cells[it->second];
    };
    bool ok = true;
    auto fail = [&](std::string column, std::string message) {
      ds.diagnostics.push_back({line_no, std::move(column), Severity::Error, std::move(message)});
      ok = false;
    };
    if (cells.size() != header.size())
      ds.diagnostics.push_back({line_no, {}, Severity::Warning,
                                "row has " + std::to_string(cells.size()) + " cells, header has " +
                                    std::to_string(header.size())});

    ProjectRecord rec;
    rec.project_id = cell("project_id");
    if (rec.project_id.empty()) fail("project_id", "project id is empty");

    const std::string effort = cell("actual_effort_ph");
    if (auto v = to_double(effort); !v)
      fail("actual_effort_ph", "actual effort '" + effort + "' is not a number");
    else if (!(*v > 0.0))
      fail("actual_effort_ph", "actual effort must be positive");
    else
      rec.actual_effort_ph = *v;

    const std::string size = cell("size_ucp");
    if (!size.empty()) {
      if (auto v = to_double(size); !v)
        fail("size_ucp", "size '" + size + "' is not a number");
      else if (!(*v >= 0.0))
        fail("size_ucp", "size must be nonnegative");
      else
        rec.size_ucp = *v;
    }

    if (const std::string level = cell("complexity_level"); !level.empty()) {
      if (auto v = to_int(level); !v || *v < 1 || *v > 5)
        fail("complexity_level", "complexity level must be an integer 1..5");
      else
        rec.complexity_level = *v;
    }

    const std::pair<const char*, int ProductivityRatings::*> ratings[] = {
        {"prod_domain", &ProductivityRatings::domain_experience},
        {"prod_motivation", &ProductivityRatings::motivation},
        {"prod_language", &ProductivityRatings::language_experience},
        {"prod_oo", &ProductivityRatings::oo_experience},
        {"prod_analytical", &ProductivityRatings::analytical_skills}};
    for (const auto& [name, member] : ratings) {
      const std::string v = cell(name);
      if (v.empty()) continue;
      if (auto r = to_int(v); !r || !valid_rating(*r))
        fail(name, "rating must be an integer 1..5");
      else
        rec.productivity.*member = *r;
    }

    rec.spec_file = cell("spec_file");
    if (!rec.spec_file.empty() && ok) {
      const std::filesystem::path p = base_dir / rec.spec_file;
      try {
        const ParseResult parsed = parse_project(read_file(p));
        if (!parsed.ok()) {
          fail("spec_file", "project file '" + rec.spec_file + "' has errors");
        } else {
          if (!rec.size_ucp) rec.size_ucp = proposed_size(*parsed.project).total_size;
          rec.legacy_ucp = legacy_ucp(*parsed.project);
        }
      } catch (const std::exception& e) {
        fail("spec_file", e.what());
      }
    }
    if (ok && !rec.size_ucp) fail("size_ucp", "neither size_ucp nor spec_file given");
    if (ok) ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) throw DatasetError("dataset has no valid rows");
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw DatasetError(e.what());
  }
  return parse_dataset(text, path.parent_path());
}

std::string format_dataset(const std::vector<ProjectRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < kDatasetColumns.size(); ++i) out += (i ? "," : "") + std::string(kDatasetColumns[i]);
  out += "\n";
  for (const auto& r : records) {
    const auto& p = r.productivity;
    out += csv_field(r.project_id) + ",";
    out += (r.size_ucp ? shortest(*r.size_ucp) : std::string()) + ",";
    out += csv_field(r.spec_file) + ",";
    out += shortest(r.actual_effort_ph) + ",";
    out += std::to_string(r.complexity_level) + ",";
    out += std::to_string(p.domain_experience) + "," + std::to_string(p.motivation) + "," +
           std::to_string(p.language_experience) + "," + std::to_string(p.oo_experience) + "," +
           std::to_string(p.analytical_skills) + "\n";
  }
  return out;
}

void write_dataset(const std::vector<ProjectRecord>& records, const std::filesystem::path& path) {
  write_file(path, format_dataset(records));
}

std::vector<SizeEffort> size_effort_pairs(const std::vector<ProjectRecord>& records) {
  std::vector<SizeEffort> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.size_ucp.value_or(0.0), r.actual_effort_ph});
  return out;
}

// --- estimator files ------------------------------------------------------

namespace {

using nlohmann::json;

// Parameters and statistics are written with 17 significant digits, so
// this is assembled by hand; strings go through json for escaping.
std::string fit_json(const FitResult& f, const std::string& indent) {
  std::string params;
  for (Eigen::Index i = 0; i < f.form.params.size(); ++i) params += (i ? ", " : "") + digits17(f.form.params(i));
  std::string s = "{\n";
  s += indent + "  \"kind\": " + json(std::string(to_string(f.form.kind))).dump() + ",\n";
  s += indent + "  \"params\": [" + params + "],\n";
  s += indent + "  \"r_squared\": " + digits17(f.r_squared) + ",\n";
  s += indent + "  \"rms\": " + digits17(f.rms) + ",\n";
  s += indent + "  \"initial_rms\": " + digits17(f.initial_rms) + ",\n";
  s += indent + "  \"converged\": " + (f.converged ? "true" : "false") + ",\n";
  s += indent + "  \"iterations\": " + std::to_string(f.iterations) + ",\n";
  s += indent + "  \"n_points\": " + std::to_string(f.n_points) + "\n";
  return s + indent + "}";
}

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    throw EstimatorFileError(EstimatorFileError::Kind::Malformed, std::string("missing field '") + key + "'");
  return obj.at(key);
}

double number(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number())
    throw EstimatorFileError(EstimatorFileError::Kind::Malformed, std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

long long integer(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number_integer())
    throw EstimatorFileError(EstimatorFileError::Kind::Malformed, std::string("field '") + key + "' is not an integer");
  return v.get<long long>();
}

FitResult parse_fit(const json& j) {
  FitResult f;
  const json& kind = require(j, "kind");
  const auto k = kind.is_string() ? parse_model_kind(kind.get<std::string>()) : std::nullopt;
  if (!k) throw EstimatorFileError(EstimatorFileError::Kind::Malformed, "unknown model kind");
  const json& params = require(j, "params");
  if (!params.is_array() || static_cast<int>(params.size()) != parameter_count(*k))
    throw EstimatorFileError(EstimatorFileError::Kind::Malformed,
                             "params of " + std::string(to_string(*k)) + " must have " +
                                 std::to_string(parameter_count(*k)) + " entries");
  Eigen::VectorXd p(static_cast<Eigen::Index>(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].is_number()) throw EstimatorFileError(EstimatorFileError::Kind::Malformed, "parameter is not a number");
    p(static_cast<Eigen::Index>(i)) = params[i].get<double>();
  }
  try {
    f.form = ModelForm(*k, p);
  } catch (const std::invalid_argument& e) {
    throw EstimatorFileError(EstimatorFileError::Kind::Malformed, e.what());
  }
  f.r_squared = number(j, "r_squared");
  f.rms = number(j, "rms");
  f.initial_rms = j.contains("initial_rms") ? number(j, "initial_rms") : f.rms;
  const json& conv = require(j, "converged");
  if (!conv.is_boolean()) throw EstimatorFileError(EstimatorFileError::Kind::Malformed, "converged must be boolean");
  f.converged = conv.get<bool>();
  f.iterations = j.contains("iterations") ? static_cast<int>(integer(j, "iterations")) : 0;
  f.n_points = j.contains("n_points") ? static_cast<std::size_t>(integer(j, "n_points")) : 0;
  return f;
}

}  // namespace

std::string format_estimator(const PiecewiseEstimator& est) {
  const Provenance& pv = est.provenance;
  std::string s = "{\n";
  s += "  \"version\": " + std::to_string(kEstimatorFormatVersion) + ",\n";
  s += "  \"ranges\": {\n";
  for (SizeRange r : kAllRanges) {
    s += "    " + json(std::string(to_string(r))).dump() + ": " + fit_json(est.at(r), "    ");
    s += r == SizeRange::Large ? "\n" : ",\n";
  }
  s += "  },\n";
  s += "  \"provenance\": {\n";
  s += "    \"dataset\": " + json(pv.dataset).dump() + ",\n";
  s += "    \"created\": " + json(pv.created).dump() + ",\n";
  s += "    \"range_counts\": {\"small\": " + std::to_string(pv.range_counts[0]) +
       ", \"medium\": " + std::to_string(pv.range_counts[1]) +
       ", \"large\": " + std::to_string(pv.range_counts[2]) + "},\n";
  s += "    \"tolerances\": {\n";
  s += "      \"max_iterations\": " + std::to_string(pv.options.max_iterations) + ",\n";
  s += "      \"initial_lambda\": " + digits17(pv.options.initial_lambda) + ",\n";
  s += "      \"lambda_up\": " + digits17(pv.options.lambda_up) + ",\n";
  s += "      \"lambda_down\": " + digits17(pv.options.lambda_down) + ",\n";
  s += "      \"step_tolerance\": " + digits17(pv.options.step_tolerance) + ",\n";
  s += "      \"cost_tolerance\": " + digits17(pv.options.cost_tolerance) + "\n";
  s += "    }\n";
  s += "  }\n";
  return s + "}\n";
}

PiecewiseEstimator parse_estimator(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw EstimatorFileError(EstimatorFileError::Kind::Malformed, std::string("malformed estimator document: ") + e.what());
  }
  if (!doc.is_object()) throw EstimatorFileError(EstimatorFileError::Kind::Malformed, "estimator document is not an object");
  const json& version = require(doc, "version");
  if (!version.is_number_integer() || version.get<long long>() != kEstimatorFormatVersion)
    throw EstimatorFileError(EstimatorFileError::Kind::Version,
                             "unsupported estimator version " + version.dump() + " (expected " +
                                 std::to_string(kEstimatorFormatVersion) + ")");
  PiecewiseEstimator est;
  const json& ranges = require(doc, "ranges");
  for (SizeRange r : kAllRanges) est.at(r) = parse_fit(require(ranges, std::string(to_string(r)).c_str()));

  if (doc.contains("provenance")) {
    const json& pv = doc.at("provenance");
    if (!pv.is_object()) throw EstimatorFileError(EstimatorFileError::Kind::Malformed, "provenance is not an object");
    if (pv.contains("dataset") && pv.at("dataset").is_string()) est.provenance.dataset = pv.at("dataset");
    if (pv.contains("created") && pv.at("created").is_string()) est.provenance.created = pv.at("created");
    if (pv.contains("range_counts")) {
      const json& rc = pv.at("range_counts");
      for (SizeRange r : kAllRanges) {
        const std::string key(to_string(r));
        if (rc.contains(key))
          est.provenance.range_counts[static_cast<std::size_t>(r)] =
              static_cast<std::size_t>(integer(rc, key.c_str()));
      }
    }
    if (pv.contains("tolerances")) {
      const json& t = pv.at("tolerances");
      FitOptions& o = est.provenance.options;
      if (t.contains("max_iterations")) o.max_iterations = static_cast<int>(integer(t, "max_iterations"));
      if (t.contains("initial_lambda")) o.initial_lambda = number(t, "initial_lambda");
      if (t.contains("lambda_up")) o.lambda_up = number(t, "lambda_up");
      if (t.contains("lambda_down")) o.lambda_down = number(t, "lambda_down");
      if (t.contains("step_tolerance")) o.step_tolerance = number(t, "step_tolerance");
      if (t.contains("cost_tolerance")) o.cost_tolerance = number(t, "cost_tolerance");
    }
  }
  return est;
}

void save_estimator(const PiecewiseEstimator& est, const std::filesystem::path& path) {
  write_file(path, format_estimator(est));
}

PiecewiseEstimator load_estimator(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw EstimatorFileError(EstimatorFileError::Kind::Unreadable, e.what());
  }
  return parse_estimator(text);
}

// --- synthetic data -------------------------------------------------------

ModelForm synthetic_truth(SizeRange range) {
  switch (range) {
    case SizeRange::Small: return ModelForm(ModelKind::Polynomial, Eigen::Vector3d(0.08, 11.0, 30.0));
    case SizeRange::Medium: return ModelForm(ModelKind::Exp3, Eigen::Vector2d(6.88, 0.00723));
    case SizeRange::Large:
      return ModelForm(ModelKind::Exp2, Eigen::Vector4d(4000.0, 0.00225, 2000.0, -0.001));
  }
  return {};
}

double synthetic_effort(double size) { return eval_model(synthetic_truth(segment(size)), size); }

namespace {

// 53 random bits from mt19937_64, whose output sequence is fixed by the
// C++ standard.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<ProjectRecord> generate_synthetic(std::uint64_t seed, RangeCounts counts, double noise) {
  if (!(noise >= 0.0 && noise < 1.0)) throw std::invalid_argument("noise must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  std::vector<ProjectRecord> out;
  out.reserve(counts.small + counts.medium + counts.large);

  auto emit = [&](std::size_t n, auto size_of) {
    for (std::size_t i = 0; i < n; ++i) {
      const double size = size_of(unit_uniform(rng));
      const double u = 2.0 * unit_uniform(rng) - 1.0;
      ProjectRecord r;
      char id[32];
      std::snprintf(id, sizeof id, "syn-%03zu", out.size() + 1);
      r.project_id = id;
      r.size_ucp = size;
      r.actual_effort_ph = synthetic_effort(size) * (1.0 + noise * u);
      out.push_back(std::move(r));
    }
  };
  emit(counts.small, [](double u) { return 10.0 + 90.0 * u; });
  emit(counts.medium, [](double u) { return 100.0 + 200.0 * u; });
  emit(counts.large, [](double u) { return 1500.0 - 1200.0 * u; });
  return out;
}

}  // namespace ucpoint
