#include "ucpoint/scenario_parser.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>

namespace ucpoint {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_blank(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_blank(s[j])) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// digits, optional letters, '.', whitespace, then some text.
bool is_step_line(std::string_view t) {
  std::size_t i = 0;
  while (i < t.size() && is_digit(t[i])) ++i;
  if (i == 0) return false;
  while (i < t.size() && is_alpha(t[i])) ++i;
  if (i >= t.size() || t[i] != '.') return false;
  ++i;
  if (i >= t.size() || !is_blank(t[i])) return false;
  return !trim(t.substr(i)).empty();
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

enum class Section { None, Main, Extensions };

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  ParseResult run() {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= source_.size()) {
      std::size_t nl = source_.find('\n', pos);
      if (nl == std::string_view::npos) nl = source_.size();
      ++line_no;
      line(line_no, source_.substr(pos, nl - pos));
      pos = nl + 1;
    }
    finish();
    return std::move(result_);
  }

 private:
  void warn(std::size_t n, std::string msg) {
    result_.diagnostics.push_back({n, Severity::Warning, std::move(msg)});
  }
  void error(std::size_t n, std::string msg) {
    result_.diagnostics.push_back({n, Severity::Error, std::move(msg)});
    failed_ = true;
  }

  UseCase* current() { return in_use_case_ ? &spec_.use_cases.back() : nullptr; }

  void close_use_case() {
    in_use_case_ = false;
    section_ = Section::None;
  }

  void line(std::size_t n, std::string_view raw) {
    const std::string_view t = trim(raw);
    if (t.empty() || t.front() == '#') return;
    const bool indented = is_blank(raw.front());

    if (is_step_line(t)) {
      UseCase* uc = current();
      if (!uc) return error(n, "step outside use case");
      if (section_ == Section::None) return error(n, "step before 'main:' or 'extensions:' section");
      auto& count = section_ == Section::Main ? uc->t_s : uc->t_e;
      if (count == UINT32_MAX) return error(n, "too many steps in use case '" + uc->name + "'");
      ++count;
      return;
    }

    if (t == "main:" || t == "extensions:") {
      if (!current()) return error(n, "'" + std::string(t) + "' section outside use case");
      const bool main = t == "main:";
      bool& seen = main ? main_seen_ : ext_seen_;
      if (seen) return error(n, "duplicate '" + std::string(t) + "' section in use case '" + current()->name + "'");
      seen = true;
      section_ = main ? Section::Main : Section::Extensions;
      return;
    }

    if (indented && current()) {
      warn(n, "ignored non-step line in use case '" + current()->name + "'");
      return;
    }

    const auto tokens = split_ws(t);
    if (tokens.front() == "actor") return actor(n, tokens);
    if (tokens.front() == "usecase") return use_case(n, tokens);

    const std::size_t colon = t.find(':');
    if (colon != std::string_view::npos) {
      close_use_case();
      return header(n, trim(t.substr(0, colon)), trim(t.substr(colon + 1)));
    }
    error(n, "unrecognized line");
  }

  void actor(std::size_t n, const std::vector<std::string_view>& tok) {
    close_use_case();
    if (tok.size() != 3) return error(n, "expected 'actor <name> <simple|average|complex>'");
    const auto kind = parse_actor_kind(tok[2]);
    if (!kind) return error(n, "unknown actor kind '" + std::string(tok[2]) + "'");
    if (!valid_name(tok[1])) return error(n, "invalid actor name");
    if (!actor_names_.insert(std::string(tok[1])).second)
      return error(n, "duplicate actor '" + std::string(tok[1]) + "'");
    spec_.actors.push_back({std::string(tok[1]), *kind});
  }

  void use_case(std::size_t n, const std::vector<std::string_view>& tok) {
    close_use_case();
    if (tok.size() != 3) return error(n, "expected 'usecase <name> <base|include|extend>'");
    const auto kind = parse_use_case_kind(tok[2]);
    if (!kind) return error(n, "unknown use case kind '" + std::string(tok[2]) + "'");
    if (!valid_name(tok[1])) return error(n, "invalid use case name");
    if (!use_case_names_.insert(std::string(tok[1])).second)
      return error(n, "duplicate use case '" + std::string(tok[1]) + "'");
    spec_.use_cases.push_back({std::string(tok[1]), *kind, 0, 0});
    in_use_case_ = true;
    main_seen_ = ext_seen_ = false;
  }

  void header(std::size_t n, std::string_view key, std::string_view value) {
    static const std::array<std::string_view, 4> kKeys = {"project", "complexity-level",
                                                          "productivity", "legacy-adjustment"};
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      warn(n, "unknown key '" + std::string(key) + "' ignored");
      return;
    }
    if (!header_keys_.insert(std::string(key)).second)
      warn(n, "duplicate key '" + std::string(key) + "'; later value wins");

    if (key == "project") {
      if (!valid_project_name(value)) return error(n, "project name is empty");
      spec_.name = std::string(value);
      project_seen_ = true;
    } else if (key == "complexity-level") {
      const auto v = parse_int(value);
      if (!v || *v < 1 || *v > 5) return error(n, "complexity level must be an integer 1..5");
      spec_.complexity_level = *v;
    } else if (key == "legacy-adjustment") {
      const auto v = parse_double(value);
      if (!v || !(*v >= kMinLegacyAdjustment && *v <= kMaxLegacyAdjustment))
        return error(n, "legacy adjustment must be a number in [0.7, 1.3]");
      spec_.legacy_adjustment = *v;
    } else {
      productivity(n, value);
    }
  }

  void productivity(std::size_t n, std::string_view value) {
    struct Field {
      std::string_view key;
      int ProductivityRatings::*member;
      bool seen = false;
    };
    std::array<Field, 5> fields = {{{"domain", &ProductivityRatings::domain_experience},
                                    {"motivation", &ProductivityRatings::motivation},
                                    {"language", &ProductivityRatings::language_experience},
                                    {"oo", &ProductivityRatings::oo_experience},
                                    {"analytical", &ProductivityRatings::analytical_skills}}};
    ProductivityRatings r;
    bool bad = false;
    for (auto tok : split_ws(value)) {
      const std::size_t eq = tok.find('=');
      if (eq == std::string_view::npos) {
        error(n, "expected key=value in productivity, got '" + std::string(tok) + "'");
        bad = true;
        continue;
      }
      const auto key = tok.substr(0, eq);
      auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; });
      if (it == fields.end()) {
        warn(n, "unknown productivity factor '" + std::string(key) + "' ignored");
        continue;
      }
      if (it->seen) warn(n, "duplicate productivity factor '" + std::string(key) + "'; later value wins");
      const auto v = parse_int(tok.substr(eq + 1));
      if (!v || !valid_rating(*v)) {
        error(n, "productivity rating '" + std::string(key) + "' must be an integer 1..5");
        bad = true;
        continue;
      }
      r.*(it->member) = *v;
      it->seen = true;
    }
    for (const auto& f : fields) {
      if (!f.seen && !bad) {
        error(n, "productivity factor '" + std::string(f.key) + "' missing");
        bad = true;
      }
    }
    if (!bad) spec_.productivity = r;
  }

  void finish() {
    if (!project_seen_) error(1, "missing 'project:' header");
    if (!failed_) result_.project = std::move(spec_);
  }

  std::string_view source_;
  ParseResult result_;
  ProjectSpec spec_;
  bool failed_ = false;
  bool project_seen_ = false;
  bool in_use_case_ = false;
  bool main_seen_ = false;
  bool ext_seen_ = false;
  Section section_ = Section::None;
  std::set<std::string> use_case_names_;
  std::set<std::string> actor_names_;
  std::set<std::string> header_keys_;
};

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

bool ParseResult::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
}

ParseResult parse_project(std::string_view source) { return Parser(source).run(); }

std::string serialize_project(const ProjectSpec& spec) {
  const auto& r = spec.productivity;
  std::string out;
  out += "project: " + spec.name + "\n";
  out += "complexity-level: " + std::to_string(spec.complexity_level) + "\n";
  out += "productivity: domain=" + std::to_string(r.domain_experience) +
         " motivation=" + std::to_string(r.motivation) +
         " language=" + std::to_string(r.language_experience) +
         " oo=" + std::to_string(r.oo_experience) +
         " analytical=" + std::to_string(r.analytical_skills) + "\n";
  out += "legacy-adjustment: " + shortest(spec.legacy_adjustment) + "\n";
  for (const auto& a : spec.actors)
    out += "actor " + a.name + " " + std::string(to_string(a.kind)) + "\n";
  for (const auto& uc : spec.use_cases) {
    out += "\nusecase " + uc.name + " " + std::string(to_string(uc.kind)) + "\n";
    out += "  main:\n";
    for (std::uint32_t i = 1; i <= uc.t_s; ++i)
      out += "    " + std::to_string(i) + ". step " + std::to_string(i) + "\n";
    if (uc.t_e > 0) {
      out += "  extensions:\n";
      for (std::uint32_t i = 1; i <= uc.t_e; ++i)
        out += "    " + std::to_string(i) + "a. extension " + std::to_string(i) + "\n";
    }
  }
  return out;
}

std::string format_diagnostic(const ParseDiagnostic& d, std::string_view source_name) {
  std::string out;
  if (!source_name.empty()) out += std::string(source_name) + ":";
  out += std::to_string(d.line) + ": ";
  out += d.severity == Severity::Error ? "error: " : "warning: ";
  out += d.message;
  return out;
}

}  // namespace ucpoint
