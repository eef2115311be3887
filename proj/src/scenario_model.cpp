#include "ucpoint/scenario_model.hpp"

#include <set>
#include <stdexcept>

namespace ucpoint {

std::string_view to_string(UseCaseKind kind) {
  switch (kind) {
    case UseCaseKind::Base: return "base";
    case UseCaseKind::Include: return "include";
    case UseCaseKind::Extend: return "extend";
  }
  return "base";
}

std::string_view to_string(ActorKind kind) {
  switch (kind) {
    case ActorKind::Simple: return "simple";
    case ActorKind::Average: return "average";
    case ActorKind::Complex: return "complex";
  }
  return "simple";
}

std::optional<UseCaseKind> parse_use_case_kind(std::string_view token) {
  if (token == "base") return UseCaseKind::Base;
  if (token == "include") return UseCaseKind::Include;
  if (token == "extend") return UseCaseKind::Extend;
  return std::nullopt;
}

std::optional<ActorKind> parse_actor_kind(std::string_view token) {
  if (token == "simple") return ActorKind::Simple;
  if (token == "average") return ActorKind::Average;
  if (token == "complex") return ActorKind::Complex;
  return std::nullopt;
}

TransactionCount total_transactions(const UseCase& uc) {
  return TransactionCount::from_half_steps(2 * static_cast<std::uint64_t>(uc.t_s) + uc.t_e);
}

std::string_view to_string(ComplexityLabel label) {
  switch (label) {
    case ComplexityLabel::VL: return "VL";
    case ComplexityLabel::LO: return "LO";
    case ComplexityLabel::NM: return "NM";
    case ComplexityLabel::HI: return "HI";
    case ComplexityLabel::VH: return "VH";
    case ComplexityLabel::XH: return "XH";
  }
  return "VL";
}

int class_weight(ComplexityLabel label) { return 5 * (static_cast<int>(label) + 1); }

ComplexityClass classify_proposed(TransactionCount t) {
  // Upper bounds of each band, in half steps.
  constexpr std::uint64_t kBounds[] = {8, 16, 24, 32, 40};
  int idx = 0;
  while (idx < 5 && t.half_steps() > kBounds[idx]) ++idx;
  const auto label = static_cast<ComplexityLabel>(idx);
  return {label, class_weight(label)};
}

bool below_table_range(TransactionCount t) { return t.half_steps() < 2; }

std::string_view to_string(LegacyClass label) {
  switch (label) {
    case LegacyClass::Simple: return "simple";
    case LegacyClass::Average: return "average";
    case LegacyClass::Complex: return "complex";
  }
  return "simple";
}

LegacyClassification classify_legacy(const UseCase& uc) {
  const std::uint64_t n = static_cast<std::uint64_t>(uc.t_s) + uc.t_e;
  if (n <= kLegacySimpleMax) return {LegacyClass::Simple, 5, n};
  if (n <= kLegacyAverageMax) return {LegacyClass::Average, 10, n};
  return {LegacyClass::Complex, 15, n};
}

bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' || c == '#')
      return false;
  }
  return true;
}

bool valid_project_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name)
    if (c == '\n' || c == '\r') return false;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; };
  return !is_space(name.front()) && !is_space(name.back());
}

std::vector<std::string> validation_errors(const ProjectSpec& spec) {
  std::vector<std::string> errors;
  if (!valid_project_name(spec.name)) errors.push_back("project name must be nonempty single-line text");
  if (spec.complexity_level < 1 || spec.complexity_level > 5)
    errors.push_back("complexity level must be 1..5");
  if (!valid_ratings(spec.productivity)) errors.push_back("productivity ratings must be 1..5");
  if (!(spec.legacy_adjustment >= kMinLegacyAdjustment &&
        spec.legacy_adjustment <= kMaxLegacyAdjustment))
    errors.push_back("legacy adjustment must lie in [0.7, 1.3]");

  std::set<std::string, std::less<>> seen;
  for (const auto& uc : spec.use_cases) {
    if (!valid_name(uc.name))
      errors.push_back("use case name '" + uc.name + "' is not a nonempty token");
    else if (!seen.insert(uc.name).second)
      errors.push_back("duplicate use case '" + uc.name + "'");
  }
  seen.clear();
  for (const auto& a : spec.actors) {
    if (!valid_name(a.name))
      errors.push_back("actor name '" + a.name + "' is not a nonempty token");
    else if (!seen.insert(a.name).second)
      errors.push_back("duplicate actor '" + a.name + "'");
  }
  return errors;
}

void validate(const ProjectSpec& spec) {
  const auto errors = validation_errors(spec);
  if (!errors.empty()) throw std::invalid_argument("invalid project: " + errors.front());
}

}  // namespace ucpoint
