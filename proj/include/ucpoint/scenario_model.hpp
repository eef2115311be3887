#pragma once

// Use cases, actors and projects, plus transaction arithmetic and the two
// use-case classification schemes (six-class proposed, three-class legacy).

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ucpoint/adjustment.hpp"

namespace ucpoint {

enum class UseCaseKind { Base, Include, Extend };
enum class ActorKind { Simple, Average, Complex };

std::string_view to_string(UseCaseKind kind);
std::string_view to_string(ActorKind kind);
std::optional<UseCaseKind> parse_use_case_kind(std::string_view token);
std::optional<ActorKind> parse_actor_kind(std::string_view token);

struct UseCase {
  std::string name;
  UseCaseKind kind = UseCaseKind::Base;
  std::uint32_t t_s = 0;  // steps in the main success scenario
  std::uint32_t t_e = 0;  // steps in the extensions

  friend bool operator==(const UseCase&, const UseCase&) = default;
};

struct Actor {
  std::string name;
  ActorKind kind = ActorKind::Simple;

  friend bool operator==(const Actor&, const Actor&) = default;
};

// Transaction count stored in half steps, so t_s + t_e/2 is exact.
class TransactionCount {
 public:
  constexpr TransactionCount() = default;
  static constexpr TransactionCount from_half_steps(std::uint64_t halves) {
    TransactionCount t;
    t.halves_ = halves;
    return t;
  }
  static constexpr TransactionCount whole(std::uint64_t steps) { return from_half_steps(2 * steps); }

  constexpr std::uint64_t half_steps() const { return halves_; }
  constexpr double value() const { return static_cast<double>(halves_) / 2.0; }

  friend constexpr auto operator<=>(TransactionCount, TransactionCount) = default;

 private:
  std::uint64_t halves_ = 0;
};

TransactionCount total_transactions(const UseCase& uc);

enum class ComplexityLabel { VL, LO, NM, HI, VH, XH };

struct ComplexityClass {
  ComplexityLabel label = ComplexityLabel::VL;
  int weight = 5;

  friend bool operator==(const ComplexityClass&, const ComplexityClass&) = default;
};

std::string_view to_string(ComplexityLabel label);
int class_weight(ComplexityLabel label);

// Bands are right-inclusive: [0,4], (4,8], (8,12], (12,16], (16,20], (20,inf).
ComplexityClass classify_proposed(TransactionCount t);

// Counts below one transaction fall outside the published table; they are
// still classified VL, but callers should surface a warning.
bool below_table_range(TransactionCount t);

enum class LegacyClass { Simple, Average, Complex };

struct LegacyClassification {
  LegacyClass label = LegacyClass::Simple;
  int weight = 5;
  std::uint64_t transactions = 0;

  friend bool operator==(const LegacyClassification&, const LegacyClassification&) = default;
};

std::string_view to_string(LegacyClass label);

// Legacy counting weighs extensions fully: t_s + t_e.
// Simple <= 3, Average 4..7, Complex > 7.
LegacyClassification classify_legacy(const UseCase& uc);

inline constexpr std::uint64_t kLegacySimpleMax = 3;
inline constexpr std::uint64_t kLegacyAverageMax = 7;

inline constexpr double kMinLegacyAdjustment = 0.7;
inline constexpr double kMaxLegacyAdjustment = 1.3;

struct ProjectSpec {
  std::string name;
  std::vector<UseCase> use_cases;
  std::vector<Actor> actors;
  int complexity_level = 3;
  ProductivityRatings productivity;
  double legacy_adjustment = 1.0;

  friend bool operator==(const ProjectSpec&, const ProjectSpec&) = default;
};

// Use case and actor names must be a single token: nonempty, no whitespace,
// no '#'.
bool valid_name(std::string_view name);

// Project names may contain inner spaces but no line breaks and no
// surrounding whitespace.
bool valid_project_name(std::string_view name);

// Every invariant violation found, empty when the project is valid.
std::vector<std::string> validation_errors(const ProjectSpec& spec);

// Throws std::invalid_argument listing the first violation.
void validate(const ProjectSpec& spec);

}  // namespace ucpoint
