#pragma once

#include <string>
#include <vector>

#include "ucpoint/scenario_model.hpp"

namespace ucpoint {

struct SizedUseCase {
  std::string name;
  UseCaseKind kind = UseCaseKind::Base;
  std::uint32_t t_s = 0;
  std::uint32_t t_e = 0;
  TransactionCount transactions;
  ComplexityClass complexity;
};

struct SizeBreakdown {
  std::vector<SizedUseCase> per_use_case;
  double total_size = 0.0;  // UCP
  std::vector<std::string> warnings;
};

// Sum of class weights over every use case, whatever its kind. Actors do
// not contribute.
SizeBreakdown proposed_size(const ProjectSpec& spec);

// Actor weights for the legacy baseline. Not part of the six-class size.
struct LegacyWeights {
  double simple_actor = 1.0;
  double average_actor = 2.0;
  double complex_actor = 3.0;
};

double actor_weight(ActorKind kind, const LegacyWeights& weights = {});

// Unadjusted legacy points: actor weights plus Simple/Average/Complex
// weights of Base use cases. Include and Extend use cases are ignored.
double legacy_uucp(const ProjectSpec& spec, const LegacyWeights& weights = {});

// legacy_uucp scaled by the project's legacy adjustment factor.
// Throws std::invalid_argument when the factor is outside [0.7, 1.3].
double legacy_ucp(const ProjectSpec& spec, const LegacyWeights& weights = {});

inline constexpr double kHoursPerLegacyPoint = 20.0;

// 20 person-hours per point. Throws std::invalid_argument on negative size.
double legacy_effort(double size_ucp);

}  // namespace ucpoint
