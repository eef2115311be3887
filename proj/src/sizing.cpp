#include "ucpoint/sizing.hpp"

#include <stdexcept>

namespace ucpoint {

SizeBreakdown proposed_size(const ProjectSpec& spec) {
  SizeBreakdown out;
  out.per_use_case.reserve(spec.use_cases.size());
  long long total = 0;
  for (const auto& uc : spec.use_cases) {
    SizedUseCase row;
    row.name = uc.name;
    row.kind = uc.kind;
    row.t_s = uc.t_s;
    row.t_e = uc.t_e;
    row.transactions = total_transactions(uc);
    row.complexity = classify_proposed(row.transactions);
    if (below_table_range(row.transactions))
      out.warnings.push_back("use case '" + uc.name + "' has fewer than one transaction; classified VL");
    total += row.complexity.weight;
    out.per_use_case.push_back(std::move(row));
  }
  if (spec.use_cases.empty()) out.warnings.push_back("project has no use cases; size is 0");
  out.total_size = static_cast<double>(total);
  return out;
}

double actor_weight(ActorKind kind, const LegacyWeights& weights) {
  switch (kind) {
    case ActorKind::Simple: return weights.simple_actor;
    case ActorKind::Average: return weights.average_actor;
    case ActorKind::Complex: return weights.complex_actor;
  }
  return weights.simple_actor;
}

double legacy_uucp(const ProjectSpec& spec, const LegacyWeights& weights) {
  double actors = 0.0;
  for (const auto& a : spec.actors) actors += actor_weight(a.kind, weights);
  int use_cases = 0;
  for (const auto& uc : spec.use_cases) {
    if (uc.kind != UseCaseKind::Base) continue;
    use_cases += classify_legacy(uc).weight;
  }
  return actors + static_cast<double>(use_cases);
}

double legacy_ucp(const ProjectSpec& spec, const LegacyWeights& weights) {
  if (!(spec.legacy_adjustment >= kMinLegacyAdjustment &&
        spec.legacy_adjustment <= kMaxLegacyAdjustment))
    throw std::invalid_argument("legacy adjustment must lie in [0.7, 1.3]");
  return legacy_uucp(spec, weights) * spec.legacy_adjustment;
}

double legacy_effort(double size_ucp) {
  if (!(size_ucp >= 0.0)) throw std::invalid_argument("size must be nonnegative");
  return kHoursPerLegacyPoint * size_ucp;
}

}  // namespace ucpoint
