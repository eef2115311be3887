#include "ucpoint/adjustment.hpp"

#include <string>

namespace ucpoint {

namespace {

constexpr std::array<double, 5> kLadder = {0.7, 0.85, 1.0, 1.15, 1.3};

}  // namespace

bool valid_rating(int rating) { return rating >= 1 && rating <= 5; }

bool valid_ratings(const ProductivityRatings& r) {
  return valid_rating(r.domain_experience) && valid_rating(r.motivation) &&
         valid_rating(r.language_experience) && valid_rating(r.oo_experience) &&
         valid_rating(r.analytical_skills);
}

double complexity_weight(int level) {
  if (level < 1 || level > 5)
    throw std::out_of_range("complexity level must be 1..5, got " + std::to_string(level));
  return kLadder[static_cast<std::size_t>(level - 1)];
}

int productivity_sum(const ProductivityRatings& r) {
  if (!valid_ratings(r)) throw std::out_of_range("productivity ratings must be 1..5");
  const std::array<int, 5> f = {r.domain_experience, r.motivation, r.language_experience,
                                r.oo_experience, r.analytical_skills};
  int sum = 0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * kProductivityWeights[i];
  return sum;
}

double productivity_value(int sum) {
  if (sum < kMinProductivitySum || sum > kMaxProductivitySum)
    throw std::out_of_range("productivity sum must be 8..40, got " + std::to_string(sum));
  if (sum <= 14) return kLadder[0];
  if (sum <= 20) return kLadder[1];
  if (sum <= 27) return kLadder[2];
  if (sum <= 34) return kLadder[3];
  return kLadder[4];
}

AdjustmentFactors adjustment_factors(int level, const ProductivityRatings& r) {
  AdjustmentFactors f;
  f.complexity_level = level;
  f.complexity_weight = complexity_weight(level);
  f.productivity_sum = productivity_sum(r);
  f.productivity_value = productivity_value(f.productivity_sum);
  return f;
}

double adjusted_effort(double base_effort, int level, const ProductivityRatings& r) {
  if (!(base_effort >= 0.0)) throw std::invalid_argument("base effort must be nonnegative");
  const AdjustmentFactors f = adjustment_factors(level, r);
  return (base_effort / f.productivity_value) * f.complexity_weight;
}

}  // namespace ucpoint
