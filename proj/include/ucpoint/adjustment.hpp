#pragma once

// Project complexity levels and team productivity factors, and the
// multiplier they apply to a base effort.

#include <array>
#include <stdexcept>

namespace ucpoint {

// Each rating runs from 1 (very low) to 5 (very high); 3 is average.
struct ProductivityRatings {
  int domain_experience = 3;
  int motivation = 3;
  int language_experience = 3;
  int oo_experience = 3;
  int analytical_skills = 3;

  friend bool operator==(const ProductivityRatings&, const ProductivityRatings&) = default;
};

// Factor weights in declaration order of ProductivityRatings.
inline constexpr std::array<int, 5> kProductivityWeights = {2, 1, 2, 2, 1};

inline constexpr int kMinProductivitySum = 8;
inline constexpr int kMaxProductivitySum = 40;

struct AdjustmentFactors {
  int complexity_level = 3;
  double complexity_weight = 1.0;
  int productivity_sum = 24;
  double productivity_value = 1.0;

  // complexity_weight / productivity_value
  double multiplier() const { return complexity_weight / productivity_value; }
};

bool valid_rating(int rating);
bool valid_ratings(const ProductivityRatings& r);

// Throws std::out_of_range outside 1..5.
double complexity_weight(int level);

// Throws std::out_of_range if any rating is outside 1..5.
int productivity_sum(const ProductivityRatings& r);

// Maps a productivity sum in [8, 40] onto the five-step productivity ladder.
// Throws std::out_of_range outside that interval.
double productivity_value(int sum);

AdjustmentFactors adjustment_factors(int level, const ProductivityRatings& r);

// base_effort * complexity / productivity. Division happens first so that
// two levels over the same ratings differ by exactly one multiplication.
double adjusted_effort(double base_effort, int level, const ProductivityRatings& r);

}  // namespace ucpoint
