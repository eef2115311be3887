#include <doctest.h>

#include <random>

#include "support.hpp"
#include "ucpoint/scenario_parser.hpp"
#include "ucpoint/sizing.hpp"

using namespace ucpoint;

namespace {

UseCase uc(const std::string& name, std::uint32_t ts, std::uint32_t te = 0, UseCaseKind k = UseCaseKind::Base) {
  return {name, k, ts, te};
}

}  // namespace

TEST_CASE("proposed size") {
  ProjectSpec s;
  s.name = "P";
  SUBCASE("two VL and one NM") {
    s.use_cases = {uc("a", 3), uc("b", 3), uc("c", 10)};
    CHECK(proposed_size(s).total_size == 25.0);
  }
  SUBCASE("empty project") {
    const auto b = proposed_size(s);
    CHECK(b.total_size == 0.0);
    CHECK(b.warnings.size() == 1);
  }
  SUBCASE("extra high") {
    s.use_cases = {uc("a", 25)};
    CHECK(proposed_size(s).total_size == 30.0);
  }
  SUBCASE("every kind counts, actors do not") {
    s.use_cases = {uc("a", 3, 0, UseCaseKind::Include), uc("b", 3, 0, UseCaseKind::Extend)};
    s.actors = {{"x", ActorKind::Complex}};
    CHECK(proposed_size(s).total_size == 10.0);
    CHECK(legacy_uucp(s) == 3.0);
  }
  SUBCASE("zero-transaction use case warns") {
    s.use_cases = {uc("a", 0)};
    const auto b = proposed_size(s);
    CHECK(b.total_size == 5.0);
    CHECK(b.warnings.size() == 1);
  }
}

TEST_CASE("legacy UUCP") {
  ProjectSpec s;
  s.name = "P";
  s.actors = {{"x", ActorKind::Complex}};
  s.use_cases = {uc("a", 6, 4)};
  CHECK(legacy_uucp(s) == 18.0);

  s.actors.clear();
  s.use_cases = {uc("a", 6, 4, UseCaseKind::Include)};
  CHECK(legacy_uucp(s) == 0.0);

  s.use_cases.clear();
  s.actors = {{"x", ActorKind::Simple}, {"y", ActorKind::Simple}};
  CHECK(legacy_uucp(s) == 2.0);

  LegacyWeights w;
  w.simple_actor = 0.5;
  CHECK(legacy_uucp(s, w) == 1.0);
}

TEST_CASE("legacy UCP and effort") {
  ProjectSpec s;
  s.name = "P";
  for (int i = 0; i < 20; ++i) s.use_cases.push_back(uc("u" + std::to_string(i), 2));  // 20 x 5
  REQUIRE(legacy_uucp(s) == 100.0);
  s.legacy_adjustment = 1.0;
  CHECK(legacy_ucp(s) == 100.0);
  s.legacy_adjustment = 0.7;
  CHECK(legacy_ucp(s) == doctest::Approx(70.0).epsilon(1e-15));
  s.use_cases.resize(10);
  s.legacy_adjustment = 1.3;
  CHECK(legacy_ucp(s) == doctest::Approx(65.0).epsilon(1e-15));
  s.legacy_adjustment = 1.5;
  CHECK_THROWS_AS(legacy_ucp(s), std::invalid_argument);

  CHECK(legacy_effort(250) == 5000.0);
  CHECK(legacy_effort(0) == 0.0);
  CHECK(legacy_effort(100) == 2000.0);
  CHECK_THROWS_AS(legacy_effort(-1), std::invalid_argument);
}

TEST_CASE("legacy effort is linear") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 4000);
  for (int i = 0; i < 200; ++i) {
    // quarter-point sizes keep the sums exact
    const double a = d(rng) / 4.0, b = d(rng) / 4.0;
    CHECK(legacy_effort(a + b) == legacy_effort(a) + legacy_effort(b));
  }
}

TEST_CASE("proposed size properties") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    ProjectSpec s = test::random_spec(rng);
    const double total = proposed_size(s).total_size;

    // partition additivity
    ProjectSpec left = s, right = s;
    const std::size_t cut = s.use_cases.empty() ? 0 : rng() % (s.use_cases.size() + 1);
    left.use_cases.assign(s.use_cases.begin(), s.use_cases.begin() + static_cast<long>(cut));
    right.use_cases.assign(s.use_cases.begin() + static_cast<long>(cut), s.use_cases.end());
    CHECK(proposed_size(left).total_size + proposed_size(right).total_size == total);

    // adding a use case adds between 5 and 30
    s.use_cases.push_back(uc("extra", static_cast<std::uint32_t>(rng() % 40), static_cast<std::uint32_t>(rng() % 10)));
    const double grown = proposed_size(s).total_size;
    CHECK(grown - total >= 5.0);
    CHECK(grown - total <= 30.0);
  }
}

TEST_CASE("only include and extend use cases") {
  ProjectSpec s;
  s.name = "P";
  s.use_cases = {uc("a", 10, 0, UseCaseKind::Include), uc("b", 30, 0, UseCaseKind::Extend)};
  CHECK(legacy_uucp(s) == 0.0);
  CHECK(proposed_size(s).total_size == 45.0);
}

TEST_CASE("breakdown rows") {
  const auto r = parse_project(test::read_text(test::fixture("library.ucp.txt")));
  REQUIRE(r.ok());
  const auto b = proposed_size(*r.project);
  REQUIRE(b.per_use_case.size() == 2);
  CHECK(b.per_use_case[0].complexity.label == ComplexityLabel::VL);
  CHECK(b.per_use_case[1].transactions.value() == 10.0);
  CHECK(b.per_use_case[1].complexity.label == ComplexityLabel::NM);
  CHECK(b.total_size == 20.0);
}
