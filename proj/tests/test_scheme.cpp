#include <catch_amalgamated.hpp>

#include <cmath>

#include "abqfe/scheme.hpp"

using namespace abqfe;

namespace {
Scheme pair_scheme() {
  Scheme s;
  s.ensembles = {{4, 4}, {4, 5}};
  s.t_min = 0.75e-3;
  s.t_max = 3e-3;
  s.alpha = 1.0;
  s.steps = 13;
  return s;
}
}  // namespace

TEST_CASE("interrogation times grow geometrically and cap exactly") {
  Scheme s = pair_scheme();
  double expected[] = {0.75e-3, 0.75e-3, 0.75e-3 * std::sqrt(2.0), 1.5e-3,
                       1.5e-3 * std::sqrt(2.0), 3e-3};
  for (int j = 0; j < 6; ++j)
    CHECK_THAT(time_step(s, j), Catch::Matchers::WithinRel(expected[j], 1e-14));
  // The cap is reached exactly, with no overshoot on later steps.
  CHECK(time_step(s, 5) == s.t_max);
  CHECK(time_step(s, 12) == s.t_max);

  Scheme fast = s;
  fast.alpha = 2.0;
  CHECK_THAT(time_step(fast, 1), Catch::Matchers::WithinRel(1.5e-3, 1e-14));
  CHECK(time_step(fast, 2) == s.t_max);
}

TEST_CASE("accumulated time and squared-time sums match hand values") {
  Scheme s = pair_scheme();
  CHECK_THAT(total_time(s), Catch::Matchers::WithinRel(30.181980515339459e-3, 1e-12));
  CHECK_THAT(sum_t_squared(s, 12), Catch::Matchers::WithinRel(81e-6, 1e-12));
}

TEST_CASE("collective scale and the precision bound have the frozen values") {
  Scheme s = pair_scheme();
  CHECK_THAT(s.n_total(), Catch::Matchers::WithinRel(36.0, 1e-14));
  CHECK_THAT(s.kappa_sqrt_nt(), Catch::Matchers::WithinRel(12.0, 1e-14));
  CHECK_THAT(s.kappa(), Catch::Matchers::WithinRel(2.0, 1e-14));
  CHECK_THAT(theory_std(s, 12), Catch::Matchers::WithinRel(1.4736568804805121, 1e-12));
  // Uncorrelated copies of single atoms have kappa = 1.
  Scheme scs;
  scs.ensembles = {{1, 118}};
  CHECK_THAT(scs.kappa(), Catch::Matchers::WithinRel(1.0, 1e-14));
}

TEST_CASE("precision bound is homogeneous in time") {
  Scheme s = pair_scheme();
  Scheme slow = s;
  slow.t_min *= 2;
  slow.t_max *= 2;
  CHECK_THAT(theory_std(slow, 12), Catch::Matchers::WithinRel(0.5 * theory_std(s, 12), 1e-12));
}

TEST_CASE("growth parameter and re-window gain are inverse of each other") {
  Scheme s = pair_scheme();
  CHECK_THAT(g_of_alpha(s), Catch::Matchers::WithinRel(3.0 * kPi, 1e-12));
  for (double g : {1.0, 3.3, 9.42}) {
    Scheme t = s;
    t.alpha = alpha_of_g(s, g);
    CHECK_THAT(g_of_alpha(t), Catch::Matchers::WithinRel(g, 1e-12));
  }
}

TEST_CASE("cascade generator reproduces the doubling ladder") {
  auto plain = cascade_levels(1, 4, 2, 8, false);
  REQUIRE(plain.size() == 4);
  int n_expected[] = {1, 2, 4, 8};
  int m_expected[] = {26, 18, 10, 2};
  for (int k = 0; k < 4; ++k) {
    CHECK(plain[std::size_t(k)].n_atoms == n_expected[k]);
    CHECK(plain[std::size_t(k)].copies == m_expected[k]);
  }
  auto split = cascade_levels(1, 4, 2, 8, true);
  REQUIRE(split.size() == 5);
  CHECK(split[0].n_atoms == 1);
  CHECK(split[0].copies == 13);
  CHECK(split[1].copies == 13);
  CHECK(split[4].n_atoms == 8);
  CHECK(split[4].copies == 2);
  // Total atom number is preserved by the split.
  Scheme a, b;
  a.ensembles = plain;
  b.ensembles = split;
  CHECK(a.n_total() == b.n_total());
}

TEST_CASE("scheme validation rejects malformed input") {
  Scheme s;
  CHECK_THROWS_AS(s.n0(), std::invalid_argument);
  s = pair_scheme();
  CHECK_THROWS_AS(time_step(s, -1), std::invalid_argument);
  CHECK_THROWS_AS(cascade_levels(1, 0, 2, 8, false), std::invalid_argument);
}
