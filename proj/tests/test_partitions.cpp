#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <doctest.h>

#include "chernoff/partitions.hpp"
#include "support/generators.hpp"

using namespace chernoff;

namespace {

std::vector<PartitionScheme> shipped_schemes() {
  return {PartitionScheme::uniform(), PartitionScheme::alternating(),
          PartitionScheme::power_law(0.5), PartitionScheme::power_law(2.0),
          PartitionScheme::dirichlet(1000.0), PartitionScheme::dirichlet(1.0, 99)};
}

}  // namespace

TEST_CASE("uniform partitions") {
  CHECK(make_uniform(1).weights()[0] == 1.0);
  const Partition p = make_uniform(4);
  for (double w : p.weights()) CHECK(w == 0.25);
  const PartitionMetrics m = metrics(make_uniform(5));
  CHECK(m.max_weight == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(m.l1_deviation == doctest::Approx(0.0));
  CHECK_THROWS_AS(make_uniform(0), std::invalid_argument);
}

TEST_CASE("alternating counterexample array") {
  const Partition two = make_alternating(2);
  CHECK(two[0] == 0.25);
  CHECK(two[1] == 0.75);

  const Partition four = make_alternating(4);
  const double expected[] = {0.125, 0.375, 0.125, 0.375};
  for (std::size_t i = 0; i < 4; ++i) CHECK(four[i] == expected[i]);
  const PartitionMetrics m = metrics(four);
  CHECK(m.max_weight == 0.375);
  CHECK(m.l1_deviation == 0.5);

  CHECK_THROWS_AS(make_alternating(3), std::invalid_argument);
  CHECK_THROWS_AS(make_alternating(0), std::invalid_argument);

  SUBCASE("scheme maps odd n to the uniform row") {
    CHECK(PartitionScheme::alternating().generate(5) == make_uniform(5));
    CHECK(PartitionScheme::alternating().generate(6) == make_alternating(6));
  }
}

TEST_CASE("power-law partitions") {
  const Partition flat = make_power_law(3, 0.0);
  for (double w : flat.weights()) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const Partition linear = make_power_law(2, 1.0);
  CHECK(linear[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(linear[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const PartitionMetrics m = metrics(linear);
  CHECK(m.max_weight == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m.l1_deviation == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  SUBCASE("deviation at n = 100, theta = 0.5 against direct summation") {
    long double total = 0.0L;
    for (int i = 1; i <= 100; ++i) total += std::sqrt(static_cast<long double>(i));
    long double dev = 0.0L;
    for (int i = 1; i <= 100; ++i) {
      dev += std::fabs(0.01L - std::sqrt(static_cast<long double>(i)) / total);
    }
    const double got = metrics(make_power_law(100, 0.5)).l1_deviation;
    CHECK(got == doctest::Approx(static_cast<double>(dev)).epsilon(1e-13));
    // 30-digit summation.
    CHECK(got == doctest::Approx(0.291184440304032117976).epsilon(1e-13));
  }

  CHECK_THROWS_AS(make_power_law(4, -0.1), std::invalid_argument);
}

TEST_CASE("dirichlet partitions") {
  CHECK(make_dirichlet(1, 5, 2.0)[0] == 1.0);
  CHECK(make_dirichlet(1, 6, 0.1)[0] == 1.0);
  CHECK(make_dirichlet(32, 11, 3.0) == make_dirichlet(32, 11, 3.0));
  CHECK_FALSE(make_dirichlet(32, 11, 3.0) == make_dirichlet(32, 12, 3.0));
  CHECK_THROWS_AS(make_dirichlet(8, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_dirichlet(8, 1, -2.0), std::invalid_argument);

  SUBCASE("shipped default seed, n = 64, concentration 1000") {
    const PartitionMetrics m = metrics(make_dirichlet(64, kDefaultSeed, 1000.0));
    CHECK(m.l1_deviation < 0.05);
    // Regression constant for mt19937_64 + Box-Muller + Marsaglia-Tsang.
    CHECK(m.l1_deviation == doctest::Approx(0.023423460531451491).epsilon(1e-12));
  }

  SUBCASE("small concentrations still give positive weights") {
    const Partition p = make_dirichlet(200, 3, 0.05);
    for (double w : p.weights()) CHECK(w > 0.0);
  }
}

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(Partition::from_weights({}), std::invalid_argument);
  CHECK_THROWS_AS(Partition::from_weights({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Partition::from_weights({1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Partition::from_weights({1.0, 0.0}), std::invalid_argument);
  CHECK_NOTHROW(Partition::from_weights({0.5, 0.5}));
  CHECK(Partition::normalized({1.0, 3.0})[1] == 0.75);
}

TEST_CASE("scalar product") {
  CHECK(scalar_product(make_power_law(7, 1.3), 0.0) == 1.0);
  CHECK(scalar_product(make_uniform(1), 1.0) == 2.0);
  CHECK(scalar_product(make_alternating(4), 1.0) == 2.392822265625);

  SUBCASE("uniform rows give (1 + t/n)^n") {
    for (std::size_t n : {1u, 3u, 10u, 128u}) {
      for (double t : {0.5, 1.0, 3.0}) {
        const double expected = std::pow(1.0 + t / static_cast<double>(n), static_cast<double>(n));
        CHECK(scalar_product(make_uniform(n), t) == doctest::Approx(expected).epsilon(1e-13));
      }
    }
  }

  SUBCASE("monotone in t") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const Partition p = testing::random_partition(rng);
      double prev = scalar_product(p, 0.0);
      for (double t = 0.1; t <= 5.0; t += 0.1) {
        const double v = scalar_product(p, t);
        CHECK(v >= prev);
        prev = v;
      }
    }
  }

  SUBCASE("tends to e along null arrays") {
    for (const PartitionScheme& s : shipped_schemes()) {
      CHECK(std::abs(scalar_product(s.generate(10000), 1.0) - std::numbers::e) <= 1e-3);
    }
  }
}

TEST_CASE("scheme invariants") {
  for (const PartitionScheme& s : shipped_schemes()) {
    CAPTURE(s.name());
    for (std::size_t n : {1u, 2u, 7u, 64u, 501u, 1000u}) {
      const Partition p = s.generate(n);
      REQUIRE(p.size() == n);
      const double sum = std::accumulate(p.weights().begin(), p.weights().end(), 0.0);
      CHECK(std::abs(sum - 1.0) <= kPartitionSumTolerance);
      const PartitionMetrics m = metrics(p);
      for (double w : p.weights()) CHECK(w > 0.0);
      // max_i a_i <= 1/n + sum_i |1/n - a_i|
      CHECK(m.max_weight <= 2.0 * (m.l1_deviation + 1.0 / static_cast<double>(n)));
    }
  }

  SUBCASE("alternating: max weight vanishes, deviation does not") {
    for (std::size_t n = 2; n <= 1000; n += 2) {
      const PartitionMetrics m = metrics(PartitionScheme::alternating().generate(n));
      CHECK(m.l1_deviation == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(m.max_weight == doctest::Approx(1.5 / static_cast<double>(n)).epsilon(1e-12));
    }
  }

  SUBCASE("names round-trip through the parser") {
    CHECK(parse_scheme_kind("uniform") == SchemeKind::uniform);
    CHECK(parse_scheme_kind("alternating") == SchemeKind::alternating);
    CHECK(parse_scheme_kind("dirichlet") == SchemeKind::dirichlet_random);
    CHECK(parse_scheme_kind("power_law") == SchemeKind::power_law);
    CHECK_THROWS_AS(parse_scheme_kind("sobol"), std::invalid_argument);
  }
}
