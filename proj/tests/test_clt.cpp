#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "chernoff/clt.hpp"

using namespace chernoff;

namespace {

const Grid kGrid = Grid::symmetric();

const std::vector<NamedLaw> kLaws = {NamedLaw::uniform_pm_sqrt3, NamedLaw::triangular,
                                     NamedLaw::gaussian, NamedLaw::beta_symmetric};

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bump(double x) { return std::exp(-x * x) * std::cos(x); }

}  // namespace

TEST_CASE("named laws on the grid") {
  for (NamedLaw law : kLaws) {
    CAPTURE(to_string(law));
    const DensityGrid p = density_of(law, kGrid);
    CHECK(p.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.mean()) <= 1e-6);
    CHECK(std::abs(p.variance() - 1.0) <= 1e-4);
    for (double v : p.values) CHECK(v >= 0.0);
    CHECK(parse_law(to_string(law)) == law);
  }
  CHECK(parse_law("uniform") == NamedLaw::uniform_pm_sqrt3);
  CHECK(parse_law("normal") == NamedLaw::gaussian);
  CHECK_THROWS_AS(parse_law("cauchy"), std::invalid_argument);

  const DensityGrid u = density_of(NamedLaw::uniform_pm_sqrt3, kGrid);
  CHECK(u.values[2400] == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
  CHECK(u.values[0] == 0.0);
  const DensityGrid g = density_of(NamedLaw::gaussian, kGrid);
  CHECK(g.values[2400] == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-5));

  CHECK_THROWS_AS(density_of(NamedLaw::gaussian, Grid::symmetric(6.0)), std::invalid_argument);
  CHECK_THROWS_AS(density_of(NamedLaw::gaussian, Grid::symmetric(12.0, 0.02)), std::invalid_argument);
}

TEST_CASE("scaling") {
  const DensityGrid u = density_of(NamedLaw::uniform_pm_sqrt3, kGrid);
  const DensityGrid same = scale_density(u, 1.0);
  CHECK(same.values == u.values);

  const DensityGrid half = scale_density(u, 0.5);
  CHECK(half.values[2400] == doctest::Approx(2.0 * u.values[2400]).epsilon(1e-12));
  CHECK(half.values[2400 + 400] == 0.0);  // x = 2 > sqrt(3)/2
  CHECK(half.mass() == doctest::Approx(1.0).epsilon(1e-12));

  for (NamedLaw law : kLaws) {
    CHECK(std::abs(scale_density(density_of(law, kGrid), 0.3).variance() - 0.09) <= 1e-4);
  }
  CHECK_THROWS_AS(scale_density(u, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale_density(u, -2.0), std::invalid_argument);
}

TEST_CASE("convolution") {
  SUBCASE("point mass is the identity") {
    const DensityGrid p = density_of(NamedLaw::triangular, kGrid);
    const DensityGrid q = convolve(p, point_mass_at_zero(kGrid));
    double sup = 0.0;
    for (std::size_t k = 0; k < p.values.size(); ++k) sup = std::max(sup, std::abs(p.values[k] - q.values[k]));
    CHECK(sup <= 1e-2);
  }

  SUBCASE("two unit-width uniforms give the tent") {
    // uniform[-1/2, 1/2] = uniform[-sqrt 3, sqrt 3] scaled by 1/(2 sqrt 3)
    const DensityGrid u = scale_density(density_of(NamedLaw::uniform_pm_sqrt3, kGrid),
                                        1.0 / (2.0 * std::sqrt(3.0)));
    const DensityGrid tent = convolve(u, u);
    CHECK(tent.values[2400] == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(tent.values[2400 + 100] == doctest::Approx(0.5).epsilon(1e-2));  // x = 0.5
    CHECK(tent.values[2400 + 220] == 0.0);                                 // x = 1.1
  }

  SUBCASE("moments add") {
    const DensityGrid a = scale_density(density_of(NamedLaw::beta_symmetric, kGrid), 0.6);
    const DensityGrid b = scale_density(density_of(NamedLaw::gaussian, kGrid), 1.3);
    const DensityGrid c = convolve(a, b);
    CHECK(c.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(c.mean() - (a.mean() + b.mean())) <= 1e-3);
    CHECK(std::abs(c.variance() - (a.variance() + b.variance())) <= 1e-3);
  }

  const DensityGrid p = density_of(NamedLaw::gaussian, kGrid);
  CHECK_THROWS_AS(convolve(p, density_of(NamedLaw::gaussian, Grid::symmetric(12.0, 0.01))),
                  std::invalid_argument);
}

TEST_CASE("zeta densities") {
  const std::vector<NamedLaw> uniform_law = {NamedLaw::uniform_pm_sqrt3};
  const DensityGrid base = density_of(NamedLaw::uniform_pm_sqrt3, kGrid);
  CHECK(zeta_density(uniform_law, make_uniform(1), 1.0, kGrid).values == base.values);

  const DensityGrid zero = zeta_density(uniform_law, make_uniform(5), 0.0, kGrid);
  CHECK(zero.values[2400] * kGrid.dx == doctest::Approx(1.0));

  SUBCASE("bookkeeping for every scheme") {
    std::mt19937_64 rng(3);
    const std::vector<Partition> parts = {make_uniform(9), make_alternating(10), make_power_law(12, 1.0),
                                          make_dirichlet(15, 4, 2.0)};
    for (const Partition& p : parts) {
      for (double t : {0.5, 1.0, 2.0}) {
        const DensityGrid z = zeta_density(uniform_law, p, t, kGrid);
        CHECK(z.mass() == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(z.mean()) <= 1e-6);
        CHECK(std::abs(z.variance() - t) <= 1e-3);
      }
    }
  }

  SUBCASE("one law per weight") {
    const std::vector<NamedLaw> mixed = {NamedLaw::uniform_pm_sqrt3, NamedLaw::triangular,
                                         NamedLaw::beta_symmetric};
    const DensityGrid z = zeta_density(mixed, make_power_law(3, 1.0), 1.0, kGrid);
    CHECK(std::abs(z.variance() - 1.0) <= 1e-3);
    CHECK_THROWS_AS(zeta_density(mixed, make_uniform(4), 1.0, kGrid), std::invalid_argument);
  }

  SUBCASE("KS at n = 64 against the normal law") {
    const DensityGrid z = zeta_density(uniform_law, make_uniform(64), 1.0, kGrid);
    CHECK(ks_distance(z, density_of(NamedLaw::gaussian, kGrid)) <= 0.01);
  }
}

TEST_CASE("KS distance") {
  const DensityGrid u = density_of(NamedLaw::uniform_pm_sqrt3, kGrid);
  const DensityGrid g = density_of(NamedLaw::gaussian, kGrid);
  CHECK(ks_distance(u, u) == 0.0);

  // Analytic sup_x |F_u(x) - Phi(x)|, maximized by golden-section search.
  auto diff = [](double x) { return std::abs(law_cdf(NamedLaw::uniform_pm_sqrt3, x) - normal_cdf(x)); };
  double lo = 0.3, hi = 1.5;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    if (diff(a) > diff(b)) hi = b; else lo = a;
  }
  const double analytic = diff(0.5 * (lo + hi));
  CHECK(analytic == doctest::Approx(0.0572067).epsilon(1e-5));
  CHECK(ks_distance(u, g) == doctest::Approx(analytic).epsilon(1e-4));

  CHECK_THROWS_AS(ks_distance(u, density_of(NamedLaw::gaussian, Grid::symmetric(10.0))),
                  std::invalid_argument);
}

TEST_CASE("grid operators") {
  const GridFunction f = GridFunction::sample(kGrid, bump);
  const DensityGrid law = density_of(NamedLaw::triangular, kGrid);

  CHECK(vxi_apply(f, law, 0.0).values == f.values);

  const GridFunction c = GridFunction::sample(kGrid, [](double) { return 2.5; });
  for (double v : vxi_apply(c, law, 0.7).values) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));

  SUBCASE("sup-norm contraction on random functions") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      GridFunction r{kGrid, std::vector<double>(kGrid.count)};
      for (double& v : r.values) v = unit(rng);
      double sup_in = 0.0, sup_out = 0.0;
      for (double v : r.values) sup_in = std::max(sup_in, std::abs(v));
      for (double v : vxi_apply(r, law, 0.5 + trial).values) sup_out = std::max(sup_out, std::abs(v));
      CHECK(sup_out <= sup_in + 1e-10);
    }
  }

  SUBCASE("operators commute") {
    const GridFunction ab = vxi_apply(vxi_apply(f, law, 0.3), law, 0.8);
    const GridFunction ba = vxi_apply(vxi_apply(f, law, 0.8), law, 0.3);
    CHECK(sup_distance(ab, ba) <= 1e-8);
  }

  SUBCASE("heat semigroup") {
    const DensityGrid g = density_of(NamedLaw::gaussian, kGrid);
    CHECK(sup_distance(heat_reference(f, 0.6), vxi_apply(f, g, 0.6)) <= 1e-8);

    double prev = 1e300;
    for (double t : {1e-1, 1e-2, 1e-3}) {
      const double d = sup_distance(heat_reference(f, t), f);
      CHECK(d < prev);
      prev = d;
    }

    // Smoothing a density-like f adds t to its variance.
    const DensityGrid tri = density_of(NamedLaw::triangular, kGrid);
    const GridFunction smoothed = heat_reference(GridFunction{kGrid, tri.values}, 0.5);
    DensityGrid as_density{kGrid, smoothed.values};
    CHECK(std::abs(as_density.variance() - 1.5) <= 1e-3);
  }

  SUBCASE("products approach the heat semigroup") {
    const std::vector<NamedLaw> laws = {NamedLaw::uniform_pm_sqrt3};
    const GridFunction ref = heat_reference(f, 1.0);
    std::vector<double> d;
    for (std::size_t n : {2u, 8u, 32u}) {
      d.push_back(sup_distance(product_apply(f, laws, make_uniform(n), 1.0), ref));
    }
    // First order in 1/n: quadrupling n cuts the error by roughly four.
    CHECK(d[0] / d[1] >= 3.0);
    CHECK(d[1] / d[2] >= 3.0);
    CHECK(d[2] <= 2e-3);
  }
}

TEST_CASE("CLT sweep") {
  const GridFunction f = GridFunction::sample(kGrid, bump);
  const std::vector<std::size_t> ns = {4, 16, 64, 256};
  for (const PartitionScheme& s : {PartitionScheme::uniform(), PartitionScheme::dirichlet(1000.0)}) {
    CAPTURE(s.name());
    const CltReport r = clt_sweep(NamedLaw::uniform_pm_sqrt3, s, 1.0, ns, kGrid, f);
    REQUIRE(r.rows.size() == 4);
    for (std::size_t i = 1; i < 4; ++i) {
      CHECK(r.rows[i].ks_distance <= r.rows[i - 1].ks_distance + 1e-3);
      CHECK(r.rows[i].sup_error < r.rows[i - 1].sup_error);
    }
    CHECK(r.rows[3].ks_distance <= 0.01);
    CHECK_FALSE(r.leakage_warning);
    CHECK(r.final_density.mass() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.law == "uniform_pm_sqrt3");
  }
  CHECK(std::abs(normal_cdf(0.0) - 0.5) < 1e-15);
}
