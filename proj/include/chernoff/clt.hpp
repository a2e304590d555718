#pragma once

// Weighted central limit theorem on a uniform real grid.
//
// Densities are stored as cell averages: values[k] * dx is the probability of
// the cell centred on x0 + k dx. Moments treat each cell as a point mass at
// its centre. Test functions f live on the same kind of grid and are extended
// by their edge values outside it.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chernoff/partitions.hpp"

namespace chernoff {

struct Grid {
  double x0 = -12.0;
  double dx = 0.005;
  std::size_t count = 4801;

  double x(std::size_t k) const { return x0 + dx * static_cast<double>(k); }
  double x_max() const { return x(count - 1); }

  /// [-half_width, half_width] with spacing dx; half_width / dx must be an integer.
  static Grid symmetric(double half_width = 12.0, double dx = 0.005);

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct DensityGrid {
  Grid grid;
  std::vector<double> values;
  double leaked_mass = 0.0;  // mass lost off the grid before renormalization

  double mass() const;
  double mean() const;
  double variance() const;
};

/// Sampled function on a grid (sup-norm space of test functions).
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  static GridFunction sample(const Grid& grid, const std::function<double(double)>& f);
};

/// Mean-zero, unit-variance laws with continuous densities.
enum class NamedLaw {
  uniform_pm_sqrt3,  // uniform on [-sqrt 3, sqrt 3]
  triangular,        // symmetric triangular on [-sqrt 6, sqrt 6]
  gaussian,          // standard normal
  beta_symmetric,    // Beta(2, 2) stretched to [-sqrt 5, sqrt 5]
};

NamedLaw parse_law(std::string_view name);
std::string_view to_string(NamedLaw law);

/// Cumulative distribution function of the law.
double law_cdf(NamedLaw law, double x);

/// Leakage above this is flagged in reports.
inline constexpr double kLeakageWarning = 1e-6;

/// Cell averages of the law's density. The grid must cover [-8, 8] with dx <= 0.01.
DensityGrid density_of(NamedLaw law, const Grid& grid);

/// Density of c * xi resampled onto the same grid by linear interpolation of
/// the cumulative distribution.
DensityGrid scale_density(const DensityGrid& p, double c);

/// Density of the sum of independent variables. Both grids must share dx and
/// have aligned nodes; the result lives on p's grid and is renormalized.
DensityGrid convolve(const DensityGrid& p, const DensityGrid& q);

/// Unit point mass at 0 (the law of sqrt(0) * zeta).
DensityGrid point_mass_at_zero(const Grid& grid);

/// Density of sqrt(t) * sum_i sqrt(a_i) xi_i. `laws` holds one law (i.i.d.)
/// or one law per weight.
DensityGrid zeta_density(std::span<const NamedLaw> laws, const Partition& p, double t,
                         const Grid& grid);

/// (V(t) f)(x) = \int f(x - sqrt(t) y) p(y) dy with p the given law density.
GridFunction vxi_apply(const GridFunction& f, const DensityGrid& law_density, double t);

/// Heat semigroup T(t) f: vxi_apply with the standard normal law.
GridFunction heat_reference(const GridFunction& f, double t);

/// V_{xi_1}(a_1 t) ... V_{xi_n}(a_n t) f, last factor applied first.
GridFunction product_apply(const GridFunction& f, std::span<const NamedLaw> laws,
                           const Partition& p, double t);

/// Maximum distance between the cumulative distributions. Grids must match.
double ks_distance(const DensityGrid& p, const DensityGrid& q);

double sup_distance(const GridFunction& f, const GridFunction& g);

struct CltRow {
  std::size_t n = 0;
  double ks_distance = 0.0;
  double sup_error = 0.0;
  double l1_deviation = 0.0;
  double max_weight = 0.0;
  double leaked_mass = 0.0;
};

struct CltReport {
  double t = 1.0;
  std::string law;
  std::string scheme;
  std::vector<CltRow> rows;
  bool leakage_warning = false;
  DensityGrid final_density;  // zeta density for the largest n
};

/// For each n: KS distance of sqrt(t) zeta_n to N(0, t) and sup-norm distance
/// of the operator product applied to `f` from the heat semigroup.
CltReport clt_sweep(NamedLaw law, const PartitionScheme& scheme, double t,
                    std::span<const std::size_t> ns, const Grid& grid, const GridFunction& f);

}  // namespace chernoff
