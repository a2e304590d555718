#include "chernoff/clt.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

namespace chernoff {

namespace {

void require_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + ": time must be finite and nonnegative");
  }
}

bool same_spacing(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

// Offset of q's first node from p's first node, in grid steps.
long node_offset(const Grid& p, const Grid& q) {
  const double steps = (q.x0 - p.x0) / p.dx;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-6) {
    throw std::invalid_argument("grids are not aligned on a common lattice");
  }
  return static_cast<long>(rounded);
}

// Index range [first, last) of nonzero entries.
std::pair<std::size_t, std::size_t> support(const std::vector<double>& v) {
  std::size_t first = 0;
  while (first < v.size() && v[first] == 0.0) ++first;
  std::size_t last = v.size();
  while (last > first && v[last - 1] == 0.0) --last;
  return {first, last};
}

void renormalize(DensityGrid& p) {
  const double m = p.mass();
  if (!(m > 0.0)) throw std::runtime_error("density has no mass left on the grid");
  for (double& v : p.values) v /= m;
}

}  // namespace

Grid Grid::symmetric(double half_width, double dx) {
  if (!(dx > 0.0) || !(half_width > 0.0)) {
    throw std::invalid_argument("grid: spacing and half width must be positive");
  }
  const double steps = half_width / dx;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * steps) {
    throw std::invalid_argument("grid: half width must be a multiple of dx");
  }
  const auto half = static_cast<std::size_t>(rounded);
  return Grid{-dx * static_cast<double>(half), dx, 2 * half + 1};
}

double DensityGrid::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dx;
}

double DensityGrid::mean() const {
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) s += values[k] * grid.x(k);
  return s * grid.dx / mass();
}

double DensityGrid::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double d = grid.x(k) - mu;
    s += values[k] * d * d;
  }
  return s * grid.dx / mass();
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(double)>& f) {
  GridFunction out{grid, std::vector<double>(grid.count)};
  for (std::size_t k = 0; k < grid.count; ++k) out.values[k] = f(grid.x(k));
  return out;
}

NamedLaw parse_law(std::string_view name) {
  if (name == "uniform" || name == "uniform_pm_sqrt3") return NamedLaw::uniform_pm_sqrt3;
  if (name == "triangular") return NamedLaw::triangular;
  if (name == "gaussian" || name == "normal") return NamedLaw::gaussian;
  if (name == "beta" || name == "beta_symmetric") return NamedLaw::beta_symmetric;
  throw std::invalid_argument("unknown law: " + std::string(name));
}

std::string_view to_string(NamedLaw law) {
  switch (law) {
    case NamedLaw::uniform_pm_sqrt3:
      return "uniform_pm_sqrt3";
    case NamedLaw::triangular:
      return "triangular";
    case NamedLaw::gaussian:
      return "gaussian";
    case NamedLaw::beta_symmetric:
      return "beta_symmetric";
  }
  return "unknown";
}

double law_cdf(NamedLaw law, double x) {
  switch (law) {
    case NamedLaw::uniform_pm_sqrt3: {
      const double a = std::numbers::sqrt3;
      return std::clamp((x + a) / (2.0 * a), 0.0, 1.0);
    }
    case NamedLaw::triangular: {
      const double a = std::sqrt(6.0);
      if (x <= -a) return 0.0;
      if (x >= a) return 1.0;
      if (x < 0.0) return (x + a) * (x + a) / (2.0 * a * a);
      return 1.0 - (a - x) * (a - x) / (2.0 * a * a);
    }
    case NamedLaw::gaussian:
      return 0.5 * std::erfc(-x / std::numbers::sqrt2);
    case NamedLaw::beta_symmetric: {
      const double b = std::sqrt(5.0);
      const double u = std::clamp((x + b) / (2.0 * b), 0.0, 1.0);
      return u * u * (3.0 - 2.0 * u);
    }
  }
  throw std::logic_error("unknown law");
}

DensityGrid density_of(NamedLaw law, const Grid& grid) {
  if (grid.count < 2 || grid.x0 > -8.0 || grid.x_max() < 8.0) {
    throw std::invalid_argument("density_of: grid must cover [-8, 8]");
  }
  if (!(grid.dx > 0.0) || grid.dx > 0.01) {
    throw std::invalid_argument("density_of: dx must be in (0, 0.01]");
  }
  DensityGrid p{grid, std::vector<double>(grid.count)};
  const double h = 0.5 * grid.dx;
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double x = grid.x(k);
    p.values[k] = (law_cdf(law, x + h) - law_cdf(law, x - h)) / grid.dx;
  }
  renormalize(p);
  return p;
}

DensityGrid scale_density(const DensityGrid& p, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale_density: c must be positive");
  if (c == 1.0) return p;
  const Grid& g = p.grid;
  const std::size_t n = g.count;

  // Cumulative mass at cell edges: cdf[k] = P(X <= x_k + dx/2), cdf[-1] = 0.
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += p.values[k] * g.dx;
    cdf[k] = acc;
  }
  const double left_edge = g.x0 - 0.5 * g.dx;
  const auto cdf_at = [&](double x) {
    const double s = (x - left_edge) / g.dx;  // edge index, edge j sits at left_edge + j dx
    if (s <= 0.0) return 0.0;
    if (s >= static_cast<double>(n)) return acc;
    const auto j = static_cast<std::size_t>(s);
    const double lo = j == 0 ? 0.0 : cdf[j - 1];
    const double hi = cdf[j];
    return lo + (s - static_cast<double>(j)) * (hi - lo);
  };

  DensityGrid out{g, std::vector<double>(n), p.leaked_mass};
  double below = cdf_at(left_edge / c);
  for (std::size_t k = 0; k < n; ++k) {
    const double above = cdf_at((left_edge + g.dx * static_cast<double>(k + 1)) / c);
    out.values[k] = std::max(0.0, above - below) / g.dx;
    below = above;
  }
  const double kept = out.mass();
  out.leaked_mass += std::max(0.0, acc - kept);
  renormalize(out);
  return out;
}

DensityGrid convolve(const DensityGrid& p, const DensityGrid& q) {
  if (!same_spacing(p.grid.dx, q.grid.dx)) {
    throw std::invalid_argument("convolve: grids have different spacing");
  }
  const double dx = p.grid.dx;
  // Node j of p plus node l of q sits at p.x0 + (j + l + shift) dx.
  const long shift = node_offset(Grid{0.0, dx, 1}, Grid{q.grid.x0, dx, 1});
  const auto [p_first, p_last] = support(p.values);
  const auto [q_first, q_last] = support(q.values);
  const long n = static_cast<long>(p.grid.count);

  DensityGrid out{p.grid, std::vector<double>(p.grid.count, 0.0), p.leaked_mass + q.leaked_mass};
  double total = 0.0;
  for (std::size_t j = p_first; j < p_last; ++j) {
    const double mp = p.values[j] * dx;
    if (mp == 0.0) continue;
    for (std::size_t l = q_first; l < q_last; ++l) {
      const double mass = mp * q.values[l] * dx;
      total += mass;
      const long k = static_cast<long>(j + l) + shift;
      if (k >= 0 && k < n) out.values[static_cast<std::size_t>(k)] += mass / dx;
    }
  }
  out.leaked_mass += std::max(0.0, total - out.mass());
  renormalize(out);
  return out;
}

DensityGrid point_mass_at_zero(const Grid& grid) {
  const long zero = node_offset(grid, Grid{0.0, grid.dx, 1});
  if (zero < 0 || zero >= static_cast<long>(grid.count)) {
    throw std::invalid_argument("point_mass_at_zero: grid does not contain 0");
  }
  DensityGrid out{grid, std::vector<double>(grid.count, 0.0)};
  out.values[static_cast<std::size_t>(zero)] = 1.0 / grid.dx;
  return out;
}

DensityGrid zeta_density(std::span<const NamedLaw> laws, const Partition& p, double t,
                         const Grid& grid) {
  require_time(t, "zeta_density");
  if (laws.size() != 1 && laws.size() != p.size()) {
    throw std::invalid_argument("zeta_density: need one law or one law per weight");
  }
  if (t == 0.0) return point_mass_at_zero(grid);

  std::vector<std::pair<NamedLaw, DensityGrid>> base;
  const auto base_density = [&](NamedLaw law) -> const DensityGrid& {
    for (const auto& [l, d] : base) {
      if (l == law) return d;
    }
    base.emplace_back(law, density_of(law, grid));
    return base.back().second;
  };

  DensityGrid acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const NamedLaw law = laws.size() == 1 ? laws[0] : laws[i];
    DensityGrid term = scale_density(base_density(law), std::sqrt(t * p[i]));
    acc = i == 0 ? std::move(term) : convolve(acc, term);
  }
  return acc;
}

GridFunction vxi_apply(const GridFunction& f, const DensityGrid& law_density, double t) {
  require_time(t, "vxi_apply");
  if (f.grid.count != f.values.size()) throw std::invalid_argument("vxi_apply: malformed function");
  if (t == 0.0) return f;
  if (!same_spacing(f.grid.dx, law_density.grid.dx)) {
    throw std::invalid_argument("vxi_apply: function and density grids differ in spacing");
  }
  const DensityGrid kernel = scale_density(law_density, std::sqrt(t));
  // kernel node l sits at z_l = f.x0 + (l + shift) dx, so f(x_k - z_l) is node k - l - shift + (index of 0).
  const long shift = node_offset(f.grid, kernel.grid);
  const long zero = node_offset(f.grid, Grid{0.0, f.grid.dx, 1});
  const auto [first, last] = support(kernel.values);
  const long n = static_cast<long>(f.grid.count);

  GridFunction out{f.grid, std::vector<double>(f.grid.count, 0.0)};
  for (long k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t l = first; l < last; ++l) {
      const long idx = std::clamp(k - static_cast<long>(l) - shift + zero, 0L, n - 1);
      s += kernel.values[l] * f.values[static_cast<std::size_t>(idx)];
    }
    out.values[static_cast<std::size_t>(k)] = s * kernel.grid.dx;
  }
  return out;
}

GridFunction heat_reference(const GridFunction& f, double t) {
  return vxi_apply(f, density_of(NamedLaw::gaussian, f.grid), t);
}

GridFunction product_apply(const GridFunction& f, std::span<const NamedLaw> laws,
                           const Partition& p, double t) {
  require_time(t, "product_apply");
  if (laws.size() != 1 && laws.size() != p.size()) {
    throw std::invalid_argument("product_apply: need one law or one law per weight");
  }
  std::vector<std::pair<NamedLaw, DensityGrid>> base;
  GridFunction y = f;
  for (std::size_t i = p.size(); i-- > 0;) {
    const NamedLaw law = laws.size() == 1 ? laws[0] : laws[i];
    auto it = std::find_if(base.begin(), base.end(), [law](const auto& e) { return e.first == law; });
    if (it == base.end()) {
      base.emplace_back(law, density_of(law, f.grid));
      it = std::prev(base.end());
    }
    y = vxi_apply(y, it->second, p[i] * t);
  }
  return y;
}

double ks_distance(const DensityGrid& p, const DensityGrid& q) {
  if (!(p.grid == q.grid) || p.values.size() != q.values.size()) {
    throw std::invalid_argument("ks_distance: densities live on different grids");
  }
  double fp = 0.0, fq = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    fp += p.values[k] * p.grid.dx;
    fq += q.values[k] * q.grid.dx;
    worst = std::max(worst, std::abs(fp - fq));
  }
  return worst;
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("sup_distance: different grids");
  double worst = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    worst = std::max(worst, std::abs(f.values[k] - g.values[k]));
  }
  return worst;
}

CltReport clt_sweep(NamedLaw law, const PartitionScheme& scheme, double t,
                    std::span<const std::size_t> ns, const Grid& grid, const GridFunction& f) {
  if (ns.empty()) throw std::invalid_argument("clt_sweep: empty list of n");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] <= ns[i - 1]) throw std::invalid_argument("clt_sweep: n values must be ascending");
  }
  if (!(t > 0.0)) throw std::invalid_argument("clt_sweep: t must be positive");
  if (!(f.grid == grid)) throw std::invalid_argument("clt_sweep: test function grid mismatch");

  const DensityGrid reference = scale_density(density_of(NamedLaw::gaussian, grid), std::sqrt(t));
  const GridFunction heat = heat_reference(f, t);
  const NamedLaw laws[] = {law};

  struct Result {
    CltRow row;
    DensityGrid density;
  };
  std::vector<std::future<Result>> pending;
  for (std::size_t n : ns) {
    pending.push_back(std::async(std::launch::async, [&, n] {
      const Partition p = scheme.generate(n);
      const PartitionMetrics m = metrics(p);
      DensityGrid zeta = zeta_density(laws, p, t, grid);
      const GridFunction prod = product_apply(f, laws, p, t);
      CltRow row{n, ks_distance(zeta, reference), sup_distance(prod, heat), m.l1_deviation,
                 m.max_weight, zeta.leaked_mass};
      return Result{row, std::move(zeta)};
    }));
  }

  CltReport report;
  report.t = t;
  report.law = std::string(to_string(law));
  report.scheme = scheme.name();
  for (auto& fut : pending) {
    Result r = fut.get();
    report.leakage_warning = report.leakage_warning || r.row.leaked_mass > kLeakageWarning;
    report.rows.push_back(r.row);
    report.final_density = std::move(r.density);
  }
  return report;
}

}  // namespace chernoff
