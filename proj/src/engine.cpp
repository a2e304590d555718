#include "chernoff/engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>

namespace chernoff {

namespace {

void require_dim(const ChernoffFamily& fam, const ComplexVector& x, const char* what) {
  if (x.size() != fam.dim) {
    throw std::invalid_argument(std::string(what) + ": state dimension does not match family");
  }
}

void require_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + ": time must be finite and nonnegative");
  }
}

void require_same_square(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": generators must be square of equal size");
  }
}

}  // namespace

double state_norm(StateNorm norm, const ComplexVector& x) {
  if (norm == StateNorm::trace) return trace_norm(devectorize(x));
  return x.norm();
}

GeneratorSpec::GeneratorSpec(ComplexMatrix a) : a_(std::move(a)) {
  detail::require_square(a_, "GeneratorSpec");
  if (!a_.allFinite()) throw std::invalid_argument("GeneratorSpec: non-finite entries");
}

ChernoffFamily make_exact_family(const GeneratorSpec& gen) {
  const ComplexMatrix a = gen.generator();
  return ChernoffFamily{.dim = a.rows(),
                        .evaluate = [a](double t) { return ComplexMatrix(mat_exp(a, t)); },
                        .declared_contraction = is_dissipative(a),
                        .declared_commuting = true,
                        .label = "exact-semigroup"};
}

ChernoffFamily make_affine_family(const ComplexMatrix& a) {
  detail::require_square(a, "make_affine_family");
  const ComplexMatrix ident = ComplexMatrix::Identity(a.rows(), a.cols());
  return ChernoffFamily{.dim = a.rows(),
                        .evaluate = [a, ident](double t) { return ComplexMatrix(ident + t * a); },
                        .declared_contraction = false,
                        .declared_commuting = true,
                        .label = "affine"};
}

ChernoffFamily make_trotter_family(const ComplexMatrix& a1, const ComplexMatrix& a2) {
  require_same_square(a1, a2, "make_trotter_family");
  if (!is_dissipative(a1) || !is_dissipative(a2)) {
    throw std::invalid_argument("make_trotter_family: generators must be dissipative");
  }
  const bool commuting = op_norm(commutator(a1, a2)) <= 1e-12;
  return ChernoffFamily{
      .dim = a1.rows(),
      .evaluate = [a1, a2](double t) { return ComplexMatrix(mat_exp(a1, t) * mat_exp(a2, t)); },
      .declared_contraction = true,
      .declared_commuting = commuting,
      .label = "trotter"};
}

ChernoffFamily make_implicit_euler_family(const ComplexMatrix& a) {
  detail::require_square(a, "make_implicit_euler_family");
  if (!is_dissipative(a)) {
    throw std::invalid_argument("make_implicit_euler_family: generator must be dissipative");
  }
  const ComplexMatrix ident = ComplexMatrix::Identity(a.rows(), a.cols());
  auto eval = [a, ident](double t) {
    const Eigen::FullPivLU<ComplexMatrix> lu(ident - t * a);
    if (!lu.isInvertible()) throw std::runtime_error("implicit Euler: I - tA is singular");
    return ComplexMatrix(lu.inverse());
  };
  return ChernoffFamily{.dim = a.rows(),
                        .evaluate = eval,
                        .declared_contraction = true,
                        .declared_commuting = true,
                        .label = "implicit-euler"};
}

ComplexVector apply_product(const ChernoffFamily& fam, const Partition& p, double t,
                            const ComplexVector& x) {
  require_dim(fam, x, "apply_product");
  require_time(t, "apply_product");
  ComplexVector y = x;
  const auto w = p.weights();
  for (std::size_t i = w.size(); i-- > 0;) y = fam.apply(w[i] * t, y);
  return y;
}

ComplexVector uniform_product(const ChernoffFamily& fam, std::size_t n, double t,
                              const ComplexVector& x) {
  return apply_product(fam, make_uniform(n), t, x);
}

ComplexMatrix discrete_generator(const ChernoffFamily& fam, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("discrete_generator: s must be positive");
  return (fam(s) - ComplexMatrix::Identity(fam.dim, fam.dim)) / s;
}

ProductBounds lemma4_chain(const ChernoffFamily& fam, const GeneratorSpec& gen,
                           const Partition& p, double t, const ComplexVector& x) {
  if (!fam.declared_commuting || !fam.declared_contraction) {
    throw std::invalid_argument("lemma4_chain: family must be a commuting contraction");
  }
  if (gen.dim() != fam.dim) throw std::invalid_argument("lemma4_chain: generator size mismatch");
  require_dim(fam, x, "lemma4_chain");
  require_time(t, "lemma4_chain");
  if (t == 0.0) return {};

  const auto norm = [&fam](const ComplexVector& v) { return state_norm(fam.norm, v); };
  const std::size_t n = p.size();
  const double step = t / static_cast<double>(n);
  ComplexVector uniform = x;
  for (std::size_t i = 0; i < n; ++i) uniform = fam.apply(step, uniform);

  const ComplexVector ax = gen.generator() * x;
  const ComplexVector v_uniform_x = fam.apply(step, x);
  const ComplexVector a_uniform_x = (v_uniform_x - x) / step;
  const double uniform_gap = norm(a_uniform_x - ax);

  ProductBounds out;
  double weighted = 0.0;
  for (double a : p.weights()) {
    const ComplexVector vx = fam.apply(a * t, x);
    out.mid += norm(v_uniform_x - vx);
    const ComplexVector a_step_x = (vx - x) / (a * t);
    weighted += a * (uniform_gap + norm(a_step_x - ax));
  }
  out.lhs = norm(uniform - apply_product(fam, p, t, x));
  out.rhs = t * norm(a_uniform_x) * metrics(p).l1_deviation + t * weighted;
  return out;
}

double smolyanov_residual(const ChernoffFamily& fam, const GeneratorSpec& gen, double a, double h,
                          const ComplexVector& x) {
  if (!(a > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("smolyanov_residual: a and h must be positive");
  }
  if (gen.dim() != fam.dim) throw std::invalid_argument("smolyanov_residual: size mismatch");
  require_dim(fam, x, "smolyanov_residual");
  const ComplexVector evolved = gen.semigroup(a) * x;
  const ComplexVector diff = (fam.apply(h, evolved) - evolved) / h - gen.generator() * evolved;
  return state_norm(fam.norm, diff);
}

double commutativity_defect(const ChernoffFamily& fam, double t, double t_prime) {
  require_time(t, "commutativity_defect");
  require_time(t_prime, "commutativity_defect");
  const ComplexMatrix v = fam(t);
  const ComplexMatrix w = fam(t_prime);
  return op_norm(v * w - w * v);
}

FamilyDiagnostics diagnose(const ChernoffFamily& fam, std::span<const double> times) {
  FamilyDiagnostics d;
  d.identity_defect = op_norm(fam(0.0) - ComplexMatrix::Identity(fam.dim, fam.dim));

  std::vector<ComplexVector> probes;
  if (fam.norm == StateNorm::trace) {
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(fam.dim))));
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 4; ++k) {
      ComplexMatrix m(dim, dim);
      for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = Complex(gauss(rng), gauss(rng));
      probes.push_back(vectorize(m));
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
        m(j, k) = 1.0;
        probes.push_back(vectorize(m));
      }
    }
  }

  std::vector<ComplexMatrix> values;
  values.reserve(times.size());
  for (double t : times) values.push_back(fam(t));

  for (const ComplexMatrix& v : values) {
    double gain = 0.0;
    if (fam.norm == StateNorm::euclidean) {
      gain = op_norm(v);
    } else {
      for (const ComplexVector& x : probes) {
        gain = std::max(gain, state_norm(fam.norm, v * x) / state_norm(fam.norm, x));
      }
    }
    d.contraction_excess = std::max(d.contraction_excess, gain - 1.0);
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      d.commutator_max =
          std::max(d.commutator_max, op_norm(values[i] * values[j] - values[j] * values[i]));
    }
  }
  return d;
}

double fitted_order(std::span<const ConvergenceRow> rows) {
  const std::size_t k = rows.size();
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t start = std::min(k / 2, k - 2);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = start; i < k; ++i) {
    if (rows[i].error > 0.0 && rows[i].n > 0) {
      xs.push_back(std::log(static_cast<double>(rows[i].n)));
      ys.push_back(std::log(rows[i].error));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return -sxy / sxx;
}

static void require_ascending(std::span<const std::size_t> ns) {
  if (ns.empty()) throw std::invalid_argument("convergence_sweep: empty list of n");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] == 0 || (i > 0 && ns[i] <= ns[i - 1])) {
      throw std::invalid_argument("convergence_sweep: n values must be positive and ascending");
    }
  }
}

std::vector<ComplexVector> sweep_products(const ChernoffFamily& fam, const PartitionScheme& scheme,
                                          double t, std::span<const std::size_t> ns,
                                          const ComplexVector& x) {
  require_ascending(ns);
  require_dim(fam, x, "sweep_products");
  require_time(t, "sweep_products");
  std::vector<std::future<ComplexVector>> pending;
  pending.reserve(ns.size());
  for (std::size_t n : ns) {
    pending.push_back(std::async(std::launch::async, [&fam, &scheme, &x, t, n] {
      return apply_product(fam, scheme.generate(n), t, x);
    }));
  }
  std::vector<ComplexVector> out;
  out.reserve(ns.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

ConvergenceReport convergence_sweep(const ChernoffFamily& fam, const GeneratorSpec& gen,
                                    const PartitionScheme& scheme, double t,
                                    std::span<const std::size_t> ns, const ComplexVector& x) {
  require_ascending(ns);
  if (gen.dim() != fam.dim) throw std::invalid_argument("convergence_sweep: size mismatch");
  const std::vector<ComplexVector> products = sweep_products(fam, scheme, t, ns, x);
  const ComplexVector target = gen.semigroup(t) * x;

  ConvergenceReport report;
  report.t = t;
  report.family = fam.label;
  report.scheme = scheme.name();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const PartitionMetrics m = metrics(scheme.generate(ns[i]));
    report.rows.push_back(
        {ns[i], state_norm(fam.norm, products[i] - target), m.l1_deviation, m.max_weight});
  }
  report.fitted_order = fitted_order(report.rows);
  return report;
}

}  // namespace chernoff
