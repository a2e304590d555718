#include "chernoff/quantum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chernoff {

namespace {

void require_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + ": time must be finite and nonnegative");
  }
}

void require_dim(const MeasurementChannel& ch, const ComplexMatrix& x, const char* what) {
  if (x.rows() != ch.dim() || x.cols() != ch.dim()) {
    throw std::invalid_argument(std::string(what) + ": operand size does not match channel");
  }
}

// Legendre nodes on [-1, 1] by Newton iteration from the Chebyshev guesses.
QuadratureNodes gauss_legendre(std::size_t count) {
  QuadratureNodes q{std::vector<double>(count), std::vector<double>(count)};
  const std::size_t half = (count + 1) / 2;
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t j = 1; j <= count; ++j) {
        const double p2 = p1;
        p1 = p0;
        const double jd = static_cast<double>(j);
        p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    q.points[i] = -z;
    q.points[count - 1 - i] = z;
    q.weights[i] = w;
    q.weights[count - 1 - i] = w;
  }
  return q;
}

// Multipliers M_jk = sum_m w_m k_m(l_j) k_m(l_k), k_m(l) = (gamma/pi)^{1/4} exp(-gamma/2 (y_m - sqrt(t) l)^2).
Eigen::MatrixXd quadrature_multipliers(const MeasurementChannel& ch, double t,
                                       const QuadratureNodes& q) {
  const Eigen::VectorXd& lambda = ch.eigen().eigenvalues;
  const Eigen::Index d = lambda.size();
  const double amplitude = std::pow(ch.gamma() / std::numbers::pi, 0.25);
  const double root_t = std::sqrt(t);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd k(d);
  for (std::size_t m = 0; m < q.points.size(); ++m) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double u = q.points[m] - root_t * lambda(j);
      k(j) = amplitude * std::exp(-0.5 * ch.gamma() * u * u);
    }
    out.noalias() += q.weights[m] * k * k.transpose();
  }
  return out;
}

// Superoperator of X -> U (M o (U^* X U)) U^*.
ComplexMatrix eigenbasis_superoperator(const ComplexMatrix& u, const Eigen::MatrixXd& mult) {
  const ComplexMatrix to_eig = superoperator(u.adjoint(), u);
  const ComplexMatrix from_eig = superoperator(u, u.adjoint());
  const Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(mult.data(), mult.size());
  return from_eig * diag.cast<Complex>().asDiagonal() * to_eig;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  detail::require_square(rho_, "DensityMatrix");
  if ((rho_ - rho_.adjoint()).norm() > 1e-10) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(rho_.trace() - Complex(1.0)) > 1e-10) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
  if (herm_eig(rho_).eigenvalues(0) < -1e-10) {
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  }
}

DensityMatrix random_density_matrix(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = Complex(gauss(rng), gauss(rng));
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho);
}

MeasurementChannel::MeasurementChannel(ComplexMatrix observable, double gamma)
    : observable_(std::move(observable)), gamma_(gamma) {
  detail::require_square(observable_, "MeasurementChannel");
  if (observable_.rows() > kMaxHilbertDim) {
    throw std::invalid_argument("MeasurementChannel: Hilbert dimension above 16");
  }
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
    throw std::invalid_argument("MeasurementChannel: gamma must be positive");
  }
  eig_ = herm_eig(observable_);
}

Eigen::MatrixXd MeasurementChannel::damping(double t) const {
  const Eigen::VectorXd& lambda = eig_.eigenvalues;
  const Eigen::Index d = lambda.size();
  Eigen::MatrixXd out(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double gap = lambda(j) - lambda(k);
      out(j, k) = std::exp(-0.25 * gamma_ * t * gap * gap);
    }
  }
  return out;
}

ComplexMatrix channel_apply_closed(const MeasurementChannel& ch, double t, const ComplexMatrix& x) {
  require_time(t, "channel_apply_closed");
  require_dim(ch, x, "channel_apply_closed");
  const ComplexMatrix& u = ch.eigen().eigenvectors;
  const ComplexMatrix in_eig = u.adjoint() * x * u;
  const ComplexMatrix damped = in_eig.cwiseProduct(ch.damping(t).cast<Complex>());
  return u * damped * u.adjoint();
}

QuadratureNodes quadrature_nodes(QuadratureRule rule, std::size_t count, double half_width) {
  if (count < 3) throw std::invalid_argument("quadrature: at least 3 nodes required");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("quadrature: cutoff must be positive");
  }
  QuadratureNodes q;
  if (rule == QuadratureRule::gauss_legendre) {
    q = gauss_legendre(count);
    for (double& y : q.points) y *= half_width;
    for (double& w : q.weights) w *= half_width;
  } else {
    const double h = 2.0 * half_width / static_cast<double>(count - 1);
    q.points.resize(count);
    q.weights.assign(count, h);
    for (std::size_t m = 0; m < count; ++m) q.points[m] = -half_width + h * static_cast<double>(m);
    q.weights.front() = q.weights.back() = 0.5 * h;
  }
  return q;
}

double default_cutoff(const MeasurementChannel& ch, double t) {
  return std::sqrt(t) * op_norm(ch.observable()) + 8.0 / std::sqrt(ch.gamma());
}

ComplexMatrix channel_apply_quadrature(const MeasurementChannel& ch, double t,
                                       const ComplexMatrix& x, std::size_t nodes, double cutoff,
                                       QuadratureRule rule) {
  require_time(t, "channel_apply_quadrature");
  require_dim(ch, x, "channel_apply_quadrature");
  const QuadratureNodes q = quadrature_nodes(rule, nodes, cutoff);
  const Eigen::Index d = ch.dim();
  const ComplexMatrix ident = ComplexMatrix::Identity(d, d);
  const ComplexMatrix shifted = std::sqrt(t) * ch.observable();
  const double amplitude = std::pow(ch.gamma() / std::numbers::pi, 0.25);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (std::size_t m = 0; m < q.points.size(); ++m) {
    const ComplexMatrix offset = q.points[m] * ident - shifted;
    const ComplexMatrix kraus = amplitude * mat_exp(ComplexMatrix(offset * offset), -0.5 * ch.gamma());
    out += q.weights[m] * kraus * x * kraus;
  }
  return out;
}

ComplexMatrix lindblad_generator(const MeasurementChannel& ch) {
  const ComplexMatrix& l = ch.observable();
  const ComplexMatrix l2 = l * l;
  const ComplexMatrix ident = ComplexMatrix::Identity(ch.dim(), ch.dim());
  return -0.25 * ch.gamma() *
         (superoperator(l2, ident) + superoperator(ident, l2) - 2.0 * superoperator(l, l));
}

ComplexMatrix channel_superoperator(const MeasurementChannel& ch, double t) {
  require_time(t, "channel_superoperator");
  return eigenbasis_superoperator(ch.eigen().eigenvectors, ch.damping(t));
}

ChernoffFamily measurement_family(const MeasurementChannel& ch) {
  ChernoffFamily fam{.dim = ch.dim() * ch.dim(),
                     .evaluate = [ch](double t) { return channel_superoperator(ch, t); },
                     .declared_contraction = true,
                     .declared_commuting = true,
                     .label = "measurement-closed",
                     .norm = StateNorm::trace};
  fam.act = [ch](double t, const ComplexVector& x) {
    return ComplexVector(vectorize(channel_apply_closed(ch, t, devectorize(x))));
  };
  return fam;
}

ChernoffFamily quadrature_measurement_family(const MeasurementChannel& ch, std::size_t nodes,
                                             QuadratureRule rule) {
  // Validate eagerly so bad node counts fail at construction.
  quadrature_nodes(rule, nodes, 1.0);
  auto multipliers = [ch, nodes, rule](double t) {
    require_time(t, "quadrature_measurement_family");
    const QuadratureNodes q = quadrature_nodes(rule, nodes, default_cutoff(ch, t));
    const Eigen::MatrixXd mult = quadrature_multipliers(ch, t, q);
    // Kraus completeness: K_m -> K_m S^{-1/2} with S = sum_m w_m K_m^2 (diagonal here).
    const Eigen::VectorXd scale = mult.diagonal().cwiseSqrt().cwiseInverse();
    return Eigen::MatrixXd(scale.asDiagonal() * mult * scale.asDiagonal());
  };
  ChernoffFamily fam{.dim = ch.dim() * ch.dim(),
                     .evaluate =
                         [ch, multipliers](double t) {
                           return eigenbasis_superoperator(ch.eigen().eigenvectors, multipliers(t));
                         },
                     .declared_contraction = true,
                     .declared_commuting = true,
                     .label = "measurement-quadrature",
                     .norm = StateNorm::trace};
  fam.act = [ch, multipliers](double t, const ComplexVector& x) {
    const ComplexMatrix& u = ch.eigen().eigenvectors;
    const ComplexMatrix in_eig = u.adjoint() * devectorize(x) * u;
    const ComplexMatrix out = u * in_eig.cwiseProduct(multipliers(t).cast<Complex>()) * u.adjoint();
    return ComplexVector(vectorize(out));
  };
  return fam;
}

ComplexMatrix choi_matrix(const MeasurementChannel& ch, double t) {
  const Eigen::Index d = ch.dim();
  ComplexMatrix choi = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(j, k) = 1.0;
      choi.block(j * d, k * d, d, d) = channel_apply_closed(ch, t, e);
    }
  }
  return choi;
}

double choi_psd_check(const MeasurementChannel& ch, double t) {
  return herm_eig(choi_matrix(ch, t)).eigenvalues(0);
}

QuantumReport quantum_sweep(const ChernoffFamily& fam, const MeasurementChannel& ch,
                            const PartitionScheme& scheme, double t,
                            std::span<const std::size_t> ns, const DensityMatrix& rho) {
  if (fam.dim != ch.dim() * ch.dim()) {
    throw std::invalid_argument("quantum_sweep: family does not act on this channel's space");
  }
  const GeneratorSpec gen(lindblad_generator(ch));
  const ComplexVector x = vectorize(rho.matrix());
  const std::vector<ComplexVector> products = sweep_products(fam, scheme, t, ns, x);
  const ComplexMatrix target = devectorize(ComplexVector(gen.semigroup(t) * x));
  const Complex trace = rho.matrix().trace();

  QuantumReport report;
  ConvergenceReport& conv = report.convergence;
  conv.t = t;
  conv.family = fam.label;
  conv.scheme = scheme.name();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const ComplexMatrix y = devectorize(products[i]);
    const PartitionMetrics m = metrics(scheme.generate(ns[i]));
    conv.rows.push_back({ns[i], trace_norm(y - target), m.l1_deviation, m.max_weight});
    report.trace_errors.push_back(std::abs(y.trace() - trace));
  }
  conv.fitted_order = fitted_order(conv.rows);
  return report;
}

}  // namespace chernoff
