#pragma once

// Gaussian continuous-measurement channel
//
//   V(t)(X) = sqrt(gamma/pi) \int dy  G_y(t) X G_y(t),
//   G_y(t)  = exp(-gamma/2 (y - sqrt(t) L)^2),
//
// and its generator X -> -gamma/4 (L^2 X + X L^2 - 2 L X L). In the eigenbasis
// of L the channel multiplies entry (j, k) by exp(-gamma t (l_j - l_k)^2 / 4).

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "chernoff/engine.hpp"
#include "chernoff/linalg.hpp"

namespace chernoff {

inline constexpr Eigen::Index kMaxHilbertDim = 16;

/// Hermitian, unit trace, positive semidefinite (all within 1e-10).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho);

  const ComplexMatrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  ComplexMatrix rho_;
};

/// Haar-ish random mixed state: G G^* / tr(G G^*) with Gaussian G.
DensityMatrix random_density_matrix(std::mt19937_64& rng, Eigen::Index dim);

class MeasurementChannel {
 public:
  /// `observable` must be Hermitian, gamma > 0, dimension at most 16.
  MeasurementChannel(ComplexMatrix observable, double gamma);

  const ComplexMatrix& observable() const { return observable_; }
  double gamma() const { return gamma_; }
  const HermEig& eigen() const { return eig_; }
  Eigen::Index dim() const { return observable_.rows(); }

  /// Entrywise damping factors exp(-gamma t (l_j - l_k)^2 / 4) in the eigenbasis.
  Eigen::MatrixXd damping(double t) const;

 private:
  ComplexMatrix observable_;
  double gamma_;
  HermEig eig_;
};

ComplexMatrix channel_apply_closed(const MeasurementChannel& ch, double t, const ComplexMatrix& x);

enum class QuadratureRule { gauss_legendre, trapezoid };

struct QuadratureNodes {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Nodes and weights on [-half_width, half_width].
QuadratureNodes quadrature_nodes(QuadratureRule rule, std::size_t count, double half_width);

/// sqrt(t) ||L|| + 8 / sqrt(gamma).
double default_cutoff(const MeasurementChannel& ch, double t);

/// The Kraus sum sum_m w_m K_m X K_m with K_m = (gamma/pi)^{1/4} G_{y_m}(t),
/// each K_m formed by a matrix exponential. Independent of the eigenbasis.
ComplexMatrix channel_apply_quadrature(const MeasurementChannel& ch, double t,
                                       const ComplexMatrix& x, std::size_t nodes, double cutoff,
                                       QuadratureRule rule = QuadratureRule::gauss_legendre);

/// d^2 x d^2 superoperator of the generator (column stacking).
ComplexMatrix lindblad_generator(const MeasurementChannel& ch);

/// d^2 x d^2 superoperator of the closed-form channel V(t).
ComplexMatrix channel_superoperator(const MeasurementChannel& ch, double t);

/// Family t -> channel_superoperator(ch, t); trace-norm contraction, commuting.
ChernoffFamily measurement_family(const MeasurementChannel& ch);

/// Deliberately inexact family: a `nodes`-point Kraus sum on the default
/// cutoff, renormalized so sum_m K_m^2 = I. The result is a commuting channel
/// family with V(0) = I that is not a semigroup.
ChernoffFamily quadrature_measurement_family(const MeasurementChannel& ch, std::size_t nodes = 21,
                                             QuadratureRule rule = QuadratureRule::trapezoid);

/// Choi matrix sum_{jk} |j><k| (x) V(t)(|j><k|).
ComplexMatrix choi_matrix(const MeasurementChannel& ch, double t);

/// Minimum eigenvalue of the Choi matrix.
double choi_psd_check(const MeasurementChannel& ch, double t);

struct QuantumReport {
  ConvergenceReport convergence;
  std::vector<double> trace_errors;  // |tr(product) - tr(rho)| per row
};

/// Products of `fam` against e^{tA} with A = lindblad_generator(ch); errors in
/// trace norm.
QuantumReport quantum_sweep(const ChernoffFamily& fam, const MeasurementChannel& ch,
                            const PartitionScheme& scheme, double t,
                            std::span<const std::size_t> ns, const DensityMatrix& rho);

}  // namespace chernoff
