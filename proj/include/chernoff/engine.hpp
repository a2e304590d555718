#pragma once

// Chernoff families V(t), ordered products over non-uniform partitions, the
// reference semigroup e^{tA}, and the diagnostics built on them.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chernoff/linalg.hpp"
#include "chernoff/partitions.hpp"

namespace chernoff {

/// Norm used on state vectors. `trace` reads a length-d^2 column as a d x d
/// matrix (column stacking) and takes its trace norm.
enum class StateNorm { euclidean, trace };

double state_norm(StateNorm norm, const ComplexVector& x);

/// A map t -> V(t) into dim x dim matrices, with V(0) = I.
///
/// `evaluate` must be a pure function of t; products and sweeps call it from
/// several threads at once. `act`, when set, computes V(t) x without forming
/// the matrix and must agree with evaluate(t) * x.
struct ChernoffFamily {
  Eigen::Index dim = 0;
  std::function<ComplexMatrix(double)> evaluate;
  bool declared_contraction = false;
  bool declared_commuting = false;
  std::string label;
  StateNorm norm = StateNorm::euclidean;
  std::function<ComplexVector(double, const ComplexVector&)> act;

  ComplexMatrix operator()(double t) const { return evaluate(t); }
  ComplexVector apply(double t, const ComplexVector& x) const {
    return act ? act(t, x) : ComplexVector(evaluate(t) * x);
  }
};

/// Generator A of the reference semigroup T(t) = e^{tA}.
class GeneratorSpec {
 public:
  explicit GeneratorSpec(ComplexMatrix a);

  const ComplexMatrix& generator() const { return a_; }
  Eigen::Index dim() const { return a_.rows(); }
  ComplexMatrix semigroup(double t) const { return mat_exp(a_, t); }

 private:
  ComplexMatrix a_;
};

// -- Family constructors ---------------------------------------------------

/// V(t) = e^{tA}. Declared a contraction iff A is dissipative.
ChernoffFamily make_exact_family(const GeneratorSpec& gen);

/// V(t) = I + tA. Not a contraction in general.
ChernoffFamily make_affine_family(const ComplexMatrix& a);

/// V(t) = e^{t A1} e^{t A2}. Both generators must be dissipative.
ChernoffFamily make_trotter_family(const ComplexMatrix& a1, const ComplexMatrix& a2);

/// V(t) = (I - tA)^{-1} for dissipative A.
ChernoffFamily make_implicit_euler_family(const ComplexMatrix& a);

// -- Products ----------------------------------------------------------------

/// V(a_1 t) V(a_2 t) ... V(a_n t) x. The factor with the highest index acts on
/// x first.
ComplexVector apply_product(const ChernoffFamily& fam, const Partition& p, double t,
                            const ComplexVector& x);

/// V(t/n)^n x.
ComplexVector uniform_product(const ChernoffFamily& fam, std::size_t n, double t,
                              const ComplexVector& x);

/// A_s = (V(s) - I) / s.
ComplexMatrix discrete_generator(const ChernoffFamily& fam, double s);

// -- Diagnostics -------------------------------------------------------------

/// The three quantities of the uniform vs non-uniform comparison bound:
///   lhs = ||V(t/n)^n x - prod V(a_i t) x||
///   mid = sum_i ||(V(t/n) - V(a_i t)) x||
///   rhs = t ||A_{t/n} x|| sum_i |1/n - a_i|
///         + t sum_i a_i (||A_{t/n} x - A x|| + ||A_{a_i t} x - A x||)
/// For commuting contractions lhs <= mid <= rhs.
struct ProductBounds {
  double lhs = 0.0;
  double mid = 0.0;
  double rhs = 0.0;

  bool ordered(double slack = 1e-9) const { return lhs <= mid + slack && mid <= rhs + slack; }
};

/// Requires declared_commuting and declared_contraction.
ProductBounds lemma4_chain(const ChernoffFamily& fam, const GeneratorSpec& gen,
                           const Partition& p, double t, const ComplexVector& x);

/// ||((V(h) - I)/h) e^{aA} x - A e^{aA} x||.
double smolyanov_residual(const ChernoffFamily& fam, const GeneratorSpec& gen, double a, double h,
                          const ComplexVector& x);

/// ||V(t) V(t') - V(t') V(t)|| in operator norm.
double commutativity_defect(const ChernoffFamily& fam, double t, double t_prime);

struct FamilyDiagnostics {
  double identity_defect = 0.0;    // ||V(0) - I||
  double contraction_excess = 0.0; // max(0, max ||V(t)|| - 1) over samples
  double commutator_max = 0.0;     // max defect over sampled pairs
};

/// Samples the declared properties at the given times. Contraction is measured
/// in the family's own state norm.
FamilyDiagnostics diagnose(const ChernoffFamily& fam, std::span<const double> times);

// -- Convergence sweeps ------------------------------------------------------

struct ConvergenceRow {
  std::size_t n = 0;
  double error = 0.0;
  double l1_deviation = 0.0;
  double max_weight = 0.0;
};

struct ConvergenceReport {
  double t = 0.0;
  std::vector<ConvergenceRow> rows;
  double fitted_order = 0.0;
  std::string family;
  std::string scheme;
};

/// Least-squares slope of -log(error) against log(n) over the final half of
/// the rows (at least two). NaN when fewer than two positive errors remain.
double fitted_order(std::span<const ConvergenceRow> rows);

/// apply_product for scheme.generate(n), each n in its own task. Results are
/// in the order of `ns`.
std::vector<ComplexVector> sweep_products(const ChernoffFamily& fam, const PartitionScheme& scheme,
                                          double t, std::span<const std::size_t> ns,
                                          const ComplexVector& x);

/// Per n: error = ||prod V(a_i t) x - e^{tA} x|| in the family's state norm.
/// Rows for different n are computed concurrently.
ConvergenceReport convergence_sweep(const ChernoffFamily& fam, const GeneratorSpec& gen,
                                    const PartitionScheme& scheme, double t,
                                    std::span<const std::size_t> ns, const ComplexVector& x);

}  // namespace chernoff
