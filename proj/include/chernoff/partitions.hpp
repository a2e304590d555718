#pragma once

// Non-uniform time partitions: one row (a_1, ..., a_n) of a positive array
// summing to one. Step i of a product over [0, t] has length a_i * t.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chernoff {

/// Absolute tolerance on sum(weights) == 1.
inline constexpr double kPartitionSumTolerance = 1e-12;

class Partition {
 public:
  /// Validates positivity and unit sum; throws std::invalid_argument otherwise.
  static Partition from_weights(std::vector<double> weights);

  /// Divides by the sum, then validates.
  static Partition normalized(std::vector<double> raw);

  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  /// Same weights in reverse index order.
  Partition reversed() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  explicit Partition(std::vector<double> weights) : weights_(std::move(weights)) {}

  std::vector<double> weights_;
};

struct PartitionMetrics {
  double max_weight = 0.0;
  double l1_deviation = 0.0;  // sum_i |1/n - a_i|
};

Partition make_uniform(std::size_t n);

/// a_i = 1/n + (-1)^i / (2n), i = 1..n. Requires even n >= 2.
Partition make_alternating(std::size_t n);

/// a_i proportional to i^theta.
Partition make_power_law(std::size_t n, double theta);

/// Symmetric Dirichlet(concentration, ..., concentration) draw.
Partition make_dirichlet(std::size_t n, std::uint64_t seed, double concentration);

PartitionMetrics metrics(const Partition& p);

/// prod_i (1 + a_i t).
double scalar_product(const Partition& p, double t);

// -- Named schemes ---------------------------------------------------------

enum class SchemeKind { uniform, alternating, dirichlet_random, power_law };

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Identifies the generator behind make_dirichlet. Stored next to any output
/// that depends on it.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+box-muller+marsaglia-tsang";

/// A family of partitions indexed by n. For the alternating scheme odd n
/// yields the uniform row, as in the original counterexample array.
struct PartitionScheme {
  SchemeKind kind = SchemeKind::uniform;
  double theta = 1.0;
  std::uint64_t seed = kDefaultSeed;
  double concentration = 1000.0;

  Partition generate(std::size_t n) const;
  std::string name() const;

  static PartitionScheme uniform() { return {}; }
  static PartitionScheme alternating() { return {SchemeKind::alternating}; }
  static PartitionScheme power_law(double theta) { return {SchemeKind::power_law, theta}; }
  static PartitionScheme dirichlet(double concentration, std::uint64_t seed = kDefaultSeed) {
    return {SchemeKind::dirichlet_random, 1.0, seed, concentration};
  }
};

SchemeKind parse_scheme_kind(std::string_view name);
std::string_view to_string(SchemeKind kind);

}  // namespace chernoff
