#include "chernoff/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace chernoff {

namespace {

// The standard distributions are implementation-defined, so the gamma sampler
// is built directly on the engine output to keep draws identical everywhere.
class GammaSampler {
 public:
  explicit GammaSampler(std::uint64_t seed) : engine_(seed) {}

  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = open_uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = 0.0;
      double v = 0.0;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = open_uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  // Uniform on (0, 1) with 53 random bits.
  double open_uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(open_uniform()));
    const double phi = 2.0 * std::numbers::pi * open_uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::string compact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void require_positive_n(std::size_t n, const char* what) {
  if (n == 0) throw std::invalid_argument(std::string(what) + ": n must be at least 1");
}

}  // namespace

Partition Partition::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("partition: empty weight list");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("partition: weights must be finite and strictly positive");
    }
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > kPartitionSumTolerance) {
    throw std::invalid_argument("partition: weights do not sum to 1");
  }
  return Partition(std::move(weights));
}

Partition Partition::normalized(std::vector<double> raw) {
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(sum > 0.0)) throw std::invalid_argument("partition: non-positive total weight");
  for (double& w : raw) w /= sum;
  return from_weights(std::move(raw));
}

Partition Partition::reversed() const {
  return Partition(std::vector<double>(weights_.rbegin(), weights_.rend()));
}

Partition make_uniform(std::size_t n) {
  require_positive_n(n, "make_uniform");
  return Partition::from_weights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Partition make_alternating(std::size_t n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("make_alternating: n must be even and at least 2");
  }
  const double nd = static_cast<double>(n);
  std::vector<double> w(n);
  for (std::size_t i = 1; i <= n; ++i) {
    w[i - 1] = (i % 2 == 0) ? 1.0 / nd + 1.0 / (2.0 * nd) : 1.0 / nd - 1.0 / (2.0 * nd);
  }
  return Partition::from_weights(std::move(w));
}

Partition make_power_law(std::size_t n, double theta) {
  require_positive_n(n, "make_power_law");
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("make_power_law: theta must be a nonnegative finite number");
  }
  std::vector<double> w(n);
  for (std::size_t i = 1; i <= n; ++i) w[i - 1] = std::pow(static_cast<double>(i), theta);
  return Partition::normalized(std::move(w));
}

Partition make_dirichlet(std::size_t n, std::uint64_t seed, double concentration) {
  require_positive_n(n, "make_dirichlet");
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    throw std::invalid_argument("make_dirichlet: concentration must be positive");
  }
  GammaSampler sampler(seed);
  std::vector<double> w(n);
  for (double& x : w) {
    // Underflow for tiny concentrations; resample rather than emit a zero weight.
    do {
      x = sampler.gamma(concentration);
    } while (!(x > 0.0));
  }
  return Partition::normalized(std::move(w));
}

PartitionMetrics metrics(const Partition& p) {
  const double uniform = 1.0 / static_cast<double>(p.size());
  PartitionMetrics m;
  for (double a : p.weights()) {
    m.max_weight = std::max(m.max_weight, a);
    m.l1_deviation += std::abs(uniform - a);
  }
  return m;
}

double scalar_product(const Partition& p, double t) {
  double out = 1.0;
  for (double a : p.weights()) out *= 1.0 + a * t;
  return out;
}

Partition PartitionScheme::generate(std::size_t n) const {
  switch (kind) {
    case SchemeKind::uniform:
      return make_uniform(n);
    case SchemeKind::alternating:
      return n % 2 == 0 ? make_alternating(n) : make_uniform(n);
    case SchemeKind::power_law:
      return make_power_law(n, theta);
    case SchemeKind::dirichlet_random:
      return make_dirichlet(n, seed, concentration);
  }
  throw std::logic_error("unknown partition scheme");
}

std::string PartitionScheme::name() const {
  switch (kind) {
    case SchemeKind::power_law:
      return "power_law(theta=" + compact(theta) + ")";
    case SchemeKind::dirichlet_random:
      return "dirichlet(concentration=" + compact(concentration) +
             ",seed=" + std::to_string(seed) + ")";
    default:
      return std::string(to_string(kind));
  }
}

SchemeKind parse_scheme_kind(std::string_view name) {
  if (name == "uniform") return SchemeKind::uniform;
  if (name == "alternating") return SchemeKind::alternating;
  if (name == "dirichlet" || name == "dirichlet_random") return SchemeKind::dirichlet_random;
  if (name == "power_law" || name == "power-law") return SchemeKind::power_law;
  throw std::invalid_argument("unknown partition scheme: " + std::string(name));
}

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::uniform:
      return "uniform";
    case SchemeKind::alternating:
      return "alternating";
    case SchemeKind::dirichlet_random:
      return "dirichlet";
    case SchemeKind::power_law:
      return "power_law";
  }
  return "unknown";
}

}  // namespace chernoff
