#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "chernoff/clt.hpp"
#include "chernoff/engine.hpp"
#include "chernoff/quantum.hpp"

namespace chernoff::cli {
namespace {

namespace fs = std::filesystem;

/// A numerical invariant failed while running; maps to exit code 1.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

std::string read_payload(const std::string& payload) {
  const auto first = payload.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (payload[first] == '[' || payload[first] == '{')) return payload;
  std::ifstream in(payload);
  if (!in) throw std::invalid_argument("cannot read operator file '" + payload + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ComplexMatrix matrix_or(const std::string& payload, const ComplexMatrix& fallback) {
  return payload.empty() ? fallback : parse_matrix(read_payload(payload));
}

ComplexMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

PartitionScheme make_scheme(const RunConfig& c) {
  PartitionScheme s;
  s.kind = parse_scheme_kind(c.scheme);
  s.theta = c.theta;
  s.seed = c.seed;
  s.concentration = c.concentration;
  return s;
}

std::vector<std::size_t> grid_or(const RunConfig& c, std::vector<std::size_t> fallback) {
  const std::vector<std::size_t>& ns = c.ns.empty() ? fallback : c.ns;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] == 0) throw std::invalid_argument("ns: values must be positive");
    if (i > 0 && ns[i] <= ns[i - 1]) throw std::invalid_argument("ns: values must be strictly ascending");
  }
  return ns;
}

ComplexVector first_basis_vector(Eigen::Index dim) {
  ComplexVector x = ComplexVector::Zero(dim);
  x(0) = 1.0;
  return x;
}

void check_t(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be finite and nonnegative");
}

void check_rows(const ConvergenceReport& r) {
  for (const ConvergenceRow& row : r.rows) {
    require(std::isfinite(row.error) && row.error >= 0.0, "non-finite or negative error");
    require(row.l1_deviation >= 0.0 && row.l1_deviation <= 2.0, "l1 deviation out of range");
    require(row.max_weight > 0.0 && row.max_weight <= 1.0, "max weight out of range");
  }
}

// Where a command's artifacts go: a CSV stream plus an optional sidecar path.
class Sink {
 public:
  Sink(const RunConfig& c, std::ostream& out, const std::string& extension) : out_(out) {
    if (!c.output.empty()) {
      path_ = c.output;
    } else if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      path_ = fs::path(dir) / (c.command + extension);
    }
  }

  bool to_file() const { return !path_.empty(); }

  /// Renders into a buffer first so nothing is written if rendering fails.
  void write(const std::function<void(std::ostream&)>& render, const Json* sidecar) const {
    std::ostringstream body;
    render(body);
    if (!to_file()) {
      out_ << body.str();
      return;
    }
    write_file(path_, body.str());
    if (sidecar != nullptr) {
      fs::path side = path_;
      side.replace_extension(".json");
      write_file(side, sidecar->dump(2) + "\n");
    }
  }

  static void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
  }

 private:
  std::ostream& out_;
  fs::path path_;
};

Json run_metadata(const RunConfig& c) {
  return Json{{"seed", c.seed}, {"rng", std::string(kRngAlgorithm)}};
}

// -- Commands ------------------------------------------------------------------

void cmd_partition(const RunConfig& c, std::ostream& out) {
  if (c.n == 0) throw std::invalid_argument("n must be positive");
  const PartitionScheme scheme = make_scheme(c);
  const Partition p = scheme.generate(c.n);
  const PartitionMetrics m = metrics(p);
  require(std::abs(std::accumulate(p.weights().begin(), p.weights().end(), 0.0) - 1.0) <=
              kPartitionSumTolerance,
          "weights do not sum to one");
  Json j = partition_to_json(p);
  j["scheme"] = scheme.name();
  j["max_weight"] = m.max_weight;
  j["l1_deviation"] = m.l1_deviation;
  Sink(c, out, ".json").write([&](std::ostream& s) { s << j.dump() << '\n'; }, nullptr);
}

void emit_convergence(const RunConfig& c, std::ostream& out, const ConvergenceReport& r, Json extra) {
  check_rows(r);
  Json side = report_sidecar(r);
  side.update(run_metadata(c));
  side.update(extra);
  Sink(c, out, ".csv").write([&](std::ostream& s) { report_table(r).write(s); }, &side);
}

void cmd_converge(const RunConfig& c, std::ostream& out) {
  check_t(c.t);
  const std::vector<std::size_t> ns = grid_or(c, {10, 100, 1000});
  const PartitionScheme scheme = make_scheme(c);
  ChernoffFamily fam;
  ComplexMatrix a;
  if (c.family == "trotter") {
    const ComplexMatrix a1 = matrix_or(c.matrix, real_matrix({{0, 1}, {-1, 0}}));
    const ComplexMatrix a2 = matrix_or(c.matrix2, real_matrix({{-1, 0}, {0, 0}}));
    fam = make_trotter_family(a1, a2);
    a = a1 + a2;
  } else {
    a = matrix_or(c.matrix, real_matrix({{-1}}));
    if (c.family == "implicit-euler") {
      fam = make_implicit_euler_family(a);
    } else if (c.family == "exact") {
      fam = make_exact_family(GeneratorSpec(a));
    } else {
      throw std::invalid_argument("unknown family '" + c.family + "'");
    }
  }
  const ConvergenceReport r =
      convergence_sweep(fam, GeneratorSpec(a), scheme, c.t, ns, first_basis_vector(a.rows()));
  Json extra{{"commuting", fam.declared_commuting}};
  if (!fam.declared_commuting) extra["commutativity_defect"] = commutativity_defect(fam, 0.3, 0.7);
  emit_convergence(c, out, r, extra);
}

void cmd_quantum(const RunConfig& c, std::ostream& out) {
  check_t(c.t);
  const std::vector<std::size_t> ns = grid_or(c, {16, 64, 256, 1024});
  const MeasurementChannel ch(matrix_or(c.observable, real_matrix({{1, 0}, {0, -1}})), c.gamma);
  std::mt19937_64 rng(c.seed);
  const DensityMatrix rho = c.rho.empty() ? random_density_matrix(rng, ch.dim())
                                          : DensityMatrix(parse_matrix(read_payload(c.rho)));
  if (rho.dim() != ch.dim()) throw std::invalid_argument("rho and L have different dimensions");

  ChernoffFamily fam;
  if (c.variant == "closed") {
    fam = measurement_family(ch);
  } else if (c.variant == "quadrature") {
    if (c.nodes < 3) throw std::invalid_argument("nodes must be at least 3");
    fam = quadrature_measurement_family(ch, c.nodes);
  } else {
    throw std::invalid_argument("unknown variant '" + c.variant + "'");
  }

  const double choi_min = choi_psd_check(ch, c.t);
  require(choi_min >= -1e-10, "channel Choi matrix is not positive semidefinite");
  const QuantumReport r = quantum_sweep(fam, ch, make_scheme(c), c.t, ns, rho);
  check_rows(r.convergence);
  for (double e : r.trace_errors) require(e <= 1e-8, "trace not preserved");

  Json side = report_sidecar(r.convergence);
  side.update(run_metadata(c));
  side["gamma"] = c.gamma;
  side["choi_min_eigenvalue"] = choi_min;
  side["rho"] = matrix_to_json(rho.matrix());
  Sink(c, out, ".csv").write([&](std::ostream& s) { quantum_table(r).write(s); }, &side);
}

void cmd_clt(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!(c.t > 0.0)) throw std::invalid_argument("t must be positive");
  const std::vector<std::size_t> ns = grid_or(c, {4, 16, 64, 256});
  const Grid grid = Grid::symmetric(12.0, c.dx);
  const GridFunction f =
      GridFunction::sample(grid, [](double x) { return std::exp(-x * x) * std::cos(x); });
  const CltReport r = clt_sweep(parse_law(c.law), make_scheme(c), c.t, ns, grid, f);

  for (const CltRow& row : r.rows) {
    require(row.ks_distance >= 0.0 && row.ks_distance <= 1.0, "KS distance out of range");
    require(std::isfinite(row.sup_error) && row.sup_error >= 0.0, "non-finite sup error");
  }
  const DensityGrid& z = r.final_density;
  require(std::abs(z.mass() - 1.0) <= 1e-8, "density mass drifted from one");
  require(std::abs(z.variance() - c.t) <= 1e-3, "density variance drifted from t");
  if (r.leakage_warning) err << "warning: more than " << kLeakageWarning << " of the mass left the grid\n";

  Json side{{"t", r.t},
            {"law", r.law},
            {"scheme", r.scheme},
            {"dx", c.dx},
            {"leakage_warning", r.leakage_warning}};
  side.update(run_metadata(c));
  Sink(c, out, ".csv").write([&](std::ostream& s) { clt_table(r).write(s); }, &side);
  if (!c.density_out.empty()) {
    std::ostringstream body;
    density_table(z).write(body);
    Sink::write_file(c.density_out, body.str());
  }
}

void cmd_lemma4(const RunConfig& c, std::ostream& out) {
  check_t(c.t);
  const std::vector<std::size_t> ns = grid_or(c, {4, 16, 64, 256});
  const ComplexMatrix a = matrix_or(c.matrix, real_matrix({{-1}}));
  const GeneratorSpec gen(a);
  const ChernoffFamily fam = make_implicit_euler_family(a);
  const PartitionScheme scheme = make_scheme(c);
  const ComplexVector x = first_basis_vector(a.rows());

  CsvTable table{{"n", "lhs", "mid", "rhs", "l1_deviation"}, {}};
  for (std::size_t n : ns) {
    const Partition p = scheme.generate(n);
    const ProductBounds b = lemma4_chain(fam, gen, p, c.t, x);
    require(b.ordered(), "comparison chain lhs <= mid <= rhs violated at n = " + std::to_string(n));
    table.rows.push_back({static_cast<double>(n), b.lhs, b.mid, b.rhs, metrics(p).l1_deviation});
  }
  Json side{{"t", c.t}, {"family", fam.label}, {"scheme", scheme.name()}};
  side.update(run_metadata(c));
  Sink(c, out, ".csv").write([&](std::ostream& s) { table.write(s); }, &side);
}

// -- Config JSON ---------------------------------------------------------------

std::string payload_from(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

}  // namespace

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  RunConfig c;
  using Setter = std::function<void(const Json&)>;
  const std::map<std::string, Setter> setters = {
      {"command", [&](const Json& v) { c.command = v.get<std::string>(); }},
      {"scheme", [&](const Json& v) { c.scheme = v.get<std::string>(); }},
      {"n", [&](const Json& v) { c.n = v.get<std::size_t>(); }},
      {"theta", [&](const Json& v) { c.theta = v.get<double>(); }},
      {"seed", [&](const Json& v) { c.seed = v.get<std::uint64_t>(); }},
      {"concentration", [&](const Json& v) { c.concentration = v.get<double>(); }},
      {"t", [&](const Json& v) { c.t = v.get<double>(); }},
      {"ns", [&](const Json& v) { c.ns = v.get<std::vector<std::size_t>>(); }},
      {"family", [&](const Json& v) { c.family = v.get<std::string>(); }},
      {"matrix", [&](const Json& v) { c.matrix = payload_from(v); }},
      {"matrix2", [&](const Json& v) { c.matrix2 = payload_from(v); }},
      {"L", [&](const Json& v) { c.observable = payload_from(v); }},
      {"rho", [&](const Json& v) { c.rho = payload_from(v); }},
      {"gamma", [&](const Json& v) { c.gamma = v.get<double>(); }},
      {"nodes", [&](const Json& v) { c.nodes = v.get<std::size_t>(); }},
      {"variant", [&](const Json& v) { c.variant = v.get<std::string>(); }},
      {"law", [&](const Json& v) { c.law = v.get<std::string>(); }},
      {"dx", [&](const Json& v) { c.dx = v.get<double>(); }},
      {"output", [&](const Json& v) { c.output = v.get<std::string>(); }},
      {"density_out", [&](const Json& v) { c.density_out = v.get<std::string>(); }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    try {
      it->second(value);
    } catch (const Json::exception& e) {
      throw std::invalid_argument("config: bad value for '" + key + "': " + e.what());
    }
  }
  return c;
}

Json config_to_json(const RunConfig& c) {
  return Json{{"command", c.command}, {"scheme", c.scheme},   {"n", c.n},
              {"theta", c.theta},     {"seed", c.seed},       {"concentration", c.concentration},
              {"t", c.t},             {"ns", c.ns},           {"family", c.family},
              {"matrix", c.matrix},   {"matrix2", c.matrix2}, {"L", c.observable},
              {"rho", c.rho},         {"gamma", c.gamma},     {"nodes", c.nodes},
              {"variant", c.variant}, {"law", c.law},         {"dx", c.dx},
              {"output", c.output},   {"density_out", c.density_out}};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const std::string& cmd = config.command;
    if (cmd == "partition") {
      cmd_partition(config, out);
    } else if (cmd == "converge") {
      cmd_converge(config, out);
    } else if (cmd == "trotter") {
      RunConfig c = config;
      c.family = "trotter";
      if (c.ns.empty()) c.ns = {16, 64, 256, 1024};
      cmd_converge(c, out);
    } else if (cmd == "quantum") {
      cmd_quantum(config, out);
    } else if (cmd == "clt") {
      cmd_clt(config, out, err);
    } else if (cmd == "lemma4") {
      cmd_lemma4(config, out);
    } else {
      err << "unknown command '" << cmd
          << "'; expected one of partition, converge, trotter, quantum, clt, lemma4\n";
      return kExitUsage;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace chernoff::cli
