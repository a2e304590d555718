#pragma once

// Serialization: JSON for matrices, partitions and report sidecars; CSV for
// tables. Floating-point values are written with 17 significant digits.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chernoff/clt.hpp"
#include "chernoff/engine.hpp"
#include "chernoff/linalg.hpp"
#include "chernoff/partitions.hpp"
#include "chernoff/quantum.hpp"

namespace chernoff {

using Json = nlohmann::json;

std::string format_double(double x);

// {"rows": r, "cols": c, "re": [...], "im": [...]}, row-major.
Json matrix_to_json(const ComplexMatrix& m);

/// Accepts the object form above or a nested real array such as [[-1, 0], [0, -2]].
ComplexMatrix matrix_from_json(const Json& j);

/// Parses JSON text for matrix_from_json. U+2212 minus signs are read as '-'.
ComplexMatrix parse_matrix(std::string_view text);

// {"n": int, "weights": [...]}; the reader validates the partition invariants.
Json partition_to_json(const Partition& p);
Partition partition_from_json(const Json& j);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& out) const;
};

/// Columns n,error,l1_deviation,max_weight.
CsvTable report_table(const ConvergenceReport& report);

/// report_table plus a trace_error column.
CsvTable quantum_table(const QuantumReport& report);

/// Columns n,ks_distance,sup_error,l1_deviation,max_weight.
CsvTable clt_table(const CltReport& report);

/// Two columns x,p(x).
CsvTable density_table(const DensityGrid& p);

/// {"t":..., "fitted_order":..., "family":..., "scheme":...}.
Json report_sidecar(const ConvergenceReport& report);

}  // namespace chernoff
