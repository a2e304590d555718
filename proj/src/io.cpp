#include "chernoff/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace chernoff {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  ComplexMatrix m;
  if (j.is_array()) {
    const std::size_t rows = j.size();
    if (rows == 0 || !j[0].is_array() || j[0].empty()) {
      throw std::invalid_argument("matrix: expected a non-empty array of rows");
    }
    const std::size_t cols = j[0].size();
    m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      if (!j[r].is_array() || j[r].size() != cols) {
        throw std::invalid_argument("matrix: rows have different lengths");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
      }
    }
  } else if (j.is_object()) {
    const auto rows = j.at("rows").get<long>();
    const auto cols = j.at("cols").get<long>();
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix: rows and cols must be positive");
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>()
                                     : std::vector<double>(re.size(), 0.0);
    const auto size = static_cast<std::size_t>(rows * cols);
    if (re.size() != size || im.size() != size) {
      throw std::invalid_argument("matrix: entry count does not match rows x cols");
    }
    m.resize(rows, cols);
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) {
        const auto k = static_cast<std::size_t>(r * cols + c);
        m(r, c) = Complex(re[k], im[k]);
      }
    }
  } else {
    throw std::invalid_argument("matrix: expected an object or a nested array");
  }
  if (!m.allFinite()) throw std::invalid_argument("matrix: non-finite entry");
  return m;
}

ComplexMatrix parse_matrix(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.substr(i, 3) == "\xE2\x88\x92") {
      cleaned += '-';
      i += 2;
    } else {
      cleaned += text[i];
    }
  }
  try {
    return matrix_from_json(Json::parse(cleaned));
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("matrix: ") + e.what());
  }
}

Json partition_to_json(const Partition& p) {
  return Json{{"n", p.size()}, {"weights", std::vector<double>(p.weights().begin(), p.weights().end())}};
}

Partition partition_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<long>();
    auto weights = j.at("weights").get<std::vector<double>>();
    if (n <= 0 || static_cast<std::size_t>(n) != weights.size()) {
      throw std::invalid_argument("partition: n does not match the number of weights");
    }
    return Partition::from_weights(std::move(weights));
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("partition: ") + e.what());
  }
}

void CsvTable::write(std::ostream& out) const {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

CsvTable report_table(const ConvergenceReport& report) {
  CsvTable t{{"n", "error", "l1_deviation", "max_weight"}, {}};
  for (const ConvergenceRow& r : report.rows) {
    t.rows.push_back({static_cast<double>(r.n), r.error, r.l1_deviation, r.max_weight});
  }
  return t;
}

CsvTable quantum_table(const QuantumReport& report) {
  CsvTable t = report_table(report.convergence);
  t.header.push_back("trace_error");
  for (std::size_t i = 0; i < t.rows.size(); ++i) t.rows[i].push_back(report.trace_errors[i]);
  return t;
}

CsvTable clt_table(const CltReport& report) {
  CsvTable t{{"n", "ks_distance", "sup_error", "l1_deviation", "max_weight"}, {}};
  for (const CltRow& r : report.rows) {
    t.rows.push_back(
        {static_cast<double>(r.n), r.ks_distance, r.sup_error, r.l1_deviation, r.max_weight});
  }
  return t;
}

CsvTable density_table(const DensityGrid& p) {
  CsvTable t{{"x", "p"}, {}};
  for (std::size_t k = 0; k < p.values.size(); ++k) t.rows.push_back({p.grid.x(k), p.values[k]});
  return t;
}

Json report_sidecar(const ConvergenceReport& report) {
  Json order = std::isfinite(report.fitted_order) ? Json(report.fitted_order) : Json(nullptr);
  return Json{{"t", report.t},
              {"fitted_order", order},
              {"family", report.family},
              {"scheme", report.scheme}};
}

}  // namespace chernoff
