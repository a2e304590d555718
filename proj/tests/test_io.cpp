#include <cmath>
#include <sstream>
#include <stdexcept>

#include <doctest.h>

#include "chernoff/io.hpp"

using namespace chernoff;

TEST_CASE("matrix JSON") {
  ComplexMatrix m(2, 3);
  m << Complex(1, -1), 2.0, 3.5, 0.0, Complex(0, 2), -0.25;
  const Json j = matrix_to_json(m);
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 3);
  CHECK(j["re"][1] == 2.0);
  CHECK(j["im"][4] == 2.0);
  CHECK(matrix_from_json(j) == m);
  CHECK(matrix_from_json(Json::parse(j.dump())) == m);

  const ComplexMatrix nested = parse_matrix("[[-1, 0], [0, -2]]");
  CHECK(nested(0, 0) == Complex(-1.0));
  CHECK(nested(1, 1) == Complex(-2.0));
  CHECK(parse_matrix("[[\xE2\x88\x92" "1]]")(0, 0) == Complex(-1.0));

  CHECK_THROWS_AS(parse_matrix("[[1, 2], [3]]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("[[1, 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("{\"rows\": 2, \"cols\": 2, \"re\": [1, 2, 3]}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("[]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_matrix("7"), std::invalid_argument);
}

TEST_CASE("partition JSON") {
  const Partition p = make_alternating(4);
  const Json j = partition_to_json(p);
  CHECK(j["n"] == 4);
  CHECK(partition_from_json(j) == p);
  CHECK_THROWS_AS(partition_from_json(Json::parse(R"({"n": 2, "weights": [0.5, 0.6]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(partition_from_json(Json::parse(R"({"n": 3, "weights": [0.5, 0.5]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(partition_from_json(Json::parse(R"({"weights": [1.0]})")), std::invalid_argument);
}

TEST_CASE("CSV output") {
  ConvergenceReport r{1.0, {{10, 0.1, 0.0, 0.1}, {100, 1.0 / 3.0, 0.5, 0.015}}, 1.0, "fam", "uniform"};
  std::ostringstream out;
  report_table(r).write(out);
  CHECK(out.str() ==
        "n,error,l1_deviation,max_weight\n"
        "10,0.10000000000000001,0,0.10000000000000001\n"
        "100,0.33333333333333331,0.5,0.014999999999999999\n");

  const Json side = report_sidecar(r);
  CHECK(side["fitted_order"] == 1.0);
  CHECK(side["family"] == "fam");
  r.fitted_order = std::nan("");
  CHECK(report_sidecar(r)["fitted_order"].is_null());

  QuantumReport q{r, {1e-16, 0.0}};
  CHECK(quantum_table(q).header.back() == "trace_error");
  CHECK(quantum_table(q).rows[0].size() == 5);

  CltReport c;
  c.rows.push_back({4, 0.007, 0.001, 0.0, 0.25, 0.0});
  const CsvTable ct = clt_table(c);
  CHECK(ct.header == std::vector<std::string>{"n", "ks_distance", "sup_error", "l1_deviation", "max_weight"});

  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(-2.5) == "-2.5");
}
