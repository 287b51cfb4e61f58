// Deterministic numeric formatting and tabular CSV/JSON emission, including
// the run manifest.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "memtwin/format.hpp"
#include "memtwin/table.hpp"

using namespace memtwin;

namespace {

bool bit_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

ExperimentTable sample_table() {
  ExperimentTable t;
  t.columns = {"phi", "n_A", "flag", "label"};
  t.rows.push_back({Cell{0.0}, Cell{0.11375}, Cell{std::string("true")},
                    Cell{std::string("first")}});
  t.rows.push_back({Cell{3.141592653589793}, Cell{0.474},
                    Cell{std::string("false")}, Cell{std::string("second")}});
  t.footer = {{"visibility", Cell{0.6130847263159309}},
              {"note", Cell{std::string("fringe")}}};
  return t;
}

}  // namespace

TEST_CASE("fmt_double: shortest round-trip strings") {
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(-2.0) == "-2");
  CHECK(fmt_double(2.2e8) == "2.2e+08");
  CHECK(fmt_double(1.4e-7) == "1.4e-07");
  CHECK(fmt_double(1.1e-5) == "1.1e-05");
  CHECK(fmt_double(0.1) == "0.1");
  CHECK(fmt_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(fmt_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(fmt_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(fmt_double(std::nan("")) == "nan");

  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 5.859024357913523e-3,
                   -1.7976931348623157e308, 4.9e-324}) {
    CHECK(bit_equal(parse_double(fmt_double(v)), v));
  }
}

TEST_CASE("parse_double rejects malformed input") {
  CHECK(parse_double("42") == doctest::Approx(42.0));
  CHECK(parse_double("-1e-3") == doctest::Approx(-1e-3));
  CHECK(std::isinf(parse_double("inf")));
  CHECK(parse_double("-inf") < 0.0);
  CHECK(std::isnan(parse_double("nan")));
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("  1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("one"), std::invalid_argument);
}

TEST_CASE("csv emission and round trip") {
  const ExperimentTable t = sample_table();
  const std::string csv = to_csv(t);
  CHECK(csv.rfind("phi,n_A,flag,label\n", 0) == 0);
  CHECK(csv.find("0,0.11375,true,first\n") != std::string::npos);
  CHECK(csv.find("# visibility = 0.6130847263159309\n") != std::string::npos);
  CHECK(csv.find("# note = fringe\n") != std::string::npos);

  // Emission is deterministic.
  CHECK(to_csv(t) == csv);

  const ExperimentTable back = from_csv(csv);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == t.rows.size());
  CHECK(bit_equal(std::get<double>(back.rows[1][0]), 3.141592653589793));
  CHECK(std::get<std::string>(back.rows[0][2]) == "true");
  CHECK(std::get<std::string>(back.rows[1][3]) == "second");
  REQUIRE(back.footer.size() == 2);
  CHECK(back.footer[0].first == "visibility");
  CHECK(bit_equal(std::get<double>(back.footer[0].second),
                  0.6130847263159309));
  // Fixed point: to_csv(from_csv(s)) == s.
  CHECK(to_csv(back) == csv);
}

TEST_CASE("csv parsing errors") {
  CHECK_THROWS_AS(from_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(from_csv("a,b\n1\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_csv("a,b\n1,2\n# broken footer\n"),
                  std::invalid_argument);
  ExperimentTable ragged;
  ragged.columns = {"a", "b"};
  ragged.rows.push_back({Cell{1.0}});
  CHECK_THROWS_AS(to_csv(ragged), std::invalid_argument);
}

TEST_CASE("json emission") {
  ExperimentTable t = sample_table();
  t.rows.push_back({Cell{std::numeric_limits<double>::infinity()}, Cell{0.0},
                    Cell{std::string("true")}, Cell{std::string("edge")}});
  const std::string js = to_json(t);
  const auto parsed = nlohmann::json::parse(js);
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 4);  // 3 rows + footer object
  CHECK(parsed[0]["phi"].get<double>() == doctest::Approx(0.0));
  CHECK(parsed[0]["flag"].is_boolean());
  CHECK(parsed[0]["flag"].get<bool>() == true);
  CHECK(parsed[1]["flag"].get<bool>() == false);
  CHECK(parsed[0]["label"].get<std::string>() == "first");
  CHECK(parsed[2]["phi"].is_string());  // non-finite -> "inf"
  CHECK(parsed[2]["phi"].get<std::string>() == "inf");
  CHECK(parsed[3]["visibility"].get<double>() ==
        doctest::Approx(0.6130847263159309).epsilon(1e-15));
  CHECK(parsed[3]["note"].get<std::string>() == "fringe");
  CHECK(to_json(t) == js);
}

TEST_CASE("run manifest emission") {
  RunManifest m;
  m.subcommand = "mzi";
  m.config = {{"memory", "Lambda895"}, {"truncation", "10"}};
  m.tool_version = "1.0.0";
  m.output_paths = {"out.csv", "out.csv.manifest.json"};
  const std::string js = to_json(m);
  CHECK(js.back() == '\n');
  const auto parsed = nlohmann::json::parse(js);
  CHECK(parsed["subcommand"].get<std::string>() == "mzi");
  CHECK(parsed["tool_version"].get<std::string>() == "1.0.0");
  CHECK(parsed["config"]["memory"].get<std::string>() == "Lambda895");
  CHECK(parsed["config"]["truncation"].get<std::string>() == "10");
  REQUIRE(parsed["output_paths"].is_array());
  CHECK(parsed["output_paths"][0].get<std::string>() == "out.csv");
  CHECK(to_json(m) == js);
}
