#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "specpol/config.hpp"
#include "specpol/output.hpp"

using namespace specpol;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kFull = R"({
  "operator": {
    "label": "t2",
    "symbol": {"E": [["-15/16 pi", "pi"]], "inside": 1, "outside": -1},
    "rank_one": {"a": 1, "psi": "constant"},
    "cutoff_scale": 2
  },
  "n_list": [85, 120],
  "lambda": [-0.5, 1.5],
  "epsilon": 0.2,
  "gap_delta": 0.1,
  "match_tol": 0.001,
  "max_half_width": 0.02,
  "precision": "double",
  "descent": {"step0": 0.2, "shrink": 0.25, "tol": 1e-9, "max_iter": 50},
  "grid": {"re": [-2, 2], "im": [0, 1], "nx": 5, "ny": 7},
  "output": {"format": "json", "precision": 10, "rounding": "truncate"}
})";

}  // namespace

TEST_SUITE("config") {

TEST_CASE("full schema") {
  const auto cfg = parse_config(kFull);
  CHECK(cfg.model.label == "t2");
  CHECK(cfg.model.cutoff_scale == 2);
  REQUIRE(cfg.model.perturbation.has_value());
  CHECK(cfg.model.perturbation->is_constant());
  CHECK(cfg.model.symbol.level_set(1).intervals()[0].first == PiMultiple(-15, 16));
  CHECK(cfg.n_list == std::vector<std::int64_t>{85, 120});
  CHECK(cfg.target_eigenvalues() == std::vector<double>{-0.5, 1.5});
  CHECK(cfg.epsilon == 0.2);
  CHECK(cfg.gap_delta == 0.1);
  CHECK(cfg.match_tol == 0.001);
  CHECK(cfg.max_half_width == 0.02);
  CHECK(cfg.spectrum.precision == Precision::Double);
  CHECK(cfg.descent.step0 == 0.2);
  CHECK(cfg.descent.max_iter == 50);
  CHECK(cfg.grid.re_min == -2);
  CHECK(cfg.grid.im_max == 1);
  CHECK(cfg.grid_nx == 5);
  CHECK(cfg.grid_ny == 7);
  CHECK(cfg.output.format == OutputFormat::Json);
  CHECK(cfg.output.precision == 10);
  CHECK(cfg.output.truncate);
}

TEST_CASE("defaults") {
  const auto cfg = parse_config(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": [3]})");
  CHECK_FALSE(cfg.model.perturbation.has_value());
  CHECK(cfg.model.cutoff_scale == 1);
  CHECK(cfg.target_eigenvalues().empty());
  CHECK(cfg.epsilon == 0.1);
  CHECK(cfg.gap_delta == 0.05);
  CHECK(cfg.descent.step0 == 0.1);
  CHECK(cfg.descent.shrink == 0.5);
  CHECK(cfg.descent.tol == 1e-10);
  CHECK(cfg.descent.max_iter == 10000);
  CHECK(cfg.output.format == OutputFormat::Csv);
  CHECK(cfg.output.precision == 8);
  CHECK_FALSE(cfg.output.truncate);
}

TEST_CASE("pieces and coefficient-list psi") {
  const auto cfg = parse_config(R"({
    "operator": {
      "symbol": {"pieces": [{"from": "-pi", "to": "0", "value": 2}, {"from": "0", "to": "pi", "value": 0.5}]},
      "rank_one": {"a": 0.5, "psi": [[0, 0.6], 0.8, 0]}
    },
    "n_list": [0, 4]
  })");
  CHECK(cfg.model.symbol.values() == std::vector<Real>{0.5L, 2});
  REQUIRE(cfg.model.perturbation.has_value());
  CHECK(cfg.model.perturbation->band() == 1);
  CHECK(cfg.model.perturbation->coefficient(-1) == Complex(0, static_cast<Real>(0.6)));
}

TEST_CASE("diagnostics name the offending field") {
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": [3], "bogus": 1})").find("bogus") !=
        std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": [3, 3]})").find("n_list[1]") !=
        std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": [-1]})").find("n_list[0]") !=
        std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": []})").find("n_list") !=
        std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "2.5"]]}}, "n_list": [1]})").find("operator.symbol.E[0][1]") !=
        std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"], ["1/2 pi", "pi"]]}}, "n_list": [1]})")
            .find("operator.symbol.E") != std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}, "rank_one": {"a": -1}}, "n_list": [1]})")
            .find("operator.rank_one") != std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": [1], "output": {"precision": 5}})")
            .find("output.precision") != std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": [1], "output": {"precision": 18}})")
            .find("output.precision") != std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": [1], "output": {"format": "xml"}})")
            .find("output.format") != std::string::npos);
  CHECK(error_of(R"({"operator": {"symbol": {"E": [["0", "pi"]]}}, "n_list": [1], "epsilon": 1})")
            .find("epsilon") != std::string::npos);
  CHECK(error_of(R"({"n_list": [1]})").find("operator") != std::string::npos);
  CHECK(error_of("{\n  \"operator\": {\n    \"symbol\": 3,\n").find("line 4") != std::string::npos);
}

TEST_CASE("load_config prefixes the path") {
  try {
    load_config("/nonexistent/config.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/config.json") != std::string::npos);
  }
}

}  // TEST_SUITE

TEST_SUITE("output") {

TEST_CASE("fixed formatting") {
  CHECK(format_fixed(-0.0, 8) == "0.00000000");
  CHECK(format_fixed(-1e-12, 8) == "0.00000000");
  CHECK(format_fixed(-0.635579767116, 8) == "-0.63557977");
  CHECK(format_fixed(-0.635579767116, {8, true}) == "-0.63557976");
  CHECK(format_fixed(1.999999999, {6, true}) == "1.999999");
  CHECK(format_fixed(-1e-12, {8, true}) == "0.00000000");
  CHECK(format_fixed(2.0, 6) == "2.000000");
}

TEST_CASE("CSV layout") {
  Document one;
  auto& t = one.add_table("pts", {"re", "im"}, false);
  t.add({1.0, -0.0});
  std::ostringstream a;
  write_csv(a, one, {});
  CHECK(a.str() == "1.00000000,0.00000000\n");

  Document two;
  two.add_table("first", {"n", "x"}).add({std::int64_t{3}, 0.5});
  two.add_table("second", {"label"}).add({std::string("a,b")});
  std::ostringstream b;
  write_csv(b, two, {6, false});
  CHECK(b.str() == "# first\nn,x\n3,0.500000\n\n# second\nlabel\n\"a,b\"\n");
  CHECK_THROWS(two.tables[0].add({1.0}));
}

TEST_CASE("JSON parses back") {
  Document doc;
  doc.add_table("rows", {"n", "v", "s"}).add({std::int64_t{7}, -0.125, std::string("q\"x")});
  doc.add_table("empty", {"a"});
  std::ostringstream os;
  write_json(os, doc, {8, false});
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j["rows"][0]["n"] == 7);
  CHECK(j["rows"][0]["v"].get<double>() == -0.125);
  CHECK(j["rows"][0]["s"] == "q\"x");
  CHECK(j["empty"].empty());
  CHECK(os.str().find("-0.12500000") != std::string::npos);
}

}  // TEST_SUITE
