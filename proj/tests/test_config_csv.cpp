#include <doctest.h>

#include <cmath>
#include <sstream>

#include "weylab/config.hpp"
#include "weylab/csv.hpp"

using namespace weylab;

TEST_CASE("config parsing") {
  const auto c = ExperimentConfig::parse(
      "# comment\ngeometry = hyperbolic3\npotential = power:2\ndelta = 0.3\n"
      "lambda_grid = 5:13:4\nmesh = 0.1,6,1e-3\nexpect = satisfied\n");
  CHECK(c.geometry_model().kind() == GeometryKind::Hyperbolic3);
  CHECK(c.delta == 0.3);
  CHECK(c.lambda_grid == std::vector<double>{5, 9, 13});
  CHECK(c.mesh.h_initial == 0.1);
  CHECK(c.mesh.refinement_rounds == 6);
  CHECK(c.mesh.rel_tol == 1e-3);
  CHECK(c.expect == Expectation::Satisfied);
  CHECK(parse_potential("logpow:0.5:0.5").name() == parse_potential("logpower:0.5,0.5").name());
  CHECK(parse_grid("geom:1,100,3") == std::vector<double>{1, 10, 100});
  CHECK(parse_grid("arith:0,1,3") == std::vector<double>{0, 0.5, 1});
  CHECK(parse_geometry("euclidean:3").dim() == 3);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(ExperimentConfig::parse("delta = 1.5\n"), PreconditionError);
  CHECK_THROWS_AS(ExperimentConfig::parse("lambda_grid = 3,2\n"), PreconditionError);
  CHECK_THROWS_AS(ExperimentConfig::parse("mesh = -1,3\n"), PreconditionError);
  CHECK_THROWS_AS(ExperimentConfig::parse("colour = blue\n"), PreconditionError);
  CHECK_THROWS_AS(ExperimentConfig::parse("geometry = torus\n"), PreconditionError);
  CHECK_THROWS_AS(ExperimentConfig::parse("just text\n"), PreconditionError);
}

TEST_CASE("config hash is canonical") {
  const auto a = ExperimentConfig::parse("delta=0.2\ngeometry=line\n");
  const auto b = ExperimentConfig::parse("geometry = line   # same\n\ndelta = 0.20\n");
  CHECK(a.hash() == b.hash());
  const auto c = ExperimentConfig::parse("delta=0.25\n");
  CHECK(a.hash() != c.hash());
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("csv formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(NAN) == "nan");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CsvTable t({"x", "label", "n"});
  t.add_row({1.5, std::string("a,b"), 3LL});
  std::ostringstream os;
  t.write(os, "00ff");
  CHECK(os.str() == "# config-hash=00ff\nx,label,n\n1.5,\"a,b\",3\n");
  CHECK_THROWS(t.add_row({1.0}));
  CHECK(Assertion{"x", true, "ok"}.line() == "assert,x,PASS,ok");
  CHECK(Assertion{"y", false, "a,b"}.line() == "assert,y,FAIL,\"a,b\"");
  CHECK_FALSE(all_pass({{"x", true, ""}, {"y", false, ""}}));
}
