#include <catch_amalgamated.hpp>

#include <filesystem>
#include <string>

#include "cslheat/spec_io.hpp"

using namespace cslheat;

#ifndef CSLHEAT_SPEC_DIR
#define CSLHEAT_SPEC_DIR "specs"
#endif

namespace {

const std::string minimal = R"({
  "csl": {"lambda": 1e-16, "r_c": 1e-7},
  "mass_model": {"type": "cuboid", "lx": 1e-3, "ly": 1e-3, "lz": 1e-3, "material": "silicon"}
})";

std::string field_of(const std::string& text)
{
  try {
    (void)parse_spec(text);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::string with_csl(const std::string& csl)
{
  return R"({"csl": )" + csl + R"(, "mass_model": {"type": "point_mass", "mass": 1.0}})";
}

}  // namespace

TEST_CASE("minimal spec gets every default")
{
  const ExperimentSpec s = parse_spec(minimal);
  CHECK(s.version == spec_schema_version);
  CHECK(s.csl.lambda_rate == 1e-16);
  CHECK(s.csl.r_c == 1e-7);
  CHECK(s.quadrature.rel_tol == 1e-9);
  CHECK(s.quadrature.u_max == 8.0);
  CHECK(s.quadrature.mc_samples == 200000);
  CHECK(s.quadrature.rng_seed == 1);
  CHECK_FALSE(s.thermal.has_value());
  const auto& c = std::get<Cuboid>(s.mass_model.shape);
  CHECK(c.material.density == 2329.0);
  CHECK(std::abs(total_mass(s.mass_model) - 2.329e-6) <= 1e-18);
  CHECK(validate_spec(s).empty());
}

TEST_CASE("invalid values name the offending field")
{
  CHECK(field_of(with_csl(R"({"lambda": 1e-16, "r_c": 0})")) == "csl.r_c");
  CHECK(field_of(with_csl(R"({"lambda": -1, "r_c": 1e-7})")) == "csl.lambda_rate");
  CHECK(field_of(with_csl(R"({"lambda_rate": 1e-16})")) == "csl.r_c");
  CHECK(field_of(with_csl(R"({"lambda_rate": 2e-16, "r_c": 1e-7})")) == "<accepted>");
  CHECK(field_of(R"({"csl": {"lambda": 1, "r_c": 1e-7},
      "mass_model": {"type": "layered_stack", "lx": 1e-6, "ly": 1e-6,
                     "layers": [{"material": "gold", "thickness": 0}]}})") == "mass_model.layers[0].thickness");
  CHECK(field_of(R"({"csl": {"lambda": 1, "r_c": 1e-7},
      "mass_model": {"type": "cuboid", "lx": -1e-6, "ly": 1e-6, "lz": 1e-6, "material": "gold"}})") ==
        "mass_model.lx");
  CHECK(field_of(R"({"csl": {"lambda": 1, "r_c": 1e-7},
      "mass_model": {"type": "sphere", "radius": 1e-6, "material": "unobtainium"}})") == "mass_model.material");
  CHECK(field_of(R"({"csl": {"lambda": 1, "r_c": 1e-7},
      "mass_model": {"type": "torus", "radius": 1e-6}})") == "mass_model.type");
  CHECK(field_of(R"({"csl": {"lambda": 1, "r_c": 1e-7}, "mass_model": {"type": "point_mass", "mass": 1},
      "quadrature": {"rel_tol": 0.5}})") == "quadrature.rel_tol");
  CHECK(field_of(R"({"csl": {"lambda": 1, "r_c": 1e-7}, "mass_model": {"type": "point_mass", "mass": 1},
      "quadrature": {"u_max": 5}})") == "quadrature.u_max");
  CHECK(field_of(R"({"csl": {"lambda": 1, "r_c": 1e-7}, "mass_model": {"type": "point_mass", "mass": 1},
      "quadrature": {"mc_samples": 999}})") == "quadrature.mc_samples");
  CHECK(field_of(R"({"version": 2, "csl": {"lambda": 1, "r_c": 1e-7},
      "mass_model": {"type": "point_mass", "mass": 1}})") == "version");
  CHECK(field_of(R"({"csl": {"lambda": 1, "r_c": 1e-7}, "mass_model": {"type": "point_mass", "mass": 1},
      "task": {"rc_grid": [1e-7, 1e-8]}})") == "task.rc_grid[1]");
  CHECK(field_of(R"({"mass_model": {"type": "point_mass", "mass": 1}})") == "csl");
  CHECK(field_of("[1, 2]") == "$");
}

TEST_CASE("validate_spec reports violations as data")
{
  ExperimentSpec s = parse_spec(minimal);
  CHECK(validate_spec(s).empty());
  s.csl.lambda_rate = -1.0;
  auto v = validate_spec(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "csl.lambda_rate");

  s = parse_spec(minimal);
  s.mass_model.shape = LayeredStack{1e-6, 1e-6, {{{"gold", 19320.0}, 0.0}, {{"x", -1.0}, 1e-7}}};
  v = validate_spec(s);
  REQUIRE(v.size() == 2);
  CHECK(v[0].field == "mass_model.layers[0].thickness");
  CHECK(v[1].field == "mass_model.layers[1].material.density");
}

TEST_CASE("malformed documents report line and column")
{
  const std::string bad = "{\n  \"csl\": {\"lambda\": 1e-16,\n    \"r_c\": }\n}";
  try {
    (void)parse_spec(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 12);
  }
  CHECK_THROWS_AS(parse_spec(""), ParseError);
}

TEST_CASE("materials: built-ins, a local table and inline densities")
{
  const auto s = parse_spec(R"({"csl": {"lambda": 1, "r_c": 1e-7},
    "mass_model": {"type": "layered_stack", "lx": 1e-6, "ly": 1e-6,
      "materials": {"gold": 19300, "foam": 30},
      "layers": [{"material": "gold", "thickness": 1e-7},
                 {"material": "foam", "thickness": 1e-7},
                 {"material": "tungsten", "thickness": 1e-7},
                 {"material": {"name": "custom", "density": 1234.5}, "thickness": 1e-7}]}})");
  const auto& st = std::get<LayeredStack>(s.mass_model.shape);
  CHECK(st.layers[0].material.density == 19300.0);
  CHECK(st.layers[1].material.density == 30.0);
  CHECK(st.layers[2].material.density == 19250.0);
  CHECK(st.layers[3].material == Material{"custom", 1234.5});
}

TEST_CASE("task blocks")
{
  const auto s = parse_spec(R"({"csl": {"lambda": 1, "r_c": 1e-7},
    "mass_model": {"type": "point_mass", "mass": 1},
    "task": {"rc_grid": {"min": 1e-8, "max": 1e-6, "points": 3},
             "k_grid": {"direction": [0, 0, 2], "k_max": 10, "points": 11},
             "observed_power": 1e-20, "designs": [1, 16], "lattice_spacing": 1e-8}})");
  REQUIRE(s.task.rc_grid.size() == 3);
  CHECK(s.task.rc_grid[0] == 1e-8);
  CHECK(std::abs(s.task.rc_grid[1] - 1e-7) <= 1e-22);
  CHECK(s.task.rc_grid[2] == Catch::Approx(1e-6).epsilon(1e-15));
  const auto ks = s.task.k_grid->wavevectors();
  REQUIRE(ks.size() == 11);
  CHECK(ks[5] == Vec3{0.0, 0.0, 5.0});
  CHECK(*s.task.observed_power == 1e-20);
  CHECK(s.task.designs == std::vector<std::size_t>{1, 16});

  const auto lin = parse_spec(R"({"csl": {"lambda": 1, "r_c": 1e-7},
    "mass_model": {"type": "point_mass", "mass": 1},
    "task": {"rc_grid": {"min": 1e-7, "max": 3e-7, "points": 3, "spacing": "linear"}}})");
  CHECK(lin.task.rc_grid[1] == Catch::Approx(2e-7).epsilon(1e-15));
}

TEST_CASE("load, serialize, load is idempotent on every shipped spec")
{
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(CSLHEAT_SPEC_DIR)) {
    if (entry.path().extension() != ".json") continue;
    INFO(entry.path().string());
    const ExperimentSpec a = load_spec(entry.path().string());
    CHECK(validate_spec(a).empty());
    const std::string text = serialize_spec(a);
    const ExperimentSpec b = parse_spec(text);
    CHECK(a == b);
    CHECK(serialize_spec(b) == text);
    ++seen;
  }
  CHECK(seen >= 10);
  CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), Error);
}
