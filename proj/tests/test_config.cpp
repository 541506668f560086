#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "vortexem/config.hpp"

using namespace vortexem;

namespace {

const units::Constants kRounded = units::Constants::rounded();

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("unit strings") {
  const UnitString u = split_unit_string("2.5 nm");
  CHECK(u.value == 2.5);
  CHECK(u.unit == "nm");
  CHECK(split_unit_string("-1e3   keV").value == -1000.0);
  CHECK_THROWS_AS(split_unit_string("10"), std::invalid_argument);
  CHECK_THROWS_AS(split_unit_string("10nm"), std::invalid_argument);
  CHECK_THROWS_AS(split_unit_string("nm 10"), std::invalid_argument);
  CHECK_THROWS_AS(split_unit_string(""), std::invalid_argument);
}

TEST_CASE("lengths") {
  CHECK(parse_length("10 nm", kRounded) == doctest::Approx(1e-6 / 3.9e-11).epsilon(1e-14));
  CHECK(parse_length("10 nm", kRounded) == doctest::Approx(2.564e4).epsilon(1e-3));
  CHECK(parse_length("3 lambda_c", kRounded) == 3.0);
  const double um = parse_length("1 um", kRounded);
  CHECK(parse_length("1 µm", kRounded) == um);
  CHECK(parse_length("1 μm", kRounded) == um);
  CHECK(parse_length("1 mm", kRounded) == doctest::Approx(1000.0 * um).epsilon(1e-14));
  CHECK(parse_length("1 m", kRounded) == doctest::Approx(100.0 * parse_length("1 cm", kRounded)).epsilon(1e-14));
  CHECK(parse_length("1000 fm", kRounded) == doctest::Approx(parse_length("1 pm", kRounded)).epsilon(1e-14));
  CHECK_THROWS_AS(parse_length("1 furlong", kRounded), std::invalid_argument);
  CHECK_THROWS_AS(parse_length("1 s", kRounded), std::invalid_argument);
}

TEST_CASE("times and energies") {
  CHECK(parse_time("1.3e-21 s", kRounded, 5.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(parse_time("0.5 t_d", kRounded, 800.0) == 400.0);
  CHECK(parse_time("7 t_c", kRounded, 1.0) == 7.0);
  CHECK(parse_time("1 us", kRounded, 1.0) == parse_time("1 µs", kRounded, 1.0));
  CHECK(parse_time("1 ns", kRounded, 1.0) == doctest::Approx(1e3 * parse_time("1 ps", kRounded, 1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(parse_time("3 nm", kRounded, 1.0), std::invalid_argument);
  CHECK(parse_energy_kev("300 keV", kRounded) == 300.0);
  CHECK(parse_energy_kev("2 MeV", kRounded) == 2000.0);
  CHECK(parse_energy_kev("500 eV", kRounded) == 0.5);
  CHECK(parse_energy_kev("1 m_e", kRounded) == 511.0);
  CHECK_THROWS_AS(parse_energy_kev("300", kRounded), std::invalid_argument);
}

TEST_CASE("axis ranges") {
  const AxisRange one{2.0, 5.0, 1};
  CHECK(one.values() == std::vector<double>{2.0});
  const std::vector<double> v = AxisRange{-1.0, 1.0, 5}.values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == -1.0);
  CHECK(v.back() == 1.0);
  CHECK(v[2] == doctest::Approx(0.0));
}

TEST_CASE("packet widths") {
  const Config a = parse_config(R"({"packet": {"ell": 3, "mean_radius0": "10 nm"}})");
  CHECK(a.packet.ell == 3);
  CHECK(a.packet.n == 0);
  CHECK(mean_radius(a.packet, 0.0) == doctest::Approx(parse_length("10 nm", kRounded)).epsilon(1e-14));
  const Config b = parse_config(R"({"packet": {"ell": -2, "sigma_perp0": "1 nm"}})");
  CHECK(sigma_perp(b.packet, 0.0) == doctest::Approx(parse_length("1 nm", kRounded)).epsilon(1e-14));
  const Config c = parse_config(R"({"packet": {"ell": 0, "n": 1, "sigma": "5.11 keV"}})");
  CHECK(c.packet.sigma == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(c.packet.n == 1);

  CHECK(error_line("{\"packet\": {\"ell\": 0,\n \"mean_radius0\": \"10 nm\"}}") == 2);
  CHECK(error_text(R"({"packet": {"ell": 1, "sigma_perp0": "1 nm", "sigma": "1 keV"}})").find("exactly one") !=
        std::string::npos);
  CHECK(error_line(R"({"packet": {"ell": 1}})") == 1);
  CHECK(error_line("{\"frame\": \"rest\"}") == 1);
}

TEST_CASE("constants, boost and frame") {
  const Config a = parse_config(R"({"constants": "codata", "packet": {"ell": 1, "sigma_perp0": "1 nm"},
                                    "boost": {"kinetic": "300 keV"}, "frame": "lab", "units": "lab"})");
  CHECK(a.codata);
  CHECK(a.constants.lambda_c_cm == units::Constants::codata().lambda_c_cm);
  REQUIRE(a.boost.has_value());
  REQUIRE(a.kinetic_kev.has_value());
  CHECK(*a.kinetic_kev == 300.0);
  CHECK(a.boost->beta == doctest::Approx(0.7765).epsilon(1e-3));
  CHECK(a.frame == Frame::lab);
  CHECK(a.output_units == OutputUnits::lab);
  CHECK(to_string(Frame::lab) == "lab");
  CHECK(to_string(Frame::rest) == "rest");

  const Config b = parse_config(R"({"packet": {"ell": 1, "sigma_perp0": "1 nm"}, "boost": {"beta": 0.5}})");
  CHECK(b.boost->beta == 0.5);
  CHECK_FALSE(b.kinetic_kev.has_value());
  CHECK(b.frame == Frame::rest);
  CHECK(b.output_units == OutputUnits::natural);
}

TEST_CASE("error positions") {
  // unknown key
  CHECK(error_line("{\n  \"packet\": {\"ell\": 1, \"sigma_perp0\": \"1 nm\"},\n  \"colour\": 3\n}") == 3);
  // unknown nested key
  CHECK(error_line("{\n  \"packet\": {\n    \"ell\": 1,\n    \"sigma_perp0\": \"1 nm\",\n    \"spin\": 1\n  }\n}") == 5);
  // syntax error
  CHECK(error_line("{\n  \"packet\": {\"ell\": 1,\n  \"sigma_perp0\": \"1 nm\"\n}\n") >= 3);
  CHECK(error_line("{\n  \"packet\": {\"ell\": 1 \"sigma_perp0\": \"1 nm\"}\n}") == 2);
  // duplicate key
  CHECK(error_line("{\n  \"packet\": {\"ell\": 1, \"sigma_perp0\": \"1 nm\"},\n  \"frame\": \"rest\",\n  \"frame\": \"lab\"\n}") == 4);
  // missing unit
  const std::string bare = "{\n  \"packet\": {\n    \"ell\": 1,\n    \"sigma_perp0\": 5\n  }\n}";
  CHECK(error_line(bare) == 4);
  CHECK(error_text(bare).rfind("line 4: ", 0) == 0);
  // wrong type
  CHECK(error_line("{\n  \"packet\": {\"ell\": \"one\", \"sigma_perp0\": \"1 nm\"}\n}") == 2);
  // out of range
  CHECK(error_line("{\n \"packet\": {\"ell\": 1, \"sigma_perp0\": \"1 nm\"},\n \"boost\": {\"beta\": 1.0}\n}") == 3);
  CHECK(error_line("{\n \"packet\": {\"ell\": 1, \"n\": -1, \"sigma_perp0\": \"1 nm\"}\n}") == 2);
  CHECK(error_line(R"({"packet": {"ell": 1, "sigma_perp0": "-1 nm"}})") == 1);
  const std::string grid = "{\"packet\": {\"ell\": 1, \"sigma_perp0\": \"1 nm\"},\n\"grid\": {\n\"rho\": {\"min\": \"2 nm\", \"max\": \"1 nm\", \"count\": 2}}}";
  CHECK(error_line(grid) == 3);
  CHECK(error_line("{\"packet\": {\"ell\": 1, \"sigma_perp0\": \"1 nm\"},\n\"grid\": {\"phi_count\": 0}}") == 2);
  CHECK(error_line("{\"packet\": {\"ell\": 1, \"sigma_perp0\": \"1 nm\"},\n\"tolerances\": {\"nope\": 1e-3}}") == 2);
  CHECK(error_line("{\"packet\": {\"ell\": 1, \"sigma_perp0\": \"1 nm\"},\n\"tolerances\": {\"normalization\": 0}}") == 2);
  CHECK(error_line("[1, 2]") == 1);
}

TEST_CASE("grid in natural units") {
  const Config c = parse_config(R"({"packet": {"ell": 2, "sigma_perp0": "1 nm"},
    "grid": {"rho": {"min": "0 nm", "max": "4 nm", "count": 5}, "z": {"min": "-1 nm", "max": "1 nm", "count": 1},
             "phi_count": 4, "times": ["0 t_d", "1 t_d", "2 fs"]}})");
  REQUIRE(c.grid.rho.has_value());
  CHECK(c.grid.rho->count == 5);
  CHECK(c.grid.rho->max == doctest::Approx(parse_length("4 nm", kRounded)).epsilon(1e-14));
  CHECK(c.grid.z->values() == std::vector<double>{parse_length("-1 nm", kRounded)});
  CHECK(c.grid.phi_count == 4);
  REQUIRE(c.grid.times.size() == 3);
  CHECK(c.grid.times[1] == doctest::Approx(diffraction_time(c.packet)).epsilon(1e-14));
  CHECK(c.grid.times[2] == doctest::Approx(2e-15 / 1.3e-21).epsilon(1e-14));
}

TEST_CASE("canonical form round-trips") {
  for (const char* name : {"fieldmap_rest.json", "asymmetry_10um.json", "plan_10nm.json"}) {
    const Config a = load_config(std::string(VORTEXEM_EXAMPLES) + "/" + name);
    const Config b = parse_config(a.canonical);
    CHECK(equivalent(a, b));
    CHECK(b.canonical == a.canonical);
    CHECK(a.canonical.find('\n') == std::string::npos);
  }
  const Config a = parse_config(R"({"packet": {"ell": 1, "sigma_perp0": "1 nm"}})");
  const Config b = parse_config(R"({"packet": {"ell": 1, "sigma_perp0": "2 nm"}})");
  CHECK_FALSE(equivalent(a, b));
  CHECK(a.line_of("/packet/ell") == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
