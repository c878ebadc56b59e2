#include <doctest.h>

#include <string>

#include "r13fem/config.hpp"
#include "r13fem/error.hpp"

using namespace r13;

namespace {

int error_line(const std::string& text) {
  try {
    parse_run_config(ConfigFile::parse_string(text));
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("values, lists and expressions") {
  const ConfigFile f = ConfigFile::parse_string(
      "# comment\n[a]\nx = 1/32\nflag = true\nlist = 1/2, 1, 2 ; trailing\nname = ring\n\n[b]\nn = 7\n");
  CHECK(f.get_double("a", "x").value() == doctest::Approx(1.0 / 32));
  CHECK(f.get_bool("a", "flag").value());
  const auto list = f.get_list("a", "list").value();
  REQUIRE(list.size() == 3);
  CHECK(list[0] == 0.5);
  CHECK(f.get_string("a", "name").value() == "ring");
  CHECK(f.get_int("b", "n").value() == 7);
  CHECK_FALSE(f.get_double("a", "missing").has_value());
  CHECK(f.find("b", "n")->line == 9);
  CHECK(f.section_line("b") == 8);
}

TEST_CASE("malformed files report line and section") {
  CHECK(error_line("[case]\nname = ring\n[physics]\nkn 3\n") == 4);
  CHECK(error_line("[case]\nname = ring\n[physics]\nkn = 1\nkn = 2\n") == 5);
  CHECK(error_line("[case]\nname = ring\n[physics]\nknn = 2\n") == 4);
  CHECK(error_line("[case]\nname = ring\n[bogus]\nx = 1\n") == 3);
  CHECK(error_line("[case]\nname = nowhere\n") == 2);
  CHECK(error_line("[case]\nname = ring\n[physics]\nkn = abc\n") == 4);
  CHECK(error_line("[case]\nname = ring\n[stabilization]\nenabled = maybe\n") == 4);
  CHECK(error_line("[case\nname = ring\n") == 1);
  CHECK(error_line("[case]\nname = ring\n[bc.x]\ntheta_w = 1\n") == 3);
  try {
    parse_run_config(ConfigFile::parse_string("[case]\nname = ring\n[physics]\nknn = 2\n"));
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.section() == "physics");
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_run_config(ConfigFile::parse_string("[case]\nname = ring\n[physics]\nkn = -1\n")),
                  ConfigError);
}

TEST_CASE("case presets with overrides") {
  const RunConfig rc = parse_run_config(ConfigFile::parse_string(
      "[case]\nname = channel\nh = 0.1\n[physics]\nkn = 1/8\n[sweep]\nkn = 1/32, 1/16\n"
      "[bc.2]\nepsilon_w = 5\ntheta_w = 1 + x\n[elements]\ndegree_high = 2\n"));
  CHECK(rc.spec.name == "channel");
  CHECK(rc.spec.data.physics.kn == 0.125);
  CHECK(rc.spec.mesh.h == 0.1);
  CHECK(rc.spec.degree_high == 2);
  CHECK(rc.spec.data.boundary.at(2).epsilon_w == 5.0);
  CHECK(rc.spec.data.boundary.at(2).theta_w(Point{2.0, 0.0}) == 3.0);
  CHECK(rc.spec.data.boundary.at(1).epsilon_w == 1e-3);
  REQUIRE(rc.sweep.kn.size() == 2);
  CHECK(rc.sweep.kn[1] == 0.0625);
}

TEST_CASE("custom problem and sampling section") {
  const RunConfig rc = parse_run_config(ConfigFile::parse_string(
      "[mesh]\nbuiltin = rectangle\nwidth = 2\nheight = 1\nh = 0.25\n"
      "[bc.1]\n[bc.2]\nu_n_w = 1\nepsilon_w = 10\n[bc.3]\n[bc.4]\n"
      "[sources]\nb_x = sin(pi * y)\n"
      "[sample]\nfrom = 0, 0.5, 1, 0\nto = 2, 0.5, 1, 1\nn = 50\ncomponents = u_x, sigma_xy\n"
      "[output]\nvtk = out.vtk\ncsv = out.csv\n"));
  CHECK(rc.spec.mesh.kind == MeshSource::Kind::rectangle);
  CHECK(rc.spec.mesh.width == 2.0);
  CHECK(rc.spec.data.sources.b_x(Point{0, 0.5}) == doctest::Approx(1.0));
  REQUIRE(rc.sample.segments.size() == 2);
  CHECK(rc.sample.segments[1].to.y == 1.0);
  CHECK(rc.sample.n == 50);
  REQUIRE(rc.sample.components.size() == 2);
  CHECK(rc.sample.components[1] == Component::sigma_xy);
  CHECK(rc.output.vtk == "out.vtk");
  CHECK_THROWS_AS(component_from_name("sigma_zz"), Error);
}
