#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "dirac/error.hpp"
#include "dirac/harness/commands.hpp"
#include "dirac/harness/config.hpp"
#include "dirac/harness/export.hpp"
#include "doctest.h"

using namespace dirac;
using namespace dirac::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dirac_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<double>> read_rows(const fs::path& path, std::string& header) {
  std::ifstream in(path);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(row);
  }
  return rows;
}

SchemaError schema_failure(std::string_view text) {
  try {
    parse_config(text);
  } catch (const SchemaError& e) {
    return e;
  }
  FAIL("expected a SchemaError");
  throw;
}

const char* const rest_mode = R"({"generator": {"g": "0"}, "free": {"modes": [{"p": 0.0}]}})";

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const ScenarioConfig c = parse_config(rest_mode);
  CHECK(c.generator.g_text == "0");
  CHECK(c.generator.m == 1.0);
  CHECK_FALSE(c.generator.x0.has_value());
  CHECK(c.gauge_anchor() == -20.0);
  REQUIRE(c.free.modes.size() == 1);
  CHECK(c.free.modes[0].p == 0.0);
  CHECK(c.free.modes[0].amplitude == cplx(1.0, 0.0));
  CHECK_FALSE(c.free.packet.has_value());
  CHECK(c.grid.x_min == -20.0);
  CHECK(c.grid.x_max == 20.0);
  CHECK(c.grid.n == 1024);
  CHECK(c.time.t0 == 0.0);
  CHECK(c.time.t_end == 1.0);
  CHECK(c.time.dt == 1e-3);
  CHECK(c.method == Method::strang_spectral);
  CHECK(c.output.format == FieldFormat::csv);
  CHECK(c.output.checkpoints == 4);
}

TEST_CASE("schema errors name the offending location") {
  SUBCASE("unknown key") {
    const SchemaError e = schema_failure(
        R"({"generator": {"g": "0", "gg": 1}, "free": {"modes": [{"p": 0}]}})");
    CHECK(e.pointer() == "/generator/gg");
    CHECK(std::string(e.what()).find("gg") != std::string::npos);
  }
  SUBCASE("unknown section") {
    CHECK(schema_failure(R"({"generator": {"g": "0"}, "free": {"modes": [{"p": 0}]}, "x": 1})")
              .pointer() == "/x");
  }
  SUBCASE("grid size not a power of two") {
    CHECK(schema_failure(
              R"({"generator": {"g": "0"}, "free": {"modes": [{"p": 0}]}, "grid": {"n": 1000}})")
              .pointer() == "/grid/n");
  }
  SUBCASE("missing generator") {
    CHECK(schema_failure(R"({"free": {"modes": [{"p": 0}]}})").pointer() == "/generator");
  }
  SUBCASE("both packet and modes") {
    CHECK(schema_failure(R"({"generator": {"g": "0"},
                             "free": {"modes": [{"p": 0}], "packet": {}}})")
              .pointer() == "/free");
  }
  SUBCASE("fractional step count") {
    CHECK(schema_failure(R"({"generator": {"g": "0"}, "free": {"modes": [{"p": 0}]},
                             "time": {"t_end": 1.0, "dt": 0.3}})")
              .pointer()
              .starts_with("/time"));
  }
}

TEST_CASE("malformed expressions report their offset") {
  try {
    parse_config(R"({"generator": {"g": "2x"}, "free": {"modes": [{"p": 0}]}})");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 1);
    CHECK(std::string(e.what()).find("/generator/g") != std::string::npos);
  }
}

TEST_CASE("config g = 0.3*x*t reproduces the potential values at (2, 1)") {
  const ScenarioConfig c = parse_config(
      R"({"generator": {"g": "0.3*x*t", "m": 1, "x0": 0}, "free": {"modes": [{"p": 0}]}})");
  const PotentialSource src = make_source(c);
  const PotentialSample s = potential_at(src.spec, src.gauge, 2.0, 1.0);
  CHECK(s.vs == doctest::Approx(std::cos(1.2) - 1.0).epsilon(1e-15));
  CHECK(s.vp == doctest::Approx(-std::sin(1.2)).epsilon(1e-15));
  // f = -0.15 (x^2 - x0^2) has no t dependence, so Vt = dg/dx = 0.3 t.
  CHECK(s.vt == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(src.gauge.f(2.0, 1.0) == doctest::Approx(-0.6).epsilon(1e-12));
}

TEST_CASE("config_to_json round-trips") {
  const ScenarioConfig c = parse_config(R"({
    "generator": {"g": "0.3*x*t", "m": 1.5, "x0": -3, "f": "-0.15*x^2"},
    "free": {"modes": [{"p": 0.5, "branch": "negative", "amplitude": [0.5, -0.25]}]},
    "grid": {"x_min": -8, "x_max": 8, "n": 64},
    "time": {"t0": 0.5, "t_end": 0.75, "dt": 0.05},
    "method": "crank_nicolson",
    "output": {"dir": "somewhere", "format": "jsonl", "checkpoints": 5}})");
  const nlohmann::json once = config_to_json(c);
  const ScenarioConfig again = parse_config(once.dump());
  CHECK(config_to_json(again) == once);
  CHECK(again.free.modes[0].amplitude == cplx(0.5, -0.25));
  CHECK(again.free.modes[0].branch == EnergyBranch::negative);
  CHECK(again.method == Method::crank_nicolson);
  CHECK(again.output.format == FieldFormat::jsonl);
  CHECK(again.gauge_anchor() == -3.0);
}

TEST_CASE("load_config reports unreadable files") {
  CHECK_THROWS_AS(load_config("/nonexistent/dirac.json"), IoError);
}

TEST_CASE("potentials export") {
  const fs::path dir = scratch_dir("potentials");
  std::string header;

  SUBCASE("zero generator gives zero potentials") {
    const ScenarioConfig c = parse_config(
        R"({"generator": {"g": "0"}, "free": {"modes": [{"p": 0}]}, "grid": {"n": 16}})");
    const CommandResult r = cmd_potentials(c, {0.0, 0.5}, dir);
    REQUIRE(r.files.size() == 2);
    for (const auto& file : r.files) {
      const auto rows = read_rows(file, header);
      CHECK(header == "x,Vt,Vs,Vp,f,g");
      REQUIRE(rows.size() == 16);
      for (const auto& row : rows) {
        for (std::size_t k = 1; k < row.size(); ++k) {
          CHECK(row[k] == 0.0);
        }
      }
    }
  }
  SUBCASE("time-independent generator has no gauge phase") {
    const ScenarioConfig c = parse_config(
        R"({"generator": {"g": "x"}, "free": {"modes": [{"p": 0}]}, "grid": {"n": 16}})");
    const CommandResult r = cmd_potentials(c, {0.7}, dir);
    const auto rows = read_rows(r.files.at(0), header);
    for (const auto& row : rows) {
      CHECK(row[4] == 0.0);
      CHECK(row[1] == 1.0);  // Vt = dg/dx
    }
  }
  SUBCASE("row at x = 2, t = 1") {
    const ScenarioConfig c = parse_config(R"({"generator": {"g": "0.3*x*t", "x0": 0},
        "free": {"modes": [{"p": 0}]}, "grid": {"x_min": -4, "x_max": 4, "n": 8}})");
    const CommandResult r = cmd_potentials(c, {1.0}, dir);
    CHECK(r.files.at(0).filename() == "potentials_t1.csv");
    const auto rows = read_rows(r.files.at(0), header);
    REQUIRE(rows.size() == 8);
    const auto& row = rows[6];
    REQUIRE(row[0] == 2.0);
    CHECK(row[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(row[2] == doctest::Approx(std::cos(1.2) - 1.0).epsilon(1e-15));
    CHECK(row[3] == doctest::Approx(-std::sin(1.2)).epsilon(1e-15));
    CHECK(row[4] == doctest::Approx(-0.6).epsilon(1e-12));
    CHECK(row[5] == doctest::Approx(0.6).epsilon(1e-15));
  }
  fs::remove_all(dir);
}

TEST_CASE("format_real keeps 17 significant digits") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(0.0) == "0");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("field export") {
  const Grid1D grid(-4.0, 4.0, 32);

  SUBCASE("zero field has zero density") {
    std::ostringstream os;
    export_field(StateField(grid, 0.0), os, FieldFormat::csv);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,re_up,im_up,re_dn,im_dn,abs2");
    int rows = 0;
    while (std::getline(is, line)) {
      CHECK(line.substr(line.rfind(',') + 1) == "0");
      ++rows;
    }
    CHECK(rows == 32);
  }
  SUBCASE("jsonl carries t and the csv keys") {
    StateField s(grid, 0.25);
    s.psi[3] = {cplx(0.5, -1.0), cplx(0.0, 2.0)};
    std::ostringstream os;
    export_field(s, os, FieldFormat::jsonl);
    std::istringstream is(os.str());
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
      const auto j = nlohmann::json::parse(line);
      CHECK(j.size() == 7);
      CHECK(j.at("t").get<double>() == 0.25);
      if (rows == 3) {
        CHECK(j.at("re_up").get<double>() == 0.5);
        CHECK(j.at("im_up").get<double>() == -1.0);
        CHECK(j.at("im_dn").get<double>() == 2.0);
        CHECK(j.at("abs2").get<double>() == 5.25);
      }
      ++rows;
    }
    CHECK(rows == 32);
  }
  SUBCASE("csv round trip") {
    const ScenarioConfig c = parse_config(R"({"generator": {"g": "0.3*x*t"},
        "free": {"packet": {"p_center": 1.5}}, "grid": {"x_min": -4, "x_max": 4, "n": 32}})");
    const StateField field = eval_exact_field(make_exact(c), grid, 0.6);
    std::stringstream ss;
    export_field(field, ss, FieldFormat::csv);
    const StateField back = import_csv(ss, grid, 0.6);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      worst = std::max({worst, std::abs(back.psi[j].up - field.psi[j].up),
                        std::abs(back.psi[j].dn - field.psi[j].dn)});
    }
    CHECK(worst <= 1e-15);
  }
  SUBCASE("import rejects a foreign grid") {
    std::stringstream ss;
    export_field(StateField(grid, 0.0), ss, FieldFormat::csv);
    CHECK_THROWS_AS(import_csv(ss, Grid1D(-4.0, 4.0, 16), 0.0), IoError);
  }
}

TEST_CASE("zero generator: exact export equals free export") {
  const fs::path dir = scratch_dir("zero_generator");
  const ScenarioConfig c = parse_config(R"({"generator": {"g": "0"},
      "free": {"packet": {"p_center": 1.0}}, "grid": {"n": 64},
      "time": {"t_end": 0.02, "dt": 0.01}, "output": {"checkpoints": 1}})");
  const CommandResult free = cmd_free(c, {0.0}, dir / "free");
  const CommandResult evolved = cmd_evolve(c, dir / "evolve");
  CHECK(slurp(free.files.at(0)) == slurp(dir / "evolve" / "exact_t0.csv"));
  fs::remove_all(dir);
}

TEST_CASE("identical configs give byte-identical exports") {
  const fs::path dir = scratch_dir("determinism");
  const ScenarioConfig c = parse_config(R"({"generator": {"g": "0.3*x*t"},
      "free": {"packet": {"p_center": 2.0}}, "grid": {"n": 256},
      "time": {"t_end": 0.1, "dt": 0.01}, "output": {"checkpoints": 2, "format": "jsonl"}})");
  const CommandResult a = cmd_evolve(c, dir / "a");
  const CommandResult b = cmd_evolve(c, dir / "b");
  const CommandResult pa = cmd_potentials(c, {0.1}, dir / "a");
  const CommandResult pb = cmd_potentials(c, {0.1}, dir / "b");
  REQUIRE(a.files.size() == b.files.size());
  int fields = 0;
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    if (a.files[i].extension() == ".json") {
      continue;  // the report carries wall-clock timings
    }
    CHECK(slurp(a.files[i]) == slurp(b.files[i]));
    ++fields;
  }
  CHECK(fields == 6);  // evolve and exact at t0 and two checkpoints
  CHECK(slurp(pa.files.at(0)) == slurp(pb.files.at(0)));
  fs::remove_all(dir);
}

TEST_CASE("verify exit status follows the tolerances") {
  SUBCASE("zero generator evolves to the free solution") {
    // The packet's momentum cut-off leaves ~1e-7 tails at the domain edges;
    // this resolution and momentum keep the resulting floor below 1e-10.
    const ScenarioConfig c = parse_config(R"({"generator": {"g": "0"},
        "free": {"packet": {"p_center": 2.0}}, "grid": {"n": 4096},
        "time": {"t_end": 0.5, "dt": 0.01}})");
    const CommandResult r = cmd_verify(c);
    CHECK(r.exit_code == 0);
    CHECK(r.report.at("pass").get<bool>());
    const auto& evo = r.report.at("stages").at("evolution");
    for (const auto& cp : evo.at("checkpoints")) {
      CHECK(cp.at("l2_error").get<double>() <= 1e-10);
    }
  }
  SUBCASE("time-independent generator") {
    const ScenarioConfig c = parse_config(R"cfg({"generator": {"g": "0.5*sin(x)"},
        "free": {"packet": {}}, "grid": {"n": 1024}, "time": {"t_end": 0.2, "dt": 0.001}})cfg");
    const CommandResult r = cmd_verify(c);
    CHECK(r.exit_code == 0);
    CHECK(make_source(c).gauge.identically_zero());
  }
  SUBCASE("too coarse a step fails") {
    const ScenarioConfig c = parse_config(R"({"generator": {"g": "0.3*x*t"},
        "free": {"packet": {"p_center": 2.0}}, "grid": {"n": 256},
        "time": {"t_end": 1.0, "dt": 0.5}, "output": {"checkpoints": 2}})");
    const CommandResult r = cmd_verify(c);
    CHECK(r.exit_code == 1);
    CHECK_FALSE(r.report.at("pass").get<bool>());
    CHECK_FALSE(r.report.at("stages").at("evolution").at("pass").get<bool>());
    CHECK(r.report.at("stages").at("identity").at("pass").get<bool>());
  }
}

TEST_CASE("convergence study") {
  SUBCASE("free evolution sits at the floor") {
    const ScenarioConfig c = parse_config(R"({"generator": {"g": "0"},
        "free": {"packet": {"p_center": 2.0}}, "grid": {"n": 4096},
        "time": {"t_end": 0.1, "dt": 0.05}, "output": {"checkpoints": 1}})");
    const CommandResult r = cmd_convergence(c, 3);
    CHECK(r.exit_code == 0);
    REQUIRE(r.report.at("orders").size() == 2);
    for (const auto& q : r.report.at("orders")) {
      CHECK(q == "floor");
    }
  }
  SUBCASE("Strang with potentials is second order") {
    const ScenarioConfig c = parse_config(R"({"generator": {"g": "0.3*x*t"},
        "free": {"packet": {"p_center": 2.0}}, "grid": {"n": 1024},
        "time": {"t_end": 0.4, "dt": 0.02}})");
    const CommandResult r = cmd_convergence(c, 3);
    REQUIRE(r.report.at("rows").size() == 3);
    REQUIRE(r.report.at("orders").size() == 2);
    for (const auto& q : r.report.at("orders")) {
      REQUIRE(q.is_number());
      CHECK(q.get<double>() == doctest::Approx(2.0).epsilon(0.05));
    }
    CHECK(r.exit_code == 0);
  }
  SUBCASE("ladder too short") {
    const ScenarioConfig c = parse_config(rest_mode);
    CHECK_THROWS_AS(cmd_convergence(c, 2), ConfigError);
  }
}

TEST_CASE("bench report shape") {
  const ScenarioConfig c = parse_config(R"({"generator": {"g": "0.3*x*t"},
      "free": {"packet": {}}, "grid": {"n": 64}})");
  const CommandResult r = cmd_bench(c, 3, {16, 32});
  const auto& cells = r.report.at("cells");
  REQUIRE(cells.size() == 4);  // two methods by two sizes
  for (const auto& cell : cells) {
    CHECK(cell.at("samples_s_per_step").size() == 3);
    CHECK(cell.at("median_s_per_step").get<double>() >= 0.0);
    CHECK(cell.contains("min_s_per_step"));
    CHECK(cell.contains("nodes_per_second"));
  }
  CHECK(r.report.at("kinetic_cells").size() == 2);
  CHECK(r.report.at("expression").at("bit_identical").get<bool>());
  CHECK(r.report.at("scaling").at("kinetic_step").at("cost_per_n_log2_n").size() == 2);
  CHECK_THROWS_AS(cmd_bench(c, 2), ConfigError);
}
