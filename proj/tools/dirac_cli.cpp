// Command-line front end for the scenario harness.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dirac/error.hpp"
#include "dirac/harness/commands.hpp"

namespace fs = std::filesystem;
using namespace dirac;
using namespace dirac::harness;

namespace {

void print_files(const CommandResult& r) {
  for (const auto& f : r.files) {
    std::cout << f.string() << '\n';
  }
}

void warn_periodicity(const nlohmann::json& report) {
  if (!report.contains("diagnostics") || !report["diagnostics"].contains("periodicity_warning") ||
      !report["diagnostics"]["periodicity_warning"].get<bool>()) {
    return;
  }
  std::cerr << "warning: potentials differ between the domain edges by "
            << report["diagnostics"]["periodicity_mismatch"].get<double>()
            << "; the spectral solver treats them as periodic\n";
}

int finish_report(const CommandResult& r, const fs::path& path) {
  warn_periodicity(r.report);
  write_report(r.report, path);
  std::cout << path.string() << '\n';
  if (r.report.contains("pass")) {
    std::cout << (r.report["pass"].get<bool>() ? "PASS" : "FAIL") << '\n';
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1+1D Dirac solver and exact-solution verification harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<double> times;
  std::string out;
  std::size_t ladder = 4;
  std::size_t reps = 5;
  std::vector<std::size_t> sizes;

  auto with_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
  };

  CLI::App* potentials = app.add_subcommand("potentials", "write Vt, Vs, Vp, f, g on the grid");
  with_config(potentials);
  potentials->add_option("--t", times, "sample times (repeatable; default t0)");
  potentials->add_option("--out", out, "output directory (default output.dir)");

  CLI::App* free = app.add_subcommand("free", "export the free solution");
  with_config(free);
  free->add_option("--t", times, "sample times (repeatable; default t0)");
  free->add_option("--out", out, "output directory (default output.dir)");

  CLI::App* evolve = app.add_subcommand("evolve", "evolve and export fields at checkpoints");
  with_config(evolve);
  evolve->add_option("--out", out, "output directory (default output.dir)");

  CLI::App* verify = app.add_subcommand("verify", "run all checks; exit 0 iff all pass");
  with_config(verify);
  verify->add_option("--out", out, "report path (default output.dir/verify_report.json)");

  CLI::App* convergence = app.add_subcommand("convergence", "dt-halving convergence study");
  with_config(convergence);
  convergence->add_option("--ladder", ladder, "number of rungs (>= 3)")->check(CLI::Range(3, 12));
  convergence->add_option("--out", out, "report path (default output.dir/convergence_report.json)");

  CLI::App* bench = app.add_subcommand("bench", "timing of both methods and of expression evaluation");
  with_config(bench);
  bench->add_option("--reps", reps, "repetitions per cell (>= 3)")->check(CLI::Range(3, 1000));
  bench->add_option("--sizes", sizes, "grid sizes (default 1024 16384 262144)");
  bench->add_option("--out", out, "report path (default output.dir/bench_report.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    const ScenarioConfig config = load_config(config_path);
    const fs::path dir = out.empty() ? config.output.dir : fs::path(out);
    if (times.empty()) {
      times.push_back(config.time.t0);
    }
    if (potentials->parsed()) {
      const CommandResult r = cmd_potentials(config, times, dir);
      warn_periodicity(r.report);
      print_files(r);
      return r.exit_code;
    }
    if (free->parsed()) {
      const CommandResult r = cmd_free(config, times, dir);
      print_files(r);
      return r.exit_code;
    }
    if (evolve->parsed()) {
      const CommandResult r = cmd_evolve(config, dir);
      print_files(r);
      std::cout << "max L2 error " << r.report["max_l2_error"].get<double>() << ", max norm drift "
                << r.report["max_norm_drift"].get<double>() << '\n';
      return r.exit_code;
    }
    const fs::path report_dir = config.output.dir;
    if (verify->parsed()) {
      return finish_report(cmd_verify(config),
                           out.empty() ? report_dir / "verify_report.json" : fs::path(out));
    }
    if (convergence->parsed()) {
      return finish_report(cmd_convergence(config, ladder),
                           out.empty() ? report_dir / "convergence_report.json" : fs::path(out));
    }
    if (bench->parsed()) {
      return finish_report(cmd_bench(config, reps, sizes),
                           out.empty() ? report_dir / "bench_report.json" : fs::path(out));
    }
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "expression error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
