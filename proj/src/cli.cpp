#include "vegflow/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <ostream>

#include "CLI11.hpp"
#include "vegflow/errors.hpp"
#include "vegflow/io.hpp"
#include "vegflow/verify.hpp"

namespace vegflow {

namespace {

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%04zu.csv", index);
  return buf;
}

}  // namespace

int cli_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const Config cfg = Config::parse_file(config_path);
    if (!(cfg.t_end > 0.0)) throw InvalidInput("run needs t_end > 0");
    Scenario scenario = load_scenario(cfg);
    const RunConfig rc = cfg.run_config();
    const RunResult result = run(rc, scenario.grid, std::move(scenario.initial));

    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < result.snapshots.size(); ++k)
      write_snapshot(result.snapshots[k], scenario.grid, (dir / snapshot_name(k)).string());
    write_diagnostics(result.diagnostics, (dir / "diagnostics.csv").string());

    out << "run finished: t=" << result.snapshots.back().t
        << " s, snapshots=" << result.snapshots.size()
        << ", steps=" << (result.diagnostics.size() - 1) << "\n";
    out << "final mass=" << result.diagnostics.mass.back()
        << " energy=" << result.diagnostics.energy.back()
        << " max|v|=" << result.diagnostics.max_v.back() << "\n";
    out << "output written to " << dir.string() << "\n";
    return 0;
  } catch (const SolverBlowup& e) {
    err << "error: " << e.what() << " at cell (" << e.i << ", " << e.j << "), t=" << e.t << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << config_path << ":" << e.line << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_check(const std::string& suite, std::ostream& out, std::ostream& err) {
  try {
    const auto rows = verify::run_suites(suite);
    out << "suite,case,metric,limit,pass\n";
    for (const auto& r : rows) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6e,%.6e", r.metric, r.limit);
      out << r.suite << "," << r.case_id << "," << buf << "," << (r.pass ? "1" : "0") << "\n";
    }
    std::size_t passed = 0;
    for (const auto& r : rows) {
      out << (r.pass ? "PASS " : "FAIL ") << r.suite << "/" << r.case_id << " (metric "
          << r.metric << ", limit " << r.limit << ")\n";
      if (r.pass) ++passed;
    }
    out << passed << "/" << rows.size() << " checks passed\n";
    return passed == rows.size() ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_geom(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const Config cfg = Config::parse_file(config_path);
    const RasterFile terrain = read_raster(cfg.terrain_path);
    if (terrain.has_nodata()) throw InvalidInput("terrain raster contains NODATA cells");
    const SurfaceChart chart =
        SurfaceChart::build(terrain.values, terrain.cellsize, terrain.cellsize);

    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "geometry.csv").string();
    std::string text = "y1,y2,beta,nu3,K_M,K_G,g1_11,g1_12,g1_22,g2_11,g2_12,g2_22\n";
    char buf[40];
    auto add = [&](double v, char sep) {
      std::snprintf(buf, sizeof(buf), "%.16e%c", v, sep);
      text += buf;
    };
    for (int j = 0; j < chart.n2(); ++j)
      for (int i = 0; i < chart.n1(); ++i) {
        const SurfacePoint p = chart.point(i, j);
        add(terrain.xllcorner + (i + 0.5) * terrain.cellsize, ',');
        add(terrain.yllcorner + (j + 0.5) * terrain.cellsize, ',');
        add(p.beta, ',');
        add(p.nu.z, ',');
        add(p.K_M, ',');
        add(p.K_G, ',');
        add(p.gamma[0][0][0], ',');
        add(p.gamma[0][0][1], ',');
        add(p.gamma[0][1][1], ',');
        add(p.gamma[1][0][0], ',');
        add(p.gamma[1][0][1], ',');
        add(p.gamma[1][1][1], '\n');
      }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot write geometry file: " + path);
    f << text;
    out << "geometry written to " << path << " (" << chart.n1() << "x" << chart.n2()
        << " nodes)\n";
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << config_path << ":" << e.line << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_main(int argc, char** argv) {
  CLI::App app{"Finite-volume shallow water flow over vegetated terrain"};
  app.require_subcommand(1);

  std::string run_config, geom_config;
  std::string suite = "all";

  CLI::App* run_cmd = app.add_subcommand("run", "Run a simulation from a config file");
  run_cmd->add_option("config", run_config, "Path to the config file")->required();

  CLI::App* check_cmd =
      app.add_subcommand("check", "Run verification suites (all, eigen, lemmas, stoker, balance)");
  check_cmd->add_option("suite", suite, "Suite name")->default_val("all");

  CLI::App* geom_cmd =
      app.add_subcommand("geom", "Write the terrain geometry fields for a config");
  geom_cmd->add_option("config", geom_config, "Path to the config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run_cmd->parsed()) return cli_run(run_config, std::cout, std::cerr);
  if (check_cmd->parsed()) return cli_check(suite, std::cout, std::cerr);
  if (geom_cmd->parsed()) return cli_geom(geom_config, std::cout, std::cerr);
  return 2;
}

}  // namespace vegflow
