#include "vegflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "vegflow/cli.hpp"
#include "vegflow/errors.hpp"

using namespace vegflow;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("vegflow_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string flat_raster(int n, double value, double cellsize = 1.0) {
  std::ostringstream ss;
  ss << "ncols " << n << "\nnrows " << n << "\nxllcorner 0\nyllcorner 0\ncellsize " << cellsize
     << "\nNODATA_value -9999\n";
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) ss << (i ? " " : "") << value;
    ss << "\n";
  }
  return ss.str();
}

}  // namespace

TEST_CASE("raster parsing") {
  SUBCASE("flat 3x3 grid") {
    std::istringstream in(flat_raster(3, 0.0));
    const RasterFile r = parse_raster(in);
    CHECK(r.ncols == 3);
    CHECK(r.nrows == 3);
    CHECK(r.cellsize == 1.0);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) CHECK(r.values(i, j) == 0.0);
  }
  SUBCASE("row orientation: first data row is the north edge") {
    std::istringstream in(
        "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
        "3 4\n1 2\n");
    const RasterFile r = parse_raster(in);
    CHECK(r.values(0, 0) == 1.0);  // south-west
    CHECK(r.values(1, 0) == 2.0);
    CHECK(r.values(0, 1) == 3.0);  // north-west
    CHECK(r.values(1, 1) == 4.0);
  }
  SUBCASE("short row is rejected with its index") {
    std::istringstream in(
        "ncols 4\nnrows 2\ncellsize 1\n"
        "1 2 3\n1 2 3 4\n");
    try {
      parse_raster(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("row 1") != std::string::npos);
      CHECK(e.line == 4);
    }
  }
  SUBCASE("non-numeric token carries the line number") {
    std::istringstream in("ncols 2\nnrows 1\ncellsize 1\n1 bogus\n");
    try {
      parse_raster(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 4);
    }
  }
  SUBCASE("missing header is rejected") {
    std::istringstream in("ncols 2\nnrows 1\n1 2\n");
    CHECK_THROWS_AS(parse_raster(in), ParseError);
  }
  SUBCASE("parse is total on byte noise") {
    std::mt19937 rng(321);
    std::uniform_int_distribution<int> len(0, 200), byte(0, 255);
    for (int k = 0; k < 200; ++k) {
      std::string s;
      const int n = len(rng);
      for (int b = 0; b < n; ++b) s += static_cast<char>(byte(rng));
      std::istringstream in(s);
      try {
        parse_raster(in);
      } catch (const ParseError&) {
      } catch (const InvalidInput&) {
      }
    }
  }
  SUBCASE("write/read round trip is byte identical") {
    TempDir tmp;
    RasterFile r;
    r.ncols = 3;
    r.nrows = 2;
    r.cellsize = 0.125;
    r.xllcorner = -3.5;
    r.yllcorner = 10.0 / 3.0;
    r.values = Field2D(3, 2);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> vd(-5.0, 5.0);
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 3; ++i) r.values(i, j) = vd(rng);
    const std::string p1 = tmp.file("a.asc"), p2 = tmp.file("b.asc");
    write_raster(r, p1);
    const RasterFile back = read_raster(p1);
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 3; ++i) CHECK(back.values(i, j) == r.values(i, j));
    write_raster(back, p2);
    CHECK(read_text(p1) == read_text(p2));
  }
}

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    std::istringstream in("terrain_path = z.asc\nt_end = 2\n");
    const Config cfg = Config::parse(in, "/data");
    CHECK(cfg.g == 9.81);
    CHECK(cfg.cfl == 0.5);
    CHECK(cfg.dry_threshold == 1e-8);
    CHECK(cfg.model == ModelKind::simplified);
    CHECK(cfg.boundary_north == BoundaryKind::wall);
    CHECK(cfg.terrain_path == "/data/z.asc");
    CHECK(!cfg.porosity_path.has_value());
  }
  SUBCASE("full set of keys with comments") {
    std::istringstream in(
        "# vegetated hillslope\n"
        "model = full\n"
        "terrain_path = /abs/z.asc\n"
        "porosity_path = theta.asc\n"
        "stem_diameter = 0.02\n"
        "cfl = 0.4\n"
        "t_end = 10\n"
        "output_every = 1\n"
        "dry_threshold = 1e-7\n"
        "g = 9.8\n"
        "C_d = 1.5\n"
        "C_b = 25\n"
        "rain_rate = 1e-5\n"
        "infiltration_rate = 2e-6\n"
        "boundary_north = outflow\n"
        "boundary_south = wall\n"
        "boundary_east = outflow\n"
        "boundary_west = wall\n"
        "output_dir = out\n"
        "initial_level = 1.5\n");
    const Config cfg = Config::parse(in, "/base");
    CHECK(cfg.model == ModelKind::full);
    CHECK(cfg.terrain_path == "/abs/z.asc");
    CHECK(cfg.porosity_path == "/base/theta.asc");
    CHECK(cfg.boundary_north == BoundaryKind::outflow);
    CHECK(cfg.output_dir == "/base/out");
    CHECK(*cfg.initial_level == 1.5);
    const RunConfig rc = cfg.run_config();
    CHECK(rc.closure.C_d == 1.5);
    CHECK(rc.closure.d == 0.02);
    CHECK(rc.forcing.rain == 1e-5);
  }
  SUBCASE("unknown keys are rejected") {
    std::istringstream in("terrain_path = z.asc\nbogus_key = 7\n");
    try {
      Config::parse(in, ".");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("malformed line is rejected") {
    std::istringstream in("terrain_path z.asc\n");
    CHECK_THROWS_AS(Config::parse(in, "."), ParseError);
  }
}

TEST_CASE("scenario assembly") {
  TempDir tmp;
  write_text(tmp.file("z.asc"), flat_raster(4, 0.25, 2.0));

  SUBCASE("porosity defaults to one, level fills the basin") {
    write_text(tmp.file("run.cfg"),
               "terrain_path = z.asc\nt_end = 1\ninitial_level = 1.0\n");
    const Config cfg = Config::parse_file(tmp.file("run.cfg"));
    const Scenario s = load_scenario(cfg);
    CHECK(s.grid.n1() == 4);
    CHECK(s.grid.d1() == 2.0);
    for (int jp = 1; jp <= 4; ++jp)
      for (int ip = 1; ip <= 4; ++ip) {
        CHECK(s.grid.theta()(ip, jp) == 1.0);
        CHECK(s.initial.h(ip, jp) == 0.75);
      }
  }
  SUBCASE("stem density converts to porosity") {
    write_text(tmp.file("stems.asc"), flat_raster(4, 1000.0, 2.0));
    write_text(tmp.file("veg.cfg"),
               "terrain_path = z.asc\nstem_density_path = stems.asc\n"
               "stem_diameter = 0.02\nt_end = 1\n");
    const Scenario s = load_scenario(Config::parse_file(tmp.file("veg.cfg")));
    CHECK(s.grid.theta()(2, 2) == doctest::Approx(0.68584).epsilon(1e-5));
  }
  SUBCASE("NODATA terrain is rejected") {
    std::string bad = flat_raster(4, 0.25, 2.0);
    bad.replace(bad.find("0.25"), 4, "-9999");
    write_text(tmp.file("bad.asc"), bad);
    write_text(tmp.file("bad.cfg"), "terrain_path = bad.asc\nt_end = 1\n");
    CHECK_THROWS_AS(load_scenario(Config::parse_file(tmp.file("bad.cfg"))), InvalidInput);
  }
  SUBCASE("raster shape mismatch is rejected") {
    write_text(tmp.file("theta5.asc"), flat_raster(5, 0.9, 2.0));
    write_text(tmp.file("mismatch.cfg"),
               "terrain_path = z.asc\nporosity_path = theta5.asc\nt_end = 1\n");
    CHECK_THROWS_AS(load_scenario(Config::parse_file(tmp.file("mismatch.cfg"))), InvalidInput);
  }
}

TEST_CASE("snapshot and diagnostics output") {
  TempDir tmp;
  const int n = 3;
  const Grid grid(n, n, 1.0, 1.0, Field2D(n, n, 0.0), Field2D(n, n, 1.0), BoundarySet{},
                  ModelKind::simplified);
  FlowField flow = FlowField::zeros(grid);
  for (int jp = 1; jp <= n; ++jp)
    for (int ip = 1; ip <= n; ++ip) flow.h(ip, jp) = 0.1 * ip + 0.01 * jp;

  SUBCASE("snapshot has a header plus one row per cell") {
    const std::string path = tmp.file("snap.csv");
    write_snapshot(flow, grid, path);
    const std::string text = read_text(path);
    CHECK(text.rfind("y1,y2,h,v1,v2,theta,z\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text)
      if (c == '\n') ++lines;
    CHECK(lines == 1 + n * n);
  }
  SUBCASE("snapshot write is idempotent") {
    const std::string p1 = tmp.file("s1.csv"), p2 = tmp.file("s2.csv");
    write_snapshot(flow, grid, p1);
    write_snapshot(flow, grid, p2);
    CHECK(read_text(p1) == read_text(p2));
  }
  SUBCASE("diagnostics columns") {
    DiagnosticsReport rep;
    rep.t = {0.0, 0.5};
    rep.mass = {1.0, 1.0};
    rep.energy = {2.0, 1.9};
    rep.max_v = {0.0, 0.1};
    rep.lake_residual = {0.0, 0.0};
    rep.mass_budget_residual = {0.0, 1e-16};
    rep.energy_budget_residual = {0.0, -1e-5};
    const std::string path = tmp.file("diag.csv");
    write_diagnostics(rep, path);
    const std::string text = read_text(path);
    CHECK(text.rfind("t,mass,energy,max_v,lake_residual,mass_budget_residual,"
                     "energy_budget_residual\n",
                     0) == 0);
  }
}

TEST_CASE("command line interface") {
  TempDir tmp;

  SUBCASE("missing config exits with usage code") {
    std::ostringstream out, err;
    CHECK(cli_run(tmp.file("missing.cfg"), out, err) == 2);
    CHECK(err.str().find("error") != std::string::npos);
  }
  SUBCASE("check eigen passes") {
    std::ostringstream out, err;
    CHECK(cli_check("eigen", out, err) == 0);
    CHECK(out.str().find("suite,case,metric,limit,pass") != std::string::npos);
    CHECK(out.str().find("PASS eigen/simplified") != std::string::npos);
  }
  SUBCASE("unknown suite exits with usage code") {
    std::ostringstream out, err;
    CHECK(cli_check("bogus", out, err) == 2);
  }
  SUBCASE("lake run produces monotone energy diagnostics") {
    // small basin with a bumpy bed, closed walls
    std::ostringstream z;
    z << "ncols 8\nnrows 8\nxllcorner 0\nyllcorner 0\ncellsize 1\n";
    for (int j = 0; j < 8; ++j) {
      for (int i = 0; i < 8; ++i)
        z << (i ? " " : "")
          << std::round((0.3 + 0.2 * std::sin(0.9 * i) * std::cos(0.7 * j)) * 1048576.0) /
                 1048576.0;
      z << "\n";
    }
    write_text(tmp.file("z.asc"), z.str());
    write_text(tmp.file("lake.cfg"),
               "terrain_path = z.asc\nt_end = 2\noutput_every = 1\n"
               "initial_level = 2.0\nC_d = 1\nC_b = 30\noutput_dir = out\n");
    std::ostringstream out, err;
    REQUIRE(cli_run(tmp.file("lake.cfg"), out, err) == 0);
    const std::string diag = read_text(tmp.file("out/diagnostics.csv"));
    REQUIRE(!diag.empty());
    // parse the energy and max_v columns
    std::istringstream lines(diag);
    std::string line;
    std::getline(lines, line);  // header
    double prev_energy = std::numeric_limits<double>::infinity();
    while (std::getline(lines, line)) {
      std::istringstream ls(line);
      std::string tok;
      std::vector<double> cols;
      while (std::getline(ls, tok, ',')) cols.push_back(std::stod(tok));
      REQUIRE(cols.size() == 7);
      CHECK(cols[2] <= prev_energy * (1.0 + 1e-12));
      prev_energy = cols[2];
      CHECK(cols[3] < 1e-12);  // max_v
      CHECK(cols[4] < 1e-12);  // lake residual
    }
    CHECK(fs::exists(tmp.file("out/snapshot_0000.csv")));
  }
  SUBCASE("geom writes the geometry fields") {
    std::ostringstream z;
    z << "ncols 5\nnrows 5\nxllcorner 0\nyllcorner 0\ncellsize 0.5\n";
    for (int j = 0; j < 5; ++j) {
      for (int i = 0; i < 5; ++i) z << (i ? " " : "") << 0.1 * i * i;
      z << "\n";
    }
    write_text(tmp.file("zg.asc"), z.str());
    write_text(tmp.file("geom.cfg"), "terrain_path = zg.asc\noutput_dir = gout\nt_end = 1\n");
    std::ostringstream out, err;
    REQUIRE(cli_geom(tmp.file("geom.cfg"), out, err) == 0);
    const std::string text = read_text(tmp.file("gout/geometry.csv"));
    CHECK(text.rfind("y1,y2,beta,nu3,K_M,K_G,", 0) == 0);
    std::size_t lines = 0;
    for (char c : text)
      if (c == '\n') ++lines;
    CHECK(lines == 1 + 25);
  }
  SUBCASE("argv dispatch") {
    const char* argv1[] = {"vegflow"};
    CHECK(run_main(1, const_cast<char**>(argv1)) == 2);
    const char* argv2[] = {"vegflow", "frobnicate"};
    CHECK(run_main(2, const_cast<char**>(argv2)) == 2);
    const char* argv3[] = {"vegflow", "check", "stoker"};
    CHECK(run_main(3, const_cast<char**>(argv3)) == 0);
  }
}
