#include "vegflow/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vegflow/errors.hpp"
#include "vegflow/physics.hpp"

namespace vegflow {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token, long line) {
  const std::string t = trim(token);
  if (t.empty()) throw ParseError("empty numeric token", line);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw ParseError("non-numeric token '" + t + "'", line);
  return v;
}

long parse_int(const std::string& token, long line) {
  const double v = parse_number(token, line);
  const long r = static_cast<long>(v);
  if (static_cast<double>(r) != v) throw ParseError("expected an integer, got '" + token + "'", line);
  return r;
}

void format17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  out += buf;
}

}  // namespace

bool RasterFile::has_nodata() const {
  for (int j = 0; j < values.n2(); ++j)
    for (int i = 0; i < values.n1(); ++i)
      if (values(i, j) == nodata) return true;
  return false;
}

RasterFile parse_raster(std::istream& in) {
  RasterFile r;
  bool saw_ncols = false, saw_nrows = false, saw_cellsize = false;
  std::string line;
  long line_no = 0;
  long data_row = 0;  // rows read so far, counted from the north
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ls(t);
    std::string first;
    ls >> first;
    if (!first.empty() && (std::isalpha(static_cast<unsigned char>(first[0])) || first[0] == '_')) {
      if (data_row > 0) throw ParseError("header line after data rows", line_no);
      std::string value;
      ls >> value;
      std::string rest;
      if (ls >> rest) throw ParseError("malformed header line", line_no);
      const std::string key = lower(first);
      if (key == "ncols") {
        r.ncols = static_cast<int>(parse_int(value, line_no));
        saw_ncols = true;
      } else if (key == "nrows") {
        r.nrows = static_cast<int>(parse_int(value, line_no));
        saw_nrows = true;
      } else if (key == "xllcorner") {
        r.xllcorner = parse_number(value, line_no);
      } else if (key == "yllcorner") {
        r.yllcorner = parse_number(value, line_no);
      } else if (key == "cellsize") {
        r.cellsize = parse_number(value, line_no);
        saw_cellsize = true;
      } else if (key == "nodata_value") {
        r.nodata = parse_number(value, line_no);
      } else {
        throw ParseError("unknown header key '" + first + "'", line_no);
      }
      continue;
    }
    // data row
    if (!saw_ncols || !saw_nrows)
      throw ParseError("data before the ncols/nrows header", line_no);
    if (r.ncols < 1 || r.nrows < 1) throw ParseError("grid dimensions must be positive", line_no);
    if (r.values.size() == 0) r.values = Field2D(r.ncols, r.nrows);
    if (data_row >= r.nrows) throw ParseError("more data rows than nrows", line_no);
    std::istringstream row(t);
    std::string token;
    int col = 0;
    while (row >> token) {
      if (col >= r.ncols)
        throw ParseError("row " + std::to_string(data_row + 1) + " has more than " +
                             std::to_string(r.ncols) + " values",
                         line_no);
      const double v = parse_number(token, line_no);
      if (v != r.nodata && !std::isfinite(v))
        throw ParseError("non-finite raster value", line_no);
      r.values(col, r.nrows - 1 - static_cast<int>(data_row)) = v;
      ++col;
    }
    if (col != r.ncols)
      throw ParseError("row " + std::to_string(data_row + 1) + " has " + std::to_string(col) +
                           " values, expected " + std::to_string(r.ncols),
                       line_no);
    ++data_row;
  }
  if (!saw_ncols || !saw_nrows || !saw_cellsize)
    throw ParseError("missing ncols/nrows/cellsize header", line_no);
  if (!(r.cellsize > 0.0)) throw ParseError("cellsize must be > 0", 0);
  if (data_row != r.nrows)
    throw ParseError("expected " + std::to_string(r.nrows) + " data rows, found " +
                         std::to_string(data_row),
                     line_no);
  return r;
}

RasterFile read_raster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open raster file: " + path);
  return parse_raster(in);
}

void write_raster(const RasterFile& raster, const std::string& path) {
  std::string out;
  out += "ncols " + std::to_string(raster.ncols) + "\n";
  out += "nrows " + std::to_string(raster.nrows) + "\n";
  out += "xllcorner ";
  format17(out, raster.xllcorner);
  out += "\nyllcorner ";
  format17(out, raster.yllcorner);
  out += "\ncellsize ";
  format17(out, raster.cellsize);
  out += "\nNODATA_value ";
  format17(out, raster.nodata);
  out += "\n";
  for (int j = raster.nrows - 1; j >= 0; --j) {
    for (int i = 0; i < raster.ncols; ++i) {
      if (i) out += " ";
      format17(out, raster.values(i, j));
    }
    out += "\n";
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write raster file: " + path);
  f << out;
}

namespace {

BoundaryKind parse_boundary(const std::string& value, long line) {
  if (value == "wall") return BoundaryKind::wall;
  if (value == "outflow") return BoundaryKind::outflow;
  throw ParseError("boundary must be 'wall' or 'outflow', got '" + value + "'", line);
}

}  // namespace

Config Config::parse(std::istream& in, const std::filesystem::path& base_dir) {
  Config cfg;
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base_dir / fp).lexically_normal().string();
  };
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError("expected 'key = value'", line_no);

    if (key == "model") {
      if (value == "simplified")
        cfg.model = ModelKind::simplified;
      else if (value == "full")
        cfg.model = ModelKind::full;
      else
        throw ParseError("model must be 'simplified' or 'full'", line_no);
    } else if (key == "terrain_path") {
      cfg.terrain_path = resolve(value);
    } else if (key == "porosity_path") {
      cfg.porosity_path = resolve(value);
    } else if (key == "stem_density_path") {
      cfg.stem_density_path = resolve(value);
    } else if (key == "stem_diameter") {
      cfg.stem_diameter = parse_number(value, line_no);
    } else if (key == "cfl") {
      cfg.cfl = parse_number(value, line_no);
    } else if (key == "t_end") {
      cfg.t_end = parse_number(value, line_no);
    } else if (key == "output_every") {
      cfg.output_every = parse_number(value, line_no);
    } else if (key == "dry_threshold") {
      cfg.dry_threshold = parse_number(value, line_no);
    } else if (key == "g") {
      cfg.g = parse_number(value, line_no);
    } else if (key == "C_d") {
      cfg.C_d = parse_number(value, line_no);
    } else if (key == "C_b") {
      cfg.C_b = parse_number(value, line_no);
    } else if (key == "rain_rate") {
      cfg.rain_rate = parse_number(value, line_no);
    } else if (key == "infiltration_rate") {
      cfg.infiltration_rate = parse_number(value, line_no);
    } else if (key == "boundary_north") {
      cfg.boundary_north = parse_boundary(value, line_no);
    } else if (key == "boundary_south") {
      cfg.boundary_south = parse_boundary(value, line_no);
    } else if (key == "boundary_east") {
      cfg.boundary_east = parse_boundary(value, line_no);
    } else if (key == "boundary_west") {
      cfg.boundary_west = parse_boundary(value, line_no);
    } else if (key == "output_dir") {
      cfg.output_dir = resolve(value);
    } else if (key == "initial_level") {
      cfg.initial_level = parse_number(value, line_no);
    } else if (key == "initial_depth_path") {
      cfg.initial_depth_path = resolve(value);
    } else {
      throw ParseError("unknown configuration key '" + key + "'", line_no);
    }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path);
  return parse(in, std::filesystem::path(path).parent_path());
}

ClosureParams Config::closure_params() const { return ClosureParams(C_d, stem_diameter, C_b, g); }

RunConfig Config::run_config() const {
  RunConfig rc;
  rc.kind = model;
  rc.cfl = cfl;
  rc.t_end = t_end;
  rc.output_every = output_every;
  rc.h_dry = dry_threshold;
  rc.forcing = Forcing{rain_rate, infiltration_rate};
  rc.closure = closure_params();
  return rc;
}

Scenario load_scenario(const Config& cfg) {
  if (cfg.terrain_path.empty()) throw InvalidInput("config is missing terrain_path");
  const RasterFile terrain = read_raster(cfg.terrain_path);
  if (terrain.has_nodata()) throw InvalidInput("terrain raster contains NODATA cells");
  const int n1 = terrain.ncols, n2 = terrain.nrows;

  Field2D theta(n1, n2, 1.0);
  if (cfg.porosity_path) {
    const RasterFile por = read_raster(*cfg.porosity_path);
    if (por.ncols != n1 || por.nrows != n2)
      throw InvalidInput("porosity raster shape does not match the terrain");
    if (por.has_nodata()) throw InvalidInput("porosity raster contains NODATA cells");
    theta = por.values;
  } else if (cfg.stem_density_path) {
    const RasterFile stems = read_raster(*cfg.stem_density_path);
    if (stems.ncols != n1 || stems.nrows != n2)
      throw InvalidInput("stem density raster shape does not match the terrain");
    if (stems.has_nodata()) throw InvalidInput("stem density raster contains NODATA cells");
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i)
        theta(i, j) = porosity_from_stems(stems.values(i, j), cfg.stem_diameter);
  }

  BoundarySet bc{cfg.boundary_west, cfg.boundary_east, cfg.boundary_south, cfg.boundary_north};
  Grid grid(n1, n2, terrain.cellsize, terrain.cellsize, terrain.values, theta, bc, cfg.model,
            terrain.xllcorner, terrain.yllcorner);

  FlowField flow = FlowField::zeros(grid);
  if (cfg.initial_level) {
    for (int jp = 1; jp <= n2; ++jp)
      for (int ip = 1; ip <= n1; ++ip)
        flow.h(ip, jp) = std::max(0.0, *cfg.initial_level - grid.z()(ip, jp));
  }
  if (cfg.initial_depth_path) {
    const RasterFile depth = read_raster(*cfg.initial_depth_path);
    if (depth.ncols != n1 || depth.nrows != n2)
      throw InvalidInput("initial depth raster shape does not match the terrain");
    if (depth.has_nodata()) throw InvalidInput("initial depth raster contains NODATA cells");
    for (int jp = 1; jp <= n2; ++jp)
      for (int ip = 1; ip <= n1; ++ip) {
        const double h = depth.values(ip - 1, jp - 1);
        if (!(h >= 0.0)) throw InvalidInput("initial depth must be >= 0");
        flow.h(ip, jp) = h;
      }
  }
  return Scenario{std::move(grid), std::move(flow)};
}

void write_snapshot(const FlowField& flow, const Grid& grid, const std::string& path) {
  std::string out = "y1,y2,h,v1,v2,theta,z\n";
  for (int jp = 1; jp <= grid.n2(); ++jp)
    for (int ip = 1; ip <= grid.n1(); ++ip) {
      format17(out, grid.cell_y1(ip - 1));
      out += ",";
      format17(out, grid.cell_y2(jp - 1));
      out += ",";
      format17(out, flow.h(ip, jp));
      out += ",";
      format17(out, flow.v1(ip, jp));
      out += ",";
      format17(out, flow.v2(ip, jp));
      out += ",";
      format17(out, grid.theta()(ip, jp));
      out += ",";
      format17(out, grid.z()(ip, jp));
      out += "\n";
    }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write snapshot file: " + path);
  f << out;
}

void write_diagnostics(const DiagnosticsReport& report, const std::string& path) {
  std::string out = "t,mass,energy,max_v,lake_residual,mass_budget_residual,energy_budget_residual\n";
  for (std::size_t k = 0; k < report.size(); ++k) {
    format17(out, report.t[k]);
    out += ",";
    format17(out, report.mass[k]);
    out += ",";
    format17(out, report.energy[k]);
    out += ",";
    format17(out, report.max_v[k]);
    out += ",";
    format17(out, report.lake_residual[k]);
    out += ",";
    format17(out, report.mass_budget_residual[k]);
    out += ",";
    format17(out, report.energy_budget_residual[k]);
    out += "\n";
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write diagnostics file: " + path);
  f << out;
}

}  // namespace vegflow
