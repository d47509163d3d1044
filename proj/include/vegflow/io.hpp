#ifndef VEGFLOW_IO_HPP_
#define VEGFLOW_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "vegflow/diagnostics.hpp"
#include "vegflow/field.hpp"
#include "vegflow/solver.hpp"

namespace vegflow {

// ASCII-grid raster: header keys ncols, nrows, xllcorner, yllcorner,
// cellsize, NODATA_value, then nrows rows of ncols values with the first row
// northernmost. In-memory (i, j) has j = 0 at the south edge.
struct RasterFile {
  int ncols = 0;
  int nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 1.0;
  double nodata = -9999.0;
  Field2D values;

  bool has_nodata() const;
};

RasterFile parse_raster(std::istream& in);
RasterFile read_raster(const std::string& path);
void write_raster(const RasterFile& raster, const std::string& path);

// Line-oriented `key = value` run configuration; '#' starts a comment.
// Unknown keys are rejected; relative paths resolve against the config file.
struct Config {
  ModelKind model = ModelKind::simplified;
  std::string terrain_path;
  std::optional<std::string> porosity_path;
  std::optional<std::string> stem_density_path;
  double stem_diameter = 0.01;
  double cfl = 0.5;
  double t_end = 0.0;
  double output_every = 0.0;
  double dry_threshold = 1e-8;
  double g = 9.81;
  double C_d = 0.0;
  double C_b = 30.0;
  double rain_rate = 0.0;
  double infiltration_rate = 0.0;
  BoundaryKind boundary_north = BoundaryKind::wall;
  BoundaryKind boundary_south = BoundaryKind::wall;
  BoundaryKind boundary_east = BoundaryKind::wall;
  BoundaryKind boundary_west = BoundaryKind::wall;
  std::string output_dir = ".";
  // Initial state: a constant free-surface level and/or a depth raster;
  // defaults to a dry domain.
  std::optional<double> initial_level;
  std::optional<std::string> initial_depth_path;

  static Config parse(std::istream& in, const std::filesystem::path& base_dir);
  static Config parse_file(const std::string& path);

  ClosureParams closure_params() const;
  RunConfig run_config() const;
};

struct Scenario {
  Grid grid;
  FlowField initial;
};

// Reads the rasters named by the config and assembles the grid and initial
// state. NODATA cells in terrain or porosity are rejected.
Scenario load_scenario(const Config& cfg);

// CSV snapshot `y1,y2,h,v1,v2,theta,z`, one row per cell, row-major from the
// south row, 17 significant digits.
void write_snapshot(const FlowField& flow, const Grid& grid, const std::string& path);

// CSV time series `t,mass,energy,max_v,lake_residual,mass_budget_residual,
// energy_budget_residual`.
void write_diagnostics(const DiagnosticsReport& report, const std::string& path);

}  // namespace vegflow

#endif  // VEGFLOW_IO_HPP_
