#include "vegflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vegflow/errors.hpp"
#include "vegflow/verify.hpp"

namespace vegflow {

void RunConfig::validate() const {
  if (!(cfl > 0.0) || !(cfl <= 1.0)) throw InvalidInput("cfl must be in (0, 1]");
  if (!(t_end >= 0.0)) throw InvalidInput("end time must be >= 0");
  if (!(h_dry > 0.0)) throw InvalidInput("dry threshold must be > 0");
  if (!(forcing.rain >= 0.0) || !(forcing.infiltration >= 0.0))
    throw InvalidInput("forcing rates must be >= 0");
}

namespace {

Field2D pad_raster(const Field2D& cells) {
  const int n1 = cells.n1(), n2 = cells.n2();
  Field2D out(n1 + 2, n2 + 2);
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) out(i + 1, j + 1) = cells(i, j);
  for (int j = 1; j <= n2; ++j) {
    out(0, j) = out(1, j);
    out(n1 + 1, j) = out(n1, j);
  }
  for (int i = 0; i <= n1 + 1; ++i) {
    out(i, 0) = out(i, 1);
    out(i, n2 + 1) = out(i, n2);
  }
  return out;
}

GeometryCoefficients face_average(const GeometryCoefficients& a, const GeometryCoefficients& b) {
  GeometryCoefficients f;
  f.beta = 0.5 * (a.beta + b.beta);
  f.nu3 = 0.5 * (a.nu3 + b.nu3);
  f.z = 0.5 * (a.z + b.z);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      f.beta_cov[p][q] = 0.5 * (a.beta_cov[p][q] + b.beta_cov[p][q]);
      f.beta_con[p][q] = 0.5 * (a.beta_con[p][q] + b.beta_con[p][q]);
      for (int c = 0; c < 2; ++c) f.gamma[c][p][q] = 0.5 * (a.gamma[c][p][q] + b.gamma[c][p][q]);
    }
  return f;
}

}  // namespace

Grid::Grid(int n1, int n2, double d1, double d2, const Field2D& z_cells, const Field2D& theta_cells,
           BoundarySet bc, ModelKind kind, double x0, double y0)
    : n1_(n1), n2_(n2), d1_(d1), d2_(d2), x0_(x0), y0_(y0), kind_(kind), bc_(bc) {
  if (n1 < 3 || n2 < 3) throw InvalidInput("grid needs at least 3x3 cells");
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw InvalidInput("grid spacings must be > 0");
  if (z_cells.n1() != n1 || z_cells.n2() != n2 || theta_cells.n1() != n1 || theta_cells.n2() != n2)
    throw InvalidInput("raster shapes do not match the grid");
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      if (!std::isfinite(z_cells(i, j))) throw InvalidInput("terrain raster has non-finite values");
      const double th = theta_cells(i, j);
      if (!(th > 0.0) || !(th <= 1.0)) throw InvalidInput("porosity must be in (0, 1]");
    }

  z_ = pad_raster(z_cells);
  theta_ = pad_raster(theta_cells);
  // Outflow ghosts continue the bed slope linearly: a copied ghost bed
  // flattens the exit face, which turns any backwater into a stable lake
  // that never drains. Walls keep the mirrored (copied) bed so that the
  // no-flux cancellation stays exact.
  if (bc.west == BoundaryKind::outflow && n1 >= 2)
    for (int jp = 1; jp <= n2; ++jp) z_(0, jp) = 2.0 * z_(1, jp) - z_(2, jp);
  if (bc.east == BoundaryKind::outflow && n1 >= 2)
    for (int jp = 1; jp <= n2; ++jp) z_(n1 + 1, jp) = 2.0 * z_(n1, jp) - z_(n1 - 1, jp);
  if (bc.south == BoundaryKind::outflow && n2 >= 2)
    for (int ip = 1; ip <= n1; ++ip) z_(ip, 0) = 2.0 * z_(ip, 1) - z_(ip, 2);
  if (bc.north == BoundaryKind::outflow && n2 >= 2)
    for (int ip = 1; ip <= n1; ++ip) z_(ip, n2 + 1) = 2.0 * z_(ip, n2) - z_(ip, n2 - 1);

  coeffs_.assign(static_cast<std::size_t>(n1 + 2) * (n2 + 2), GeometryCoefficients{});
  if (kind == ModelKind::full) {
    const SurfaceChart chart = SurfaceChart::build(z_cells, d1, d2);
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i)
        coeffs_[static_cast<std::size_t>(j + 1) * (n1 + 2) + (i + 1)] =
            GeometryCoefficients::from_point(chart.point(i, j));
  } else {
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i)
        coeffs_[static_cast<std::size_t>(j + 1) * (n1 + 2) + (i + 1)].z = z_cells(i, j);
  }
  // Ghost coefficients copy the adjacent interior cell.
  auto at = [&](int ip, int jp) -> GeometryCoefficients& {
    return coeffs_[static_cast<std::size_t>(jp) * (n1 + 2) + ip];
  };
  for (int jp = 1; jp <= n2; ++jp) {
    at(0, jp) = at(1, jp);
    at(n1 + 1, jp) = at(n1, jp);
  }
  for (int ip = 0; ip <= n1 + 1; ++ip) {
    at(ip, 0) = at(ip, 1);
    at(ip, n2 + 1) = at(ip, n2);
  }
}

FlowField FlowField::zeros(const Grid& grid) {
  FlowField f;
  f.h = Field2D(grid.n1() + 2, grid.n2() + 2);
  f.v1 = Field2D(grid.n1() + 2, grid.n2() + 2);
  f.v2 = Field2D(grid.n1() + 2, grid.n2() + 2);
  return f;
}

CellFace hydrostatic_reconstruct(const FaceCells& left, const FaceCells& right) {
  CellFace f;
  f.z_star = std::max(left.z, right.z);
  f.theta_star = std::min(left.theta, right.theta);
  f.left = left.state;
  f.right = right.state;
  f.left.h = std::max(0.0, left.state.h + left.z - f.z_star);
  f.right.h = std::max(0.0, right.state.h + right.z - f.z_star);
  return f;
}

Vec3 numerical_flux(const PrimitiveState& left, const PrimitiveState& right, int axis,
                    double theta, const GeometryCoefficients& face_geom, double g,
                    ModelKind kind) {
  const FluxPair fl = physical_flux(left, theta, face_geom, g, kind);
  const FluxPair fr = physical_flux(right, theta, face_geom, g, kind);
  const Vec3& fL = (axis == 0) ? fl.f1 : fl.f2;
  const Vec3& fR = (axis == 0) ? fr.f1 : fr.f2;

  const Vec2 n_axis = (axis == 0) ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  const Eigenvalues el = eigenvalues(left, face_geom, n_axis, g, kind);
  const Eigenvalues er = eigenvalues(right, face_geom, n_axis, g, kind);
  const double smax = std::max(std::max(std::abs(el.lambda_minus), std::abs(el.lambda_plus)),
                               std::max(std::abs(er.lambda_minus), std::abs(er.lambda_plus)));

  const double beta = (kind == ModelKind::simplified) ? 1.0 : face_geom.beta;
  const Vec3 uL = conserved_from_primitive(left, theta, beta);
  const Vec3 uR = conserved_from_primitive(right, theta, beta);

  Vec3 f;
  for (int k = 0; k < 3; ++k) f[k] = 0.5 * (fL[k] + fR[k]) - 0.5 * smax * (uR[k] - uL[k]);
  return f;
}

void friction_update(PrimitiveState& s, double theta, double dt,
                     const GeometryCoefficients& geom, const ClosureParams& params,
                     ModelKind kind) {
  const double K = friction_coefficient(s.h, theta, params);
  if (K == 0.0) return;
  const double speed = std::sqrt(speed_squared(s, geom, kind));
  const double denom = 1.0 + dt * K * speed / (theta * s.h);
  s.v1 /= denom;
  s.v2 /= denom;
}

void fill_ghosts(FlowField& flow, const Grid& grid) {
  const int n1 = grid.n1(), n2 = grid.n2();
  const BoundarySet& bc = grid.boundaries();
  for (int jp = 1; jp <= n2; ++jp) {
    const bool wall_w = bc.west == BoundaryKind::wall;
    flow.h(0, jp) = flow.h(1, jp);
    flow.v1(0, jp) = wall_w ? -flow.v1(1, jp) : flow.v1(1, jp);
    flow.v2(0, jp) = flow.v2(1, jp);
    const bool wall_e = bc.east == BoundaryKind::wall;
    flow.h(n1 + 1, jp) = flow.h(n1, jp);
    flow.v1(n1 + 1, jp) = wall_e ? -flow.v1(n1, jp) : flow.v1(n1, jp);
    flow.v2(n1 + 1, jp) = flow.v2(n1, jp);
  }
  for (int ip = 1; ip <= n1; ++ip) {
    const bool wall_s = bc.south == BoundaryKind::wall;
    flow.h(ip, 0) = flow.h(ip, 1);
    flow.v1(ip, 0) = flow.v1(ip, 1);
    flow.v2(ip, 0) = wall_s ? -flow.v2(ip, 1) : flow.v2(ip, 1);
    const bool wall_n = bc.north == BoundaryKind::wall;
    flow.h(ip, n2 + 1) = flow.h(ip, n2);
    flow.v1(ip, n2 + 1) = flow.v1(ip, n2);
    flow.v2(ip, n2 + 1) = wall_n ? -flow.v2(ip, n2) : flow.v2(ip, n2);
  }
}

StepStats step(FlowField& flow, const Grid& grid, const RunConfig& cfg, double dt) {
  const int n1 = grid.n1(), n2 = grid.n2();
  const double g = cfg.closure.g;
  const ModelKind kind = cfg.kind;
  StepStats stats;

  fill_ghosts(flow, grid);

  Field2D du0(n1 + 2, n2 + 2), du1(n1 + 2, n2 + 2), du2(n1 + 2, n2 + 2);

  for (int axis = 0; axis < 2; ++axis) {
    const double dl = (axis == 0) ? grid.d1() : grid.d2();
    const double face_len = (axis == 0) ? grid.d2() : grid.d1();
    const double lam = dt / dl;
    const int fmax = (axis == 0) ? n1 : n2;
    const int tmax = (axis == 0) ? n2 : n1;

    for (int tt = 1; tt <= tmax; ++tt) {
      for (int ff = 0; ff <= fmax; ++ff) {
        const int ipL = (axis == 0) ? ff : tt;
        const int jpL = (axis == 0) ? tt : ff;
        const int ipR = (axis == 0) ? ff + 1 : tt;
        const int jpR = (axis == 0) ? tt : ff + 1;

        const FaceCells L{{flow.h(ipL, jpL), flow.v1(ipL, jpL), flow.v2(ipL, jpL)},
                          grid.z()(ipL, jpL),
                          grid.theta()(ipL, jpL)};
        const FaceCells R{{flow.h(ipR, jpR), flow.v1(ipR, jpR), flow.v2(ipR, jpR)},
                          grid.z()(ipR, jpR),
                          grid.theta()(ipR, jpR)};
        const CellFace face = hydrostatic_reconstruct(L, R);
        const GeometryCoefficients fg =
            face_average(grid.coeff(ipL, jpL), grid.coeff(ipR, jpR));

        const Vec3 F = numerical_flux(face.left, face.right, axis, face.theta_star, fg, g, kind);

        // Interface pressure evaluated through the same flux routine keeps
        // the lake-at-rest cancellation bitwise exact.
        const FluxPair wbL =
            physical_flux({face.left.h, 0.0, 0.0}, face.theta_star, fg, g, kind);
        const FluxPair wbR =
            physical_flux({face.right.h, 0.0, 0.0}, face.theta_star, fg, g, kind);
        const Vec3& pL = (axis == 0) ? wbL.f1 : wbL.f2;
        const Vec3& pR = (axis == 0) ? wbR.f1 : wbR.f2;

        const bool l_interior = ff >= 1;
        const bool r_interior = ff <= fmax - 1;
        if (l_interior) {
          du0(ipL, jpL) -= lam * F.x;
          du1(ipL, jpL) -= lam * (F.y - pL.y);
          du2(ipL, jpL) -= lam * (F.z - pL.z);
        }
        if (r_interior) {
          du0(ipR, jpR) += lam * F.x;
          du1(ipR, jpR) += lam * (F.y - pR.y);
          du2(ipR, jpR) += lam * (F.z - pR.z);
        }

        if (!l_interior || !r_interior) {
          const double sign = l_interior ? 1.0 : -1.0;  // outward wrt the domain
          const double mass_rate = sign * F.x * face_len;
          stats.boundary_mass_outflux += mass_rate;
          // Head of the donor cell weighs the boundary energy flux.
          const bool upwind_left = (mass_rate > 0.0) == l_interior;
          const int ipU = upwind_left ? ipL : ipR;
          const int jpU = upwind_left ? jpL : jpR;
          const PrimitiveState su{flow.h(ipU, jpU), flow.v1(ipU, jpU), flow.v2(ipU, jpU)};
          const EnergyDensity e =
              energy_density(su, grid.z()(ipU, jpU), grid.coeff(ipU, jpU), g, kind);
          stats.boundary_energy_outflux += mass_rate * e.head;
        }
      }
    }
  }

  const double area = grid.cell_area();
  for (int jp = 1; jp <= n2; ++jp) {
    for (int ip = 1; ip <= n1; ++ip) {
      const double theta = grid.theta()(ip, jp);
      const GeometryCoefficients& gc = grid.coeff(ip, jp);
      const double beta = (kind == ModelKind::simplified) ? 1.0 : gc.beta;
      const PrimitiveState old{flow.h(ip, jp), flow.v1(ip, jp), flow.v2(ip, jp)};
      const double m_old = beta * theta * old.h;

      double dm = du0(ip, jp);
      double q1 = m_old * old.v1 + du1(ip, jp);
      double q2 = m_old * old.v2 + du2(ip, jp);

      // Frame-variation coupling (zero for identity coefficients).
      if (kind == ModelKind::full) {
        const double v[2] = {old.v1, old.v2};
        for (int c = 0; c < 2; ++c) {
          double conv = 0.0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) conv += gc.gamma[c][a][b] * v[a] * v[b];
          const double src = -dt * beta * theta * old.h * conv;
          if (c == 0)
            q1 += src;
          else
            q2 += src;
        }
      }

      // Rain in full, infiltration clipped to the available water.
      const double rain_mass = dt * beta * cfg.forcing.rain;
      const double infil_mass = dt * beta * theta * cfg.forcing.infiltration;
      if (rain_mass != 0.0 || infil_mass != 0.0) {
        const double avail = m_old + dm + rain_mass;
        const double applied_infil = std::min(infil_mass, std::max(avail, 0.0));
        dm += rain_mass - applied_infil;
        const double applied_rate = (rain_mass - applied_infil) / dt;
        stats.forcing_mass_rate += applied_rate * area;
        const double w = g * (gc.z + old.h * ((kind == ModelKind::simplified) ? 1.0 : gc.nu3));
        const double v2 = speed_squared(old, gc, kind);
        stats.forcing_energy_rate += applied_rate * (w - 0.5 * v2) * area;
      }

      // Incremental depth update: a zero increment leaves the cell bitwise
      // untouched, which keeps exact rest states exact fixed points.
      PrimitiveState s;
      s.h = old.h + dm / (beta * theta);
      if (s.h < 0.0) s.h = 0.0;  // clip flux round-off at dry fronts
      if (s.h < cfg.h_dry) {
        s.v1 = 0.0;
        s.v2 = 0.0;
      } else {
        const double m_new = beta * theta * s.h;
        s.v1 = q1 / m_new;
        s.v2 = q2 / m_new;
      }

      if (s.h >= cfg.h_dry) {
        friction_update(s, theta, dt, gc, cfg.closure, kind);
        const double K = friction_coefficient(s.h, theta, cfg.closure);
        if (K != 0.0) {
          const double speed = std::sqrt(speed_squared(s, gc, kind));
          stats.friction_dissipation_rate += beta * K * speed * speed * speed * area;
        }
      }

      if (!std::isfinite(s.h) || !std::isfinite(s.v1) || !std::isfinite(s.v2))
        throw SolverBlowup(ip - 1, jp - 1, flow.t + dt, "non-finite state after time step");

      flow.h(ip, jp) = s.h;
      flow.v1(ip, jp) = s.v1;
      flow.v2(ip, jp) = s.v2;
    }
  }

  flow.t += dt;
  return stats;
}

double cfl_dt(const FlowField& flow, const Grid& grid, const RunConfig& cfg) {
  const double g = cfg.closure.g;
  double best = std::numeric_limits<double>::infinity();
  bool any_wet = false;
  const double dmin = std::min(grid.d1(), grid.d2());
  for (int jp = 1; jp <= grid.n2(); ++jp)
    for (int ip = 1; ip <= grid.n1(); ++ip) {
      const double h = flow.h(ip, jp);
      if (h < cfg.h_dry) continue;
      any_wet = true;
      const GeometryCoefficients& gc = grid.coeff(ip, jp);
      const double nu3 = (cfg.kind == ModelKind::simplified) ? 1.0 : gc.nu3;
      const double b11 = (cfg.kind == ModelKind::simplified) ? 1.0 : gc.beta_con[0][0];
      const double b22 = (cfg.kind == ModelKind::simplified) ? 1.0 : gc.beta_con[1][1];
      const double s1 = std::abs(flow.v1(ip, jp)) + std::sqrt(g * nu3 * h * b11);
      const double s2 = std::abs(flow.v2(ip, jp)) + std::sqrt(g * nu3 * h * b22);
      best = std::min(best, dmin / std::max(s1, s2));
    }
  if (!any_wet) {
    if (cfg.output_every > 0.0) return cfg.output_every;
    return cfg.t_end > 0.0 ? cfg.t_end : 1.0;
  }
  return cfg.cfl * best;
}

BoundaryFluxes boundary_fluxes(const FlowField& flow, const Grid& grid, const RunConfig& cfg) {
  FlowField copy = flow;
  const int n1 = grid.n1(), n2 = grid.n2();
  fill_ghosts(copy, grid);
  const double g = cfg.closure.g;
  BoundaryFluxes out;

  auto face = [&](int ipL, int jpL, int ipR, int jpR, int axis, bool low_side) {
    const FaceCells L{{copy.h(ipL, jpL), copy.v1(ipL, jpL), copy.v2(ipL, jpL)},
                      grid.z()(ipL, jpL),
                      grid.theta()(ipL, jpL)};
    const FaceCells R{{copy.h(ipR, jpR), copy.v1(ipR, jpR), copy.v2(ipR, jpR)},
                      grid.z()(ipR, jpR),
                      grid.theta()(ipR, jpR)};
    const CellFace fc = hydrostatic_reconstruct(L, R);
    const GeometryCoefficients fg = face_average(grid.coeff(ipL, jpL), grid.coeff(ipR, jpR));
    const Vec3 F = numerical_flux(fc.left, fc.right, axis, fc.theta_star, fg, g, cfg.kind);
    const double face_len = (axis == 0) ? grid.d2() : grid.d1();
    const double sign = low_side ? -1.0 : 1.0;
    const double mass_rate = sign * F.x * face_len;
    out.mass += mass_rate;
    const bool upwind_left = (mass_rate > 0.0) != low_side;
    const int ipU = upwind_left ? ipL : ipR;
    const int jpU = upwind_left ? jpL : jpR;
    const PrimitiveState su{copy.h(ipU, jpU), copy.v1(ipU, jpU), copy.v2(ipU, jpU)};
    const EnergyDensity e =
        energy_density(su, grid.z()(ipU, jpU), grid.coeff(ipU, jpU), g, cfg.kind);
    out.energy += mass_rate * e.head;
  };

  for (int jp = 1; jp <= n2; ++jp) {
    face(0, jp, 1, jp, 0, true);
    face(n1, jp, n1 + 1, jp, 0, false);
  }
  for (int ip = 1; ip <= n1; ++ip) {
    face(ip, 0, ip, 1, 1, true);
    face(ip, n2, ip, n2 + 1, 1, false);
  }
  return out;
}

RunResult run(const RunConfig& cfg, const Grid& grid, FlowField initial) {
  cfg.validate();
  RunResult result;
  FlowField flow = std::move(initial);
  flow.t = 0.0;

  auto record = [&](const FlowField& f, const StepStats* stats, const FlowField* before,
                    double dt) {
    DiagnosticsReport& d = result.diagnostics;
    d.t.push_back(f.t);
    d.mass.push_back(verify::total_mass(f, grid));
    d.energy.push_back(verify::total_energy(f, grid, cfg));
    d.max_v.push_back(verify::max_speed(f, grid, cfg));
    d.lake_residual.push_back(verify::lake_residual(f, grid, cfg));
    if (stats && before) {
      const double m0 = d.mass[d.mass.size() - 2];
      const double m1 = d.mass.back();
      d.mass_budget_residual.push_back(verify::mass_budget_residual(m0, m1, dt, *stats));
      d.energy_budget_residual.push_back(
          verify::energy_budget_residual(*before, f, grid, cfg, dt, stats));
    } else {
      d.mass_budget_residual.push_back(0.0);
      d.energy_budget_residual.push_back(0.0);
    }
  };

  result.snapshots.push_back(flow);
  record(flow, nullptr, nullptr, 0.0);

  if (cfg.t_end <= 0.0) return result;

  const double eps_t = 1e-12 * std::max(1.0, cfg.t_end);
  double next_output =
      (cfg.output_every > 0.0) ? cfg.output_every : std::numeric_limits<double>::infinity();
  FlowField before = flow;

  while (flow.t < cfg.t_end - eps_t) {
    double dt = cfl_dt(flow, grid, cfg);
    dt = std::min(dt, cfg.t_end - flow.t);
    if (next_output < std::numeric_limits<double>::infinity())
      dt = std::min(dt, next_output - flow.t);
    if (!(dt > 0.0)) throw Error("time step collapsed to zero");

    before = flow;
    const StepStats stats = step(flow, grid, cfg, dt);
    record(flow, &stats, &before, dt);

    if (flow.t >= next_output - eps_t) {
      result.snapshots.push_back(flow);
      next_output += cfg.output_every;
    }
  }
  if (result.snapshots.back().t < cfg.t_end - eps_t) result.snapshots.push_back(flow);
  return result;
}

}  // namespace vegflow
