#include <algorithm>
#include <cmath>
#include <limits>

#include "vegflow/errors.hpp"
#include "vegflow/verify.hpp"

namespace vegflow::verify {

namespace {

double beta_of(const Grid& grid, int ip, int jp, const RunConfig& cfg) {
  return cfg.kind == ModelKind::simplified ? 1.0 : grid.coeff(ip, jp).beta;
}

double nu3_of(const Grid& grid, int ip, int jp, const RunConfig& cfg) {
  return cfg.kind == ModelKind::simplified ? 1.0 : grid.coeff(ip, jp).nu3;
}

}  // namespace

double total_mass(const FlowField& flow, const Grid& grid) {
  KahanSum sum;
  const bool simplified = grid.kind() == ModelKind::simplified;
  for (int jp = 1; jp <= grid.n2(); ++jp)
    for (int ip = 1; ip <= grid.n1(); ++ip) {
      const double beta = simplified ? 1.0 : grid.coeff(ip, jp).beta;
      sum.add(beta * grid.theta()(ip, jp) * flow.h(ip, jp));
    }
  return sum.value() * grid.cell_area();
}

double total_energy(const FlowField& flow, const Grid& grid, const RunConfig& cfg) {
  KahanSum sum;
  for (int jp = 1; jp <= grid.n2(); ++jp)
    for (int ip = 1; ip <= grid.n1(); ++ip) {
      const PrimitiveState s{flow.h(ip, jp), flow.v1(ip, jp), flow.v2(ip, jp)};
      const GeometryCoefficients& gc = grid.coeff(ip, jp);
      const EnergyDensity e = energy_density(s, grid.z()(ip, jp), gc, cfg.closure.g, cfg.kind);
      sum.add(beta_of(grid, ip, jp, cfg) * grid.theta()(ip, jp) * s.h * e.mechanical);
    }
  return sum.value() * grid.cell_area();
}

double max_speed(const FlowField& flow, const Grid& grid, const RunConfig& cfg) {
  double m = 0.0;
  for (int jp = 1; jp <= grid.n2(); ++jp)
    for (int ip = 1; ip <= grid.n1(); ++ip) {
      const PrimitiveState s{flow.h(ip, jp), flow.v1(ip, jp), flow.v2(ip, jp)};
      m = std::max(m, std::sqrt(speed_squared(s, grid.coeff(ip, jp), cfg.kind)));
    }
  return m;
}

double lake_residual(const FlowField& flow, const Grid& grid, const RunConfig& cfg) {
  KahanSum level;
  long wet = 0;
  for (int jp = 1; jp <= grid.n2(); ++jp)
    for (int ip = 1; ip <= grid.n1(); ++ip) {
      const double h = flow.h(ip, jp);
      if (h < cfg.h_dry) continue;
      level.add(grid.z()(ip, jp) + h * nu3_of(grid, ip, jp, cfg));
      ++wet;
    }
  if (wet == 0) return 0.0;
  const double mean = level.value() / static_cast<double>(wet);
  double r = 0.0;
  for (int jp = 1; jp <= grid.n2(); ++jp)
    for (int ip = 1; ip <= grid.n1(); ++ip) {
      const double h = flow.h(ip, jp);
      if (h < cfg.h_dry) continue;
      r = std::max(r, std::abs(grid.z()(ip, jp) + h * nu3_of(grid, ip, jp, cfg) - mean));
    }
  return r;
}

double mass_budget_residual(double mass_before, double mass_after, double dt,
                            const StepStats& stats) {
  const double rate = (mass_after - mass_before) / dt;
  const double exchange = stats.forcing_mass_rate - stats.boundary_mass_outflux;
  const double raw = rate - exchange;
  if (raw == 0.0) return 0.0;
  const double scale =
      std::max({std::abs(stats.forcing_mass_rate) + std::abs(stats.boundary_mass_outflux),
                0.5 * (std::abs(mass_before) + std::abs(mass_after)) / dt,
                std::numeric_limits<double>::min()});
  return std::abs(raw) / scale;
}

double energy_budget_residual(const FlowField& before, const FlowField& after, const Grid& grid,
                              const RunConfig& cfg, double dt, const StepStats* stats) {
  if (!before.h.same_shape(after.h) || before.h.n1() != grid.n1() + 2 ||
      before.h.n2() != grid.n2() + 2)
    throw InvalidInput("energy budget needs two snapshots on the same grid");

  const double e0 = total_energy(before, grid, cfg);
  const double e1 = total_energy(after, grid, cfg);

  double boundary, forcing_rate, friction_rate;
  if (stats) {
    boundary = stats->boundary_energy_outflux;
    forcing_rate = stats->forcing_energy_rate;
    friction_rate = stats->friction_dissipation_rate;
  } else {
    boundary = boundary_fluxes(before, grid, cfg).energy;
    KahanSum fsum, ksum;
    const double g = cfg.closure.g;
    for (int jp = 1; jp <= grid.n2(); ++jp)
      for (int ip = 1; ip <= grid.n1(); ++ip) {
        const double theta = grid.theta()(ip, jp);
        const double beta = beta_of(grid, ip, jp, cfg);
        const PrimitiveState s{before.h(ip, jp), before.v1(ip, jp), before.v2(ip, jp)};
        const double vsq = speed_squared(s, grid.coeff(ip, jp), cfg.kind);
        const double w = g * (grid.z()(ip, jp) + s.h * nu3_of(grid, ip, jp, cfg));
        fsum.add(beta * cfg.forcing.combined(theta) * (w - 0.5 * vsq));
        if (s.h >= cfg.h_dry) {
          const double K = friction_coefficient(s.h, theta, cfg.closure);
          ksum.add(beta * K * vsq * std::sqrt(vsq));
        }
      }
    forcing_rate = fsum.value() * grid.cell_area();
    friction_rate = ksum.value() * grid.cell_area();
  }
  return (e1 - e0) / dt + boundary - (forcing_rate - friction_rate);
}

double bernoulli_check(const FlowField& flow, const Grid& grid, const RunConfig& cfg,
                       bool require_steady) {
  RunConfig probe_cfg = cfg;
  probe_cfg.forcing = Forcing{};
  probe_cfg.closure = ClosureParams::frictionless(cfg.closure.g);

  if (require_steady) {
    FlowField probe = flow;
    const double dt = cfl_dt(probe, grid, probe_cfg);
    step(probe, grid, probe_cfg, dt);
    double res = 0.0;
    for (int jp = 1; jp <= grid.n2(); ++jp)
      for (int ip = 1; ip <= grid.n1(); ++ip) {
        res = std::max(res, std::abs(probe.h(ip, jp) - flow.h(ip, jp)));
        res = std::max(res, std::abs(probe.v1(ip, jp) - flow.v1(ip, jp)));
        res = std::max(res, std::abs(probe.v2(ip, jp) - flow.v2(ip, jp)));
      }
    if (res > 1e-10) throw NotSteady("flow is not at a numerical steady state", res);
  }

  // Head field with ghosts, then centred directional derivatives.
  FlowField copy = flow;
  fill_ghosts(copy, grid);
  const int n1 = grid.n1(), n2 = grid.n2();
  Field2D head(n1 + 2, n2 + 2);
  for (int jp = 0; jp <= n2 + 1; ++jp)
    for (int ip = 0; ip <= n1 + 1; ++ip) {
      const PrimitiveState s{copy.h(ip, jp), copy.v1(ip, jp), copy.v2(ip, jp)};
      head(ip, jp) =
          energy_density(s, grid.z()(ip, jp), grid.coeff(ip, jp), cfg.closure.g, cfg.kind).head;
    }
  double worst = 0.0;
  for (int jp = 1; jp <= n2; ++jp)
    for (int ip = 1; ip <= n1; ++ip) {
      if (copy.h(ip, jp) < cfg.h_dry) continue;
      const double d1 = (head(ip + 1, jp) - head(ip - 1, jp)) / (2.0 * grid.d1());
      const double d2 = (head(ip, jp + 1) - head(ip, jp - 1)) / (2.0 * grid.d2());
      worst = std::max(worst, std::abs(copy.v1(ip, jp) * d1 + copy.v2(ip, jp) * d2));
    }
  return worst;
}

}  // namespace vegflow::verify
