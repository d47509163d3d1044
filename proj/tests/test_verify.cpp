#include "vegflow/verify.hpp"

#include <cmath>

#include "doctest.h"
#include "vegflow/errors.hpp"

using namespace vegflow;

namespace {

// Steady subcritical flow over the classic parabolic bump, from mass
// conservation q = h v and constant head H = z + h + q^2/(2 g h^2).
struct BumpFlow {
  double q = 4.42;
  double h_out = 2.0;
  double g = 9.81;

  double bed(double x) const {
    const double s = (x - 12.5) / 2.0;
    return 0.2 * std::exp(-s * s);
  }
  double head() const { return h_out + q * q / (2.0 * g * h_out * h_out); }
  double depth(double x) const {
    const double rhs = head() - bed(x);
    double h = rhs;  // subcritical branch: start from the still-water depth
    for (int it = 0; it < 80; ++it) {
      const double f = h * h * h - rhs * h * h + q * q / (2.0 * g);
      const double df = 3.0 * h * h - 2.0 * rhs * h;
      const double step = f / df;
      h -= step;
      if (std::abs(step) < 1e-14) break;
    }
    return h;
  }
};

Grid channel_grid(int n1, double length, double width_cells, BoundarySet bc,
                  const std::function<double(double)>& bed, double theta_val = 1.0) {
  const int n2 = static_cast<int>(width_cells);
  const double d = length / n1;
  Field2D z(n1, n2), theta(n1, n2, theta_val);
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) z(i, j) = bed((i + 0.5) * d);
  return Grid(n1, n2, d, d, z, theta, bc, ModelKind::simplified);
}

}  // namespace

TEST_CASE("pencil oracle reproduces the closed-form eigenvalues") {
  SUBCASE("still water, simplified") {
    const auto r = verify::jacobian_eigen_oracle({1.0, 0.0, 0.0}, 1.0,
                                                 GeometryCoefficients::planar(), {1.0, 0.0}, 9.81,
                                                 ModelKind::simplified);
    CHECK(r[0] == doctest::Approx(-3.132092).epsilon(1e-6));
    CHECK(std::abs(r[1]) < 1e-6);
    CHECK(r[2] == doctest::Approx(3.132092).epsilon(1e-6));
  }
  SUBCASE("middle root is the advective speed") {
    const PrimitiveState s{0.7, 1.3, -0.5};
    const Vec2 n{0.6, 0.8};
    const auto r = verify::jacobian_eigen_oracle(s, 0.8, GeometryCoefficients::planar(), n, 9.81,
                                                 ModelKind::simplified);
    CHECK(r[1] == doctest::Approx(s.v1 * n.x + s.v2 * n.y).epsilon(1e-6));
  }
  SUBCASE("full model with tilted geometry") {
    MongeJet jet{0.0, 0.5, -0.3, 0.2, -0.1, 0.3};
    const GeometryCoefficients geom =
        GeometryCoefficients::from_point(surface_point_from_jet(jet));
    const PrimitiveState s{2.0, 1.0, 0.0};
    // direction normalised in the contravariant metric
    Vec2 n{1.0, 0.0};
    double nn = geom.beta_con[0][0];
    n.x /= std::sqrt(nn);
    const auto r = verify::jacobian_eigen_oracle(s, 0.9, geom, n, 9.81, ModelKind::full);
    const Eigenvalues ev = eigenvalues(s, geom, n, 9.81, ModelKind::full);
    CHECK(r[0] == doctest::Approx(ev.lambda_minus).epsilon(1e-7));
    CHECK(r[1] == doctest::Approx(ev.lambda_zero).epsilon(1e-7));
    CHECK(r[2] == doctest::Approx(ev.lambda_plus).epsilon(1e-7));
  }
  SUBCASE("near-dry states are rejected") {
    CHECK_THROWS_AS(verify::jacobian_eigen_oracle({1e-10, 0.0, 0.0}, 1.0,
                                                  GeometryCoefficients::planar(), {1.0, 0.0},
                                                  9.81, ModelKind::simplified),
                    IllConditionedPencil);
  }
  SUBCASE("1000 random states per model kind stay within 1e-6") {
    for (const auto& row : verify::eigen_suite(1000, 2024)) {
      INFO(row.case_id, " max deviation ", row.metric);
      CHECK(row.pass);
    }
  }
}

TEST_CASE("dam-break reference solution") {
  const double g = 9.81;
  SUBCASE("equal depths collapse to a constant state") {
    const verify::StokerSolution s(1.0, 1.0, g);
    CHECK(s.depth(-3.0, 2.0) == 1.0);
    CHECK(s.depth(4.0, 2.0) == 1.0);
    CHECK(s.velocity(0.3, 2.0) == 0.0);
  }
  SUBCASE("dry bed front moves at twice the left celerity") {
    const verify::StokerSolution s(1.0, 0.0, g);
    CHECK(s.shock_speed() == doctest::Approx(6.264184).epsilon(1e-6));
    CHECK(s.depth(2.0 * std::sqrt(g) + 0.01, 1.0) == 0.0);
  }
  SUBCASE("wet star state satisfies the jump and rarefaction relations") {
    const verify::StokerSolution s(1.0, 0.2, g);
    const double hs = s.h_star(), us = s.u_star();
    // rarefaction invariant between the left state and the star region
    CHECK(us + 2.0 * std::sqrt(g * hs) == doctest::Approx(2.0 * std::sqrt(g)).epsilon(1e-10));
    // bore mass jump
    CHECK(s.shock_speed() * (hs - 0.2) == doctest::Approx(hs * us).epsilon(1e-10));
    CHECK(hs > 0.2);
    CHECK(hs < 1.0);
  }
  SUBCASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(verify::StokerSolution(0.0, 0.0, g), InvalidInput);
    CHECK_THROWS_AS(verify::StokerSolution(0.5, 1.0, g), InvalidInput);
  }
  SUBCASE("oracle internal consistency rows") {
    for (const auto& row : verify::stoker_suite()) {
      INFO(row.suite, "/", row.case_id, " metric ", row.metric);
      CHECK(row.pass);
    }
  }
}

TEST_CASE("solver converges to the dam-break profile") {
  const double g = 9.81;
  const verify::StokerSolution exact(1.0, 0.2, g);
  const int n1 = 200;
  const double length = 50.0;
  BoundarySet bc;
  bc.west = bc.east = BoundaryKind::outflow;
  const Grid grid = channel_grid(n1, length, 3, bc, [](double) { return 0.0; });
  RunConfig cfg;
  cfg.closure = ClosureParams::frictionless(g);
  cfg.t_end = 5.0;
  FlowField flow = FlowField::zeros(grid);
  for (int jp = 1; jp <= grid.n2(); ++jp)
    for (int ip = 1; ip <= grid.n1(); ++ip)
      flow.h(ip, jp) = (grid.cell_y1(ip - 1) - 25.0 < 0.0) ? 1.0 : 0.2;
  const RunResult r = run(cfg, grid, flow);
  const FlowField& last = r.snapshots.back();
  double mean_abs = 0.0;
  for (int ip = 1; ip <= n1; ++ip) {
    const double x = grid.cell_y1(ip - 1) - 25.0;
    mean_abs += std::abs(last.h(ip, 2) - exact.depth(x, 5.0));
  }
  mean_abs /= n1;
  CHECK(mean_abs < 0.02);
  // the bore sits near the predicted position
  int front = n1;
  for (int ip = 1; ip <= n1; ++ip)
    if (last.h(ip, 2) < 0.5 * (exact.h_star() + 0.2)) {
      front = ip;
      break;
    }
  const double x_front = grid.cell_y1(front - 1) - 25.0;
  CHECK(x_front == doctest::Approx(exact.shock_speed() * 5.0).epsilon(0.05));
}

TEST_CASE("energy budget residual") {
  SUBCASE("lake at rest has a vanishing budget") {
    const int n = 16;
    Field2D z(n, n), theta(n, n, 0.9);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        z(i, j) = std::round((0.3 + 0.2 * std::sin(0.7 * i) * std::cos(0.5 * j)) * 1048576.0) /
                  1048576.0;
    const Grid grid(n, n, 0.5, 0.5, z, theta, BoundarySet{}, ModelKind::simplified);
    RunConfig cfg;
    cfg.closure = ClosureParams(1.0, 0.01, 30.0, 9.81);
    cfg.t_end = 1.0;
    FlowField flow = FlowField::zeros(grid);
    for (int jp = 1; jp <= n; ++jp)
      for (int ip = 1; ip <= n; ++ip) flow.h(ip, jp) = 2.0 - grid.z()(ip, jp);
    FlowField before = flow;
    const double dt = cfl_dt(flow, grid, cfg);
    const StepStats stats = step(flow, grid, cfg, dt);
    const double res = verify::energy_budget_residual(before, flow, grid, cfg, dt, &stats);
    CHECK(std::abs(res) < 1e-12);
    // recomputed boundary fluxes agree with the recorded ones
    const double res2 = verify::energy_budget_residual(before, flow, grid, cfg, dt);
    CHECK(std::abs(res2) < 1e-12);
  }
  SUBCASE("steady vegetated incline converges under refinement") {
    const double S = 0.01, rain = 2e-5, g = 9.81;
    std::vector<double> residuals;
    for (int n1 : {25, 50, 100}) {
      const double length = 50.0;
      BoundarySet bc;
      bc.east = BoundaryKind::outflow;
      const Grid grid =
          channel_grid(n1, length, 3, bc, [&](double x) { return S * (length - x); }, 0.9);
      RunConfig cfg;
      cfg.closure = ClosureParams(1.0, 0.01, 30.0, g);
      cfg.forcing = Forcing{rain, 0.0};
      cfg.t_end = 1.0;
      FlowField flow = FlowField::zeros(grid);
      // march to steady state
      double change = 1.0;
      for (int k = 0; k < 20000 && change > 1e-12; ++k) {
        const FlowField prev = flow;
        step(flow, grid, cfg, cfl_dt(flow, grid, cfg));
        change = 0.0;
        for (int ip = 1; ip <= grid.n1(); ++ip)
          change = std::max(change, std::abs(flow.h(ip, 2) - prev.h(ip, 2)));
      }
      FlowField before = flow;
      const double dt = cfl_dt(flow, grid, cfg);
      const StepStats stats = step(flow, grid, cfg, dt);
      residuals.push_back(
          std::abs(verify::energy_budget_residual(before, flow, grid, cfg, dt, &stats)));
    }
    const double order1 = std::log2(residuals[0] / residuals[1]);
    const double order2 = std::log2(residuals[1] / residuals[2]);
    INFO("residuals ", residuals[0], " ", residuals[1], " ", residuals[2]);
    CHECK(order1 >= 0.7);
    CHECK(order2 >= 0.7);
  }
  SUBCASE("grid mismatch is rejected") {
    const Grid grid = channel_grid(8, 4.0, 3, BoundarySet{}, [](double) { return 0.0; });
    const Grid other = channel_grid(10, 4.0, 3, BoundarySet{}, [](double) { return 0.0; });
    FlowField a = FlowField::zeros(grid);
    FlowField b = FlowField::zeros(other);
    RunConfig cfg;
    CHECK_THROWS_AS(verify::energy_budget_residual(a, b, grid, cfg, 0.1), InvalidInput);
  }
}

TEST_CASE("Bernoulli head along streamlines") {
  SUBCASE("lake at rest is exactly Bernoulli-constant") {
    const int n = 12;
    Field2D z(n, n, 0.25), theta(n, n, 1.0);
    const Grid grid(n, n, 0.5, 0.5, z, theta, BoundarySet{}, ModelKind::simplified);
    RunConfig cfg;
    FlowField flow = FlowField::zeros(grid);
    for (int jp = 1; jp <= n; ++jp)
      for (int ip = 1; ip <= n; ++ip) flow.h(ip, jp) = 1.75;
    CHECK(verify::bernoulli_check(flow, grid, cfg) == 0.0);
  }
  SUBCASE("uniform frictionless flow is Bernoulli-constant") {
    const int n = 12;
    BoundarySet bc;
    bc.west = bc.east = bc.north = bc.south = BoundaryKind::outflow;
    const Grid grid(n, n, 0.5, 0.5, Field2D(n, n, 0.0), Field2D(n, n, 1.0), bc,
                    ModelKind::simplified);
    RunConfig cfg;
    cfg.closure = ClosureParams::frictionless();
    FlowField flow = FlowField::zeros(grid);
    for (int jp = 1; jp <= n; ++jp)
      for (int ip = 1; ip <= n; ++ip) {
        flow.h(ip, jp) = 0.8;
        flow.v1(ip, jp) = 1.1;
      }
    CHECK(verify::bernoulli_check(flow, grid, cfg) < 1e-12);
  }
  SUBCASE("non-steady input is rejected with the measured residual") {
    const int n = 12;
    const Grid grid(n, n, 0.5, 0.5, Field2D(n, n, 0.0), Field2D(n, n, 1.0), BoundarySet{},
                    ModelKind::simplified);
    RunConfig cfg;
    FlowField flow = FlowField::zeros(grid);
    for (int jp = 1; jp <= n; ++jp)
      for (int ip = 1; ip <= n; ++ip) flow.h(ip, jp) = (ip < n / 2) ? 1.0 : 0.3;
    CHECK_THROWS_AS(verify::bernoulli_check(flow, grid, cfg), NotSteady);
  }
  SUBCASE("smooth bump flow: residual decreases under refinement") {
    // The sampled analytic solution has a constant head to round-off; the
    // solver is run until it freezes into its own discrete steady state,
    // whose residual carries the scheme's truncation error.
    const BumpFlow bump;
    std::vector<double> residuals;
    for (int n1 : {100, 200, 400}) {
      BoundarySet bc;
      bc.west = bc.east = BoundaryKind::outflow;
      const Grid grid =
          channel_grid(n1, 25.0, 3, bc, [&](double x) { return bump.bed(x); }, 1.0);
      RunConfig cfg;
      cfg.closure = ClosureParams::frictionless();
      cfg.t_end = 60.0;
      FlowField flow = FlowField::zeros(grid);
      for (int jp = 1; jp <= grid.n2(); ++jp)
        for (int ip = 1; ip <= grid.n1(); ++ip) {
          const double x = grid.cell_y1(ip - 1);
          const double h = bump.depth(x);
          flow.h(ip, jp) = h;
          flow.v1(ip, jp) = bump.q / h;
        }
      const RunResult r = run(cfg, grid, flow);
      residuals.push_back(verify::bernoulli_check(r.snapshots.back(), grid, cfg));
    }
    INFO("residuals ", residuals[0], " ", residuals[1], " ", residuals[2]);
    CHECK(std::log2(residuals[0] / residuals[1]) >= 0.7);
    CHECK(std::log2(residuals[1] / residuals[2]) >= 0.7);
  }
}

TEST_CASE("integral identity suite passes everywhere") {
  for (const auto& row : verify::lemma_suite()) {
    INFO(row.suite, "/", row.case_id, " metric ", row.metric, " limit ", row.limit);
    CHECK(row.pass);
  }
}

TEST_CASE("balance suite passes") {
  for (const auto& row : verify::balance_suite()) {
    INFO(row.suite, "/", row.case_id, " metric ", row.metric, " limit ", row.limit);
    CHECK(row.pass);
  }
}

TEST_CASE("unknown suite name is rejected") {
  CHECK_THROWS_AS(verify::run_suites("bogus"), InvalidInput);
}
