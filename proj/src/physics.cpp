#include "vegflow/physics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "vegflow/errors.hpp"

namespace vegflow {

namespace {

// All model formulas are written once against geometric coefficients; the
// simplified model is the identity-coefficient instance of the same code
// path, which keeps the planar reduction bit-exact.
const GeometryCoefficients& effective(const GeometryCoefficients& geom, ModelKind kind) {
  return kind == ModelKind::simplified ? GeometryCoefficients::planar() : geom;
}

}  // namespace

ClosureParams::ClosureParams(double C_d_, double d_, double C_b_, double g_)
    : C_d(C_d_), d(d_), C_b(C_b_), g(g_) {
  if (!(C_d >= 0.0)) throw InvalidInput("drag coefficient must be >= 0");
  if (!(d > 0.0)) throw InvalidInput("stem diameter must be > 0");
  if (!(C_b > 0.0)) throw InvalidInput("Chezy coefficient must be > 0");
  if (!(g > 0.0)) throw InvalidInput("gravity must be > 0");
}

double ClosureParams::alpha_p() const { return 2.0 * C_d / (std::numbers::pi * d); }

ClosureParams ClosureParams::frictionless(double g) {
  return ClosureParams(0.0, 0.01, std::numeric_limits<double>::infinity(), g);
}

double porosity_from_stems(double stem_density, double stem_diameter) {
  if (!(stem_density >= 0.0)) throw InvalidInput("stem density must be >= 0");
  if (!(stem_diameter > 0.0)) throw InvalidInput("stem diameter must be > 0");
  const double theta = 1.0 - stem_density * std::numbers::pi * stem_diameter * stem_diameter / 4.0;
  if (!(theta > 1e-12))
    throw InvalidInput("stem cover occupies the whole area: porosity would be <= 0");
  return theta;
}

double friction_coefficient(double h, double theta, const ClosureParams& params) {
  return params.alpha_p() * h * (1.0 - theta) + params.alpha_s() * theta;
}

const GeometryCoefficients& GeometryCoefficients::planar() {
  static const GeometryCoefficients identity{};
  return identity;
}

GeometryCoefficients GeometryCoefficients::from_point(const SurfacePoint& p) {
  GeometryCoefficients g;
  g.beta = p.beta;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      g.beta_cov[a][b] = p.beta_cov[a][b];
      g.beta_con[a][b] = p.beta_con[a][b];
    }
  g.nu3 = p.nu.z;
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) g.gamma[c][a][b] = p.gamma[c][a][b];
  g.z = p.z;
  return g;
}

double speed_squared(const PrimitiveState& s, const GeometryCoefficients& geom, ModelKind kind) {
  const GeometryCoefficients& gc = effective(geom, kind);
  const double v[2] = {s.v1, s.v2};
  double sum = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) sum += gc.beta_cov[a][b] * v[a] * v[b];
  return sum;
}

Vec3 conserved_from_primitive(const PrimitiveState& s, double theta, double beta) {
  const double m = beta * theta * s.h;
  return {m, m * s.v1, m * s.v2};
}

PrimitiveState primitive_from_conserved(const Vec3& u, double theta, double beta, double h_dry) {
  PrimitiveState s;
  s.h = u.x / (beta * theta);
  if (s.h < h_dry) {
    s.v1 = 0.0;
    s.v2 = 0.0;
  } else {
    s.v1 = u.y / u.x;
    s.v2 = u.z / u.x;
  }
  return s;
}

FluxPair physical_flux(const PrimitiveState& s, double theta, const GeometryCoefficients& geom,
                       double g, ModelKind kind) {
  const GeometryCoefficients& gc = effective(geom, kind);
  const double bt = gc.beta * theta;
  const double v[2] = {s.v1, s.v2};
  const double press = g * gc.nu3 * s.h * s.h * 0.5;
  FluxPair f;
  Vec3* cols[2] = {&f.f1, &f.f2};
  for (int a = 0; a < 2; ++a) {
    Vec3& col = *cols[a];
    col.x = bt * s.h * v[a];
    col.y = bt * (s.h * v[0] * v[a] + gc.beta_con[0][a] * press);
    col.z = bt * (s.h * v[1] * v[a] + gc.beta_con[1][a] * press);
  }
  return f;
}

Vec3 source_terms(const PrimitiveState& s, double theta, const SourceGradients& grads,
                  const GeometryCoefficients& geom, const Forcing& forcing,
                  const ClosureParams& params, ModelKind kind) {
  const GeometryCoefficients& gc = effective(geom, kind);
  const double v[2] = {s.v1, s.v2};

  double grad_btb[2][2];
  double grad_nu3[2];
  if (kind == ModelKind::simplified) {
    // beta = nu3 = 1, beta^{ca} = delta^{ca}: the product gradient reduces to
    // the porosity gradient on the diagonal.
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a) grad_btb[c][a] = (c == a) ? grads.grad_theta[a] : 0.0;
    grad_nu3[0] = grad_nu3[1] = 0.0;
  } else {
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a) grad_btb[c][a] = grads.grad_btb[c][a];
    grad_nu3[0] = grads.grad_nu3[0];
    grad_nu3[1] = grads.grad_nu3[1];
  }

  const double speed = std::sqrt(speed_squared(s, gc, kind));
  const double K = friction_coefficient(s.h, theta, params);

  Vec3 src;
  src.x = gc.beta * forcing.combined(theta);
  double* mom[2] = {&src.y, &src.z};
  for (int c = 0; c < 2; ++c) {
    double conv = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) conv += gc.gamma[c][a][b] * v[a] * v[b];
    double pressure = 0.0;
    for (int a = 0; a < 2; ++a) {
      pressure += gc.beta * theta * gc.beta_con[c][a] *
                  (grads.grad_z[a] + 0.5 * s.h * grad_nu3[a]);
      pressure -= 0.5 * s.h * gc.nu3 * grad_btb[c][a];
    }
    *mom[c] = -gc.beta * theta * s.h * conv - params.g * s.h * pressure -
              gc.beta * K * speed * v[c];
  }
  return src;
}

Eigenvalues eigenvalues(const PrimitiveState& s, const GeometryCoefficients& geom, Vec2 n_cov,
                        double g, ModelKind kind) {
  const GeometryCoefficients& gc = effective(geom, kind);
  const double vn = s.v1 * n_cov.x + s.v2 * n_cov.y;
  // The pencil roots are v.n -/+ sqrt(g nu3 h beta^{ab} n_a n_b); the metric
  // factor is 1 for directions normalised in the contravariant metric and
  // supplies the coordinate signal speed for raw axis covectors.
  double nn = 0.0;
  const double n[2] = {n_cov.x, n_cov.y};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) nn += gc.beta_con[a][b] * n[a] * n[b];
  const double c = std::sqrt(g * gc.nu3 * std::max(s.h, 0.0) * nn);
  return {vn - c, vn, vn + c};
}

EnergyDensity energy_density(const PrimitiveState& s, double z, const GeometryCoefficients& geom,
                             double g, ModelKind kind) {
  const GeometryCoefficients& gc = effective(geom, kind);
  const double kinetic = 0.5 * speed_squared(s, gc, kind);
  EnergyDensity e;
  e.mechanical = kinetic + g * (z + 0.5 * s.h * gc.nu3);
  e.head = kinetic + g * (z + s.h * gc.nu3);
  return e;
}

}  // namespace vegflow
