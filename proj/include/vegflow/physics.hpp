#ifndef VEGFLOW_PHYSICS_HPP_
#define VEGFLOW_PHYSICS_HPP_

#include "vegflow/geometry.hpp"
#include "vegflow/types.hpp"

namespace vegflow {

enum class ModelKind { simplified, full };

// Vegetation drag and bed friction parameters. The derived coefficients
// alpha_p = 2 C_d / (pi d) and alpha_s = g / C_b^2 are always recomputed.
struct ClosureParams {
  double C_d = 0.0;   // stem drag coefficient
  double d = 0.01;    // stem diameter [m]
  double C_b = 30.0;  // Chezy bed coefficient [m^(1/2)/s]
  double g = 9.81;    // gravity [m/s^2]

  ClosureParams() = default;
  ClosureParams(double C_d_, double d_, double C_b_, double g_ = 9.81);

  double alpha_p() const;
  double alpha_s() const { return g / (C_b * C_b); }

  // C_b = +inf turns the bed shear off exactly; used by the frictionless
  // diagnostics.
  static ClosureParams frictionless(double g = 9.81);
};

// theta = 1 - m pi d^2 / 4. Throws when the stems fill the whole area.
double porosity_from_stems(double stem_density, double stem_diameter);

// K(h, theta) = alpha_p h (1 - theta) + alpha_s theta
double friction_coefficient(double h, double theta, const ClosureParams& params);

// Cell-centred primitive state; velocities are contravariant components.
struct PrimitiveState {
  double h = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

struct Forcing {
  double rain = 0.0;          // [m/s]
  double infiltration = 0.0;  // [m/s]

  double combined(double theta) const { return rain - theta * infiltration; }
};

// Pointwise geometric coefficients entering fluxes and sources. The
// simplified (planar) model uses the identity values.
struct GeometryCoefficients {
  double beta = 1.0;
  double beta_cov[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  double beta_con[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  double nu3 = 1.0;
  double gamma[2][2][2] = {};
  double z = 0.0;

  static const GeometryCoefficients& planar();
  static GeometryCoefficients from_point(const SurfacePoint& p);
};

// beta_ab v^a v^b
double speed_squared(const PrimitiveState& s, const GeometryCoefficients& geom, ModelKind kind);

// Conserved vector (beta theta h, beta theta h v^1, beta theta h v^2);
// the simplified model has beta = 1.
Vec3 conserved_from_primitive(const PrimitiveState& s, double theta, double beta);
PrimitiveState primitive_from_conserved(const Vec3& u, double theta, double beta, double h_dry);

struct FluxPair {
  Vec3 f1;  // flux column along y1
  Vec3 f2;  // flux column along y2
};

FluxPair physical_flux(const PrimitiveState& s, double theta, const GeometryCoefficients& geom,
                       double g, ModelKind kind);

// Gradients of externally supplied fields entering the momentum source.
struct SourceGradients {
  Vec2 grad_z;      // d_a z
  Vec2 grad_theta;  // d_a theta
  Vec2 grad_nu3;    // d_a nu^3 (full model)
  // d_a (beta theta beta^{ca}), indexed [c][a] (full model)
  double grad_btb[2][2] = {};
};

// Continuous-model source vector (mass forcing, momentum sources including
// topography/porosity gradients, geometric coupling and friction).
Vec3 source_terms(const PrimitiveState& s, double theta, const SourceGradients& grads,
                  const GeometryCoefficients& geom, const Forcing& forcing,
                  const ClosureParams& params, ModelKind kind);

struct Eigenvalues {
  double lambda_minus = 0.0;
  double lambda_zero = 0.0;
  double lambda_plus = 0.0;
};

// Characteristic speeds for a covariant direction n normalised in the
// contravariant metric (beta^{ab} n_a n_b = 1): v.n -/+ sqrt(g nu3 h).
Eigenvalues eigenvalues(const PrimitiveState& s, const GeometryCoefficients& geom, Vec2 n_cov,
                        double g, ModelKind kind);

struct EnergyDensity {
  double mechanical = 0.0;  // E  = |v|^2/2 + g (z + h nu3 / 2)
  double head = 0.0;        // Et = |v|^2/2 + g (z + h nu3)
};

EnergyDensity energy_density(const PrimitiveState& s, double z, const GeometryCoefficients& geom,
                             double g, ModelKind kind);

}  // namespace vegflow

#endif  // VEGFLOW_PHYSICS_HPP_
