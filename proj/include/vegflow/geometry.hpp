#ifndef VEGFLOW_GEOMETRY_HPP_
#define VEGFLOW_GEOMETRY_HPP_

#include <array>
#include <functional>

#include "vegflow/field.hpp"
#include "vegflow/types.hpp"

namespace vegflow {

// Height and derivatives of the terrain map x = (y1, y2, z(y1, y2)) at one
// parameter point.
struct MongeJet {
  double z = 0.0;
  double z1 = 0.0, z2 = 0.0;
  double z11 = 0.0, z12 = 0.0, z22 = 0.0;
};

// Full first/second fundamental form data at one surface point. The unit
// normal has nu.z > 0 (upward); the curvature tensor is kappa_ab = d_ab b . nu,
// so a convex-up bump has negative principal curvatures.
struct SurfacePoint {
  Vec3 tau1, tau2;            // tangent vectors of the coordinate curves
  Vec3 nu;                    // unit normal, nu.z > 0
  double beta_cov[2][2] = {}; // covariant metric
  double beta_con[2][2] = {}; // contravariant metric
  double beta = 1.0;          // area density, sqrt(det beta_cov)
  double kappa_cov[2][2] = {};
  double kappa_mix[2][2] = {};// kappa^a_b
  double K_M = 0.0;           // mean curvature, (1/2) kappa^a_a
  double K_G = 0.0;           // Gauss curvature, det kappa^a_b
  double gamma[2][2][2] = {}; // Christoffel symbols gamma[c][a][b]
  double z = 0.0;
  double z1 = 0.0, z2 = 0.0;  // terrain slope
};

// gamma^c_ab = 1/2 beta^{cd} (d_a beta_db + d_b beta_da - d_d beta_ab).
// dbeta[c][a][b] holds d_c beta_ab.
void christoffel_from_metric(const double beta_con[2][2], const double dbeta[2][2][2],
                             double gamma[2][2][2]);

// Builds all pointwise fields from a height jet. When dbeta is null the
// metric derivatives are taken from the jet's closed form
// d_c beta_ab = z_ac z_b + z_a z_bc.
SurfacePoint surface_point_from_jet(const MongeJet& jet, const double (*dbeta)[2][2] = nullptr);

std::array<double, 2> principal_curvatures(const SurfacePoint& p);

// Pointwise geometry provider used by the integral operations below.
class SurfaceGeometry {
 public:
  virtual ~SurfaceGeometry() = default;
  virtual SurfacePoint at(double y1, double y2) const = 0;
};

// Discrete terrain chart built from an elevation raster. Derivatives are
// second-order finite differences (one-sided at boundaries); the Christoffel
// field is computed from finite differences of the stored metric.
class SurfaceChart : public SurfaceGeometry {
 public:
  static SurfaceChart build(const Field2D& height, double spacing1, double spacing2);

  int n1() const { return z_.n1(); }
  int n2() const { return z_.n2(); }
  double spacing1() const { return d1_; }
  double spacing2() const { return d2_; }
  double y1(int i) const { return i * d1_; }
  double y2(int j) const { return j * d2_; }

  MongeJet jet(int i, int j) const;
  SurfacePoint point(int i, int j) const;

  // The stored finite-difference Christoffel symbols, gamma[c][a][b].
  std::array<double, 8> christoffel_at(int i, int j) const;

  // Bilinear interpolation of the jet fields; intended for coarse sampling,
  // not for the verification quadratures.
  SurfacePoint at(double y1, double y2) const override;

  const Field2D& height() const { return z_; }

 private:
  SurfaceChart() = default;

  double d1_ = 1.0, d2_ = 1.0;
  Field2D z_, z1_, z2_, z11_, z12_, z22_;
  // gamma^c_{ab} with (a,b) in {11, 12, 22}; index [c][sym]
  std::array<Field2D, 6> gamma_;
};

// Analytic Monge patch. Supplies exact pointwise geometry for the
// verification quadratures and grid-refinement oracles.
class MongeSurface : public SurfaceGeometry {
 public:
  using Fn = std::function<double(double, double)>;

  MongeSurface(Fn z, Fn z1, Fn z2, Fn z11, Fn z12, Fn z22);

  static MongeSurface plane(double height);
  static MongeSurface tilted_plane(double s1, double s2);
  // z = 0.5 (c1 y1^2 + c2 y2^2)
  static MongeSurface paraboloid(double c1, double c2);

  MongeJet jet(double y1, double y2) const;
  SurfacePoint at(double y1, double y2) const override;

 private:
  Fn z_, z1_, z2_, z11_, z12_, z22_;
};

// Cartesian position of the offset point b(y1,y2) + y3 nu(y1,y2).
Vec3 embed(const SurfacePoint& p, double y1, double y2, double y3);

// Offset-frame data at height y3 above a surface point.
struct OffsetFrame {
  Vec3 e1, e2;      // offset tangent vectors (delta^b_a - y3 kappa^b_a) tau_b
  double delta;     // volume factor 1 - 2 y3 K_M + y3^2 K_G
  double vartheta;  // volume density beta * delta
};

// Throws DegenerateOffset when the volume factor is <= 0.
OffsetFrame offset_frame(const SurfacePoint& p, double y3);
OffsetFrame offset_frame(const SurfaceChart& chart, int i, int j, double y3);

// q^b_a = delta^b_a - y3 kappa^b_a, indexed q[a][b].
void offset_shift(const SurfacePoint& p, double y3, double q[2][2]);

// Columns (e1, e2, nu); maps offset-frame components to Cartesian ones.
Mat3 offset_basis(const SurfacePoint& p, double y3);

struct Region {
  double y1_lo, y1_hi;
  double y2_lo, y2_hi;
};

enum class InPlaneRule { midpoint, gauss };

struct QuadratureSpec {
  int n1 = 64;            // in-plane subdivisions along y1
  int n2 = 64;            // in-plane subdivisions along y2
  int column_panels = 2;  // 4-point Gauss-Legendre panels per column
  InPlaneRule rule = InPlaneRule::midpoint;
};

using ScalarFn = std::function<double(double, double)>;
using GradFn = std::function<Vec2(double, double)>;
// Vector field components (f^1, f^2, f^3) in the offset frame.
using OffsetVectorField = std::function<Vec3(double, double, double)>;
// Second-order tensor components Phi^{IJ} in the offset frame.
using OffsetTensorField = std::function<Mat3(double, double, double)>;

// Integral over the region of d_a (column integral of vartheta f^a): the
// flux of f through the lateral boundary of the column volume. The outer
// divergence is evaluated exactly by the divergence theorem (edge
// integrals); columns use composite Gauss-Legendre.
double flux_scalar_vertical(const SurfaceGeometry& geom, const OffsetVectorField& f,
                            const Region& region, const ScalarFn& lower, const ScalarFn& upper,
                            const QuadratureSpec& quad = {});

struct TensorFluxes {
  Vec3 cap;      // flux through the offset surface y3 = r(y1,y2)
  Vec3 lateral;  // flux through the lateral boundary
};

// Cartesian components of the flux of a second-order tensor through the cap
// surface and through the lateral boundary, including the Christoffel and
// curvature coupling of the varying frame.
TensorFluxes flux_tensor_surfaces(const SurfaceGeometry& geom, const OffsetTensorField& Phi,
                                  const Region& region, const ScalarFn& cap,
                                  const ScalarFn& lower, const ScalarFn& upper,
                                  const QuadratureSpec& quad = {}, const GradFn& cap_grad = nullptr);

}  // namespace vegflow

#endif  // VEGFLOW_GEOMETRY_HPP_
