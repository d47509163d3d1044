#include "vegflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "vegflow/errors.hpp"
#include "vegflow/quadrature.hpp"

namespace vegflow {

void christoffel_from_metric(const double beta_con[2][2], const double dbeta[2][2][2],
                             double gamma[2][2][2]) {
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double s = 0.0;
        for (int d = 0; d < 2; ++d)
          s += beta_con[c][d] * (dbeta[a][d][b] + dbeta[b][d][a] - dbeta[d][a][b]);
        gamma[c][a][b] = 0.5 * s;
      }
}

SurfacePoint surface_point_from_jet(const MongeJet& jet, const double (*dbeta)[2][2]) {
  SurfacePoint p;
  p.z = jet.z;
  p.z1 = jet.z1;
  p.z2 = jet.z2;
  p.tau1 = {1.0, 0.0, jet.z1};
  p.tau2 = {0.0, 1.0, jet.z2};

  const Vec3 N = cross(p.tau1, p.tau2);  // (-z1, -z2, 1): upward orientation
  const double W = norm(N);
  p.nu = N * (1.0 / W);

  const double zd[2] = {jet.z1, jet.z2};
  const double zdd[2][2] = {{jet.z11, jet.z12}, {jet.z12, jet.z22}};

  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) p.beta_cov[a][b] = (a == b ? 1.0 : 0.0) + zd[a] * zd[b];

  const double det = p.beta_cov[0][0] * p.beta_cov[1][1] - p.beta_cov[0][1] * p.beta_cov[1][0];
  p.beta = std::sqrt(det);
  p.beta_con[0][0] = p.beta_cov[1][1] / det;
  p.beta_con[1][1] = p.beta_cov[0][0] / det;
  p.beta_con[0][1] = -p.beta_cov[0][1] / det;
  p.beta_con[1][0] = -p.beta_cov[1][0] / det;

  const double nu3 = p.nu.z;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) p.kappa_cov[a][b] = zdd[a][b] * nu3;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double s = 0.0;
      for (int c = 0; c < 2; ++c) s += p.beta_con[a][c] * p.kappa_cov[c][b];
      p.kappa_mix[a][b] = s;
    }
  p.K_M = 0.5 * (p.kappa_mix[0][0] + p.kappa_mix[1][1]);
  p.K_G = p.kappa_mix[0][0] * p.kappa_mix[1][1] - p.kappa_mix[0][1] * p.kappa_mix[1][0];

  double db[2][2][2];
  if (dbeta) {
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) db[c][a][b] = dbeta[c][a][b];
  } else {
    // d_c beta_ab for beta_ab = delta_ab + z_a z_b
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) db[c][a][b] = zdd[a][c] * zd[b] + zd[a] * zdd[b][c];
  }
  christoffel_from_metric(p.beta_con, db, p.gamma);
  return p;
}

std::array<double, 2> principal_curvatures(const SurfacePoint& p) {
  const double disc = std::max(0.0, p.K_M * p.K_M - p.K_G);
  const double s = std::sqrt(disc);
  return {p.K_M - s, p.K_M + s};
}

// ---------------------------------------------------------------------------
// SurfaceChart

SurfaceChart SurfaceChart::build(const Field2D& height, double spacing1, double spacing2) {
  if (height.n1() < 3 || height.n2() < 3)
    throw InvalidInput("terrain chart needs at least a 3x3 grid");
  if (!(spacing1 > 0.0) || !(spacing2 > 0.0))
    throw InvalidInput("terrain chart needs positive grid spacings");
  for (int j = 0; j < height.n2(); ++j)
    for (int i = 0; i < height.n1(); ++i)
      if (!std::isfinite(height(i, j))) throw InvalidInput("terrain chart has non-finite heights");

  SurfaceChart chart;
  chart.d1_ = spacing1;
  chart.d2_ = spacing2;
  chart.z_ = height;
  chart.z1_ = fd_derivative(height, 0, spacing1);
  chart.z2_ = fd_derivative(height, 1, spacing2);
  chart.z11_ = fd_second_derivative(height, 0, spacing1);
  chart.z22_ = fd_second_derivative(height, 1, spacing2);
  // Symmetrized mixed derivative keeps the curvature tensor symmetric.
  {
    const Field2D a = fd_derivative(chart.z1_, 1, spacing2);
    const Field2D b = fd_derivative(chart.z2_, 0, spacing1);
    Field2D m(height.n1(), height.n2());
    for (int j = 0; j < height.n2(); ++j)
      for (int i = 0; i < height.n1(); ++i) m(i, j) = 0.5 * (a(i, j) + b(i, j));
    chart.z12_ = m;
  }

  // Metric fields, then their finite differences, then the Christoffel field.
  Field2D beta11(height.n1(), height.n2()), beta12(height.n1(), height.n2()),
      beta22(height.n1(), height.n2());
  for (int j = 0; j < height.n2(); ++j)
    for (int i = 0; i < height.n1(); ++i) {
      const double a = chart.z1_(i, j), b = chart.z2_(i, j);
      beta11(i, j) = 1.0 + a * a;
      beta12(i, j) = a * b;
      beta22(i, j) = 1.0 + b * b;
    }
  const Field2D d1b11 = fd_derivative(beta11, 0, spacing1), d2b11 = fd_derivative(beta11, 1, spacing2);
  const Field2D d1b12 = fd_derivative(beta12, 0, spacing1), d2b12 = fd_derivative(beta12, 1, spacing2);
  const Field2D d1b22 = fd_derivative(beta22, 0, spacing1), d2b22 = fd_derivative(beta22, 1, spacing2);

  for (auto& g : chart.gamma_) g = Field2D(height.n1(), height.n2());
  for (int j = 0; j < height.n2(); ++j)
    for (int i = 0; i < height.n1(); ++i) {
      const double det = beta11(i, j) * beta22(i, j) - beta12(i, j) * beta12(i, j);
      const double beta_con[2][2] = {{beta22(i, j) / det, -beta12(i, j) / det},
                                     {-beta12(i, j) / det, beta11(i, j) / det}};
      double dbeta[2][2][2];
      dbeta[0][0][0] = d1b11(i, j);
      dbeta[0][0][1] = dbeta[0][1][0] = d1b12(i, j);
      dbeta[0][1][1] = d1b22(i, j);
      dbeta[1][0][0] = d2b11(i, j);
      dbeta[1][0][1] = dbeta[1][1][0] = d2b12(i, j);
      dbeta[1][1][1] = d2b22(i, j);
      double gamma[2][2][2];
      christoffel_from_metric(beta_con, dbeta, gamma);
      for (int c = 0; c < 2; ++c) {
        chart.gamma_[3 * c + 0](i, j) = gamma[c][0][0];
        chart.gamma_[3 * c + 1](i, j) = gamma[c][0][1];
        chart.gamma_[3 * c + 2](i, j) = gamma[c][1][1];
      }
    }
  return chart;
}

MongeJet SurfaceChart::jet(int i, int j) const {
  return {z_(i, j), z1_(i, j), z2_(i, j), z11_(i, j), z12_(i, j), z22_(i, j)};
}

SurfacePoint SurfaceChart::point(int i, int j) const {
  SurfacePoint p = surface_point_from_jet(jet(i, j));
  for (int c = 0; c < 2; ++c) {
    p.gamma[c][0][0] = gamma_[3 * c + 0](i, j);
    p.gamma[c][0][1] = p.gamma[c][1][0] = gamma_[3 * c + 1](i, j);
    p.gamma[c][1][1] = gamma_[3 * c + 2](i, j);
  }
  return p;
}

std::array<double, 8> SurfaceChart::christoffel_at(int i, int j) const {
  std::array<double, 8> g{};
  for (int c = 0; c < 2; ++c) {
    g[4 * c + 0] = gamma_[3 * c + 0](i, j);                 // c,1,1
    g[4 * c + 1] = g[4 * c + 2] = gamma_[3 * c + 1](i, j);  // c,1,2 and c,2,1
    g[4 * c + 3] = gamma_[3 * c + 2](i, j);                 // c,2,2
  }
  return g;
}

SurfacePoint SurfaceChart::at(double y1v, double y2v) const {
  const double s1 = y1v / d1_;
  const double s2 = y2v / d2_;
  const int i0 = std::clamp(static_cast<int>(std::floor(s1)), 0, n1() - 2);
  const int j0 = std::clamp(static_cast<int>(std::floor(s2)), 0, n2() - 2);
  const double fx = std::clamp(s1 - i0, 0.0, 1.0);
  const double fy = std::clamp(s2 - j0, 0.0, 1.0);
  auto lerp = [&](const Field2D& f) {
    return (1.0 - fx) * (1.0 - fy) * f(i0, j0) + fx * (1.0 - fy) * f(i0 + 1, j0) +
           (1.0 - fx) * fy * f(i0, j0 + 1) + fx * fy * f(i0 + 1, j0 + 1);
  };
  MongeJet jet{lerp(z_), lerp(z1_), lerp(z2_), lerp(z11_), lerp(z12_), lerp(z22_)};
  return surface_point_from_jet(jet);
}

// ---------------------------------------------------------------------------
// MongeSurface

MongeSurface::MongeSurface(Fn z, Fn z1, Fn z2, Fn z11, Fn z12, Fn z22)
    : z_(std::move(z)),
      z1_(std::move(z1)),
      z2_(std::move(z2)),
      z11_(std::move(z11)),
      z12_(std::move(z12)),
      z22_(std::move(z22)) {}

MongeSurface MongeSurface::plane(double height) {
  auto zero = [](double, double) { return 0.0; };
  return MongeSurface([height](double, double) { return height; }, zero, zero, zero, zero, zero);
}

MongeSurface MongeSurface::tilted_plane(double s1, double s2) {
  auto zero = [](double, double) { return 0.0; };
  return MongeSurface([s1, s2](double a, double b) { return s1 * a + s2 * b; },
                      [s1](double, double) { return s1; }, [s2](double, double) { return s2; },
                      zero, zero, zero);
}

MongeSurface MongeSurface::paraboloid(double c1, double c2) {
  auto zero = [](double, double) { return 0.0; };
  return MongeSurface(
      [c1, c2](double a, double b) { return 0.5 * (c1 * a * a + c2 * b * b); },
      [c1](double a, double) { return c1 * a; }, [c2](double, double b) { return c2 * b; },
      [c1](double, double) { return c1; }, zero, [c2](double, double) { return c2; });
}

MongeJet MongeSurface::jet(double y1v, double y2v) const {
  return {z_(y1v, y2v),  z1_(y1v, y2v),  z2_(y1v, y2v),
          z11_(y1v, y2v), z12_(y1v, y2v), z22_(y1v, y2v)};
}

SurfacePoint MongeSurface::at(double y1v, double y2v) const {
  return surface_point_from_jet(jet(y1v, y2v));
}

// ---------------------------------------------------------------------------
// Offset frames

Vec3 embed(const SurfacePoint& p, double y1v, double y2v, double y3) {
  return Vec3{y1v, y2v, p.z} + y3 * p.nu;
}

void offset_shift(const SurfacePoint& p, double y3, double q[2][2]) {
  // q[a][b] stores q^b_a = delta^b_a - y3 kappa^b_a
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) q[a][b] = (a == b ? 1.0 : 0.0) - y3 * p.kappa_mix[b][a];
}

OffsetFrame offset_frame(const SurfacePoint& p, double y3) {
  if (!std::isfinite(y3)) throw InvalidInput("offset height must be finite");
  OffsetFrame f;
  f.delta = 1.0 - 2.0 * y3 * p.K_M + y3 * y3 * p.K_G;
  if (!(f.delta > 0.0))
    throw DegenerateOffset("offset exceeds the focal distance: volume factor <= 0");
  double q[2][2];
  offset_shift(p, y3, q);
  f.e1 = q[0][0] * p.tau1 + q[0][1] * p.tau2;
  f.e2 = q[1][0] * p.tau1 + q[1][1] * p.tau2;
  f.vartheta = p.beta * f.delta;
  return f;
}

OffsetFrame offset_frame(const SurfaceChart& chart, int i, int j, double y3) {
  return offset_frame(chart.point(i, j), y3);
}

Mat3 offset_basis(const SurfacePoint& p, double y3) {
  double q[2][2];
  offset_shift(p, y3, q);
  const Vec3 e1 = q[0][0] * p.tau1 + q[0][1] * p.tau2;
  const Vec3 e2 = q[1][0] * p.tau1 + q[1][1] * p.tau2;
  return Mat3::from_columns(e1, e2, p.nu);
}

// ---------------------------------------------------------------------------
// Column-volume flux integrals

namespace {

void check_region(const Region& rg) {
  if (!(rg.y1_hi > rg.y1_lo) || !(rg.y2_hi > rg.y2_lo))
    throw InvalidInput("integration region must have positive extents");
}

double column_bounds(const ScalarFn& lower, const ScalarFn& upper, double a, double b,
                     double* w_out) {
  const double u = lower(a, b);
  const double w = upper(a, b);
  if (!(u < w)) throw InvalidInput("invalid column bounds: lower >= upper");
  *w_out = w;
  return u;
}

// 1D integral with the configured in-plane rule.
template <typename F>
double line_integral(F&& f, double a, double b, int n, InPlaneRule rule) {
  if (rule == InPlaneRule::midpoint) return integrate_midpoint(f, a, b, n);
  return integrate_gauss(f, a, b, n);
}

// 2D integral of a Vec3-valued integrand with the configured in-plane rule.
template <typename F>
Vec3 region_integral(F&& f, const Region& rg, const QuadratureSpec& quad) {
  Vec3 total{};
  const double dx = (rg.y1_hi - rg.y1_lo) / quad.n1;
  const double dy = (rg.y2_hi - rg.y2_lo) / quad.n2;
  if (quad.rule == InPlaneRule::midpoint) {
    for (int j = 0; j < quad.n2; ++j)
      for (int i = 0; i < quad.n1; ++i) {
        const double a = rg.y1_lo + (i + 0.5) * dx;
        const double b = rg.y2_lo + (j + 0.5) * dy;
        total += f(a, b) * (dx * dy);
      }
  } else {
    for (int j = 0; j < quad.n2; ++j)
      for (int i = 0; i < quad.n1; ++i) {
        const double cx = rg.y1_lo + (i + 0.5) * dx;
        const double cy = rg.y2_lo + (j + 0.5) * dy;
        for (int qj = 0; qj < 4; ++qj)
          for (int qi = 0; qi < 4; ++qi) {
            const double a = cx + 0.5 * dx * Gauss4::nodes()[qi];
            const double b = cy + 0.5 * dy * Gauss4::nodes()[qj];
            const double wgt = Gauss4::weights()[qi] * Gauss4::weights()[qj] * 0.25 * dx * dy;
            total += f(a, b) * wgt;
          }
      }
  }
  return total;
}

}  // namespace

double flux_scalar_vertical(const SurfaceGeometry& geom, const OffsetVectorField& f,
                            const Region& region, const ScalarFn& lower, const ScalarFn& upper,
                            const QuadratureSpec& quad) {
  check_region(region);

  auto column = [&](double a, double b, int comp) {
    const SurfacePoint p = geom.at(a, b);
    double w;
    const double u = column_bounds(lower, upper, a, b, &w);
    return integrate_gauss(
        [&](double y3) {
          const double delta = 1.0 - 2.0 * y3 * p.K_M + y3 * y3 * p.K_G;
          return p.beta * delta * f(a, b, y3)[comp];
        },
        u, w, quad.column_panels);
  };

  // The integral of the in-plane divergence reduces to edge integrals of the
  // column fluxes over the rectangle boundary.
  const double east = line_integral([&](double b) { return column(region.y1_hi, b, 0); },
                                    region.y2_lo, region.y2_hi, quad.n2, quad.rule);
  const double west = line_integral([&](double b) { return column(region.y1_lo, b, 0); },
                                    region.y2_lo, region.y2_hi, quad.n2, quad.rule);
  const double north = line_integral([&](double a) { return column(a, region.y2_hi, 1); },
                                     region.y1_lo, region.y1_hi, quad.n1, quad.rule);
  const double south = line_integral([&](double a) { return column(a, region.y2_lo, 1); },
                                     region.y1_lo, region.y1_hi, quad.n1, quad.rule);
  return (east - west) + (north - south);
}

TensorFluxes flux_tensor_surfaces(const SurfaceGeometry& geom, const OffsetTensorField& Phi,
                                  const Region& region, const ScalarFn& cap, const ScalarFn& lower,
                                  const ScalarFn& upper, const QuadratureSpec& quad,
                                  const GradFn& cap_grad) {
  check_region(region);

  const double fd1 = 6.0e-6 * std::max(1.0, region.y1_hi - region.y1_lo);
  const double fd2 = 6.0e-6 * std::max(1.0, region.y2_hi - region.y2_lo);

  auto grad_cap = [&](double a, double b) -> Vec2 {
    if (cap_grad) return cap_grad(a, b);
    return {(cap(a + fd1, b) - cap(a - fd1, b)) / (2.0 * fd1),
            (cap(a, b + fd2) - cap(a, b - fd2)) / (2.0 * fd2)};
  };

  struct Columns {
    double A[2][2];  // A^{ca} = int q^c_b vartheta Phi^{ba} dy3
    double B[2];     // B^a   = int vartheta Phi^{3a} dy3
  };
  auto columns = [&](double a, double b) {
    const SurfacePoint p = geom.at(a, b);
    double w;
    const double u = column_bounds(lower, upper, a, b, &w);
    Columns col{};
    const int panels = std::max(1, quad.column_panels);
    const double dp = (w - u) / panels;
    for (int pa = 0; pa < panels; ++pa) {
      const double mid = u + (pa + 0.5) * dp;
      for (int qk = 0; qk < 4; ++qk) {
        const double y3 = mid + 0.5 * dp * Gauss4::nodes()[qk];
        const double wgt = Gauss4::weights()[qk] * 0.5 * dp;
        double qm[2][2];
        offset_shift(p, y3, qm);
        const double delta = 1.0 - 2.0 * y3 * p.K_M + y3 * y3 * p.K_G;
        const double vth = p.beta * delta;
        const Mat3 P = Phi(a, b, y3);
        for (int c = 0; c < 2; ++c)
          for (int ax = 0; ax < 2; ++ax) {
            double s = 0.0;
            for (int bb = 0; bb < 2; ++bb) s += qm[bb][c] * P(bb, ax);
            col.A[c][ax] += wgt * vth * s;
          }
        for (int ax = 0; ax < 2; ++ax) col.B[ax] += wgt * vth * P(2, ax);
      }
    }
    return col;
  };

  const Vec3 cap_flux = region_integral(
      [&](double a, double b) {
        const SurfacePoint p = geom.at(a, b);
        const double r = cap(a, b);
        double w;
        const double u = column_bounds(lower, upper, a, b, &w);
        if (r < u || r > w) throw InvalidInput("cap surface leaves the column bounds");
        double qm[2][2];
        offset_shift(p, r, qm);
        const double delta = 1.0 - 2.0 * r * p.K_M + r * r * p.K_G;
        const double vth = p.beta * delta;
        const Vec2 gr = grad_cap(a, b);
        const Mat3 P = Phi(a, b, r);
        double S[2];
        for (int bb = 0; bb < 2; ++bb) S[bb] = P(bb, 2) - gr[0] * P(bb, 0) - gr[1] * P(bb, 1);
        const double Sn = P(2, 2) - gr[0] * P(2, 0) - gr[1] * P(2, 1);
        Vec3 tangential{};
        for (int c = 0; c < 2; ++c) {
          const double coef = qm[0][c] * S[0] + qm[1][c] * S[1];
          tangential += coef * (c == 0 ? p.tau1 : p.tau2);
        }
        return (tangential + Sn * p.nu) * vth;
      },
      region, quad);

  const Vec3 lateral_flux = region_integral(
      [&](double a, double b) {
        const SurfacePoint p = geom.at(a, b);
        const Columns c0 = columns(a, b);
        const Columns cxp = columns(a + fd1, b), cxm = columns(a - fd1, b);
        const Columns cyp = columns(a, b + fd2), cym = columns(a, b - fd2);
        double dAsum[2];
        for (int c = 0; c < 2; ++c)
          dAsum[c] = (cxp.A[c][0] - cxm.A[c][0]) / (2.0 * fd1) +
                     (cyp.A[c][1] - cym.A[c][1]) / (2.0 * fd2);
        const double dBsum =
            (cxp.B[0] - cxm.B[0]) / (2.0 * fd1) + (cyp.B[1] - cym.B[1]) / (2.0 * fd2);

        Vec3 tangential{};
        for (int c = 0; c < 2; ++c) {
          double t = dAsum[c];
          for (int ax = 0; ax < 2; ++ax)
            for (int e = 0; e < 2; ++e) t += p.gamma[c][ax][e] * c0.A[e][ax];
          for (int ax = 0; ax < 2; ++ax) t -= p.kappa_mix[c][ax] * c0.B[ax];
          tangential += t * (c == 0 ? p.tau1 : p.tau2);
        }
        double n = dBsum;
        for (int c = 0; c < 2; ++c)
          for (int ax = 0; ax < 2; ++ax) n += p.kappa_cov[c][ax] * c0.A[c][ax];
        return tangential + n * p.nu;
      },
      region, quad);

  return {cap_flux, lateral_flux};
}

}  // namespace vegflow
