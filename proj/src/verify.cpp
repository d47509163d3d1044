#include "vegflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "vegflow/errors.hpp"
#include "vegflow/quadrature.hpp"

namespace vegflow::verify {

// ---------------------------------------------------------------------------
// Generalised eigenvalue oracle

namespace {

// Coefficients of the cubic interpolating (x_i, y_i), highest degree first.
std::array<double, 4> fit_cubic(const double x[4], const double y[4]) {
  double m[4][5];
  for (int r = 0; r < 4; ++r) {
    m[r][0] = x[r] * x[r] * x[r];
    m[r][1] = x[r] * x[r];
    m[r][2] = x[r];
    m[r][3] = 1.0;
    m[r][4] = y[r];
  }
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    for (int k = 0; k < 5; ++k) std::swap(m[c][k], m[piv][k]);
    if (m[c][c] == 0.0) throw IllConditionedPencil("singular interpolation system");
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 5; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return {m[0][4] / m[0][0], m[1][4] / m[1][1], m[2][4] / m[2][2], m[3][4] / m[3][3]};
}

std::array<double, 3> cubic_real_roots(double c3, double c2, double c1, double c0) {
  const double p2 = c2 / c3, p1 = c1 / c3, p0 = c0 / c3;
  const double shift = p2 / 3.0;
  const double p = p1 - p2 * p2 / 3.0;
  const double q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
  if (!(p < 0.0)) {
    // Triple or complex-pair root region; valid states never land here.
    if (std::abs(p) < 1e-14 && std::abs(q) < 1e-14)
      return {-shift, -shift, -shift};
    throw IllConditionedPencil("pencil cubic has no separated real roots");
  }
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
  const double phi = std::acos(arg);
  std::array<double, 3> roots;
  for (int k = 0; k < 3; ++k)
    roots[k] = m * std::cos(phi / 3.0 - 2.0 * std::numbers::pi * k / 3.0) - shift;
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::array<double, 3> jacobian_eigen_oracle(const PrimitiveState& s, double theta,
                                            const GeometryCoefficients& geom, Vec2 n_cov,
                                            double g, ModelKind kind, double h_dry) {
  if (!(s.h > h_dry)) throw IllConditionedPencil("state too shallow for the pencil oracle");

  auto flux_n = [&](const PrimitiveState& u) {
    const FluxPair f = physical_flux(u, theta, geom, g, kind);
    return Vec3{f.f1.x * n_cov.x + f.f2.x * n_cov.y, f.f1.y * n_cov.x + f.f2.y * n_cov.y,
                f.f1.z * n_cov.x + f.f2.z * n_cov.y};
  };
  const double beta = (kind == ModelKind::simplified) ? 1.0 : geom.beta;
  auto cons = [&](const PrimitiveState& u) { return conserved_from_primitive(u, theta, beta); };

  Mat3 A{}, B{};
  const double comp[3] = {s.h, s.v1, s.v2};
  for (int k = 0; k < 3; ++k) {
    const double stp = 1e-6 * std::max(1.0, std::abs(comp[k]));
    PrimitiveState up = s, um = s;
    double* pu = (k == 0) ? &up.h : (k == 1) ? &up.v1 : &up.v2;
    double* pm = (k == 0) ? &um.h : (k == 1) ? &um.v1 : &um.v2;
    *pu += stp;
    *pm -= stp;
    const Vec3 fp = flux_n(up), fm = flux_n(um);
    const Vec3 hp = cons(up), hm = cons(um);
    for (int r = 0; r < 3; ++r) {
      A(r, k) = (fp[r] - fm[r]) / (2.0 * stp);
      B(r, k) = (hp[r] - hm[r]) / (2.0 * stp);
    }
  }

  const double nu3 = (kind == ModelKind::simplified) ? 1.0 : geom.nu3;
  const double lam_scale =
      std::abs(s.v1 * n_cov.x + s.v2 * n_cov.y) + std::sqrt(g * nu3 * s.h) + 1.0;
  const double nodes[4] = {-1.5 * lam_scale, -0.5 * lam_scale, 0.5 * lam_scale, 1.5 * lam_scale};
  double dets[4];
  for (int i = 0; i < 4; ++i) {
    Mat3 M;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) M(r, c) = A(r, c) - nodes[i] * B(r, c);
    dets[i] = M.det();
  }
  const std::array<double, 4> coef = fit_cubic(nodes, dets);
  double dmax = 0.0;
  for (double d : dets) dmax = std::max(dmax, std::abs(d));
  if (!(std::abs(coef[0]) * lam_scale * lam_scale * lam_scale > 1e-10 * std::max(dmax, 1e-300)))
    throw IllConditionedPencil("pencil leading coefficient vanished");
  return cubic_real_roots(coef[0], coef[1], coef[2], coef[3]);
}

// ---------------------------------------------------------------------------
// Dam-break similarity solution

StokerSolution::StokerSolution(double h_left, double h_right, double g)
    : h_left_(h_left), h_right_(h_right), g_(g) {
  if (!(h_left > 0.0)) throw InvalidInput("upstream depth must be > 0");
  if (!(h_right >= 0.0)) throw InvalidInput("downstream depth must be >= 0");
  if (!(h_left >= h_right)) throw InvalidInput("upstream depth must be >= downstream depth");
  c_left_ = std::sqrt(g * h_left);

  if (h_right == h_left) {
    trivial_ = true;
    h_star_ = h_left;
    return;
  }
  if (h_right <= 0.0) {
    dry_ = true;
    u_star_ = 2.0 * c_left_;
    shock_speed_ = 2.0 * c_left_;  // dry front speed
    return;
  }

  auto f = [&](double h) {
    return 2.0 * (c_left_ - std::sqrt(g * h)) -
           (h - h_right) * std::sqrt(0.5 * g * (h + h_right) / (h * h_right));
  };
  double lo = h_right, hi = h_left;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  if ((hi - lo) > 1e-12) throw Error("dam-break intermediate state did not converge");
  h_star_ = 0.5 * (lo + hi);
  c_star_ = std::sqrt(g * h_star_);
  u_star_ = 2.0 * (c_left_ - c_star_);
  shock_speed_ = u_star_ * h_star_ / (h_star_ - h_right_);
}

double StokerSolution::depth(double x, double t) const {
  if (trivial_) return h_left_;
  if (!(t > 0.0)) return x < 0.0 ? h_left_ : h_right_;
  const double xi = x / t;
  if (xi <= -c_left_) return h_left_;
  if (dry_) {
    if (xi >= 2.0 * c_left_) return 0.0;
    const double c = (2.0 * c_left_ - xi) / 3.0;
    return c * c / g_;
  }
  if (xi <= u_star_ - c_star_) {
    const double c = (2.0 * c_left_ - xi) / 3.0;
    return c * c / g_;
  }
  if (xi < shock_speed_) return h_star_;
  return h_right_;
}

double StokerSolution::velocity(double x, double t) const {
  if (trivial_) return 0.0;
  if (!(t > 0.0)) return 0.0;
  const double xi = x / t;
  if (xi <= -c_left_) return 0.0;
  if (dry_) {
    if (xi >= 2.0 * c_left_) return 0.0;
    return 2.0 * (xi + c_left_) / 3.0;
  }
  if (xi <= u_star_ - c_star_) return 2.0 * (xi + c_left_) / 3.0;
  if (xi < shock_speed_) return u_star_;
  return 0.0;
}

// ---------------------------------------------------------------------------
// Cartesian quadrature oracles

namespace {

Vec3 embed_at(const SurfaceGeometry& geom, double a, double b, double y3) {
  const SurfacePoint p = geom.at(a, b);
  return embed(p, a, b, y3);
}

template <typename F>
double line_rule(F&& f, double a, double b, int n, InPlaneRule rule) {
  if (rule == InPlaneRule::midpoint) return integrate_midpoint(f, a, b, n);
  return integrate_gauss(f, a, b, n);
}

template <typename F>
Vec3 area_rule(F&& f, const Region& rg, const QuadratureSpec& quad) {
  Vec3 total{};
  const double dx = (rg.y1_hi - rg.y1_lo) / quad.n1;
  const double dy = (rg.y2_hi - rg.y2_lo) / quad.n2;
  if (quad.rule == InPlaneRule::midpoint) {
    for (int j = 0; j < quad.n2; ++j)
      for (int i = 0; i < quad.n1; ++i)
        total += f(rg.y1_lo + (i + 0.5) * dx, rg.y2_lo + (j + 0.5) * dy) * (dx * dy);
  } else {
    for (int j = 0; j < quad.n2; ++j)
      for (int i = 0; i < quad.n1; ++i) {
        const double cx = rg.y1_lo + (i + 0.5) * dx;
        const double cy = rg.y2_lo + (j + 0.5) * dy;
        for (int qj = 0; qj < 4; ++qj)
          for (int qi = 0; qi < 4; ++qi)
            total += f(cx + 0.5 * dx * Gauss4::nodes()[qi], cy + 0.5 * dy * Gauss4::nodes()[qj]) *
                     (Gauss4::weights()[qi] * Gauss4::weights()[qj] * 0.25 * dx * dy);
      }
  }
  return total;
}

// Integrates fn(x, N) over the four lateral edges of the column volume,
// N the outward area-scaled normal from numerically differentiated
// embeddings. fn returns the full 3-vector integrand contribution.
template <typename Fn>
Vec3 lateral_surface_integral(const SurfaceGeometry& geom, const Region& region,
                              const ScalarFn& lower, const ScalarFn& upper,
                              const QuadratureSpec& quad, Fn&& fn) {
  struct Edge {
    int axis;       // parameter axis of the edge (0: varies y1, 1: varies y2)
    double fixed;   // the fixed coordinate
    double sign;    // outward-normal sign of t_param x nu
    double lo, hi;  // parameter range
    int n;
  };
  const Edge edges[4] = {
      {1, region.y1_hi, +1.0, region.y2_lo, region.y2_hi, quad.n2},  // east
      {1, region.y1_lo, -1.0, region.y2_lo, region.y2_hi, quad.n2},  // west
      {0, region.y2_hi, -1.0, region.y1_lo, region.y1_hi, quad.n1},  // north
      {0, region.y2_lo, +1.0, region.y1_lo, region.y1_hi, quad.n1},  // south
  };
  Vec3 total{};
  for (const Edge& e : edges) {
    const double fd = 1e-6 * std::max(1.0, e.hi - e.lo);
    auto column = [&](double s) {
      const double a = (e.axis == 0) ? s : e.fixed;
      const double b = (e.axis == 0) ? e.fixed : s;
      const double u = lower(a, b);
      const double w = upper(a, b);
      if (!(u < w)) throw InvalidInput("invalid column bounds: lower >= upper");
      const SurfacePoint p = geom.at(a, b);
      Vec3 cval{};
      const int panels = std::max(1, quad.column_panels);
      const double dp = (w - u) / panels;
      for (int pa = 0; pa < panels; ++pa) {
        const double mid = u + (pa + 0.5) * dp;
        for (int qk = 0; qk < 4; ++qk) {
          const double y3 = mid + 0.5 * dp * Gauss4::nodes()[qk];
          const double wgt = Gauss4::weights()[qk] * 0.5 * dp;
          const double ap = (e.axis == 0) ? s + fd : a;
          const double am = (e.axis == 0) ? s - fd : a;
          const double bp = (e.axis == 0) ? b : s + fd;
          const double bm = (e.axis == 0) ? b : s - fd;
          const Vec3 ts = (embed_at(geom, ap, bp, y3) - embed_at(geom, am, bm, y3)) *
                          (1.0 / (2.0 * fd));
          const Vec3 N = e.sign * cross(ts, p.nu);
          cval += wgt * fn(embed(p, a, b, y3), N);
        }
      }
      return cval;
    };
    // componentwise line integral
    for (int comp = 0; comp < 3; ++comp) {
      total[comp] += line_rule([&](double s) { return column(s)[comp]; }, e.lo, e.hi, e.n,
                               quad.rule);
    }
  }
  return total;
}

}  // namespace

double cartesian_lateral_scalar_flux(const SurfaceGeometry& geom, const CartVectorField& f,
                                     const Region& region, const ScalarFn& lower,
                                     const ScalarFn& upper, const QuadratureSpec& quad) {
  const Vec3 all = lateral_surface_integral(
      geom, region, lower, upper, quad,
      [&](const Vec3& x, const Vec3& N) { return Vec3{dot(f(x), N), 0.0, 0.0}; });
  return all.x;
}

Vec3 cartesian_lateral_tensor_flux(const SurfaceGeometry& geom, const CartTensorField& t,
                                   const Region& region, const ScalarFn& lower,
                                   const ScalarFn& upper, const QuadratureSpec& quad) {
  return lateral_surface_integral(geom, region, lower, upper, quad,
                                  [&](const Vec3& x, const Vec3& N) { return t(x) * N; });
}

Vec3 cartesian_cap_tensor_flux(const SurfaceGeometry& geom, const CartTensorField& t,
                               const Region& region, const ScalarFn& cap,
                               const QuadratureSpec& quad) {
  const double fd1 = 1e-6 * std::max(1.0, region.y1_hi - region.y1_lo);
  const double fd2 = 1e-6 * std::max(1.0, region.y2_hi - region.y2_lo);
  auto cap_embed = [&](double a, double b) { return embed_at(geom, a, b, cap(a, b)); };
  return area_rule(
      [&](double a, double b) {
        const Vec3 t1 = (cap_embed(a + fd1, b) - cap_embed(a - fd1, b)) * (1.0 / (2.0 * fd1));
        const Vec3 t2 = (cap_embed(a, b + fd2) - cap_embed(a, b - fd2)) * (1.0 / (2.0 * fd2));
        const Vec3 N = cross(t1, t2);
        return t(cap_embed(a, b)) * N;
      },
      region, quad);
}

Vec3 stress_cap_flux(const SurfaceGeometry& geom, const CartScalarField& pressure,
                     const CartTensorField& tau, const Region& region, const ScalarFn& cap,
                     const GradFn& cap_grad, const QuadratureSpec& quad) {
  return area_rule(
      [&](double a, double b) {
        const SurfacePoint p = geom.at(a, b);
        const double r = cap(a, b);
        const Vec2 gr = cap_grad(a, b);

        double qm[2][2];
        offset_shift(p, r, qm);
        const Vec3 e1 = qm[0][0] * p.tau1 + qm[0][1] * p.tau2;
        const Vec3 e2 = qm[1][0] * p.tau1 + qm[1][1] * p.tau2;
        const double delta = 1.0 - 2.0 * r * p.K_M + r * r * p.K_G;
        const double vth = p.beta * delta;

        // Frame tangent to the cap surface, with the unit normal.
        const Vec3 z1 = e1 + gr[0] * p.nu;
        const Vec3 z2 = e2 + gr[1] * p.nu;
        Vec3 n = cross(z1, z2);
        n = n * (1.0 / norm(n));
        const Mat3 Z = Mat3::from_columns(z1, z2, n);
        const Mat3 H = Z.inverse();
        const Vec3 x = embed(p, a, b, r);
        const Mat3 tc = tau(x);
        Mat3 tt{};  // cap-frame contravariant components of tau
        for (int I = 0; I < 3; ++I)
          for (int J = 0; J < 3; ++J) {
            double ssum = 0.0;
            for (int i = 0; i < 3; ++i)
              for (int j = 0; j < 3; ++j) ssum += H(I, i) * H(J, j) * tc(i, j);
            tt(I, J) = ssum;
          }

        // Contravariant offset metric at the cap height.
        const double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
        const double detg = g11 * g22 - g12 * g12;
        const double gcon[2][2] = {{g22 / detg, -g12 / detg}, {-g12 / detg, g11 / detg}};

        double grg = 0.0;
        for (int bb = 0; bb < 2; ++bb)
          for (int cc = 0; cc < 2; ++cc) grg += gcon[bb][cc] * gr[bb] * gr[cc];
        const double root = std::sqrt(1.0 + grg);
        const double pval = pressure(x);

        double T[2];
        for (int ax = 0; ax < 2; ++ax) {
          double gslope = 0.0;
          for (int bb = 0; bb < 2; ++bb) gslope += gcon[ax][bb] * gr[bb];
          T[ax] = (pval - tt(2, 2)) * gslope + tt(ax, 2) * root;
        }
        Vec3 tangential{};
        for (int d = 0; d < 2; ++d) {
          const double coef = qm[0][d] * T[0] + qm[1][d] * T[1];
          tangential += coef * (d == 0 ? p.tau1 : p.tau2);
        }
        const double normal = -pval + tt(2, 2) + (gr[0] * tt(0, 2) + gr[1] * tt(1, 2)) * root;
        return (tangential + normal * p.nu) * vth;
      },
      region, quad);
}

Vec3 to_offset_vector(const SurfacePoint& p, double y3, const Vec3& cart) {
  return offset_basis(p, y3).inverse() * cart;
}

Mat3 to_offset_tensor(const SurfacePoint& p, double y3, const Mat3& cart) {
  const Mat3 H = offset_basis(p, y3).inverse();
  Mat3 out{};
  for (int I = 0; I < 3; ++I)
    for (int J = 0; J < 3; ++J) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += H(I, i) * H(J, j) * cart(i, j);
      out(I, J) = s;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

double rel_err(double a, double b, double floor_scale = 1.0) {
  const double scale = std::max({std::abs(a), std::abs(b), floor_scale});
  return std::abs(a - b) / scale;
}

double rel_err(const Vec3& a, const Vec3& b, double floor_scale = 1.0) {
  const double scale = std::max({norm(a), norm(b), floor_scale});
  return norm(a - b) / scale;
}

}  // namespace

std::vector<SuiteRow> eigen_suite(int n_states, unsigned seed) {
  std::vector<SuiteRow> rows;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> hd(1e-3, 5.0), vd(-10.0, 10.0), td(0.3, 1.0),
      slope(-0.6, 0.6), curv(-0.5, 0.5), ang(0.0, 2.0 * std::numbers::pi);
  const double g = 9.81;

  for (ModelKind kind : {ModelKind::simplified, ModelKind::full}) {
    double worst = 0.0;
    for (int k = 0; k < n_states; ++k) {
      const PrimitiveState s{hd(rng), vd(rng), vd(rng)};
      const double theta = td(rng);
      GeometryCoefficients geom;
      if (kind == ModelKind::full) {
        MongeJet jet{0.0, slope(rng), slope(rng), curv(rng), curv(rng), curv(rng)};
        geom = GeometryCoefficients::from_point(surface_point_from_jet(jet));
      }
      const double phi = ang(rng);
      Vec2 n{std::cos(phi), std::sin(phi)};
      double nn = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) nn += geom.beta_con[a][b] * n[a] * n[b];
      const double scale = 1.0 / std::sqrt(nn);
      n.x *= scale;
      n.y *= scale;

      const Eigenvalues closed = eigenvalues(s, geom, n, g, kind);
      const std::array<double, 3> oracle = jacobian_eigen_oracle(s, theta, geom, n, g, kind);
      worst = std::max({worst, std::abs(closed.lambda_minus - oracle[0]),
                        std::abs(closed.lambda_zero - oracle[1]),
                        std::abs(closed.lambda_plus - oracle[2])});
    }
    rows.push_back({"eigen", kind == ModelKind::simplified ? "simplified" : "full", worst, 1e-6,
                    worst < 1e-6});
  }
  return rows;
}

namespace {

struct LemmaChart {
  std::string name;
  MongeSurface surface;
};

std::vector<LemmaChart> lemma_charts() {
  std::vector<LemmaChart> charts;
  charts.push_back({"plane", MongeSurface::plane(0.3)});
  charts.push_back({"tilt", MongeSurface::tilted_plane(0.15, -0.1)});
  charts.push_back({"paraboloid", MongeSurface::paraboloid(0.4, 0.25)});
  charts.push_back({"crest", MongeSurface(
                                 [](double a, double) { return 0.5 * std::cos(0.8 * a); },
                                 [](double a, double) { return -0.4 * std::sin(0.8 * a); },
                                 [](double, double) { return 0.0; },
                                 [](double a, double) { return -0.32 * std::cos(0.8 * a); },
                                 [](double, double) { return 0.0; },
                                 [](double, double) { return 0.0; })});
  return charts;
}

Vec3 poly_vector(const Vec3& x) {
  return {0.4 * x.x * x.x + x.z - 0.3 * x.y, x.x * x.y - 0.5 * x.z * x.z + 0.2,
          0.7 * x.y + 0.3 * x.z * x.x - 0.1};
}

double poly_pressure(const Vec3& x) { return 1.0 + 0.3 * x.x - 0.2 * x.y + 0.5 * x.z; }

Mat3 poly_viscous(const Vec3& x) {
  Mat3 m{};
  m(0, 0) = 0.2 * x.x * x.z;
  m(1, 1) = -0.1 * x.y + 0.05 * x.z * x.z;
  m(2, 2) = 0.15 * x.x * x.y;
  m(0, 1) = m(1, 0) = 0.1 * x.z - 0.04 * x.x * x.x;
  m(0, 2) = m(2, 0) = 0.08 * x.y * x.z + 0.02;
  m(1, 2) = m(2, 1) = -0.06 * x.x + 0.03 * x.y * x.y;
  return m;
}

Mat3 poly_stress(const Vec3& x) {
  Mat3 m = poly_viscous(x);
  const double p = poly_pressure(x);
  m(0, 0) -= p;
  m(1, 1) -= p;
  m(2, 2) -= p;
  return m;
}

}  // namespace

std::vector<SuiteRow> lemma_suite() {
  std::vector<SuiteRow> rows;
  const Region region{0.2, 1.4, -0.3, 0.9};
  auto lower = [](double a, double b) { return 0.05 + 0.02 * (a - b); };
  auto upper = [](double a, double b) { return 0.6 + 0.05 * std::sin(a + b); };
  auto cap = [](double a, double b) { return 0.3 + 0.04 * a * b; };
  auto cap_grad = [](double a, double b) { return Vec2{0.04 * b, 0.04 * a}; };

  QuadratureSpec ref;  // 64 x 64 in-plane, 8-point columns
  ref.n1 = ref.n2 = 64;
  ref.column_panels = 2;

  const auto charts = lemma_charts();

  // Zero and constant fields on the plane are exact.
  {
    const MongeSurface& plane = charts[0].surface;
    auto zero_field = [](double, double, double) { return Vec3{}; };
    const double v0 = flux_scalar_vertical(plane, zero_field, region, lower, upper, ref);
    rows.push_back({"lemmas", "scalar/plane/zero", std::abs(v0), 1e-6, std::abs(v0) < 1e-6});
    auto const_field = [](double, double, double) { return Vec3{1.0, 0.0, 0.0}; };
    const double v1 = flux_scalar_vertical(plane, const_field, region, lower, upper, ref);
    // column height varies, so the column flux is not constant; compare
    // against the Cartesian oracle like the generic cases
    const double o1 = cartesian_lateral_scalar_flux(
        plane, [](const Vec3&) { return Vec3{1.0, 0.0, 0.0}; }, region, lower, upper, ref);
    rows.push_back({"lemmas", "scalar/plane/const", rel_err(v1, o1), 1e-6, rel_err(v1, o1) < 1e-6});
  }

  // Scalar lateral flux vs the Cartesian oracle on every chart.
  for (const auto& lc : charts) {
    auto field = [&](double a, double b, double y3) {
      const SurfacePoint p = lc.surface.at(a, b);
      return to_offset_vector(p, y3, poly_vector(embed(p, a, b, y3)));
    };
    const double ours = flux_scalar_vertical(lc.surface, field, region, lower, upper, ref);
    const double oracle =
        cartesian_lateral_scalar_flux(lc.surface, poly_vector, region, lower, upper, ref);
    const double err = rel_err(ours, oracle);
    rows.push_back({"lemmas", "scalar/" + lc.name + "/poly", err, 1e-6, err < 1e-6});
  }

  // Tensor fluxes: cap against the Cartesian oracle and the stress formula,
  // lateral against the Cartesian oracle at converged in-plane quadrature.
  for (const auto& lc : charts) {
    auto tensor_field = [&](double a, double b, double y3) {
      const SurfacePoint p = lc.surface.at(a, b);
      return to_offset_tensor(p, y3, poly_stress(embed(p, a, b, y3)));
    };

    const TensorFluxes ours =
        flux_tensor_surfaces(lc.surface, tensor_field, region, cap, lower, upper, ref, cap_grad);
    const Vec3 cap_oracle = cartesian_cap_tensor_flux(lc.surface, poly_stress, region, cap, ref);
    const double cap_err = rel_err(ours.cap, cap_oracle);
    rows.push_back({"lemmas", "tensor-cap/" + lc.name, cap_err, 1e-6, cap_err < 1e-6});

    const Vec3 stress_oracle =
        stress_cap_flux(lc.surface, poly_pressure, poly_viscous, region, cap, cap_grad, ref);
    const double stress_err = rel_err(ours.cap, stress_oracle);
    rows.push_back(
        {"lemmas", "stress-cap/" + lc.name, stress_err, 1e-6, stress_err < 1e-6});

    QuadratureSpec conv;  // converged quadrature for the area-vs-boundary comparison
    conv.n1 = conv.n2 = 32;
    conv.column_panels = 2;
    conv.rule = InPlaneRule::gauss;
    const TensorFluxes ours_conv =
        flux_tensor_surfaces(lc.surface, tensor_field, region, cap, lower, upper, conv, cap_grad);
    const Vec3 lat_oracle =
        cartesian_lateral_tensor_flux(lc.surface, poly_stress, region, lower, upper, conv);
    const double lat_err = rel_err(ours_conv.lateral, lat_oracle);
    rows.push_back({"lemmas", "tensor-lateral/" + lc.name, lat_err, 1e-6, lat_err < 1e-6});
  }

  // Flat constant-pressure cap has a hand value: (0, 0, -p * area).
  {
    const MongeSurface flat = MongeSurface::plane(0.0);
    const double pval = 2.5;
    auto tensor_field = [pval](double, double, double) {
      Mat3 m{};
      m(0, 0) = m(1, 1) = m(2, 2) = -pval;
      return m;
    };
    auto flat_cap = [](double, double) { return 0.25; };
    const TensorFluxes f = flux_tensor_surfaces(flat, tensor_field, region, flat_cap, lower,
                                                upper, ref, [](double, double) {
                                                  return Vec2{0.0, 0.0};
                                                });
    const double area = (region.y1_hi - region.y1_lo) * (region.y2_hi - region.y2_lo);
    const double err = rel_err(f.cap, Vec3{0.0, 0.0, -pval * area});
    rows.push_back({"lemmas", "tensor-cap/flat-pressure", err, 1e-12, err < 1e-12});
  }
  return rows;
}

std::vector<SuiteRow> stoker_suite() {
  std::vector<SuiteRow> rows;
  const double g = 9.81;

  {  // equal depths: constant state
    const StokerSolution s(1.0, 1.0, g);
    double worst = 0.0;
    for (double x : {-5.0, 0.0, 3.0})
      worst = std::max({worst, std::abs(s.depth(x, 2.0) - 1.0), std::abs(s.velocity(x, 2.0))});
    rows.push_back({"stoker", "equal-depths", worst, 1e-14, worst < 1e-14});
  }
  {  // dry bed: front speed and left-invariant preservation in the fan
    const StokerSolution s(1.0, 0.0, g);
    const double front_err = std::abs(s.shock_speed() - 2.0 * std::sqrt(g));
    rows.push_back({"stoker", "dry-front-speed", front_err, 1e-12, front_err < 1e-12});
    double worst = 0.0;
    for (double xi = -2.9; xi < 6.2; xi += 0.37) {
      const double h = s.depth(xi, 1.0), u = s.velocity(xi, 1.0);
      if (h <= 0.0) continue;
      worst = std::max(worst, std::abs(u + 2.0 * std::sqrt(g * h) - 2.0 * std::sqrt(g)));
    }
    rows.push_back({"stoker", "dry-left-invariant", worst, 1e-10, worst < 1e-10});
  }
  {  // wet bed: jump conditions across the bore
    const StokerSolution s(1.0, 0.2, g);
    const double hs = s.h_star(), us = s.u_star(), sp = s.shock_speed();
    const double mass_rh = std::abs(sp * (hs - 0.2) - hs * us);
    const double mom_rh =
        std::abs(sp * hs * us - (hs * us * us + 0.5 * g * hs * hs - 0.5 * g * 0.2 * 0.2));
    rows.push_back({"stoker", "wet-mass-jump", mass_rh, 1e-9, mass_rh < 1e-9});
    rows.push_back({"stoker", "wet-momentum-jump", mom_rh, 1e-9, mom_rh < 1e-9});
    const double join = std::abs(s.depth((us - std::sqrt(g * hs)) * 0.999999, 1.0) - hs);
    rows.push_back({"stoker", "fan-star-continuity", join, 1e-4, join < 1e-4});
  }
  return rows;
}

std::vector<SuiteRow> balance_suite() {
  std::vector<SuiteRow> rows;
  const int n = 40;
  const double L = 10.0, d = L / n;

  Field2D z(n, n), theta(n, n), flat(n, n, 0.0), theta_const(n, n, 0.8);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) * d, y = (j + 0.5) * d;
      z(i, j) = 0.5 + 0.3 * std::sin(2.0 * std::numbers::pi * x / L) *
                          std::cos(2.0 * std::numbers::pi * y / L);
      theta(i, j) = 0.8 + 0.2 * std::sin(2.0 * std::numbers::pi * x / L) *
                              std::sin(2.0 * std::numbers::pi * y / L);
    }

  {  // lake at rest stays put
    const Grid grid(n, n, d, d, z, theta, BoundarySet{}, ModelKind::simplified);
    RunConfig cfg;
    cfg.closure = ClosureParams(1.0, 0.01, 30.0, 9.81);
    FlowField flow = FlowField::zeros(grid);
    for (int jp = 1; jp <= n; ++jp)
      for (int ip = 1; ip <= n; ++ip) flow.h(ip, jp) = 2.0 - grid.z()(ip, jp);
    cfg.t_end = 1.0;
    for (int k = 0; k < 200; ++k) step(flow, grid, cfg, cfl_dt(flow, grid, cfg));
    const double mv = max_speed(flow, grid, cfg);
    const double lr = lake_residual(flow, grid, cfg);
    rows.push_back({"balance", "lake-at-rest-velocity", mv, 1e-12, mv < 1e-12});
    rows.push_back({"balance", "lake-at-rest-surface", lr, 1e-12, lr < 1e-12});
  }
  {  // closed-box mass conservation without forcing
    const Grid grid(n, n, d, d, flat, theta_const, BoundarySet{}, ModelKind::simplified);
    RunConfig cfg;
    cfg.closure = ClosureParams(1.0, 0.01, 30.0, 9.81);
    cfg.t_end = 1.0;
    FlowField flow = FlowField::zeros(grid);
    for (int jp = 1; jp <= n; ++jp)
      for (int ip = 1; ip <= n; ++ip) flow.h(ip, jp) = (ip <= n / 2) ? 1.0 : 0.2;
    const double m0 = total_mass(flow, grid);
    for (int k = 0; k < 300; ++k) step(flow, grid, cfg, cfl_dt(flow, grid, cfg));
    const double drift = std::abs(total_mass(flow, grid) - m0) / m0;
    rows.push_back({"balance", "closed-box-mass", drift, 1e-12, drift < 1e-12});
  }
  {  // forcing budget per step
    const Grid grid(n, n, d, d, z, theta, BoundarySet{}, ModelKind::simplified);
    RunConfig cfg;
    cfg.closure = ClosureParams(1.0, 0.01, 30.0, 9.81);
    cfg.forcing = Forcing{1e-5, 4e-6};
    cfg.t_end = 1.0;
    FlowField flow = FlowField::zeros(grid);
    for (int jp = 1; jp <= n; ++jp)
      for (int ip = 1; ip <= n; ++ip) flow.h(ip, jp) = 0.01;
    double worst = 0.0;
    double m_prev = total_mass(flow, grid);
    for (int k = 0; k < 300; ++k) {
      const double dt = cfl_dt(flow, grid, cfg);
      const StepStats stats = step(flow, grid, cfg, dt);
      const double m_now = total_mass(flow, grid);
      worst = std::max(worst, mass_budget_residual(m_prev, m_now, dt, stats));
      m_prev = m_now;
    }
    rows.push_back({"balance", "forcing-budget", worst, 1e-12, worst < 1e-12});
  }
  {  // energy decay in a closed box with drag
    const Grid grid(n, n, d, d, flat, theta_const, BoundarySet{}, ModelKind::simplified);
    RunConfig cfg;
    cfg.closure = ClosureParams(1.0, 0.01, 30.0, 9.81);
    cfg.t_end = 1.0;
    FlowField flow = FlowField::zeros(grid);
    for (int jp = 1; jp <= n; ++jp)
      for (int ip = 1; ip <= n; ++ip) flow.h(ip, jp) = (ip <= n / 2) ? 1.0 : 0.2;
    double e_prev = total_energy(flow, grid, cfg);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 300; ++k) {
      step(flow, grid, cfg, cfl_dt(flow, grid, cfg));
      const double e_now = total_energy(flow, grid, cfg);
      worst = std::max(worst, (e_now - e_prev) / std::abs(e_prev));
      e_prev = e_now;
    }
    rows.push_back({"balance", "energy-decay", worst, 1e-10, worst < 1e-10});
  }
  return rows;
}

std::vector<SuiteRow> run_suites(const std::string& which) {
  std::vector<SuiteRow> rows;
  auto append = [&](std::vector<SuiteRow> more) {
    rows.insert(rows.end(), more.begin(), more.end());
  };
  if (which == "all" || which == "eigen") append(eigen_suite());
  if (which == "all" || which == "lemmas") append(lemma_suite());
  if (which == "all" || which == "stoker") append(stoker_suite());
  if (which == "all" || which == "balance") append(balance_suite());
  if (rows.empty()) throw InvalidInput("unknown check suite: " + which);
  return rows;
}

}  // namespace vegflow::verify
