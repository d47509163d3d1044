#include "vegflow/physics.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "vegflow/errors.hpp"

using namespace vegflow;

TEST_CASE("porosity from stem density") {
  CHECK(porosity_from_stems(0.0, 0.02) == 1.0);
  CHECK(porosity_from_stems(1000.0, 0.02) == doctest::Approx(0.68584).epsilon(1e-5));
  const double d = 0.02;
  const double m_full = 4.0 / (std::numbers::pi * d * d);
  CHECK_THROWS_AS(porosity_from_stems(m_full, d), InvalidInput);
  CHECK_THROWS_AS(porosity_from_stems(-1.0, d), InvalidInput);
}

TEST_CASE("friction coefficient closure") {
  const ClosureParams params(1.0, 0.01, 30.0, 9.81);
  CHECK(params.alpha_p() == doctest::Approx(63.6620).epsilon(1e-5));
  CHECK(params.alpha_s() == doctest::Approx(0.0109).epsilon(1e-10));

  SUBCASE("bare soil keeps only the bed term") {
    CHECK(friction_coefficient(0.37, 1.0, params) == doctest::Approx(params.alpha_s()));
  }
  SUBCASE("zero depth kills the stem term") {
    CHECK(friction_coefficient(0.0, 0.5, params) == doctest::Approx(0.5 * params.alpha_s()));
  }
  SUBCASE("worked value") {
    CHECK(friction_coefficient(0.1, 0.9, params) == doctest::Approx(0.646430).epsilon(1e-6));
  }
  SUBCASE("two algebraic routes agree") {
    // alpha_p h (1-theta) + alpha_s theta == C_d m h d / 2 + g theta / C_b^2
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> md(0.0, 2000.0), dd(0.005, 0.05), hd(0.0, 2.0);
    for (int k = 0; k < 200; ++k) {
      const double d = dd(rng);
      double m = md(rng);
      double theta;
      try {
        theta = porosity_from_stems(m, d);
      } catch (const InvalidInput&) {
        continue;
      }
      const double h = hd(rng);
      const ClosureParams p(1.3, d, 25.0, 9.81);
      const double lhs = friction_coefficient(h, theta, p);
      const double rhs = 0.5 * p.C_d * m * h * d + p.g * theta / (p.C_b * p.C_b);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    }
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(ClosureParams(1.0, 0.0, 30.0), InvalidInput);
    CHECK_THROWS_AS(ClosureParams(-1.0, 0.01, 30.0), InvalidInput);
    CHECK_THROWS_AS(ClosureParams(1.0, 0.01, 0.0), InvalidInput);
  }
  SUBCASE("frictionless parameters give exactly zero") {
    const ClosureParams p = ClosureParams::frictionless();
    CHECK(friction_coefficient(1.0, 0.7, p) == 0.0);
  }
}

TEST_CASE("physical flux") {
  const double g = 9.81;
  SUBCASE("dry state has zero flux") {
    const FluxPair f =
        physical_flux({0.0, 0.0, 0.0}, 0.7, GeometryCoefficients::planar(), g, ModelKind::simplified);
    for (int i = 0; i < 3; ++i) {
      CHECK(f.f1[i] == 0.0);
      CHECK(f.f2[i] == 0.0);
    }
  }
  SUBCASE("hydrostatic momentum flux") {
    const FluxPair f =
        physical_flux({1.0, 0.0, 0.0}, 0.5, GeometryCoefficients::planar(), g, ModelKind::simplified);
    CHECK(f.f1.x == 0.0);
    CHECK(f.f1.y == doctest::Approx(2.4525).epsilon(1e-12));
    CHECK(f.f1.z == 0.0);
    CHECK(f.f2.z == doctest::Approx(2.4525).epsilon(1e-12));
    CHECK(f.f2.y == 0.0);
  }
  SUBCASE("full model with identity coefficients reduces bit-exactly") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> hd(1e-6, 3.0), vd(-4.0, 4.0);
    for (int k = 0; k < 500; ++k) {
      const PrimitiveState s{hd(rng), vd(rng), vd(rng)};
      const FluxPair a = physical_flux(s, 1.0, GeometryCoefficients::planar(), g, ModelKind::full);
      const FluxPair b = physical_flux(s, 1.0, GeometryCoefficients::planar(), g, ModelKind::simplified);
      for (int i = 0; i < 3; ++i) {
        CHECK(a.f1[i] == b.f1[i]);
        CHECK(a.f2[i] == b.f2[i]);
      }
    }
  }
  SUBCASE("rotational consistency of the planar flux") {
    // F(R u) . n == R (F(u) . R^T n) for planar rotations
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> hd(0.1, 2.0), vd(-3.0, 3.0), ad(0.0, 6.28);
    for (int k = 0; k < 200; ++k) {
      const double h = hd(rng), u = vd(rng), v = vd(rng), phi = ad(rng);
      const double c = std::cos(phi), sn = std::sin(phi);
      const double theta = 0.8;
      const PrimitiveState s{h, u, v};
      const PrimitiveState sr{h, c * u - sn * v, sn * u + c * v};
      const Vec2 n{0.3, std::sqrt(1.0 - 0.09)};
      const Vec2 nr{c * n.x + sn * n.y, -sn * n.x + c * n.y};  // R^T n

      auto fdotn = [&](const PrimitiveState& st, const Vec2& dir) {
        const FluxPair f =
            physical_flux(st, theta, GeometryCoefficients::planar(), 9.81, ModelKind::simplified);
        return Vec3{f.f1.x * dir.x + f.f2.x * dir.y, f.f1.y * dir.x + f.f2.y * dir.y,
                    f.f1.z * dir.x + f.f2.z * dir.y};
      };
      const Vec3 lhs = fdotn(sr, n);
      const Vec3 rhs_unrot = fdotn(s, nr);
      const Vec3 rhs{rhs_unrot.x, c * rhs_unrot.y - sn * rhs_unrot.z,
                     sn * rhs_unrot.y + c * rhs_unrot.z};
      CHECK(lhs.x == doctest::Approx(rhs.x).epsilon(1e-12).scale(1.0));
      CHECK(lhs.y == doctest::Approx(rhs.y).epsilon(1e-12).scale(1.0));
      CHECK(lhs.z == doctest::Approx(rhs.z).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("source terms") {
  const ClosureParams params(1.0, 0.01, 30.0, 9.81);

  SUBCASE("lake at rest cancels analytically") {
    // At rest with d_a(z + h) = 0 the momentum source must equal the
    // divergence of the hydrostatic flux: theta g h d_a h + g h^2/2 d_a theta.
    const double h = 1.4, theta = 0.75;
    const Vec2 gz{0.02, -0.3};
    const Vec2 gt{0.1, 0.05};
    SourceGradients grads;
    grads.grad_z = gz;
    grads.grad_theta = gt;
    const Vec3 src = source_terms({h, 0.0, 0.0}, theta, grads, GeometryCoefficients::planar(), {},
                                  params, ModelKind::simplified);
    const Vec2 gh{-gz.x, -gz.y};  // d_a h = -d_a z
    const double g = params.g;
    CHECK(src.y == doctest::Approx(theta * g * h * gh.x + 0.5 * g * h * h * gt.x).epsilon(1e-13));
    CHECK(src.z == doctest::Approx(theta * g * h * gh.y + 0.5 * g * h * h * gt.y).epsilon(1e-13));
  }
  SUBCASE("flat terrain friction only") {
    SourceGradients grads;
    Forcing forcing{1e-5, 2e-6};
    const double theta = 0.9;
    const Vec3 src = source_terms({0.1, 1.0, 0.0}, theta, grads, GeometryCoefficients::planar(),
                                  forcing, params, ModelKind::simplified);
    CHECK(src.x == doctest::Approx(forcing.combined(theta)).epsilon(1e-14));
    CHECK(src.y == doctest::Approx(-0.646430 * 0.1 / 0.1).epsilon(1e-6));
    CHECK(src.z == 0.0);
  }
  SUBCASE("full model reduces bit-exactly on identity geometry") {
    SourceGradients grads;
    grads.grad_z = {0.01, -0.02};
    grads.grad_theta = {0.1, 0.2};
    grads.grad_btb[0][0] = 0.1;
    grads.grad_btb[1][1] = 0.2;
    const PrimitiveState s{0.8, 0.5, -0.25};
    const Vec3 a = source_terms(s, 0.85, grads, GeometryCoefficients::planar(), {}, params,
                                ModelKind::full);
    const Vec3 b = source_terms(s, 0.85, grads, GeometryCoefficients::planar(), {}, params,
                                ModelKind::simplified);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.z == b.z);
  }
}

TEST_CASE("eigenvalues") {
  SUBCASE("still water") {
    const Eigenvalues ev = eigenvalues({1.0, 0.0, 0.0}, GeometryCoefficients::planar(), {1.0, 0.0},
                                       9.81, ModelKind::simplified);
    CHECK(ev.lambda_minus == doctest::Approx(-3.132092).epsilon(1e-6));
    CHECK(ev.lambda_zero == 0.0);
    CHECK(ev.lambda_plus == doctest::Approx(3.132092).epsilon(1e-6));
  }
  SUBCASE("dry degeneracy") {
    const Eigenvalues ev = eigenvalues({0.0, 2.0, -1.0}, GeometryCoefficients::planar(),
                                       {0.6, 0.8}, 9.81, ModelKind::simplified);
    const double vn = 2.0 * 0.6 - 1.0 * 0.8;
    CHECK(ev.lambda_minus == doctest::Approx(vn));
    CHECK(ev.lambda_zero == doctest::Approx(vn));
    CHECK(ev.lambda_plus == doctest::Approx(vn));
  }
  SUBCASE("full model wave speed carries nu3") {
    GeometryCoefficients geom;
    geom.nu3 = 0.8;
    const Eigenvalues ev =
        eigenvalues({2.0, 1.0, 0.0}, geom, {1.0, 0.0}, 9.81, ModelKind::full);
    const double c = std::sqrt(9.81 * 0.8 * 2.0);  // 3.9618181...
    CHECK(ev.lambda_minus == doctest::Approx(1.0 - c).epsilon(1e-12));
    CHECK(ev.lambda_zero == doctest::Approx(1.0));
    CHECK(ev.lambda_plus == doctest::Approx(1.0 + c).epsilon(1e-12));
    CHECK(c == doctest::Approx(3.961818).epsilon(1e-6));
  }
  SUBCASE("ordering holds on random states") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> hd(0.0, 5.0), vd(-10.0, 10.0), ad(0.0, 6.28);
    for (int k = 0; k < 1000; ++k) {
      const double phi = ad(rng);
      const Eigenvalues ev = eigenvalues({hd(rng), vd(rng), vd(rng)},
                                         GeometryCoefficients::planar(),
                                         {std::cos(phi), std::sin(phi)}, 9.81,
                                         ModelKind::simplified);
      CHECK(ev.lambda_minus <= ev.lambda_zero);
      CHECK(ev.lambda_zero <= ev.lambda_plus);
    }
  }
}

TEST_CASE("energy density") {
  SUBCASE("still pool") {
    const EnergyDensity e = energy_density({2.0, 0.0, 0.0}, 0.0, GeometryCoefficients::planar(),
                                           9.81, ModelKind::simplified);
    CHECK(e.mechanical == doctest::Approx(9.81).epsilon(1e-13));
    CHECK(e.head == doctest::Approx(19.62).epsilon(1e-13));
  }
  SUBCASE("dry cell keeps the terrain potential") {
    const EnergyDensity e = energy_density({0.0, 0.0, 0.0}, 1.7, GeometryCoefficients::planar(),
                                           9.81, ModelKind::simplified);
    CHECK(e.mechanical == doctest::Approx(9.81 * 1.7).epsilon(1e-13));
  }
  SUBCASE("moving state") {
    const EnergyDensity e = energy_density({1.0, 1.0, 0.0}, 1.0, GeometryCoefficients::planar(),
                                           9.81, ModelKind::simplified);
    CHECK(e.mechanical == doctest::Approx(15.215).epsilon(1e-13));
  }
}

TEST_CASE("conserved/primitive round trip") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> hd(1e-6, 4.0), vd(-5.0, 5.0), td(0.3, 1.0);
  for (int k = 0; k < 500; ++k) {
    const PrimitiveState s{hd(rng), vd(rng), vd(rng)};
    const double theta = td(rng);
    const double beta = 1.0 + 0.2 * td(rng);
    const Vec3 u = conserved_from_primitive(s, theta, beta);
    const PrimitiveState r = primitive_from_conserved(u, theta, beta, 1e-8);
    CHECK(r.h == doctest::Approx(s.h).epsilon(1e-14));
    CHECK(r.v1 == doctest::Approx(s.v1).epsilon(1e-14).scale(1.0));
    CHECK(r.v2 == doctest::Approx(s.v2).epsilon(1e-14).scale(1.0));
  }
  SUBCASE("dry cells zero the velocity") {
    const PrimitiveState r = primitive_from_conserved({1e-12, 5.0, 5.0}, 1.0, 1.0, 1e-8);
    CHECK(r.v1 == 0.0);
    CHECK(r.v2 == 0.0);
  }
}
