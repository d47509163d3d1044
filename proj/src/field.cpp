#include "vegflow/field.hpp"

#include "vegflow/errors.hpp"

namespace vegflow {

namespace {

// Runs a 1D stencil along the chosen axis at every transverse position.
template <typename Kernel>
Field2D apply_along_axis(const Field2D& f, int axis, Kernel&& kernel) {
  Field2D out(f.n1(), f.n2());
  const int n = (axis == 0) ? f.n1() : f.n2();
  const int m = (axis == 0) ? f.n2() : f.n1();
  for (int t = 0; t < m; ++t) {
    auto at = [&](int k) { return (axis == 0) ? f(k, t) : f(t, k); };
    for (int k = 0; k < n; ++k) {
      const double v = kernel(at, k, n);
      if (axis == 0)
        out(k, t) = v;
      else
        out(t, k) = v;
    }
  }
  return out;
}

}  // namespace

Field2D fd_derivative(const Field2D& f, int axis, double spacing) {
  const int n = (axis == 0) ? f.n1() : f.n2();
  if (n < 3) throw InvalidInput("fd_derivative needs at least 3 points along the axis");
  if (!(spacing > 0.0)) throw InvalidInput("fd_derivative needs a positive spacing");
  const double inv2h = 1.0 / (2.0 * spacing);
  return apply_along_axis(f, axis, [inv2h](auto at, int k, int np) {
    if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2h;
    if (k == np - 1) return (3.0 * at(np - 1) - 4.0 * at(np - 2) + at(np - 3)) * inv2h;
    return (at(k + 1) - at(k - 1)) * inv2h;
  });
}

Field2D fd_second_derivative(const Field2D& f, int axis, double spacing) {
  const int n = (axis == 0) ? f.n1() : f.n2();
  if (n < 3) throw InvalidInput("fd_second_derivative needs at least 3 points along the axis");
  if (!(spacing > 0.0)) throw InvalidInput("fd_second_derivative needs a positive spacing");
  const double invh2 = 1.0 / (spacing * spacing);
  return apply_along_axis(f, axis, [invh2, n](auto at, int k, int np) {
    if (k == 0) {
      if (n >= 4) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) * invh2;
      return (at(0) - 2.0 * at(1) + at(2)) * invh2;
    }
    if (k == np - 1) {
      if (n >= 4) return (2.0 * at(np - 1) - 5.0 * at(np - 2) + 4.0 * at(np - 3) - at(np - 4)) * invh2;
      return (at(np - 1) - 2.0 * at(np - 2) + at(np - 3)) * invh2;
    }
    return (at(k + 1) - 2.0 * at(k) + at(k - 1)) * invh2;
  });
}

}  // namespace vegflow
