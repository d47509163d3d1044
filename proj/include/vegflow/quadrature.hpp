#ifndef VEGFLOW_QUADRATURE_HPP_
#define VEGFLOW_QUADRATURE_HPP_

#include <array>
#include <cmath>

namespace vegflow {

// 4-point Gauss-Legendre rule on [-1, 1].
struct Gauss4 {
  static const std::array<double, 4>& nodes() {
    static const std::array<double, 4> x = {
        -0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    return x;
  }
  static const std::array<double, 4>& weights() {
    static const std::array<double, 4> w = {
        0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    return w;
  }
};

// Composite 4-point Gauss-Legendre over [a, b] split into `panels` panels.
template <typename F>
double integrate_gauss(F&& f, double a, double b, int panels) {
  if (panels < 1) panels = 1;
  const double dp = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * dp;
    const double mid = lo + 0.5 * dp;
    const double half = 0.5 * dp;
    double s = 0.0;
    for (int q = 0; q < 4; ++q) s += Gauss4::weights()[q] * f(mid + half * Gauss4::nodes()[q]);
    total += s * half;
  }
  return total;
}

// Composite midpoint over [a, b] with n cells.
template <typename F>
double integrate_midpoint(F&& f, double a, double b, int n) {
  if (n < 1) n = 1;
  const double d = (b - a) / n;
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += f(a + (k + 0.5) * d);
  return total * d;
}

}  // namespace vegflow

#endif  // VEGFLOW_QUADRATURE_HPP_
