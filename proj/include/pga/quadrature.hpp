#pragma once

#include <cmath>

namespace pga {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

namespace detail {

template <typename F>
double simpson_step(const F& f, double a, double fa, double b, double fb, double whole, double tol,
                    int depth, double fm, double& err, bool& converged) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    converged = false;
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) {
    err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, fa, m, fm, left, 0.5 * tol, depth - 1, flm, err, converged) +
         simpson_step(f, m, fm, b, fb, right, 0.5 * tol, depth - 1, frm, err, converged);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`,
/// refining at most `max_depth` levels. The interval is pre-split into 16
/// panels so that integrands with a narrow feature near an endpoint are not
/// missed by the first coarse estimate.
template <typename F>
QuadratureResult integrate(const F& f, double a, double b, double tol = 1e-8, int max_depth = 20) {
  QuadratureResult out;
  if (b <= a) return out;
  constexpr int kPanels = 16;
  const double h = (b - a) / kPanels;
  double x0 = a;
  double f0 = f(a);
  for (int i = 0; i < kPanels; ++i) {
    const double x1 = i + 1 == kPanels ? b : a + (i + 1) * h;
    const double f1 = f(x1);
    const double fm = f(0.5 * (x0 + x1));
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    out.value += detail::simpson_step(f, x0, f0, x1, f1, whole, tol / kPanels, max_depth, fm,
                                      out.error_estimate, out.converged);
    x0 = x1;
    f0 = f1;
  }
  return out;
}

}  // namespace pga
