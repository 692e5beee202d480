#include "replistat/quadrature.hpp"

#include <cmath>

#include "replistat/errors.hpp"

namespace replistat {

namespace {

// Kronrod 15-point abscissae on [-1, 1] (nonnegative half) and weights,
// with the embedded 7-point Gauss weights on the shared nodes.
constexpr double k_xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double k_wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double k_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
  double kronrod;
  double err;
};

PanelResult eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resg = 0.0, resk = 0.0;
  for (int j = 0; j < 7; ++j) {
    double x = h * k_xgk[j];
    double fsum = f(c - x) + f(c + x);
    resk += k_wgk[j] * fsum;
    if (j % 2 == 1) resg += k_wg[j / 2] * fsum;
  }
  double fc = f(c);
  resk += k_wgk[7] * fc;
  resg += k_wg[3] * fc;
  return {resk * h, std::fabs((resk - resg) * h)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int depth, const PanelResult& whole) {
  if (whole.err <= abs_tol || depth <= 0) return whole.kronrod;
  double c = 0.5 * (a + b);
  PanelResult left = eval_panel(f, a, c);
  PanelResult right = eval_panel(f, c, b);
  return integrate_rec(f, a, c, 0.5 * abs_tol, depth - 1, left) +
         integrate_rec(f, c, b, 0.5 * abs_tol, depth - 1, right);
}

}  // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, int max_depth) {
  if (!(a < b)) throw invalid_argument_error("integrate_gk: requires a < b");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw invalid_argument_error("integrate_gk: endpoints must be finite");
  return integrate_rec(f, a, b, abs_tol, max_depth, eval_panel(f, a, b));
}

}  // namespace replistat
