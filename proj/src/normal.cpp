#include "replistat/normal.hpp"

#include <cmath>
#include <limits>

#include "replistat/errors.hpp"

namespace replistat {

namespace {
constexpr double k_sqrt2 = 1.4142135623730950488;
constexpr double k_log_2pi = 1.8378770664093454836;
constexpr double k_inf = std::numeric_limits<double>::infinity();
}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x - 0.5 * k_log_2pi); }

double log_norm_pdf(double x) { return -0.5 * x * x - 0.5 * k_log_2pi; }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / k_sqrt2); }

double norm_sf(double x) { return 0.5 * std::erfc(x / k_sqrt2); }

double log_norm_sf(double x) {
  if (std::isinf(x)) return x > 0 ? -k_inf : 0.0;
  if (x < 8.0) return std::log(0.5 * std::erfc(x / k_sqrt2));
  // Right tail: survival function via the Mills-ratio continued fraction
  //   P(X > x) = pdf(x) / (x + 1/(x + 2/(x + 3/(x + ...)))),
  // evaluated bottom-up; 40 levels give full double accuracy for x >= 8.
  double cf = 0.0;
  for (int k = 40; k >= 1; --k) cf = static_cast<double>(k) / (x + cf);
  return log_norm_pdf(x) - std::log(x + cf);
}

double log_norm_cdf(double x) { return log_norm_sf(-x); }

double log1mexp(double u) {
  // Accurate split at -log 2: log(-expm1(u)) for small |u|, log1p(-exp(u)) otherwise.
  if (u >= 0.0) return -k_inf;  // only reachable through rounding at the boundary
  if (u > -0.6931471805599453) return std::log(-std::expm1(u));
  return std::log1p(-std::exp(u));
}

double log_diff_exp(double la, double lb) {
  if (lb == -k_inf) return la;
  if (lb >= la) return -k_inf;
  return la + log1mexp(lb - la);
}

double log_sum_exp(double la, double lb) {
  if (la == -k_inf) return lb;
  if (lb == -k_inf) return la;
  double hi = la > lb ? la : lb;
  double lo = la > lb ? lb : la;
  return hi + std::log1p(std::exp(lo - hi));
}

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw invalid_argument_error("norm_quantile: p must be in (0, 1)");
  // Wichura's algorithm: three rational approximations, relative error ~1e-15.
  const double q = p - 0.5;
  double r, val;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    val = q *
          (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                6.7265770927008700853e+4) *
                   r +
               4.5921953931549871457e+4) *
                  r +
              1.3731693765509461125e+4) *
                 r +
             1.9715909503065514427e+3) *
                r +
            1.3314166789178437745e+2) *
               r +
           3.3871328727963666080e+0) /
          (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                3.9307895800092710610e+4) *
                   r +
               2.1213794301586595867e+4) *
                  r +
              5.3941960214247511077e+3) *
                 r +
             6.8718700749205790830e+2) *
                r +
            4.2313330701600911252e+1) *
               r +
           1.0);
    return val;
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e+0) *
                  r +
              3.64784832476320460504e+0) *
                 r +
             5.76949722146069140550e+0) *
                r +
            4.63033784615654529590e+0) *
               r +
           1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e+0) *
                r +
            2.05319162663775882187e+0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e+0) *
                r +
            5.46378491116411436990e+0) *
               r +
           6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return q < 0.0 ? -val : val;
}

}  // namespace replistat
