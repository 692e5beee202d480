#pragma once

namespace replistat {

// Density, distribution function, and survival function of the standard
// normal law, with log-scale variants that stay accurate far into the
// tails (|x| of several hundred), where the plain versions underflow.

double norm_pdf(double x);
double log_norm_pdf(double x);

double norm_cdf(double x);
double norm_sf(double x);

// log P(X > x), finite for all finite x (uses a Mills-ratio continued
// fraction on the far right tail where erfc underflows).
double log_norm_sf(double x);
double log_norm_cdf(double x);

// Inverse of norm_cdf with ~1e-15 relative accuracy (Wichura's rational
// approximations); p must lie strictly inside (0, 1).
double norm_quantile(double p);

// log(1 - exp(u)) for u < 0, accurate for u near 0 and for very negative u.
double log1mexp(double u);

// log(exp(la) - exp(lb)) for la >= lb; -inf operands allowed for lb.
double log_diff_exp(double la, double lb);

// log(exp(la) + exp(lb)); -inf operands allowed.
double log_sum_exp(double la, double lb);

}  // namespace replistat
