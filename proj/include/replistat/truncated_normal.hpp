#pragma once

#include <vector>

#include "replistat/interval_set.hpp"
#include "replistat/rng.hpp"

namespace replistat {

// A normal law N(mu, sigma^2) conditioned to lie in an interval set.
// All tail arithmetic is done on the log scale so the distribution stays
// usable when the support sits many standard deviations from the mean --
// exactly the regime statistical selection produces.
class TruncatedNormal {
 public:
  // Throws invalid_argument_error if sigma <= 0, the support is empty, or
  // the support carries mass below 1e-300 under N(mu, sigma^2) (degenerate
  // truncations are rejected rather than silently renormalized).
  TruncatedNormal(double mu, double sigma, IntervalSet support);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  const IntervalSet& support() const { return support_; }

  // Probability of the support under the untruncated N(mu, sigma^2).
  double total_mass() const;
  double log_total_mass() const { return log_total_; }

  // P(X <= x | X in support): exactly 0 below the support, 1 above it,
  // constant across gaps, with relative accuracy preserved in both tails.
  double cdf(double x) const;
  // P(X > x | X in support), computed directly (not as 1 - cdf) so the
  // upper tail keeps relative accuracy.
  double sf(double x) const;

  // Inverse CDF for p in (0, 1): bracketed bisection to an absolute
  // tolerance of 1e-10 in probability, polished by one Newton step.
  // The result always lies inside the support.
  double quantile(double p) const;

  // Inverse-CDF sampling; reproducible given the stream.
  double sample(Rng& rng) const;

 private:
  struct Piece {
    double lo, hi;        // interval endpoints
    double log_mass;      // log P(lo < X < hi) under N(mu, sigma^2)
    double frac_before;   // (mass of earlier intervals) / total, in [0,1]
    double frac_after;    // (mass of later intervals) / total, in [0,1]
  };

  // {cdf, sf} evaluated together; they sum to 1 up to rounding.
  void cdf_sf(double x, double* cdf_out, double* sf_out) const;

  double mu_ = 0.0, sigma_ = 1.0;
  IntervalSet support_;
  std::vector<Piece> pieces_;
  double log_total_ = 0.0;
};

// log P(lo < X < hi) for X ~ N(mu, sigma^2), stable when both endpoints sit
// in the same far tail (same-side masses are formed from log survival
// functions; straddling intervals use a cancellation-free erf difference).
double log_interval_mass(double lo, double hi, double mu, double sigma);

// Free-function forms of the core operations.
double mass(const IntervalSet& s, double mu, double sigma);
double trunc_cdf(double x, const TruncatedNormal& d);
double trunc_quantile(double p, const TruncatedNormal& d);
double trunc_sample(const TruncatedNormal& d, Rng& rng);

}  // namespace replistat
