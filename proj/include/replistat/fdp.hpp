#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace replistat {

// Exact binomial lower-tail probability P(Binomial(n, p) <= k), computed by
// recursive term summation (log-space when the leading term underflows);
// never a normal approximation.
double binom_cdf(long k, long n, double p);

// One directional false-discovery-proportion analysis. Counts that do not
// apply to a method are left at -1, beta at NaN.
struct FdpResult {
  std::string method;  // "internal", "external", or "replication"
  double alpha0 = 0.05;
  double alpha = 0.05;
  double lambda = 0.5;
  double confidence = 0.95;
  double beta = std::nan("");  // external only: (1-lambda)/(1-lambda+alpha')
  long R = -1;                 // internal/replication: number of studies analyzed
  long B = -1;                 // count of p-values >= lambda (ties count as big)
  long N = -1;                 // external: R_alpha + B
  long R_alpha = -1;           // external: discoveries at the stricter threshold
  long ucb_count = -1;         // internal: V*; external: Q - B
  double estimate = 0.0;       // clipped to [0, 1]
  double ucb = 0.0;            // clipped to [0, 1]
};

// Counting stage of the internal estimator: R, B, and the point estimate
// min(1, B / ((1-lambda) R)) over already-adjusted p-values in (0, 1].
FdpResult storey_estimate(const std::vector<double>& p_adjusted, double lambda);

// Exact-binomial upper confidence bound on the number of true directional
// nulls: V* = max{v in [0, R] : P(Bin(v, 1-lambda) <= B) >= 1-confidence},
// found by an ascending scan (the tail probability is nonincreasing in v).
// Returns {V*, V*/R}.
std::pair<long, double> ucb_internal(long B, long R, double lambda, double confidence);

// Counting stage of the external estimator at a stricter threshold
// alpha < lambda*alpha0, over adjusted p-values.
FdpResult external_estimate(const std::vector<double>& p_adjusted, double alpha, double alpha0,
                            double lambda);

// Exact-binomial bound for the external comparison:
// Q = max{q >= B : P(Bin(q, beta) <= B) >= 1-confidence}, bound (Q-B)/R_alpha
// clipped to 1. The scan is capped at B + R_alpha, beyond which the clipped
// bound saturates. Returns {Q, bound}.
std::pair<long, double> ucb_external(long B, long R_alpha, double beta, double confidence);

// Storey/upper-bound machinery applied to replication p-values (one-sided,
// oriented to the original claimed direction) without any alpha0 adjustment.
FdpResult replication_fdp(const std::vector<double>& p_replication, double lambda,
                          double confidence);

// Convenience drivers combining estimate and bound.
FdpResult fdp_internal(const std::vector<double>& p_adjusted, double lambda, double confidence);
FdpResult fdp_external(const std::vector<double>& p_adjusted, double alpha, double alpha0,
                       double lambda, double confidence);

}  // namespace replistat
