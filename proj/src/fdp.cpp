#include "replistat/fdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "replistat/errors.hpp"
#include "replistat/normal.hpp"

namespace replistat {

double binom_cdf(long k, long n, double p) {
  if (n < 0) throw invalid_argument_error("binom_cdf: n must be nonnegative");
  if (k > n || k < 0) throw invalid_argument_error("binom_cdf: requires 0 <= k <= n");
  if (!(p >= 0.0 && p <= 1.0)) throw invalid_argument_error("binom_cdf: p must be in [0, 1]");
  if (k == n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;  // k < n here

  const double l1mp = std::log1p(-p);
  if (static_cast<double>(n) * l1mp > -700.0) {
    // Forward recursion from the j = 0 term; all terms positive, no
    // cancellation, and the partial sums are monotone.
    double term = std::exp(static_cast<double>(n) * l1mp);
    double sum = term;
    const double ratio = p / (1.0 - p);
    for (long j = 0; j < k; ++j) {
      term *= ratio * static_cast<double>(n - j) / static_cast<double>(j + 1);
      sum += term;
    }
    return std::min(1.0, sum);
  }

  // Leading term underflows: accumulate in log space.
  const double lp = std::log(p);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  double lse = -std::numeric_limits<double>::infinity();
  for (long j = 0; j <= k; ++j) {
    double lt = lgn - std::lgamma(static_cast<double>(j) + 1.0) -
                std::lgamma(static_cast<double>(n - j) + 1.0) +
                static_cast<double>(j) * lp + static_cast<double>(n - j) * l1mp;
    lse = log_sum_exp(lse, lt);
  }
  return std::exp(std::min(0.0, lse));
}

namespace {

void validate_pvalues(const std::vector<double>& p, const char* who) {
  if (p.empty()) throw invalid_argument_error(std::string(who) + ": empty p-value list");
  for (double v : p)
    if (!(v > 0.0 && v <= 1.0))
      throw invalid_argument_error(std::string(who) + ": p-values must lie in (0, 1]");
}

void validate_lambda(double lambda, const char* who) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw invalid_argument_error(std::string(who) + ": lambda must lie in (0, 1)");
}

void validate_confidence(double confidence, const char* who) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw invalid_argument_error(std::string(who) + ": confidence must lie in (0, 1)");
}

long count_at_least(const std::vector<double>& p, double threshold) {
  return static_cast<long>(std::count_if(p.begin(), p.end(),
                                         [threshold](double v) { return v >= threshold; }));
}

}  // namespace

FdpResult storey_estimate(const std::vector<double>& p_adjusted, double lambda) {
  validate_pvalues(p_adjusted, "storey_estimate");
  validate_lambda(lambda, "storey_estimate");
  FdpResult r;
  r.method = "internal";
  r.lambda = lambda;
  r.R = static_cast<long>(p_adjusted.size());
  r.B = count_at_least(p_adjusted, lambda);
  r.estimate = std::min(
      1.0, static_cast<double>(r.B) / ((1.0 - lambda) * static_cast<double>(r.R)));
  return r;
}

std::pair<long, double> ucb_internal(long B, long R, double lambda, double confidence) {
  if (B < 0 || R <= 0 || B > R)
    throw invalid_argument_error("ucb_internal: requires 0 <= B <= R, R > 0");
  validate_lambda(lambda, "ucb_internal");
  validate_confidence(confidence, "ucb_internal");
  long v = B;  // every v <= B passes: P(Bin(v, 1-lambda) <= B) = 1
  while (v + 1 <= R && binom_cdf(B, v + 1, 1.0 - lambda) >= 1.0 - confidence) ++v;
  return {v, static_cast<double>(v) / static_cast<double>(R)};
}

FdpResult external_estimate(const std::vector<double>& p_adjusted, double alpha, double alpha0,
                            double lambda) {
  validate_pvalues(p_adjusted, "external_estimate");
  validate_lambda(lambda, "external_estimate");
  if (!(alpha0 > 0.0 && alpha0 <= 1.0))
    throw invalid_argument_error("external_estimate: alpha0 must lie in (0, 1]");
  if (!(alpha > 0.0 && alpha < lambda * alpha0))
    throw invalid_argument_error(
        "external_estimate: requires 0 < alpha < lambda * alpha0 (the comparison needs a gap "
        "between the stricter threshold and the large-p region)");
  const double alpha_prime = alpha / alpha0;
  FdpResult r;
  r.method = "external";
  r.alpha = alpha;
  r.alpha0 = alpha0;
  r.lambda = lambda;
  r.beta = (1.0 - lambda) / (1.0 - lambda + alpha_prime);
  r.R_alpha = static_cast<long>(std::count_if(p_adjusted.begin(), p_adjusted.end(),
                                              [&](double v) { return v < alpha_prime; }));
  r.B = count_at_least(p_adjusted, lambda);
  r.N = r.R_alpha + r.B;
  if (r.R_alpha == 0)
    throw undefined_estimate_error("external_estimate: no discoveries at threshold alpha");
  r.estimate = std::min(1.0, (1.0 - r.beta) / r.beta * static_cast<double>(r.B) /
                                 static_cast<double>(r.R_alpha));
  return r;
}

std::pair<long, double> ucb_external(long B, long R_alpha, double beta, double confidence) {
  if (B < 0) throw invalid_argument_error("ucb_external: B must be nonnegative");
  if (R_alpha <= 0) throw invalid_argument_error("ucb_external: R_alpha must be positive");
  if (!(beta > 0.0 && beta < 1.0))
    throw invalid_argument_error("ucb_external: beta must lie in (0, 1)");
  validate_confidence(confidence, "ucb_external");
  long q = B;  // q = B passes: P(Bin(B, beta) <= B) = 1
  const long cap = B + R_alpha;
  while (q + 1 <= cap && binom_cdf(B, q + 1, beta) >= 1.0 - confidence) ++q;
  double bound = std::min(
      1.0, static_cast<double>(q - B) / static_cast<double>(R_alpha));
  return {q, bound};
}

FdpResult replication_fdp(const std::vector<double>& p_replication, double lambda,
                          double confidence) {
  FdpResult r = storey_estimate(p_replication, lambda);
  r.method = "replication";
  r.confidence = confidence;
  auto [vstar, frac] = ucb_internal(r.B, r.R, lambda, confidence);
  r.ucb_count = vstar;
  r.ucb = frac;
  return r;
}

FdpResult fdp_internal(const std::vector<double>& p_adjusted, double lambda, double confidence) {
  FdpResult r = storey_estimate(p_adjusted, lambda);
  r.confidence = confidence;
  auto [vstar, frac] = ucb_internal(r.B, r.R, lambda, confidence);
  r.ucb_count = vstar;
  r.ucb = frac;
  return r;
}

FdpResult fdp_external(const std::vector<double>& p_adjusted, double alpha, double alpha0,
                       double lambda, double confidence) {
  FdpResult r = external_estimate(p_adjusted, alpha, alpha0, lambda);
  r.confidence = confidence;
  auto [q, bound] = ucb_external(r.B, r.R_alpha, r.beta, confidence);
  r.ucb_count = q - r.B;
  r.ucb = bound;
  return r;
}

}  // namespace replistat
