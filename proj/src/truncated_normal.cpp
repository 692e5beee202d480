#include "replistat/truncated_normal.hpp"

#include <cmath>
#include <limits>

#include "replistat/errors.hpp"
#include "replistat/normal.hpp"

namespace replistat {

namespace {
constexpr double k_inf = std::numeric_limits<double>::infinity();
constexpr double k_sqrt2 = 1.4142135623730950488;
// Supports carrying less mass than this under the untruncated law are
// rejected: renormalizing them divides by a number indistinguishable from 0.
constexpr double k_log_min_mass = -690.77552789821368;  // log(1e-300)
}  // namespace

double log_interval_mass(double lo, double hi, double mu, double sigma) {
  double a = (lo - mu) / sigma;
  double b = (hi - mu) / sigma;
  if (!(a < b)) throw invalid_argument_error("log_interval_mass: empty interval");
  if (a == -k_inf && b == k_inf) return 0.0;
  if (b <= 0.0) {
    // Both endpoints at or left of the mean: P(a<X<b) = sf(-b) - sf(-a).
    return log_diff_exp(log_norm_sf(-b), log_norm_sf(-a));
  }
  if (a >= 0.0) {
    return log_diff_exp(log_norm_sf(a), log_norm_sf(b));
  }
  // Straddles the mean: erf terms have opposite signs, so the sum below is
  // a cancellation-free addition of nonnegative quantities.
  double left = std::erf(-a / k_sqrt2);   // in [0, 1]
  double right = std::erf(b / k_sqrt2);   // in [0, 1]
  return std::log(0.5 * (left + right));
}

TruncatedNormal::TruncatedNormal(double mu, double sigma, IntervalSet support)
    : mu_(mu), sigma_(sigma), support_(std::move(support)) {
  if (!std::isfinite(mu)) throw invalid_argument_error("TruncatedNormal: mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw invalid_argument_error("TruncatedNormal: sigma must be positive and finite");
  if (support_.empty())
    throw invalid_argument_error("TruncatedNormal: zero-mass support (empty interval set)");

  log_total_ = -k_inf;
  pieces_.reserve(support_.intervals().size());
  for (const Interval& iv : support_.intervals()) {
    Piece pc;
    pc.lo = iv.lo;
    pc.hi = iv.hi;
    pc.log_mass = log_interval_mass(iv.lo, iv.hi, mu_, sigma_);
    pieces_.push_back(pc);
    log_total_ = log_sum_exp(log_total_, pc.log_mass);
  }
  if (!(log_total_ >= k_log_min_mass))
    throw invalid_argument_error("TruncatedNormal: zero-mass support (mass below 1e-300)");

  double log_prefix = -k_inf;
  for (Piece& pc : pieces_) {
    pc.frac_before = std::exp(log_prefix - log_total_);
    log_prefix = log_sum_exp(log_prefix, pc.log_mass);
  }
  double log_suffix = -k_inf;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    it->frac_after = std::exp(log_suffix - log_total_);
    log_suffix = log_sum_exp(log_suffix, it->log_mass);
  }
}

double TruncatedNormal::total_mass() const { return std::exp(log_total_); }

void TruncatedNormal::cdf_sf(double x, double* cdf_out, double* sf_out) const {
  auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
  if (std::isnan(x)) throw invalid_argument_error("TruncatedNormal: NaN query point");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& pc = pieces_[i];
    if (x <= pc.lo) {
      // At or below the start of piece i (covers gaps and the region below
      // the support): everything from piece i onward lies above x.
      *cdf_out = clamp01(pc.frac_before);
      *sf_out = i == 0 ? 1.0 : clamp01(pieces_[i - 1].frac_after);
      return;
    }
    if (x < pc.hi) {
      double part_lo = std::exp(log_interval_mass(pc.lo, x, mu_, sigma_) - log_total_);
      double part_hi = std::exp(log_interval_mass(x, pc.hi, mu_, sigma_) - log_total_);
      *cdf_out = clamp01(pc.frac_before + part_lo);
      *sf_out = clamp01(pc.frac_after + part_hi);
      return;
    }
  }
  *cdf_out = 1.0;
  *sf_out = 0.0;
}

double TruncatedNormal::cdf(double x) const {
  double f, s;
  cdf_sf(x, &f, &s);
  return f;
}

double TruncatedNormal::sf(double x) const {
  double f, s;
  cdf_sf(x, &f, &s);
  return s;
}

double TruncatedNormal::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw invalid_argument_error("TruncatedNormal::quantile: p must be in (0, 1)");

  // Establish a bracket [xlo, xhi] with cdf(xlo) <= p <= cdf(xhi). Finite
  // support endpoints bracket exactly; unbounded sides start 45 sigma out
  // (any valid support intersects that range) and expand geometrically.
  double xlo = pieces_.front().lo;
  if (xlo == -k_inf) {
    xlo = mu_ - 45.0 * sigma_;
    if (pieces_.front().hi < xlo) xlo = pieces_.front().hi - sigma_;
    while (cdf(xlo) > p) xlo -= 8.0 * sigma_;
  }
  double xhi = pieces_.back().hi;
  if (xhi == k_inf) {
    xhi = mu_ + 45.0 * sigma_;
    if (pieces_.back().lo > xhi) xhi = pieces_.back().lo + sigma_;
    while (cdf(xhi) < p) xhi += 8.0 * sigma_;
  }

  const double tol = 1e-10;
  double mid = 0.5 * (xlo + xhi);
  double f = cdf(mid);
  for (int iter = 0; iter < 400; ++iter) {
    if (std::fabs(f - p) <= 0.5 * tol) break;
    if (f < p)
      xlo = mid;
    else
      xhi = mid;
    double next = 0.5 * (xlo + xhi);
    if (next == mid || xhi - xlo < 1e-15 * (std::fabs(mid) + 1.0)) break;
    mid = next;
    f = cdf(mid);
  }

  // One Newton refinement where the conditional density is informative.
  double zs = (mid - mu_) / sigma_;
  double dens =
      std::exp(log_norm_pdf(zs) - std::log(sigma_) - log_total_);
  if (dens > 0.0 && support_.contains(mid)) {
    double step = (f - p) / dens;
    double cand = mid - step;
    if (cand > xlo && cand < xhi && support_.contains(cand)) {
      double fc = cdf(cand);
      if (std::fabs(fc - p) < std::fabs(f - p)) mid = cand;
    }
  }

  // The quantile must lie inside the support; bisection can settle in a
  // flat gap only when p equals the cumulative mass at the gap, in which
  // case both gap edges are valid quantiles -- return the lower one.
  if (!support_.contains(mid)) {
    double snapped = pieces_.front().lo;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (mid <= pieces_[i].lo) {
        snapped = (i == 0) ? pieces_[0].lo : pieces_[i - 1].hi;
        break;
      }
      snapped = pieces_[i].hi;
    }
    mid = std::isfinite(snapped) ? snapped : mid;
  }
  return mid;
}

double TruncatedNormal::sample(Rng& rng) const { return quantile(rng.uniform()); }

double mass(const IntervalSet& s, double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw invalid_argument_error("mass: sigma must be positive and finite");
  if (s.empty()) return 0.0;
  double log_total = -k_inf;
  for (const Interval& iv : s.intervals())
    log_total = log_sum_exp(log_total, log_interval_mass(iv.lo, iv.hi, mu, sigma));
  return std::exp(log_total);
}

double trunc_cdf(double x, const TruncatedNormal& d) { return d.cdf(x); }

double trunc_quantile(double p, const TruncatedNormal& d) { return d.quantile(p); }

double trunc_sample(const TruncatedNormal& d, Rng& rng) { return d.sample(rng); }

}  // namespace replistat
