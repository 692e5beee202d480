#include "replistat/selective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "replistat/errors.hpp"
#include "replistat/normal.hpp"
#include "replistat/truncated_normal.hpp"

namespace replistat {

namespace {

constexpr double k_inf = std::numeric_limits<double>::infinity();
constexpr double k_log_saturation = -27.631021115928547;  // log(1e-12)

// Lower/upper tail probabilities of N(mu, sigma^2) truncated to `support`,
// evaluated wholly in log space so that supports carrying mass far below
// 1e-300 under extreme candidate means still yield accurate ratios.  Each
// tail is accumulated from its own side, so neither suffers 1-F cancellation.
struct TailProbs {
  double cdf = 0.0;
  double sf = 0.0;
  double log_total = -k_inf;
};

TailProbs truncated_tails(const IntervalSet& support, double mu, double sigma, double x) {
  double log_total = -k_inf;
  double log_below = -k_inf;
  double log_above = -k_inf;
  for (const Interval& iv : support.intervals()) {
    double lm = log_interval_mass(iv.lo, iv.hi, mu, sigma);
    log_total = log_sum_exp(log_total, lm);
    double cut = std::min(iv.hi, std::max(iv.lo, x));
    if (cut > iv.lo)
      log_below = log_sum_exp(log_below, log_interval_mass(iv.lo, cut, mu, sigma));
    if (cut < iv.hi)
      log_above = log_sum_exp(log_above, log_interval_mass(cut, iv.hi, mu, sigma));
  }
  TailProbs out;
  out.log_total = log_total;
  if (log_total == -k_inf) return out;
  out.cdf = std::exp(log_below - log_total);
  out.sf = std::exp(log_above - log_total);
  return out;
}

struct CanonicalProblem {
  double d;                // observed contrast value
  double sigma;            // null standard deviation ||eta||
  IntervalSet truncation;  // support of the conditional null law of D
};

CanonicalProblem canonicalize(const SelectiveProblem& prob, const Contrast& c) {
  if (!(c.eta1 > 0.0) || !std::isfinite(c.eta1) || !std::isfinite(c.eta2))
    throw invalid_argument_error("selective contrast: eta1 must be finite and > 0");
  if (!std::isfinite(c.delta))
    throw invalid_argument_error("selective contrast: delta must be finite");
  if (!prob.selection.contains(prob.z_o))
    throw invalid_argument_error("selective problem: z_O must lie in the selection event");
  double d = c.eta1 * prob.z_o + c.eta2 * prob.z_r;
  double m = c.eta2 * prob.z_o - c.eta1 * prob.z_r;
  double norm2 = c.eta1 * c.eta1 + c.eta2 * c.eta2;
  CanonicalProblem out;
  out.d = d;
  out.sigma = std::sqrt(norm2);
  out.truncation = affine_map(prob.selection, norm2 / c.eta1, -c.eta2 * m / c.eta1);
  return out;
}

double pvalue_from_tails(const TailProbs& t, TailSide side) {
  switch (side) {
    case TailSide::lower_tail: return t.cdf;
    case TailSide::upper_tail: return t.sf;
    case TailSide::two_sided_equal_tail:
      return std::min(1.0, 2.0 * std::min(t.cdf, t.sf));
  }
  throw invalid_argument_error("selective_pvalue: unknown tail side");
}

}  // namespace

SelectiveProblem make_problem(const StudyPair& pair) {
  SelectiveProblem prob;
  prob.z_o = pair.z_o;
  prob.z_r = pair.z_r;
  prob.k_o = pair.k_o;
  prob.k_r = pair.k_r;
  prob.selection = pair.selection;
  prob.sign = pair.sign;
  return prob;
}

double selective_pvalue(const SelectiveProblem& prob, const Contrast& c,
                        SelectiveDiagnostics* diag) {
  CanonicalProblem cp = canonicalize(prob, c);
  TailProbs tails = truncated_tails(cp.truncation, c.delta, cp.sigma, cp.d);
  if (tails.log_total == -k_inf)
    throw degenerate_problem_error(
        "selective_pvalue: the truncated null law carries no numerical mass under the "
        "tested delta");
  if (diag) {
    diag->support_mass = std::exp(tails.log_total);
    diag->saturated_support = tails.log_total < k_log_saturation;
  }
  return pvalue_from_tails(tails, c.side);
}

double shift_pvalue(const StudyPair& pair, double delta, bool adjusted) {
  SelectiveProblem prob = make_problem(pair);
  if (!adjusted) prob.selection = IntervalSet::full_line();
  Contrast c;
  c.eta1 = 1.0 / pair.k_o;
  c.eta2 = -1.0 / pair.k_r;
  c.delta = delta;
  c.side = TailSide::two_sided_equal_tail;
  return selective_pvalue(prob, c);
}

IntervalEstimate ci_shift(const StudyPair& pair, double level, bool adjusted) {
  if (!(level > 0.0 && level < 1.0))
    throw invalid_argument_error("ci_shift: level must lie in (0, 1)");
  SelectiveProblem prob = make_problem(pair);
  if (!adjusted) prob.selection = IntervalSet::full_line();

  Contrast c;
  c.eta1 = 1.0 / pair.k_o;
  c.eta2 = -1.0 / pair.k_r;
  CanonicalProblem cp = canonicalize(prob, c);

  // F_delta(d) = P_delta(D <= d | truncation) is nonincreasing in delta
  // (monotone likelihood ratio), so each endpoint is a monotone root find.
  auto cdf_at = [&](double delta) {
    return truncated_tails(cp.truncation, delta, cp.sigma, cp.d).cdf;
  };

  const double span = 50.0 * cp.sigma;
  const double tol = 1e-6;
  // Solve F_delta(d) = target for delta within [-span, span].
  // Returns false when the root is not bracketed.
  auto invert = [&](double target, double* root) {
    double a = -span, b = span;
    double fa = cdf_at(a) - target;
    double fb = cdf_at(b) - target;
    if (fa < 0.0 || fb > 0.0) {
      *root = fa < 0.0 ? -k_inf : k_inf;
      return false;
    }
    for (int it = 0; it < 200 && b - a > tol; ++it) {
      double mid = 0.5 * (a + b);
      if (cdf_at(mid) - target >= 0.0) a = mid;
      else b = mid;
    }
    *root = 0.5 * (a + b);
    return true;
  };

  IntervalEstimate out;
  out.level = level;
  out.target = IntervalTarget::theta_shift;
  out.adjusted = adjusted;
  out.bounded_lo = invert(0.5 * (1.0 + level), &out.lo);
  out.bounded_hi = invert(0.5 * (1.0 - level), &out.hi);
  return out;
}

IntervalEstimate predictive_interval(const StudyPair& pair, double level, bool adjusted,
                                     IntervalTarget target) {
  if (!(level > 0.0 && level < 1.0))
    throw invalid_argument_error("predictive_interval: level must lie in (0, 1)");
  if (target == IntervalTarget::theta_shift)
    throw invalid_argument_error("predictive_interval: target must be a replication scale");

  SelectiveProblem prob = make_problem(pair);
  if (!adjusted) prob.selection = IntervalSet::full_line();
  Contrast c;
  c.eta1 = 1.0 / pair.k_o;
  c.eta2 = -1.0 / pair.k_r;
  c.delta = 0.0;
  c.side = TailSide::two_sided_equal_tail;

  const double threshold = 1.0 - level;
  auto accepts = [&](double z) {
    SelectiveProblem p = prob;
    p.z_r = z;
    return selective_pvalue(p, c) >= threshold;
  };

  // Dense scan centered where the replication estimate matches the original
  // effect, then bisection on each boundary.  The acceptance region is
  // expected to be one interval; any gap is flagged and hulled.
  double sigma = std::sqrt(c.eta1 * c.eta1 + c.eta2 * c.eta2);
  double center = pair.k_r * pair.z_o / pair.k_o;
  double width = std::max(10.0, 10.0 * pair.k_r * sigma);

  IntervalEstimate out;
  out.level = level;
  out.target = target;
  out.adjusted = adjusted;

  const int n_points = 2000;
  std::vector<char> acc;
  std::vector<double> grid;
  int lo_idx = -1, hi_idx = -1;
  for (int expand = 0; expand < 7; ++expand) {
    grid.clear();
    acc.clear();
    grid.reserve(n_points + 1);
    acc.reserve(n_points + 1);
    lo_idx = hi_idx = -1;
    for (int i = 0; i <= n_points; ++i) {
      double z = center - width + 2.0 * width * i / n_points;
      grid.push_back(z);
      bool a = accepts(z);
      acc.push_back(a ? 1 : 0);
      if (a) {
        if (lo_idx < 0) lo_idx = i;
        hi_idx = i;
      }
    }
    if (lo_idx < 0) break;                          // nothing accepted anywhere
    if (lo_idx > 0 && hi_idx < n_points) break;     // region interior to the scan
    width *= 2.0;                                   // touched an edge: widen and rescan
  }

  if (lo_idx < 0) {
    out.empty = true;
    out.lo = out.hi = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  for (int i = lo_idx; i <= hi_idx; ++i)
    if (!acc[i]) {
      out.connected = false;
      break;
    }

  const double tol = 1e-6;
  auto bisect_boundary = [&](double rejected, double accepted) {
    for (int it = 0; it < 200 && std::fabs(accepted - rejected) > tol; ++it) {
      double mid = 0.5 * (rejected + accepted);
      if (accepts(mid)) accepted = mid;
      else rejected = mid;
    }
    return accepted;
  };

  double z_lo, z_hi;
  if (lo_idx == 0) {
    z_lo = -k_inf;
    out.bounded_lo = false;
  } else {
    z_lo = bisect_boundary(grid[lo_idx - 1], grid[lo_idx]);
  }
  if (hi_idx == n_points) {
    z_hi = k_inf;
    out.bounded_hi = false;
  } else {
    z_hi = bisect_boundary(grid[hi_idx + 1], grid[hi_idx]);
  }

  double scale = target == IntervalTarget::effect_replication ? pair.k_r : 1.0;
  out.lo = z_lo / scale;
  out.hi = z_hi / scale;
  return out;
}

double decline_pvalue(const StudyPair& pair, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw invalid_argument_error("decline_pvalue: rho must lie in [0, 1]");

  // Orient so the claimed direction is positive.
  double s = pair.sign < 0 ? -1.0 : 1.0;
  double z_o = s * pair.z_o;
  double z_r = s * pair.z_r;

  if (rho == 1.0) {
    // eta has no z_O component; conditioning on M pins z_O, the truncation
    // disappears, and the test is the plain one-sided z-test on z_R.
    return norm_cdf(z_r);
  }

  IntervalSet oriented =
      pair.sign < 0 ? affine_map(pair.selection, -1.0, 0.0) : pair.selection;
  // Restrict to the claimed direction — unless no selection happened at all,
  // in which case there is no direction claim to condition on.
  IntervalSet a_plus = oriented.is_full_line()
                           ? oriented
                           : oriented.clip(0.0, std::numeric_limits<double>::infinity());

  SelectiveProblem prob;
  prob.z_o = z_o;
  prob.z_r = z_r;
  prob.k_o = pair.k_o;
  prob.k_r = pair.k_r;
  prob.selection = a_plus;
  prob.sign = +1;

  // Contrast proportional to ((1-rho)/k_O, -1/k_R): its mean is zero exactly
  // on the boundary theta_R = (1-rho) * theta_O, and positive rescaling never
  // changes the p-value.
  Contrast c;
  c.eta1 = (1.0 - rho) / pair.k_o;
  c.eta2 = -1.0 / pair.k_r;
  c.delta = 0.0;
  // Decline means the replication ran BELOW (1-rho) of the original, i.e.
  // large observed D; the evidence tail is the upper one.
  c.side = TailSide::upper_tail;
  return selective_pvalue(prob, c);
}

}  // namespace replistat
