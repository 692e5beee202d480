#include "replistat/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "replistat/errors.hpp"
#include "replistat/fdp.hpp"
#include "replistat/interval_set.hpp"
#include "replistat/normal.hpp"
#include "replistat/quadrature.hpp"
#include "replistat/rng.hpp"
#include "replistat/selective.hpp"
#include "replistat/truncated_normal.hpp"

namespace replistat {

namespace {

// Stream tags keeping every operation's Monte Carlo draws independent.
constexpr std::uint64_t k_tag_nonsig = 0x6e6f6e736967ull;
constexpr std::uint64_t k_tag_type_s = 0x747970655f73ull;
constexpr std::uint64_t k_tag_ci_miss = 0x63695f6d697373ull;
constexpr std::uint64_t k_tag_decline = 0x6465636c696e65ull;
constexpr std::uint64_t k_tag_fdp = 0x666470ull;
constexpr std::uint64_t k_tag_level = 0x6c6576656cull;
constexpr std::uint64_t k_tag_coverage = 0x636f76ull;

struct SelectionGeometry {
  double c;            // two-sided significance cutoff on the z scale
  double ps, ns, sel;  // P(Z > c), P(Z < -c), their sum, for Z ~ N(theta, sigma_o^2)
};

SelectionGeometry geometry(double theta, double sigma_o, double alpha0) {
  SelectionGeometry g;
  g.c = norm_quantile(1.0 - alpha0 / 2.0);
  g.ps = norm_sf((g.c - theta) / sigma_o);
  g.ns = norm_cdf((-g.c - theta) / sigma_o);
  g.sel = g.ps + g.ns;
  return g;
}

std::vector<double> grid_of(const SimConfig& cfg) {
  return cfg.theta_grid.empty() ? default_theta_grid() : cfg.theta_grid;
}

void check_cfg(const SimConfig& cfg) {
  if (cfg.n_trials < 1) throw invalid_argument_error("simulate: n_trials must be >= 1");
  if (!(cfg.alpha0 > 0.0 && cfg.alpha0 < 1.0))
    throw invalid_argument_error("simulate: alpha0 must lie in (0, 1)");
  if (!(cfg.sigma_o > 0.0) || !(cfg.sigma_r > 0.0))
    throw invalid_argument_error("simulate: sigmas must be positive");
}

// Shared Monte Carlo loop: draws (Z, Z') pairs, keeps the selected ones, and
// estimates the conditional probability of the event evaluated per draw.
template <typename Event>
CurvePoint mc_conditional(const SimConfig& cfg, std::uint64_t tag, double theta, double c,
                          bool needs_second, Event event) {
  long n_sel = 0, n_hit = 0;
  for (long t = 0; t < cfg.n_trials; ++t) {
    Rng rng(Rng::derive(cfg.seed ^ tag, static_cast<std::uint64_t>(t)));
    double z = theta + cfg.sigma_o * rng.normal();
    if (!(z > c || z < -c)) continue;
    ++n_sel;
    double zp = needs_second ? theta + cfg.sigma_r * rng.normal() : 0.0;
    if (event(z, zp)) ++n_hit;
  }
  CurvePoint pt;
  pt.theta = theta;
  pt.n_selected = n_sel;
  if (n_sel == 0) {
    pt.mc = std::numeric_limits<double>::quiet_NaN();
    pt.mc_se = std::numeric_limits<double>::infinity();
    return pt;
  }
  double phat = static_cast<double>(n_hit) / static_cast<double>(n_sel);
  pt.mc = phat;
  pt.mc_se = std::sqrt(phat * (1.0 - phat) / static_cast<double>(n_sel));
  return pt;
}

// Integral of g(z) * density of N(theta, sigma_o^2) over the selected region,
// normalized by the selection probability.
template <typename G>
double selected_expectation(const SelectionGeometry& geo, double theta, double sigma_o, G g) {
  double reach = 13.0 * sigma_o;
  double total = 0.0;
  if (geo.ps > 0.0) {
    double hi = std::max(geo.c, theta) + reach;
    total += integrate_gk(
        [&](double z) { return g(z) * norm_pdf((z - theta) / sigma_o) / sigma_o; }, geo.c, hi);
  }
  if (geo.ns > 0.0) {
    double lo = std::min(-geo.c, theta) - reach;
    total += integrate_gk(
        [&](double z) { return g(z) * norm_pdf((z - theta) / sigma_o) / sigma_o; }, lo, -geo.c);
  }
  return total / geo.sel;
}

}  // namespace

std::vector<double> default_theta_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(0.05 * i);
  return grid;
}

std::vector<CurvePoint> curve_nonsig_same_dir(const SimConfig& cfg) {
  check_cfg(cfg);
  std::vector<CurvePoint> out;
  for (double theta : grid_of(cfg)) {
    SelectionGeometry geo = geometry(theta, cfg.sigma_o, cfg.alpha0);
    double ps_r = norm_sf((geo.c - theta) / cfg.sigma_r);
    double ns_r = norm_cdf((-geo.c - theta) / cfg.sigma_r);
    CurvePoint pt = mc_conditional(cfg, k_tag_nonsig, theta, geo.c, true,
                                   [&](double z, double zp) {
                                     return !((z > geo.c && zp > geo.c) ||
                                              (z < -geo.c && zp < -geo.c));
                                   });
    pt.analytic = 1.0 - (geo.ps * ps_r + geo.ns * ns_r) / geo.sel;
    out.push_back(pt);
  }
  return out;
}

std::vector<CurvePoint> curve_type_s(const SimConfig& cfg) {
  check_cfg(cfg);
  std::vector<CurvePoint> out;
  for (double theta : grid_of(cfg)) {
    if (theta < 0.0)
      throw invalid_argument_error("curve_type_s: theta grid must be nonnegative");
    SelectionGeometry geo = geometry(theta, cfg.sigma_o, cfg.alpha0);
    CurvePoint pt = mc_conditional(cfg, k_tag_type_s, theta, geo.c, false,
                                   [&](double z, double) { return z < -geo.c; });
    pt.analytic = geo.ns / geo.sel;
    out.push_back(pt);
  }
  return out;
}

std::vector<CurvePoint> curve_ci_miss(const SimConfig& cfg) {
  check_cfg(cfg);
  std::vector<CurvePoint> out;
  for (double theta : grid_of(cfg)) {
    SelectionGeometry geo = geometry(theta, cfg.sigma_o, cfg.alpha0);
    double halfwidth = geo.c * cfg.sigma_r;
    CurvePoint pt = mc_conditional(cfg, k_tag_ci_miss, theta, geo.c, true,
                                   [&](double z, double zp) {
                                     return std::fabs(z - zp) > halfwidth;
                                   });
    pt.analytic = selected_expectation(geo, theta, cfg.sigma_o, [&](double z) {
      return norm_cdf((z - halfwidth - theta) / cfg.sigma_r) +
             norm_sf((z + halfwidth - theta) / cfg.sigma_r);
    });
    out.push_back(pt);
  }
  return out;
}

std::vector<CurvePoint> curve_decline(const SimConfig& cfg) {
  check_cfg(cfg);
  std::vector<CurvePoint> out;
  for (double theta : grid_of(cfg)) {
    SelectionGeometry geo = geometry(theta, cfg.sigma_o, cfg.alpha0);
    CurvePoint pt = mc_conditional(cfg, k_tag_decline, theta, geo.c, true,
                                   [&](double z, double zp) {
                                     return z > geo.c ? zp < z : zp > z;
                                   });
    pt.analytic = selected_expectation(geo, theta, cfg.sigma_o, [&](double z) {
      double closer_to_zero = norm_cdf((z - theta) / cfg.sigma_r);
      return z > 0.0 ? closer_to_zero : 1.0 - closer_to_zero;
    });
    out.push_back(pt);
  }
  return out;
}

FdpHarnessReport harness_fdp(const SimConfig& cfg) {
  check_cfg(cfg);
  if (!(cfg.null_fraction >= 0.0 && cfg.null_fraction <= 1.0))
    throw invalid_argument_error("harness_fdp: null_fraction must lie in [0, 1]");
  if (cfg.n_studies < 1) throw invalid_argument_error("harness_fdp: n_studies must be >= 1");

  const double c = norm_quantile(1.0 - cfg.alpha0 / 2.0);
  IntervalSet selection = IntervalSet::two_sided(c);
  TruncatedNormal law_null(0.0, 1.0, selection);
  TruncatedNormal law_pos(cfg.effect_size, 1.0, selection);
  TruncatedNormal law_neg(-cfg.effect_size, 1.0, selection);

  FdpHarnessReport report;
  report.null_fraction = cfg.null_fraction;
  report.n_studies = cfg.n_studies;
  report.n_trials = cfg.n_trials;
  report.seed = cfg.seed;
  report.internal_report.method = "internal";
  report.external_report.method = "external";

  const double alpha_adj = cfg.alpha_external / cfg.alpha0;

  struct Accum {
    long n = 0, covered = 0;
    double sum_est = 0.0, sum_true = 0.0, sum_bias = 0.0, sum_bias2 = 0.0;
    void add(double est, double truth, double ucb) {
      ++n;
      sum_est += est;
      sum_true += truth;
      double b = est - truth;
      sum_bias += b;
      sum_bias2 += b * b;
      if (ucb >= truth) ++covered;
    }
    void fill(FdpMethodReport* r) const {
      r->n_trials_used = n;
      if (n == 0) return;
      double dn = static_cast<double>(n);
      r->mean_estimate = sum_est / dn;
      r->mean_true_fdp = sum_true / dn;
      r->bias_mean = sum_bias / dn;
      double var = std::max(0.0, sum_bias2 / dn - r->bias_mean * r->bias_mean);
      r->bias_se = std::sqrt(var / dn);
      r->coverage = static_cast<double>(covered) / dn;
      r->coverage_se = std::sqrt(r->coverage * (1.0 - r->coverage) / dn);
    }
  };
  Accum internal_acc, external_acc;

  std::vector<double> p_adj(cfg.n_studies);
  std::vector<char> is_false(cfg.n_studies);

  for (long t = 0; t < cfg.n_trials; ++t) {
    Rng rng(Rng::derive(cfg.seed ^ k_tag_fdp, static_cast<std::uint64_t>(t)));
    long false_total = 0, false_at_alpha = 0, r_alpha = 0;
    long b_count = 0, u_count = 0, w_count = 0;
    for (long j = 0; j < cfg.n_studies; ++j) {
      bool is_null = rng.uniform() < cfg.null_fraction;
      int theta_sign = 0;
      const TruncatedNormal* law = &law_null;
      if (!is_null) {
        theta_sign = rng.uniform() < 0.5 ? +1 : -1;
        law = theta_sign > 0 ? &law_pos : &law_neg;
      }
      double z = law->sample(rng);
      int claim = z > 0.0 ? +1 : -1;
      bool claim_false = is_null || claim != theta_sign;
      double p = 2.0 * norm_sf(std::fabs(z)) / cfg.alpha0;
      p_adj[j] = std::min(p, 1.0);
      is_false[j] = claim_false ? 1 : 0;
      if (claim_false) ++false_total;
      if (p_adj[j] < alpha_adj) {
        ++r_alpha;
        if (claim_false) ++false_at_alpha;
      }
      if (p_adj[j] >= cfg.lambda) {
        ++b_count;
        if (claim_false) ++u_count;
      } else if (p_adj[j] >= alpha_adj && claim_false) {
        ++w_count;
      }
    }
    // Latent-count bookkeeping: every false claim sits in exactly one of the
    // three adjusted-p bins, and bin counts never exceed their totals.
    long t_alpha = r_alpha - false_at_alpha;
    if (false_at_alpha + w_count + u_count != false_total || u_count > b_count ||
        false_at_alpha > r_alpha || t_alpha < 0 || false_total > cfg.n_studies)
      report.count_identities_ok = false;

    double truth = static_cast<double>(false_total) / static_cast<double>(cfg.n_studies);
    FdpResult internal = fdp_internal(p_adj, cfg.lambda, cfg.confidence);
    // Bias is audited on the raw ratio estimator. The [0, 1] clip applied to
    // reported estimates is presentational: when the true FDP sits at the
    // boundary (all nulls), clipping can only pull the mean below the truth,
    // masking the conservative-in-mean property that is being validated.
    double internal_raw = static_cast<double>(internal.B) /
                          ((1.0 - cfg.lambda) * static_cast<double>(internal.R));
    internal_acc.add(internal_raw, truth, internal.ucb);

    if (r_alpha > 0) {
      FdpResult external =
          fdp_external(p_adj, cfg.alpha_external, cfg.alpha0, cfg.lambda, cfg.confidence);
      double external_raw = (1.0 - external.beta) / external.beta *
                            static_cast<double>(external.B) /
                            static_cast<double>(external.R_alpha);
      double truth_alpha = static_cast<double>(false_at_alpha) / static_cast<double>(r_alpha);
      external_acc.add(external_raw, truth_alpha, external.ucb);
    }
  }
  internal_acc.fill(&report.internal_report);
  external_acc.fill(&report.external_report);
  return report;
}

std::vector<LevelPoint> harness_selective_level(const SimConfig& cfg) {
  check_cfg(cfg);
  const double c = norm_quantile(1.0 - cfg.alpha0 / 2.0);
  IntervalSet selection = IntervalSet::two_sided(c);

  struct PointSpec {
    const char* test;
    double theta_o, theta_r, k_o, k_r, rho;
  };
  std::vector<PointSpec> specs;
  const double thetas[5] = {0.0, 0.25, 0.5, 1.0, 2.0};
  const double kk[5][2] = {{1.0, 1.0}, {2.0, 1.0}, {1.0, 2.0}, {4.0, 2.0}, {3.0, 5.0}};
  for (double th : thetas)
    for (const auto& k : kk)
      specs.push_back({"shift", th, th, k[0], k[1], 0.0});
  // Decline boundaries: theta_R exactly (1-rho) * theta_O leaves the
  // boundary hypothesis true under either observed sign.
  const double decline_rows[5][2] = {{1.0, 0.0}, {1.0, 0.25}, {1.0, 0.5}, {2.0, 0.75}, {2.0, 1.0}};
  for (const auto& row : decline_rows)
    specs.push_back({"decline_boundary", row[0], (1.0 - row[1]) * row[0], 1.0, 1.0, row[1]});
  // Interior points: no decline at all, so the one-sided test must be
  // conservative.  theta_o is kept large enough that a wrong-signed original
  // (which would flip the hypothesis) is a < 1e-6 event.
  specs.push_back({"decline_interior", 3.0, 3.0, 1.0, 1.0, 0.5});
  specs.push_back({"decline_interior", 4.0, 4.0, 1.5, 1.0, 0.25});

  std::vector<LevelPoint> out;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const PointSpec& ps = specs[s];
    TruncatedNormal law_o(ps.k_o * ps.theta_o, 1.0, selection);
    long hit01 = 0, hit05 = 0, hit10 = 0;
    std::uint64_t point_seed = Rng::derive(cfg.seed ^ k_tag_level, s);
    for (long t = 0; t < cfg.n_trials; ++t) {
      Rng rng(Rng::derive(point_seed, static_cast<std::uint64_t>(t)));
      StudyPair pair;
      pair.z_o = law_o.sample(rng);
      pair.z_r = ps.k_r * ps.theta_r + rng.normal();
      pair.k_o = ps.k_o;
      pair.k_r = ps.k_r;
      pair.sign = pair.z_o > 0.0 ? +1 : -1;
      pair.selection = selection;
      pair.alpha0 = cfg.alpha0;
      double p = ps.test[0] == 's' ? shift_pvalue(pair, 0.0, true)
                                   : decline_pvalue(pair, ps.rho);
      if (p <= 0.01) ++hit01;
      if (p <= 0.05) ++hit05;
      if (p <= 0.10) ++hit10;
    }
    LevelPoint pt;
    pt.test = ps.test;
    pt.theta_o = ps.theta_o;
    pt.theta_r = ps.theta_r;
    pt.k_o = ps.k_o;
    pt.k_r = ps.k_r;
    pt.rho = ps.rho;
    pt.n_trials = cfg.n_trials;
    double dn = static_cast<double>(cfg.n_trials);
    pt.rate01 = static_cast<double>(hit01) / dn;
    pt.rate05 = static_cast<double>(hit05) / dn;
    pt.rate10 = static_cast<double>(hit10) / dn;
    pt.se05 = std::sqrt(pt.rate05 * (1.0 - pt.rate05) / dn);
    out.push_back(pt);
  }
  return out;
}

IntervalCoverageReport harness_interval_coverage(const SimConfig& cfg, double theta, double k_o,
                                                 double k_r, double level) {
  check_cfg(cfg);
  if (!(level > 0.0 && level < 1.0))
    throw invalid_argument_error("harness_interval_coverage: level must lie in (0, 1)");
  const double c = norm_quantile(1.0 - cfg.alpha0 / 2.0);
  IntervalSet selection = IntervalSet::two_sided(c);
  TruncatedNormal law_o(k_o * theta, 1.0, selection);

  IntervalCoverageReport report;
  report.n_trials = cfg.n_trials;
  const long n_audit = std::min<long>(cfg.n_trials, 300);
  long ci_cov = 0, pred_cov = 0;

  for (long t = 0; t < cfg.n_trials; ++t) {
    Rng rng(Rng::derive(cfg.seed ^ k_tag_coverage, static_cast<std::uint64_t>(t)));
    StudyPair pair;
    pair.z_o = law_o.sample(rng);
    pair.z_r = k_r * theta + rng.normal();
    pair.k_o = k_o;
    pair.k_r = k_r;
    pair.sign = pair.z_o > 0.0 ? +1 : -1;
    pair.selection = selection;
    pair.alpha0 = cfg.alpha0;

    IntervalEstimate ci = ci_shift(pair, level, true);
    if (ci.lo <= 0.0 && 0.0 <= ci.hi) ++ci_cov;

    // Fresh replication draw; the predictive interval is exactly the set of
    // draws the delta=0 shift test accepts, so acceptance is the fast
    // equivalent of interval membership.
    double z_fresh = k_r * theta + rng.normal();
    StudyPair fresh = pair;
    fresh.z_r = z_fresh;
    bool accepted = shift_pvalue(fresh, 0.0, true) >= 1.0 - level;
    if (accepted) ++pred_cov;

    if (t < n_audit) {
      ++report.n_audited;
      IntervalEstimate pred =
          predictive_interval(pair, level, true, IntervalTarget::z_replication);
      bool member = !pred.empty && pred.lo <= z_fresh && z_fresh <= pred.hi;
      bool near_edge = (!pred.empty) && (std::fabs(z_fresh - pred.lo) < 1e-5 ||
                                         std::fabs(z_fresh - pred.hi) < 1e-5);
      if (member != accepted && !near_edge) report.duality_ok = false;
      if (!pred.connected) report.duality_ok = false;
    }
  }
  double dn = static_cast<double>(cfg.n_trials);
  report.ci_coverage = static_cast<double>(ci_cov) / dn;
  report.ci_se = std::sqrt(report.ci_coverage * (1.0 - report.ci_coverage) / dn);
  report.pred_coverage = static_cast<double>(pred_cov) / dn;
  report.pred_se = std::sqrt(report.pred_coverage * (1.0 - report.pred_coverage) / dn);
  return report;
}

}  // namespace replistat
