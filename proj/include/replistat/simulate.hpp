#ifndef REPLISTAT_SIMULATE_HPP
#define REPLISTAT_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace replistat {

enum class Scenario { fixed_theta, mixed_nulls, boundary_decline };

// Shared simulator configuration.  Curve operations use theta_grid, the
// sigmas, alpha0, n_trials, and seed; the harnesses additionally use the
// scenario-specific knobs below.
struct SimConfig {
  std::vector<double> theta_grid;  // defaults to 0:5:0.05 when empty
  double alpha0 = 0.05;
  double sigma_o = 1.0;
  double sigma_r = 1.0;
  long n_trials = 200000;
  std::uint64_t seed = 20260816;
  Scenario scenario = Scenario::fixed_theta;

  // mixed_nulls (FDP harness)
  double null_fraction = 0.3;
  long n_studies = 68;
  double effect_size = 3.0;      // |theta| of non-null studies
  double alpha_external = 0.01;  // stricter threshold for the external method
  double lambda = 0.5;
  double confidence = 0.95;

  // boundary_decline / level harness
  double rho = 0.3;
};

std::vector<double> default_theta_grid();

// One point of a selection-bias curve: the analytic (quadrature/closed
// form) value and an independent Monte-Carlo cross-check with its standard
// error.  n_selected counts the MC draws that survived selection.
struct CurvePoint {
  double theta = 0.0;
  double analytic = 0.0;
  double mc = 0.0;
  double mc_se = 0.0;
  long n_selected = 0;
};

// P(replication not significant in the original direction | original selected).
std::vector<CurvePoint> curve_nonsig_same_dir(const SimConfig& cfg);
// P(original sign wrong | selected), theta >= 0 convention.
std::vector<CurvePoint> curve_type_s(const SimConfig& cfg);
// P(original estimate falls outside the replication confidence interval | selected).
std::vector<CurvePoint> curve_ci_miss(const SimConfig& cfg);
// P(replication estimate is closer to zero in the claimed direction | selected).
std::vector<CurvePoint> curve_decline(const SimConfig& cfg);

// Ground-truth validation of the FDP estimators under a known null fraction.
// mean_estimate and the bias fields evaluate the raw ratio estimators, not
// the [0, 1]-clipped values that analyses report: the clip is presentational
// and would hide conservativeness in mean whenever the true FDP sits at the
// boundary. Coverage uses the reported (clipped) upper bounds.
struct FdpMethodReport {
  std::string method;          // "internal" or "external"
  long n_trials_used = 0;      // external skips trials with no discoveries
  double mean_estimate = 0.0;
  double mean_true_fdp = 0.0;
  double bias_mean = 0.0;      // mean(estimate - true), positive = conservative
  double bias_se = 0.0;
  double coverage = 0.0;       // P(ucb >= true FDP)
  double coverage_se = 0.0;
};

struct FdpHarnessReport {
  FdpMethodReport internal_report;
  FdpMethodReport external_report;
  bool count_identities_ok = true;  // latent-count bookkeeping checks per trial
  double null_fraction = 0.0;
  long n_studies = 0;
  long n_trials = 0;
  std::uint64_t seed = 0;
};

FdpHarnessReport harness_fdp(const SimConfig& cfg);

// Empirical level of the selective tests at their null boundaries.
struct LevelPoint {
  std::string test;  // "shift", "decline_boundary", or "decline_interior"
  double theta_o = 0.0;
  double theta_r = 0.0;
  double k_o = 1.0;
  double k_r = 1.0;
  double rho = 0.0;  // decline rows only
  long n_trials = 0;
  double rate01 = 0.0;  // P(p <= 0.01)
  double rate05 = 0.0;  // P(p <= 0.05)
  double rate10 = 0.0;  // P(p <= 0.10)
  double se05 = 0.0;    // binomial SE of rate05
};

std::vector<LevelPoint> harness_selective_level(const SimConfig& cfg);

// Coverage of the inverted intervals when original and replication share the
// same true effect.
struct IntervalCoverageReport {
  long n_trials = 0;
  double ci_coverage = 0.0;
  double ci_se = 0.0;
  double pred_coverage = 0.0;
  double pred_se = 0.0;
  bool duality_ok = true;  // interval membership matched test acceptance on audited trials
  long n_audited = 0;
};

IntervalCoverageReport harness_interval_coverage(const SimConfig& cfg, double theta, double k_o,
                                                 double k_r, double level = 0.95);

}  // namespace replistat

#endif  // REPLISTAT_SIMULATE_HPP
