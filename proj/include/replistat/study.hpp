#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "replistat/interval_set.hpp"

namespace replistat {

enum class TestFamily { z, t_one_sample, t_two_sample, f1, correlation, partial_correlation };
enum class Sidedness { one_sided, two_sided };

const char* to_string(TestFamily f);
const char* to_string(Sidedness s);

// One arm (original or replication) of a study pair, as read from the CSV.
struct StudyArm {
  TestFamily family = TestFamily::z;
  double statistic = 0.0;
  long df = -1;           // denominator df for t/F families; -1 = absent
  long n_total = -1;
  long n_group1 = -1;
  long n_group2 = -1;
  long n_covariates = 0;
  double reported_p = 1.0;
  Sidedness sidedness = Sidedness::two_sided;
  int direction = 0;      // +1/-1; required for F(1, df) rows, optional otherwise
  std::optional<double> k_override;
};

// A candidate pair straight from parsing, before any eligibility decision.
struct RawPair {
  std::string study_id;
  StudyArm original;
  StudyArm replication;
  long line_original = -1;
  long line_replication = -1;
};

// One fully standardized, selection-aware pair: unit-variance z-scores with
// Z ~ N(k*theta, 1), the selection event the original survived, and the
// claimed direction.
struct StudyPair {
  std::string study_id;
  StudyArm original;
  StudyArm replication;
  double z_o = 0.0, z_r = 0.0;
  double k_o = 1.0, k_r = 1.0;
  int sign = +1;  // sgn(z_o), the claimed effect direction
  IntervalSet selection;
  double alpha0 = 0.05;
};

// A study that enters the false-discovery analyses (original significance is
// all that is required; the z-standardization may be unavailable).
struct FdpStudy {
  std::string study_id;
  double p_original;                   // reported two-sided original p-value
  double p_replication_directional;    // one-sided, oriented to the original claim
};

struct StudyIssue {
  std::string study_id;  // empty for file-level issues
  long line = -1;
  std::string code;      // stable machine-readable reason code
  std::string detail;    // human-readable explanation
};

struct EligibilityReport {
  long total = 0;                   // pairs parsed (malformed rows excluded)
  long significant_univariate = 0;  // original reported_p < alpha0
  long z_approximable = 0;          // additionally standardizable to z on both arms
  std::vector<StudyIssue> issues;   // row errors, exclusions, consistency flags
  // Final status per study id: "eligible", "fdp_only", or an exclusion code.
  std::map<std::string, std::string> status;
  bool has_row_errors = false;
};

struct ParseResult {
  std::vector<RawPair> pairs;
  EligibilityReport report;
};

struct EligibilityCriteria {
  double alpha0 = 0.05;
  long min_df = 30;
};

struct EligibleStudies {
  std::vector<FdpStudy> fdp_class;   // originals significant at alpha0
  std::vector<StudyPair> z_class;    // additionally z-standardizable (subset)
  EligibilityReport report;
};

// Reads the documented CSV schema (one row per arm, two rows per study).
// Unknown header columns or an unsupported schema version throw
// schema_error; malformed data rows are collected in the report with their
// line numbers, never silently dropped.
ParseResult parse_studies(const std::string& path, const std::string& schema_version = "1");

// Applies the two nested eligibility gates described above.
EligibleStudies filter_eligible(const std::vector<RawPair>& pairs,
                                const EligibilityCriteria& criteria,
                                EligibilityReport report_seed = {});

// Standardizes one arm to (z, k) with Z ~ N(k*theta, 1). Throws
// not_z_approximable_error (t/F with df below min_df) or
// invalid_argument_error (|r| >= 1, missing design fields).
struct ZScore {
  double z;
  double k;
};
ZScore to_zscore(const StudyArm& arm, long min_df = 30);

// Design constant k with Z ~ N(k*theta, 1); k_override wins when present.
double k_factor(const StudyArm& arm);

// Selection-adjusted p-value p' = p / alpha0; requires p < alpha0.
double adjust_pvalue(double p, double alpha0);

// The set of z-scores that would have been selected at level alpha0 for
// this arm's sidedness and direction. alpha0 >= 1 means no selection.
IntervalSet selection_event(const StudyArm& arm, double alpha0);

// True point-biserial correlation implied by a standardized mean difference
// d between groups of sizes n_treat and n_ctrl:
//   rho = d*sqrt(p*q) / sqrt(1 + d^2*p*q),  p = n_treat/(n_treat+n_ctrl).
double pointbiserial_true_corr(double d, long n_treat, long n_ctrl);

// One-sided replication p-value oriented to the original claimed direction
// (used by the replication false-discovery analysis). Works for any pair
// whose replication arm has a usable direction; z-standardizable arms use
// the z-score directly.
double replication_directional_pvalue(const RawPair& pair, int claimed_direction);

// The effective direction of an arm's effect: the direction column when
// given, otherwise the sign of the statistic. 0 when indeterminate.
int effective_direction(const StudyArm& arm);

}  // namespace replistat
