#include "replistat/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "replistat/csv.hpp"
#include "replistat/errors.hpp"
#include "replistat/normal.hpp"

namespace replistat {

namespace {

const std::vector<std::string>& schema_columns() {
  static const std::vector<std::string> cols = {
      "study_id", "arm",      "test_family",  "statistic",  "df",
      "n_total",  "n_group1", "n_group2",     "n_covariates", "reported_p",
      "sidedness", "direction", "k_override"};
  return cols;
}

bool parse_double_cell(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_long_cell(const std::string& s, long* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

struct RowError {
  std::string code;
  std::string detail;
};

}  // namespace

const char* to_string(TestFamily f) {
  switch (f) {
    case TestFamily::z: return "z";
    case TestFamily::t_one_sample: return "t_one_sample";
    case TestFamily::t_two_sample: return "t_two_sample";
    case TestFamily::f1: return "F1";
    case TestFamily::correlation: return "correlation";
    case TestFamily::partial_correlation: return "partial_correlation";
  }
  return "?";
}

const char* to_string(Sidedness s) {
  return s == Sidedness::one_sided ? "one_sided" : "two_sided";
}

int effective_direction(const StudyArm& arm) {
  if (arm.direction != 0) return arm.direction;
  // An F(1, df) statistic is a squared quantity: its sign carries no
  // directional information, so only an explicit direction column counts.
  if (arm.family == TestFamily::f1) return 0;
  if (arm.statistic > 0.0) return +1;
  if (arm.statistic < 0.0) return -1;
  return 0;
}

double k_factor(const StudyArm& arm) {
  if (arm.k_override) {
    if (!(*arm.k_override > 0.0))
      throw invalid_argument_error("k_factor: k_override must be positive");
    return *arm.k_override;
  }
  switch (arm.family) {
    case TestFamily::z:
    case TestFamily::t_one_sample:
      if (arm.n_total < 1)
        throw invalid_argument_error("k_factor: n_total required for this design");
      return std::sqrt(static_cast<double>(arm.n_total));
    case TestFamily::t_two_sample:
      if (arm.n_group1 < 1 || arm.n_group2 < 1)
        throw invalid_argument_error("k_factor: group sizes required for a two-sample design");
      return std::sqrt(static_cast<double>(arm.n_group1) * static_cast<double>(arm.n_group2) /
                       static_cast<double>(arm.n_group1 + arm.n_group2));
    case TestFamily::f1:
      if (arm.n_group1 >= 1 && arm.n_group2 >= 1)
        return std::sqrt(static_cast<double>(arm.n_group1) * static_cast<double>(arm.n_group2) /
                         static_cast<double>(arm.n_group1 + arm.n_group2));
      if (arm.n_total >= 1) return std::sqrt(static_cast<double>(arm.n_total));
      throw invalid_argument_error("k_factor: group sizes or n_total required for an F design");
    case TestFamily::correlation:
      if (arm.n_total < 4)
        throw invalid_argument_error("k_factor: n_total >= 4 required for a correlation");
      return std::sqrt(static_cast<double>(arm.n_total - 3));
    case TestFamily::partial_correlation: {
      long m = arm.n_total - 3 - arm.n_covariates;
      if (arm.n_total < 1 || m < 1)
        throw invalid_argument_error(
            "k_factor: n_total - 3 - n_covariates must be >= 1 for a partial correlation");
      return std::sqrt(static_cast<double>(m));
    }
  }
  throw invalid_argument_error("k_factor: unknown test family");
}

ZScore to_zscore(const StudyArm& arm, long min_df) {
  switch (arm.family) {
    case TestFamily::z:
      return {arm.statistic, k_factor(arm)};
    case TestFamily::t_one_sample:
    case TestFamily::t_two_sample:
      if (arm.df < min_df)
        throw not_z_approximable_error("t-statistic with df below the z-approximation threshold");
      return {arm.statistic, k_factor(arm)};
    case TestFamily::f1: {
      if (arm.df < min_df)
        throw not_z_approximable_error("F-statistic with df below the z-approximation threshold");
      if (arm.statistic < 0.0)
        throw invalid_argument_error("to_zscore: F-statistic must be nonnegative");
      int dir = effective_direction(arm);
      if (dir == 0)
        throw invalid_argument_error(
            "to_zscore: an F-statistic is directionless; the direction column is required");
      return {static_cast<double>(dir) * std::sqrt(arm.statistic), k_factor(arm)};
    }
    case TestFamily::correlation:
    case TestFamily::partial_correlation: {
      if (!(std::fabs(arm.statistic) < 1.0))
        throw invalid_argument_error("to_zscore: |r| must be < 1");
      long cov = arm.family == TestFamily::partial_correlation ? arm.n_covariates : 0;
      long m = arm.n_total - 3 - cov;
      if (arm.n_total < 1 || m < 1)
        throw invalid_argument_error(
            "to_zscore: n_total - 3 - n_covariates must be >= 1 for a correlation");
      double scale = std::sqrt(static_cast<double>(m));
      return {scale * std::atanh(arm.statistic), arm.k_override ? k_factor(arm) : scale};
    }
  }
  throw invalid_argument_error("to_zscore: unknown test family");
}

double adjust_pvalue(double p, double alpha0) {
  if (!(alpha0 > 0.0 && alpha0 <= 1.0))
    throw invalid_argument_error("adjust_pvalue: alpha0 must lie in (0, 1]");
  if (!(p > 0.0)) throw invalid_argument_error("adjust_pvalue: p must be positive");
  if (!(p < alpha0))
    throw not_selected_error("adjust_pvalue: p >= alpha0, the study would not have been selected");
  return p / alpha0;
}

IntervalSet selection_event(const StudyArm& arm, double alpha0) {
  if (!(alpha0 > 0.0)) throw invalid_argument_error("selection_event: alpha0 must be positive");
  if (alpha0 >= 1.0) return IntervalSet::full_line();
  if (arm.sidedness == Sidedness::two_sided)
    return IntervalSet::two_sided(norm_quantile(1.0 - alpha0 / 2.0));
  double q = norm_quantile(1.0 - alpha0);
  return effective_direction(arm) >= 0 ? IntervalSet::right_of(q) : IntervalSet::left_of(-q);
}

double pointbiserial_true_corr(double d, long n_treat, long n_ctrl) {
  if (n_treat <= 0 || n_ctrl <= 0)
    throw invalid_argument_error("pointbiserial_true_corr: group counts must be positive");
  double p = static_cast<double>(n_treat) / static_cast<double>(n_treat + n_ctrl);
  double pq = p * (1.0 - p);
  return d * std::sqrt(pq) / std::sqrt(1.0 + d * d * pq);
}

double replication_directional_pvalue(const RawPair& pair, int claimed_direction) {
  const StudyArm& rep = pair.replication;
  double p = rep.reported_p;
  if (p <= 0.0) p = 1e-15;
  int dir = effective_direction(rep);
  if (rep.sidedness == Sidedness::two_sided) {
    if (dir == 0) return 0.5;  // a statistic of exactly zero favors neither direction
    return dir == claimed_direction ? 0.5 * p : 1.0 - 0.5 * p;
  }
  // One-sided replication report: p already refers to the arm's tested direction.
  if (dir == 0)
    throw invalid_argument_error(
        "replication_directional_pvalue: a one-sided report needs a direction");
  return dir == claimed_direction ? p : 1.0 - p;
}

ParseResult parse_studies(const std::string& path, const std::string& schema_version) {
  if (schema_version != "1")
    throw schema_error("unsupported schema version: " + schema_version, "schema_version");

  CsvTable table = read_csv(path);

  // Header validation: the documented columns, order-free, nothing else.
  const auto& cols = schema_columns();
  std::map<std::string, std::size_t> col_index;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    const std::string& name = table.header[i];
    if (std::find(cols.begin(), cols.end(), name) == cols.end())
      throw schema_error("unknown header column: " + name, name);
    if (!col_index.emplace(name, i).second)
      throw schema_error("duplicate header column: " + name, name);
  }
  for (const std::string& name : cols)
    if (!col_index.count(name)) throw schema_error("missing header column: " + name, name);

  ParseResult result;
  EligibilityReport& report = result.report;

  struct PendingPair {
    std::optional<StudyArm> original, replication;
    long line_original = -1, line_replication = -1;
  };
  std::map<std::string, PendingPair> pending;
  std::vector<std::string> id_order;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    long line = table.line_numbers[r];
    auto fail = [&](const std::string& code, const std::string& detail) {
      report.issues.push_back({"", line, code, detail});
      report.has_row_errors = true;
    };
    if (row.size() != table.header.size()) {
      fail("malformed_row", "expected " + std::to_string(table.header.size()) + " fields, got " +
                                std::to_string(row.size()));
      continue;
    }
    auto cell = [&](const char* name) -> const std::string& { return row[col_index.at(name)]; };

    const std::string& id = cell("study_id");
    if (id.empty()) {
      fail("missing_field", "study_id is empty");
      continue;
    }

    StudyArm arm;
    bool is_original;
    {
      const std::string& a = cell("arm");
      if (a == "original") is_original = true;
      else if (a == "replication") is_original = false;
      else {
        fail("bad_value", "arm must be 'original' or 'replication', got '" + a + "'");
        continue;
      }
    }
    {
      const std::string& f = cell("test_family");
      if (f == "z") arm.family = TestFamily::z;
      else if (f == "t_one_sample") arm.family = TestFamily::t_one_sample;
      else if (f == "t_two_sample") arm.family = TestFamily::t_two_sample;
      else if (f == "F1" || f == "f1") arm.family = TestFamily::f1;
      else if (f == "correlation") arm.family = TestFamily::correlation;
      else if (f == "partial_correlation") arm.family = TestFamily::partial_correlation;
      else {
        fail("bad_value", "unknown test_family '" + f + "'");
        continue;
      }
    }
    if (!parse_double_cell(cell("statistic"), &arm.statistic)) {
      fail("bad_number", "statistic is not a number: '" + cell("statistic") + "'");
      continue;
    }

    bool row_ok = true;
    auto read_optional_long = [&](const char* name, long* out) {
      const std::string& s = cell(name);
      if (s.empty()) return;
      if (!parse_long_cell(s, out)) {
        fail("bad_number", std::string(name) + " is not an integer: '" + s + "'");
        row_ok = false;
      }
    };
    read_optional_long("df", &arm.df);
    read_optional_long("n_total", &arm.n_total);
    read_optional_long("n_group1", &arm.n_group1);
    read_optional_long("n_group2", &arm.n_group2);
    read_optional_long("n_covariates", &arm.n_covariates);
    if (!row_ok) continue;

    if (!parse_double_cell(cell("reported_p"), &arm.reported_p)) {
      fail("bad_number", "reported_p is not a number: '" + cell("reported_p") + "'");
      continue;
    }
    if (arm.reported_p < 0.0 || arm.reported_p > 1.0) {
      fail("bad_value", "reported_p outside [0, 1]");
      continue;
    }
    if (arm.reported_p == 0.0) {
      arm.reported_p = 1e-15;
      report.issues.push_back(
          {id, line, "p_clamped", "reported_p of 0 clamped to 1e-15"});
    }
    {
      const std::string& s = cell("sidedness");
      if (s == "one_sided") arm.sidedness = Sidedness::one_sided;
      else if (s == "two_sided") arm.sidedness = Sidedness::two_sided;
      else {
        fail("bad_value", "sidedness must be 'one_sided' or 'two_sided', got '" + s + "'");
        continue;
      }
    }
    {
      const std::string& d = cell("direction");
      if (d.empty()) arm.direction = 0;
      else if (d == "1" || d == "+1") arm.direction = +1;
      else if (d == "-1") arm.direction = -1;
      else {
        fail("bad_value", "direction must be +1, -1, or empty, got '" + d + "'");
        continue;
      }
    }
    {
      const std::string& s = cell("k_override");
      if (!s.empty()) {
        double v;
        if (!parse_double_cell(s, &v) || !(v > 0.0)) {
          fail("bad_value", "k_override must be a positive number, got '" + s + "'");
          continue;
        }
        arm.k_override = v;
      }
    }

    // Family-specific required fields.
    switch (arm.family) {
      case TestFamily::t_one_sample:
        if (arm.df < 1) { fail("missing_field", "t_one_sample requires df"); continue; }
        if (arm.n_total < 1 && !arm.k_override) {
          fail("missing_field", "t_one_sample requires n_total (or k_override)");
          continue;
        }
        break;
      case TestFamily::t_two_sample:
        if (arm.df < 1) { fail("missing_field", "t_two_sample requires df"); continue; }
        if ((arm.n_group1 < 1 || arm.n_group2 < 1) && !arm.k_override) {
          fail("missing_field", "t_two_sample requires n_group1 and n_group2 (or k_override)");
          continue;
        }
        break;
      case TestFamily::f1:
        if (arm.df < 1) { fail("missing_field", "F1 requires df (denominator)"); continue; }
        if (arm.n_total < 1 && (arm.n_group1 < 1 || arm.n_group2 < 1) && !arm.k_override) {
          fail("missing_field", "F1 requires group sizes or n_total (or k_override)");
          continue;
        }
        break;
      case TestFamily::correlation:
      case TestFamily::partial_correlation:
        if (arm.n_total < 1) {
          fail("missing_field", std::string(to_string(arm.family)) + " requires n_total");
          continue;
        }
        break;
      case TestFamily::z:
        break;  // k comes from n_total or k_override; checked at standardization
    }

    PendingPair& pp = pending[id];
    if (std::find(id_order.begin(), id_order.end(), id) == id_order.end())
      id_order.push_back(id);
    if (is_original) {
      if (pp.original) {
        fail("duplicate_arm", "second original row for study " + id);
        continue;
      }
      pp.original = arm;
      pp.line_original = line;
    } else {
      if (pp.replication) {
        fail("duplicate_arm", "second replication row for study " + id);
        continue;
      }
      pp.replication = arm;
      pp.line_replication = line;
    }
  }

  for (const std::string& id : id_order) {
    const PendingPair& pp = pending[id];
    if (!pp.original || !pp.replication) {
      report.issues.push_back({id, pp.original ? pp.line_original : pp.line_replication,
                               "missing_arm",
                               std::string("study lacks its ") +
                                   (pp.original ? "replication" : "original") + " arm"});
      report.status[id] = "missing_arm";
      continue;
    }
    RawPair pair;
    pair.study_id = id;
    pair.original = *pp.original;
    pair.replication = *pp.replication;
    pair.line_original = pp.line_original;
    pair.line_replication = pp.line_replication;
    result.pairs.push_back(std::move(pair));
  }
  report.total = static_cast<long>(result.pairs.size());
  return result;
}

EligibleStudies filter_eligible(const std::vector<RawPair>& pairs,
                                const EligibilityCriteria& criteria,
                                EligibilityReport report_seed) {
  if (!(criteria.alpha0 > 0.0 && criteria.alpha0 <= 1.0))
    throw invalid_argument_error("filter_eligible: alpha0 must lie in (0, 1]");
  EligibleStudies out;
  out.report = std::move(report_seed);
  EligibilityReport& report = out.report;
  report.total = static_cast<long>(pairs.size());
  report.significant_univariate = 0;
  report.z_approximable = 0;

  for (const RawPair& pair : pairs) {
    const std::string& id = pair.study_id;
    auto exclude = [&](const std::string& code, const std::string& detail) {
      report.issues.push_back({id, pair.line_original, code, detail});
      report.status[id] = code;
    };

    if (!(pair.original.reported_p < criteria.alpha0)) {
      exclude("not_significant", "original reported_p >= alpha0 (strict inequality required)");
      continue;
    }
    ++report.significant_univariate;

    int claimed = effective_direction(pair.original);
    if (claimed == 0) {
      exclude("missing_direction", "the original effect direction cannot be determined");
      continue;
    }

    FdpStudy fs;
    fs.study_id = id;
    fs.p_original = pair.original.reported_p;
    try {
      fs.p_replication_directional = replication_directional_pvalue(pair, claimed);
    } catch (const error& e) {
      exclude("missing_direction", e.what());
      continue;
    }
    out.fdp_class.push_back(fs);
    report.status[id] = "fdp_only";

    auto flag_only = [&](const std::string& code, const std::string& detail) {
      report.issues.push_back({id, pair.line_original, code, detail});
    };

    ZScore zo, zr;
    try {
      zo = to_zscore(pair.original, criteria.min_df);
      zr = to_zscore(pair.replication, criteria.min_df);
    } catch (const not_z_approximable_error& e) {
      flag_only("df_below_threshold", e.what());
      continue;
    } catch (const error& e) {
      flag_only("not_standardizable", e.what());
      continue;
    }
    if (zo.z == 0.0) {
      flag_only("zero_statistic", "original z-score is exactly zero; no claimed direction");
      continue;
    }

    StudyPair sp;
    sp.study_id = id;
    sp.original = pair.original;
    sp.replication = pair.replication;
    sp.z_o = zo.z;
    sp.k_o = zo.k;
    sp.z_r = zr.z;
    sp.k_r = zr.k;
    sp.sign = zo.z > 0.0 ? +1 : -1;
    sp.alpha0 = criteria.alpha0;
    sp.selection = selection_event(pair.original, criteria.alpha0);
    if (!sp.selection.contains(sp.z_o)) {
      flag_only("z_outside_selection",
                "recomputed original z-score falls outside the selection region implied by "
                "alpha0; the reported and recomputed p-values disagree at the boundary");
      continue;
    }

    // Consistency flag: the p-value implied by the z-score should reproduce
    // the reported one within 10% relative tolerance. Larger gaps are
    // flagged for review but are not fatal.
    double implied = sp.original.sidedness == Sidedness::two_sided
                         ? 2.0 * norm_sf(std::fabs(sp.z_o))
                         : norm_sf(static_cast<double>(claimed) * sp.z_o);
    if (std::fabs(implied - pair.original.reported_p) >
        0.10 * pair.original.reported_p)
      flag_only("p_mismatch", "z-implied original p-value differs from reported_p by more "
                              "than 10% (kept; review the row)");

    out.z_class.push_back(std::move(sp));
    report.status[id] = "eligible";
    ++report.z_approximable;
  }
  return out;
}

}  // namespace replistat
