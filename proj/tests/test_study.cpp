#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "replistat/errors.hpp"
#include "replistat/normal.hpp"
#include "replistat/study.hpp"

using namespace replistat;

namespace {

std::string testdata(const std::string& name) {
  const char* dir = std::getenv("REPLISTAT_TESTDATA");
  REQUIRE(dir != nullptr);
  return std::string(dir) + "/" + name;
}

std::string fixture_path() {
  const char* dir = std::getenv("REPLISTAT_DATA");
  REQUIRE(dir != nullptr);
  return std::string(dir) + "/synthetic_studies.csv";
}

// Writes a throwaway CSV for parser edge cases; removed on destruction.
struct TempCsv {
  std::string path;
  explicit TempCsv(const std::string& body, const std::string& tag) {
    path = std::string("/tmp/replistat_test_") + tag + ".csv";
    std::ofstream out(path);
    out << body;
  }
  ~TempCsv() { std::remove(path.c_str()); }
};

const char* kHeader =
    "study_id,arm,test_family,statistic,df,n_total,n_group1,n_group2,"
    "n_covariates,reported_p,sidedness,direction,k_override\n";

}  // namespace

TEST_CASE("the bundled synthetic corpus parses to the frozen counts") {
  auto parsed = parse_studies(fixture_path());
  CHECK(parsed.report.total == 50);
  CHECK(parsed.pairs.size() == 50);
  CHECK(!parsed.report.has_row_errors);

  auto elig = filter_eligible(parsed.pairs, EligibilityCriteria{}, parsed.report);
  CHECK(elig.report.total == 50);
  CHECK(elig.report.significant_univariate == 46);
  CHECK(elig.report.z_approximable == 42);
  CHECK(elig.fdp_class.size() == 46);
  CHECK(elig.z_class.size() == 42);

  CHECK(elig.report.status.at("S001") == "eligible");
  CHECK(elig.report.status.at("S043") == "fdp_only");
  CHECK(elig.report.status.at("S047") == "not_significant");

  // S041 carries explicit design constants through k_override.
  const StudyPair* s41 = nullptr;
  const StudyPair* s42 = nullptr;
  for (const auto& p : elig.z_class) {
    if (p.study_id == "S041") s41 = &p;
    if (p.study_id == "S042") s42 = &p;
  }
  REQUIRE(s41 != nullptr);
  CHECK(s41->k_o == doctest::Approx(7.5).epsilon(1e-15));
  CHECK(s41->k_r == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(s41->z_o == doctest::Approx(3.1).epsilon(1e-15));
  CHECK(s41->sign == +1);

  // S042 was selected through a one-sided original test.
  REQUIRE(s42 != nullptr);
  REQUIRE(s42->selection.intervals().size() == 1);
  CHECK(s42->selection.intervals()[0].lo ==
        doctest::Approx(norm_quantile(0.95)).epsilon(1e-14));
  CHECK(std::isinf(s42->selection.intervals()[0].hi));

  // Every eligible pair's original z must lie inside its selection event.
  for (const auto& p : elig.z_class) {
    CHECK(p.selection.contains(p.z_o));
    CHECK(p.k_o > 0.0);
    CHECK(p.k_r > 0.0);
  }
  // The z class is a subset of the false-discovery class.
  for (const auto& p : elig.z_class) {
    bool found = false;
    for (const auto& f : elig.fdp_class) found = found || f.study_id == p.study_id;
    CHECK(found);
  }
}

TEST_CASE("header deviations are schema errors, data deviations are row issues") {
  CHECK_THROWS_AS(parse_studies(testdata("bad_header.csv")), schema_error);
  try {
    parse_studies(testdata("bad_header.csv"));
  } catch (const schema_error& e) {
    CHECK(e.column == "bogus_column");
  }
  CHECK_THROWS_AS(parse_studies(fixture_path(), "2"), schema_error);

  auto trunc = parse_studies(testdata("truncated_row.csv"));
  CHECK(trunc.report.has_row_errors);
  bool found_line3 = false;
  for (const auto& iss : trunc.report.issues) {
    if (iss.code == "malformed_row" && iss.line == 3) found_line3 = true;
  }
  CHECK(found_line3);
  // The well-formed remainder still parses.
  CHECK(trunc.pairs.size() == 1);
  CHECK(trunc.pairs[0].study_id == "S002");
}

TEST_CASE("an arm missing its mate is reported, not paired") {
  TempCsv f(std::string(kHeader) +
                "A1,original,z,3.0,,50,,,,0.0027,two_sided,,\n"
                "A2,original,z,2.5,,50,,,,0.0124,two_sided,,\n"
                "A2,replication,z,1.0,,50,,,,0.3173,two_sided,,\n",
            "missing_arm");
  auto r = parse_studies(f.path);
  CHECK(r.pairs.size() == 1);
  CHECK(r.pairs[0].study_id == "A2");
  bool noted = false;
  for (const auto& iss : r.report.issues)
    noted = noted || (iss.study_id == "A1" && iss.code == "missing_arm");
  CHECK(noted);
}

TEST_CASE("duplicate arms and zero p-values are flagged") {
  TempCsv f(std::string(kHeader) +
                "B1,original,z,3.0,,50,,,,0.0027,two_sided,,\n"
                "B1,original,z,3.1,,50,,,,0.0019,two_sided,,\n"
                "B1,replication,z,1.0,,50,,,,0.3173,two_sided,,\n"
                "B2,original,z,9.0,,50,,,,0,two_sided,,\n"
                "B2,replication,z,5.0,,50,,,,0.0000006,two_sided,,\n",
            "dups");
  auto r = parse_studies(f.path);
  bool dup = false, clamp = false;
  for (const auto& iss : r.report.issues) {
    dup = dup || iss.code == "duplicate_arm";
    clamp = clamp || iss.code == "p_clamped";
  }
  CHECK(dup);
  CHECK(clamp);
  for (const auto& p : r.pairs)
    if (p.study_id == "B2") CHECK(p.original.reported_p == doctest::Approx(1e-15));
}

TEST_CASE("k factors follow the documented design formulas") {
  StudyArm z;
  z.family = TestFamily::z;
  z.n_total = 60;
  CHECK(k_factor(z) == doctest::Approx(std::sqrt(60.0)).epsilon(1e-15));

  StudyArm t2;
  t2.family = TestFamily::t_two_sample;
  t2.n_group1 = 40;
  t2.n_group2 = 60;
  CHECK(k_factor(t2) == doctest::Approx(std::sqrt(24.0)).epsilon(1e-15));

  StudyArm f;
  f.family = TestFamily::f1;
  f.n_group1 = 30;
  f.n_group2 = 30;
  CHECK(k_factor(f) == doctest::Approx(std::sqrt(15.0)).epsilon(1e-15));
  f.n_group1 = -1;
  f.n_group2 = -1;
  f.n_total = 64;
  CHECK(k_factor(f) == doctest::Approx(8.0).epsilon(1e-15));

  StudyArm c;
  c.family = TestFamily::correlation;
  c.n_total = 103;
  CHECK(k_factor(c) == doctest::Approx(10.0).epsilon(1e-15));

  StudyArm pc;
  pc.family = TestFamily::partial_correlation;
  pc.n_total = 103;
  pc.n_covariates = 19;
  CHECK(k_factor(pc) == doctest::Approx(9.0).epsilon(1e-15));

  StudyArm ov = z;
  ov.k_override = 7.5;
  CHECK(k_factor(ov) == doctest::Approx(7.5).epsilon(1e-15));
  ov.k_override = -2.0;
  CHECK_THROWS_AS(k_factor(ov), invalid_argument_error);
  StudyArm bare;
  bare.family = TestFamily::z;
  CHECK_THROWS_AS(k_factor(bare), invalid_argument_error);
}

TEST_CASE("z conversion per family, including the Fisher transform") {
  StudyArm c;
  c.family = TestFamily::correlation;
  c.statistic = 0.5;
  c.n_total = 103;
  auto zs = to_zscore(c);
  CHECK(zs.z == doctest::Approx(5.4930614433405485).epsilon(1e-14));
  CHECK(zs.k == doctest::Approx(10.0).epsilon(1e-15));
  c.statistic = 1.0;
  CHECK_THROWS_AS(to_zscore(c), invalid_argument_error);

  StudyArm t;
  t.family = TestFamily::t_one_sample;
  t.statistic = -2.5;
  t.df = 29;
  t.n_total = 30;
  CHECK_THROWS_AS(to_zscore(t), not_z_approximable_error);
  t.df = 30;
  CHECK(to_zscore(t).z == doctest::Approx(-2.5).epsilon(1e-15));

  StudyArm f;
  f.family = TestFamily::f1;
  f.statistic = 9.0;
  f.df = 80;
  f.n_total = 82;
  CHECK_THROWS_AS(to_zscore(f), invalid_argument_error);  // direction required
  f.direction = -1;
  CHECK(to_zscore(f).z == doctest::Approx(-3.0).epsilon(1e-15));
  f.statistic = -1.0;
  CHECK_THROWS_AS(to_zscore(f), invalid_argument_error);
}

TEST_CASE("an F-statistic's sign never supplies a claimed direction") {
  StudyArm f;
  f.family = TestFamily::f1;
  f.statistic = 9.0;  // sign(F) is always +, which is not directional evidence
  CHECK(effective_direction(f) == 0);
  f.direction = -1;
  CHECK(effective_direction(f) == -1);

  StudyArm z;
  z.family = TestFamily::z;
  z.statistic = -2.0;
  CHECK(effective_direction(z) == -1);
  z.direction = +1;  // explicit column wins over the statistic's sign
  CHECK(effective_direction(z) == +1);

  // End to end: a significant F original with no direction column cannot
  // enter the false-discovery class with an invented direction.
  TempCsv file(std::string(kHeader) +
                   "F1,original,f1,16.0,100,102,,,,0.00006,two_sided,,\n"
                   "F1,replication,f1,1.0,100,102,,,,0.32,two_sided,,\n",
               "f_nodir");
  auto parsed = parse_studies(file.path);
  auto elig = filter_eligible(parsed.pairs, EligibilityCriteria{}, parsed.report);
  CHECK(elig.fdp_class.empty());
  CHECK(elig.report.status.at("F1") == "missing_direction");
}

TEST_CASE("selection-adjusted p-value and the selection event") {
  CHECK(adjust_pvalue(0.01, 0.05) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(adjust_pvalue(0.05, 0.05), not_selected_error);
  CHECK_THROWS_AS(adjust_pvalue(0.2, 0.05), not_selected_error);
  CHECK_THROWS_AS(adjust_pvalue(0.0, 0.05), invalid_argument_error);

  StudyArm a;
  a.sidedness = Sidedness::two_sided;
  auto two = selection_event(a, 0.05);
  REQUIRE(two.intervals().size() == 2);
  CHECK(two.intervals()[1].lo == doctest::Approx(norm_quantile(0.975)).epsilon(1e-14));

  a.sidedness = Sidedness::one_sided;
  a.statistic = 1.0;
  auto right = selection_event(a, 0.05);
  REQUIRE(right.intervals().size() == 1);
  CHECK(right.intervals()[0].lo == doctest::Approx(norm_quantile(0.95)).epsilon(1e-14));
  a.statistic = -1.0;
  auto left = selection_event(a, 0.05);
  REQUIRE(left.intervals().size() == 1);
  CHECK(left.intervals()[0].hi == doctest::Approx(-norm_quantile(0.95)).epsilon(1e-14));

  CHECK(selection_event(a, 1.0).is_full_line());
  CHECK_THROWS_AS(selection_event(a, 0.0), invalid_argument_error);
}

TEST_CASE("implied point-biserial correlation matches the references") {
  CHECK(pointbiserial_true_corr(1.0, 40, 37) ==
        doctest::Approx(0.44694188910167029).epsilon(1e-13));
  CHECK(pointbiserial_true_corr(1.0, 1370, 120) ==
        doctest::Approx(0.26257431623332347).epsilon(1e-13));
  CHECK(pointbiserial_true_corr(0.0, 10, 10) == doctest::Approx(0.0));
  // Antisymmetric in d, bounded by 1.
  CHECK(pointbiserial_true_corr(-1.0, 40, 37) ==
        doctest::Approx(-0.44694188910167029).epsilon(1e-13));
  CHECK(std::fabs(pointbiserial_true_corr(50.0, 5, 5)) < 1.0);
  CHECK_THROWS_AS(pointbiserial_true_corr(1.0, 0, 5), invalid_argument_error);
}

TEST_CASE("directional replication p-value orients to the original claim") {
  RawPair pr;
  pr.replication.sidedness = Sidedness::two_sided;
  pr.replication.reported_p = 0.36;
  pr.replication.statistic = 0.9;
  CHECK(replication_directional_pvalue(pr, +1) == doctest::Approx(0.18).epsilon(1e-14));
  CHECK(replication_directional_pvalue(pr, -1) == doctest::Approx(0.82).epsilon(1e-14));
  pr.replication.statistic = 0.0;
  CHECK(replication_directional_pvalue(pr, +1) == doctest::Approx(0.5));

  pr.replication.sidedness = Sidedness::one_sided;
  pr.replication.statistic = 1.5;
  pr.replication.reported_p = 0.0668;
  CHECK(replication_directional_pvalue(pr, +1) == doctest::Approx(0.0668).epsilon(1e-14));
  CHECK(replication_directional_pvalue(pr, -1) ==
        doctest::Approx(1.0 - 0.0668).epsilon(1e-14));
  pr.replication.statistic = 0.0;
  CHECK_THROWS_AS(replication_directional_pvalue(pr, +1), invalid_argument_error);
}

TEST_CASE("eligibility flags: outside-selection and p mismatch") {
  // Original claims p = 0.04 (selected) but its z-score of 1.8 sits outside
  // the two-sided 5% region: excluded with z_outside_selection.
  TempCsv f1(std::string(kHeader) +
                 "C1,original,z,1.8,,50,,,,0.04,two_sided,,\n"
                 "C1,replication,z,1.0,,50,,,,0.3173,two_sided,,\n",
             "outside");
  auto e1 = filter_eligible(parse_studies(f1.path).pairs, EligibilityCriteria{});
  CHECK(e1.z_class.empty());
  CHECK(e1.fdp_class.size() == 1);  // still usable for count-based analyses
  CHECK(e1.report.status.at("C1") == "fdp_only");
  bool outside_flagged = false;
  for (const auto& iss : e1.report.issues)
    outside_flagged = outside_flagged || (iss.study_id == "C1" && iss.code == "z_outside_selection");
  CHECK(outside_flagged);

  // Reported p disagrees with the z-implied p by more than 10%: flagged but kept.
  TempCsv f2(std::string(kHeader) +
                 "C2,original,z,3.0,,50,,,,0.010,two_sided,,\n"
                 "C2,replication,z,1.0,,50,,,,0.3173,two_sided,,\n",
             "mismatch");
  auto e2 = filter_eligible(parse_studies(f2.path).pairs, EligibilityCriteria{});
  CHECK(e2.z_class.size() == 1);
  bool flagged = false;
  for (const auto& iss : e2.report.issues)
    flagged = flagged || (iss.study_id == "C2" && iss.code == "p_mismatch");
  CHECK(flagged);
}
