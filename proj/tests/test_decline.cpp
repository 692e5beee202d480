#include <cmath>
#include <vector>

#include "doctest.h"
#include "replistat/decline.hpp"
#include "replistat/fdp.hpp"
#include "replistat/normal.hpp"
#include "replistat/rng.hpp"
#include "replistat/selective.hpp"
#include "replistat/truncated_normal.hpp"

using namespace replistat;

namespace {

StudyPair make_pair(double z_o, double z_r, double k_o, double k_r, IntervalSet sel) {
  StudyPair p;
  p.z_o = z_o;
  p.z_r = z_r;
  p.k_o = k_o;
  p.k_r = k_r;
  p.sign = z_o >= 0.0 ? +1 : -1;
  p.selection = std::move(sel);
  return p;
}

}  // namespace

TEST_CASE("complement p-value is one minus the p-value") {
  CHECK(complement_pvalue(0.3) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(complement_pvalue(1.0) == doctest::Approx(0.0));
}

TEST_CASE("a knife-edge sample with every p at one half is fully ambiguous") {
  // Replication sits exactly at the original effect with no selection: the
  // no-decline p-value is exactly 1/2 for every study, so the data cannot
  // distinguish 'none declined' from 'all declined'.
  std::vector<StudyPair> pairs;
  for (int i = 0; i < 10; ++i)
    pairs.push_back(make_pair(1.2, 0.6, 2.0, 1.0, IntervalSet::full_line()));
  auto band = decline_band(pairs, {0.0});
  REQUIRE(band.rows.size() == 1);
  CHECK(band.m == 10);
  CHECK(band.rows[0].b_count == 10);       // ties at lambda count as big
  CHECK(band.rows[0].b_comp_count == 10);  // and their complements tie too
  CHECK(band.rows[0].under == 0.0);
  CHECK(band.rows[0].over == 1.0);
  CHECK(band.rows[0].ci_lo == 0.0);
  CHECK(band.rows[0].ci_hi == 1.0);
}

TEST_CASE("at full decline the band reduces to the replication count machinery") {
  // At rho = 1 the study-level p-value is the oriented replication tail, so
  // the complement counts must equal the replication analysis on the same
  // studies, and the band endpoints must match its estimate and bound.
  std::vector<StudyPair> pairs;
  std::vector<double> p_repl;
  Rng rng(404);
  for (int i = 0; i < 30; ++i) {
    double z_r = (rng.uniform() - 0.45) * 4.0;
    if (std::fabs(z_r) < 0.05) z_r = 0.4;  // keep clear of the lambda tie point
    pairs.push_back(make_pair(2.5, z_r, 1.0, 1.0, IntervalSet::two_sided(1.96)));
    p_repl.push_back(norm_sf(z_r));  // oriented to the positive claim
  }
  auto band = decline_band(pairs, {1.0}, 0.5, 0.95);
  auto repl = replication_fdp(p_repl, 0.5, 0.95);
  REQUIRE(band.rows.size() == 1);
  CHECK(band.rows[0].b_comp_count == repl.B);
  CHECK(band.rows[0].over == doctest::Approx(repl.estimate).epsilon(1e-13));
  CHECK(band.rows[0].ci_hi == doctest::Approx(repl.ucb).epsilon(1e-13));
}

TEST_CASE("band columns are monotone in rho and mutually ordered") {
  std::vector<StudyPair> pairs;
  Rng rng(77);
  TruncatedNormal orig(1.0, 1.0, IntervalSet::two_sided(1.96));
  for (int i = 0; i < 25; ++i) {
    double z_o = orig.sample(rng);
    double z_r = 0.4 + rng.normal();
    pairs.push_back(make_pair(z_o, z_r, 1.0, 1.0, IntervalSet::two_sided(1.96)));
  }
  std::vector<double> grid;
  for (double r = 0.0; r <= 1.0 + 1e-12; r += 0.1) grid.push_back(std::min(r, 1.0));
  auto band = decline_band(pairs, grid);
  REQUIRE(band.rows.size() == grid.size());
  for (size_t i = 0; i < band.rows.size(); ++i) {
    const auto& row = band.rows[i];
    CHECK(row.rho == doctest::Approx(grid[i]));
    CHECK(row.under <= row.over + 1e-12);
    CHECK(row.ci_lo <= row.under + 1e-12);
    CHECK(row.over <= row.ci_hi + 1e-12);
    CHECK(row.ci_lo >= 0.0);
    CHECK(row.ci_hi <= 1.0);
    if (i > 0) {
      // Larger hypothesized declines are harder to evidence: every column
      // of the band is nonincreasing in rho.
      CHECK(row.b_count >= band.rows[i - 1].b_count);
      CHECK(row.under <= band.rows[i - 1].under + 1e-12);
      CHECK(row.over <= band.rows[i - 1].over + 1e-12);
      CHECK(row.ci_lo <= band.rows[i - 1].ci_lo + 1e-12);
      CHECK(row.ci_hi <= band.rows[i - 1].ci_hi + 1e-12);
    }
  }
}

TEST_CASE("band endpoints cover the true declining fraction") {
  // Ground truth: 32 of 46 studies decline to 30% of their original effect,
  // the rest replicate exactly. The fraction declined by at least rho is
  // 32/46 for rho < 0.7 and 0 for rho > 0.7.
  const long m = 46, decliners = 32;
  const double theta_o = 2.0, keep_frac = 0.3;
  const std::vector<double> grid{0.0, 0.3, 0.6, 0.85};
  const std::vector<double> truth{32.0 / 46.0, 32.0 / 46.0, 32.0 / 46.0, 0.0};
  TruncatedNormal orig(theta_o, 1.0, IntervalSet::two_sided(1.96));
  const int n_trials = 300;
  std::vector<int> lo_cover(grid.size(), 0), hi_cover(grid.size(), 0);
  for (int t = 0; t < n_trials; ++t) {
    Rng rng(Rng::derive(99123, static_cast<std::uint64_t>(t)));
    std::vector<StudyPair> pairs;
    for (long i = 0; i < m; ++i) {
      double theta_r = (i < decliners) ? keep_frac * theta_o : theta_o;
      double z_o = orig.sample(rng);
      double z_r = theta_r + rng.normal();
      pairs.push_back(make_pair(z_o, z_r, 1.0, 1.0, IntervalSet::two_sided(1.96)));
    }
    auto band = decline_band(pairs, grid);
    for (size_t g = 0; g < grid.size(); ++g) {
      if (band.rows[g].ci_lo <= truth[g] + 1e-12) ++lo_cover[g];
      if (band.rows[g].ci_hi >= truth[g] - 1e-12) ++hi_cover[g];
    }
  }
  // Each side promises 95% coverage; allow two binomial standard errors.
  for (size_t g = 0; g < grid.size(); ++g) {
    CHECK(static_cast<double>(lo_cover[g]) / n_trials >= 0.95 - 2.0 * 0.0126);
    CHECK(static_cast<double>(hi_cover[g]) / n_trials >= 0.95 - 2.0 * 0.0126);
  }
}

TEST_CASE("grid and study-set validation") {
  std::vector<StudyPair> pairs{make_pair(2.5, 1.0, 1.0, 1.0, IntervalSet::two_sided(1.96))};
  CHECK_THROWS(decline_band({}, {0.0}));
  CHECK_THROWS(decline_band(pairs, {}));
  CHECK_THROWS(decline_band(pairs, {-0.1}));
  CHECK_THROWS(decline_band(pairs, {1.1}));
  CHECK_THROWS(decline_band(pairs, {0.5}, 0.0));
  CHECK_THROWS(decline_band(pairs, {0.5}, 0.5, 1.5));
}
