#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "replistat/normal.hpp"
#include "replistat/simulate.hpp"

using namespace replistat;

namespace {

SimConfig small_cfg(std::vector<double> grid, long trials) {
  SimConfig cfg;
  cfg.theta_grid = std::move(grid);
  cfg.n_trials = trials;
  cfg.seed = 20260816;
  return cfg;
}

// Independent fixed-panel quadrature: 5-point Gauss-Legendre on many equal
// panels. Shares nothing with the library's adaptive integrator.
double gl5(const std::function<double(double)>& f, double a, double b, int panels) {
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                              0.5384693101056831, 0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665,
                              0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  double h = (b - a) / panels, total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    for (int i = 0; i < 5; ++i) total += w[i] * f(mid + 0.5 * h * x[i]);
  }
  return total * 0.5 * h;
}

}  // namespace

TEST_CASE("curve values at theta = 0 take their symmetric closed forms") {
  auto cfg = small_cfg({0.0}, 20000);
  // At zero effect, conditional on selection, the replication misses the
  // (directional) significance cut with probability 1 - norm_sf(c).
  auto nonsig = curve_nonsig_same_dir(cfg);
  REQUIRE(nonsig.size() == 1);
  CHECK(nonsig[0].analytic == doctest::Approx(0.975).epsilon(1e-9));
  // Either sign is equally wrong: exactly 1/2.
  auto type_s = curve_type_s(cfg);
  CHECK(type_s[0].analytic == doctest::Approx(0.5).epsilon(1e-9));
  // Reference for the two-sided miss curve (40-digit quadrature).
  auto decline = curve_decline(cfg);
  CHECK(decline[0].analytic == doctest::Approx(0.9875).epsilon(1e-9));
}

TEST_CASE("curve values away from zero match high-precision references") {
  auto cfg = small_cfg({1.0}, 20000);
  CHECK(curve_type_s(cfg)[0].analytic ==
        doctest::Approx(0.0090452719625805606).epsilon(1e-10));
  CHECK(curve_ci_miss(cfg)[0].analytic ==
        doctest::Approx(0.3356919712558194).epsilon(1e-8));
  CHECK(curve_decline(cfg)[0].analytic ==
        doctest::Approx(0.91648693714569796).epsilon(1e-8));
  auto cfg5 = small_cfg({5.0}, 20000);
  CHECK(curve_nonsig_same_dir(cfg5)[0].analytic ==
        doctest::Approx(0.0011827492998991601).epsilon(1e-9));
}

TEST_CASE("far from the selection cut the curves reach their stated limits") {
  auto cfg = small_cfg({40.0}, 1000);
  // Selection becomes irrelevant: the miss rate of a 95% interval built from
  // an unbiased replication against an unbiased original estimate.
  CHECK(curve_ci_miss(cfg)[0].analytic ==
        doctest::Approx(0.16577627289570393).epsilon(1e-9));
  // The replication undershoots the original half the time.
  CHECK(curve_decline(cfg)[0].analytic == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(curve_nonsig_same_dir(cfg)[0].analytic < 1e-12);
}

TEST_CASE("analytic curves agree with their Monte-Carlo cross-checks") {
  auto cfg = small_cfg({0.0, 0.5, 1.1, 2.3}, 200000);
  for (auto curve : {curve_nonsig_same_dir, curve_type_s, curve_ci_miss, curve_decline}) {
    auto pts = curve(cfg);
    REQUIRE(pts.size() == 4);
    for (const auto& pt : pts) {
      REQUIRE(pt.n_selected > 1000);
      CHECK(std::fabs(pt.analytic - pt.mc) <= 4.0 * pt.mc_se + 1e-9);
      CHECK(pt.mc_se < 0.01);
    }
  }
}

TEST_CASE("the selected-expectation quadrature matches an independent integrator") {
  // curve_ci_miss at theta = 1.7 integrates
  //   P(miss | Z = z) * density of Z over the selected region;
  // rebuild it with fixed-panel Gauss-Legendre and no shared code.
  const double theta = 1.7, c = norm_quantile(0.975);
  auto cfg = small_cfg({theta}, 1000);
  double lib = curve_ci_miss(cfg)[0].analytic;
  auto miss = [&](double z) {
    return norm_cdf(z - c - theta) + norm_sf(z + c - theta);
  };
  auto dens = [&](double z) { return norm_pdf(z - theta); };
  double sel = norm_sf(c - theta) + norm_cdf(-c - theta);
  double val = (gl5([&](double z) { return miss(z) * dens(z); }, c, theta + 14.0, 10000) +
                gl5([&](double z) { return miss(z) * dens(z); }, theta - 14.0 - 30.0, -c,
                    10000)) /
               sel;
  CHECK(lib == doctest::Approx(val).epsilon(1e-8));
}

TEST_CASE("identical configurations reproduce identical results") {
  auto cfg = small_cfg({0.3, 1.7}, 20000);
  auto a = curve_decline(cfg);
  auto b = curve_decline(cfg);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mc == b[i].mc);
    CHECK(a[i].n_selected == b[i].n_selected);
    CHECK(a[i].analytic == b[i].analytic);
  }
  // A different seed moves the Monte-Carlo estimate but not the analytic one.
  auto cfg2 = cfg;
  cfg2.seed = 1;
  auto c = curve_decline(cfg2);
  CHECK(c[0].analytic == a[0].analytic);
  CHECK(c[0].mc != a[0].mc);
}

TEST_CASE("the default grid spans zero to five in 0.05 steps") {
  auto g = default_theta_grid();
  REQUIRE(g.size() == 101);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("false-discovery harness: identities hold and the bound covers") {
  SimConfig cfg;
  cfg.scenario = Scenario::mixed_nulls;
  cfg.n_trials = 400;
  cfg.n_studies = 68;
  cfg.null_fraction = 0.3;
  cfg.seed = 20260816;
  auto rep = harness_fdp(cfg);
  CHECK(rep.count_identities_ok);
  CHECK(rep.n_trials == 400);
  CHECK(rep.internal_report.n_trials_used == 400);
  // The internal estimator is conservative in expectation.
  CHECK(rep.internal_report.bias_mean >= -3.0 * rep.internal_report.bias_se);
  CHECK(rep.internal_report.coverage >= 0.95 - 3.0 * rep.internal_report.coverage_se);
  CHECK(rep.external_report.coverage >= 0.95 - 3.0 * rep.external_report.coverage_se);
  CHECK(rep.external_report.n_trials_used > 0);
  CHECK(rep.external_report.n_trials_used <= 400);

  // All-null and no-null corners.
  SimConfig corner = cfg;
  corner.n_trials = 200;
  corner.null_fraction = 1.0;
  auto all_null = harness_fdp(corner);
  CHECK(all_null.count_identities_ok);
  CHECK(all_null.internal_report.mean_true_fdp == doctest::Approx(1.0));
  corner.null_fraction = 0.0;
  auto no_null = harness_fdp(corner);
  CHECK(no_null.count_identities_ok);
  CHECK(no_null.internal_report.mean_true_fdp == doctest::Approx(0.0));
  CHECK(no_null.internal_report.coverage == doctest::Approx(1.0));
}

TEST_CASE("selective tests hold their level on and inside the null") {
  SimConfig cfg;
  cfg.n_trials = 2500;
  cfg.seed = 20260816;
  auto pts = harness_selective_level(cfg);
  REQUIRE(pts.size() > 20);
  int boundary = 0, interior = 0;
  for (const auto& pt : pts) {
    CHECK(pt.n_trials == 2500);
    if (pt.test == "shift" || pt.test == "decline_boundary") {
      ++boundary;
      // Exact tests at the boundary: empirical level within 4 binomial SEs.
      CHECK(std::fabs(pt.rate05 - 0.05) <= 4.0 * pt.se05 + 1e-9);
      CHECK(pt.rate01 <= pt.rate05);
      CHECK(pt.rate05 <= pt.rate10);
    } else {
      ++interior;
      // Strictly inside the null the test is conservative.
      CHECK(pt.rate05 <= 0.05 + 4.0 * pt.se05);
    }
  }
  CHECK(boundary >= 20);
  CHECK(interior >= 2);
}

TEST_CASE("interval coverage sits at the nominal level under a shared effect") {
  SimConfig cfg;
  cfg.n_trials = 1500;
  cfg.seed = 20260816;
  auto rep = harness_interval_coverage(cfg, 1.0, 1.0, 1.0, 0.95);
  CHECK(rep.n_trials == 1500);
  CHECK(rep.duality_ok);
  CHECK(rep.n_audited > 0);
  CHECK(std::fabs(rep.ci_coverage - 0.95) <= 4.0 * rep.ci_se + 1e-9);
  CHECK(std::fabs(rep.pred_coverage - 0.95) <= 4.0 * rep.pred_se + 1e-9);
}
