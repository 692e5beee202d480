#include "replistat/decline.hpp"

#include <algorithm>
#include <cmath>

#include "replistat/errors.hpp"
#include "replistat/fdp.hpp"
#include "replistat/selective.hpp"

namespace replistat {

double complement_pvalue(double p) { return 1.0 - p; }

DeclineBand decline_band(const std::vector<StudyPair>& pairs,
                         const std::vector<double>& rho_grid, double lambda,
                         double confidence_per_side) {
  if (pairs.empty()) throw invalid_argument_error("decline_band: no studies supplied");
  if (rho_grid.empty()) throw invalid_argument_error("decline_band: empty rho grid");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw invalid_argument_error("decline_band: lambda must lie in (0, 1)");
  if (!(confidence_per_side > 0.0 && confidence_per_side < 1.0))
    throw invalid_argument_error("decline_band: confidence must lie in (0, 1)");

  DeclineBand band;
  band.m = static_cast<long>(pairs.size());
  band.lambda = lambda;
  band.confidence_per_side = confidence_per_side;
  const double m = static_cast<double>(pairs.size());

  for (double rho : rho_grid) {
    DeclineBandRow row;
    row.rho = rho;
    for (const StudyPair& pair : pairs) {
      double p = decline_pvalue(pair, rho);
      if (p >= lambda) ++row.b_count;
      if (complement_pvalue(p) >= lambda) ++row.b_comp_count;
    }
    // Large p-values among the decline tests bound the count of studies
    // whose effect did NOT decline by rho; the complement side bounds the
    // count that DID.  Each side gets its own one-sided binomial bound.
    row.under = std::max(0.0, 1.0 - static_cast<double>(row.b_count) / ((1.0 - lambda) * m));
    row.over = std::min(1.0, static_cast<double>(row.b_comp_count) / ((1.0 - lambda) * m));
    auto no_decline = ucb_internal(row.b_count, band.m, lambda, confidence_per_side);
    auto decline = ucb_internal(row.b_comp_count, band.m, lambda, confidence_per_side);
    row.ci_lo = std::max(0.0, 1.0 - static_cast<double>(no_decline.first) / m);
    row.ci_hi = std::min(1.0, static_cast<double>(decline.first) / m);
    band.rows.push_back(row);
  }
  return band;
}

}  // namespace replistat
