#ifndef REPLISTAT_DECLINE_HPP
#define REPLISTAT_DECLINE_HPP

#include <vector>

#include "replistat/study.hpp"

namespace replistat {

// Band estimates for the fraction of true effects that declined by at least
// rho, over a grid of rho values.
struct DeclineBandRow {
  double rho = 0.0;
  long b_count = 0;        // #{p_i >= lambda} (ties count as big)
  long b_comp_count = 0;   // #{1 - p_i >= lambda}
  double under = 0.0;      // lower point estimate of the declining fraction
  double over = 1.0;       // upper point estimate
  double ci_lo = 0.0;      // band endpoints, per-side confidence each
  double ci_hi = 1.0;
};

struct DeclineBand {
  std::vector<DeclineBandRow> rows;  // one per grid value, grid order
  long m = 0;                        // number of studies
  double lambda = 0.5;
  double confidence_per_side = 0.95;
};

double complement_pvalue(double p);

DeclineBand decline_band(const std::vector<StudyPair>& pairs,
                         const std::vector<double>& rho_grid, double lambda = 0.5,
                         double confidence_per_side = 0.95);

}  // namespace replistat

#endif  // REPLISTAT_DECLINE_HPP
