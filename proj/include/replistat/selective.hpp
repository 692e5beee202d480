#ifndef REPLISTAT_SELECTIVE_HPP
#define REPLISTAT_SELECTIVE_HPP

#include "replistat/interval_set.hpp"
#include "replistat/study.hpp"

namespace replistat {

// The conditional z-test problem: a pair of z-scores whose original member
// was observed only because it fell in `selection`.
struct SelectiveProblem {
  double z_o = 0.0;
  double z_r = 0.0;
  double k_o = 1.0;
  double k_r = 1.0;
  IntervalSet selection = IntervalSet::full_line();
  int sign = +1;
};

// Which tail of the conditional null law yields the p-value.
enum class TailSide { lower_tail, upper_tail, two_sided_equal_tail };

// Linear contrast eta'(z_o, z_r) with the tested value `delta` for its mean.
// eta1 must be strictly positive; the orientation fixes which variable the
// truncation acts through.
struct Contrast {
  double eta1 = 1.0;
  double eta2 = -1.0;
  double delta = 0.0;
  TailSide side = TailSide::two_sided_equal_tail;
};

// Diagnostics selective_pvalue can report without failing.
struct SelectiveDiagnostics {
  bool saturated_support = false;  // conditional support mass below 1e-12
  double support_mass = 1.0;       // total null mass of the truncation set
};

// What an inverted interval estimates.
enum class IntervalTarget { theta_shift, z_replication, effect_replication };

struct IntervalEstimate {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  IntervalTarget target = IntervalTarget::theta_shift;
  bool adjusted = true;
  bool bounded_lo = true;  // false: lo is a -infinity sentinel
  bool bounded_hi = true;  // false: hi is a +infinity sentinel
  bool connected = true;   // acceptance region was a single interval
  bool empty = false;      // no parameter value was accepted
};

SelectiveProblem make_problem(const StudyPair& pair);

// Conditional p-value for H: E[eta1*Z_O + eta2*Z_R] = delta given the
// selection event and the orthogonal statistic M.
double selective_pvalue(const SelectiveProblem& prob, const Contrast& c,
                        SelectiveDiagnostics* diag = nullptr);

// Two-sided equal-tail p-value for the effect-shift hypothesis
// theta_O - theta_R = delta.  adjusted=false ignores selection (naive test).
double shift_pvalue(const StudyPair& pair, double delta, bool adjusted = true);

// Equal-tail confidence interval for theta_O - theta_R by test inversion.
IntervalEstimate ci_shift(const StudyPair& pair, double level, bool adjusted = true);

// Predictive interval for the replication outcome: the set of replication
// values the shift test at delta=0 would accept.  target selects the scale
// (raw z or z/k_R).
IntervalEstimate predictive_interval(const StudyPair& pair, double level,
                                     bool adjusted = true,
                                     IntervalTarget target = IntervalTarget::effect_replication);

// One-sided p-value against the decline hypothesis: small values are
// evidence that the replication effect kept less than a (1-rho) fraction of
// the original effect in the claimed direction.
double decline_pvalue(const StudyPair& pair, double rho);

}  // namespace replistat

#endif  // REPLISTAT_SELECTIVE_HPP
