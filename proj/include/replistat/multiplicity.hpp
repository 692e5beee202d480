#ifndef REPLISTAT_MULTIPLICITY_HPP
#define REPLISTAT_MULTIPLICITY_HPP

#include <map>
#include <string>
#include <vector>

namespace replistat {

enum class MultiplicityProcedure { bh, holm };

const char* to_string(MultiplicityProcedure p);

struct MultiplicityDecision {
  MultiplicityProcedure procedure = MultiplicityProcedure::bh;
  double level = 0.05;
  std::vector<std::string> rejected_ids;  // ascending p-value order, id-stable ties
  double threshold_used = 0.0;            // largest rejected p-value (0 if none)
};

// Benjamini–Hochberg step-up at FDR level q.
MultiplicityDecision bh(const std::map<std::string, double>& pvals, double q);

// Holm step-down at familywise level alpha.
MultiplicityDecision holm(const std::map<std::string, double>& pvals, double alpha);

}  // namespace replistat

#endif  // REPLISTAT_MULTIPLICITY_HPP
