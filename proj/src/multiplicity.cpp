#include "replistat/multiplicity.hpp"

#include <algorithm>

#include "replistat/errors.hpp"

namespace replistat {

namespace {

std::vector<std::pair<double, std::string>> sorted_pairs(
    const std::map<std::string, double>& pvals) {
  if (pvals.empty()) throw invalid_argument_error("multiplicity: empty p-value map");
  std::vector<std::pair<double, std::string>> v;
  v.reserve(pvals.size());
  for (const auto& [id, p] : pvals) {
    if (!(p > 0.0 && p <= 1.0))
      throw invalid_argument_error("multiplicity: p-values must lie in (0, 1], offending id " +
                                   id);
    v.emplace_back(p, id);
  }
  // std::map iteration is id-ordered, so stable_sort keeps ties id-stable.
  std::stable_sort(v.begin(), v.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

}  // namespace

const char* to_string(MultiplicityProcedure p) {
  return p == MultiplicityProcedure::bh ? "bh" : "holm";
}

MultiplicityDecision bh(const std::map<std::string, double>& pvals, double q) {
  if (!(q > 0.0 && q < 1.0)) throw invalid_argument_error("bh: q must lie in (0, 1)");
  auto v = sorted_pairs(pvals);
  const std::size_t m = v.size();
  std::size_t cut = 0;  // number of rejections
  for (std::size_t i = m; i >= 1; --i) {
    if (v[i - 1].first <= static_cast<double>(i) * q / static_cast<double>(m)) {
      cut = i;
      break;
    }
  }
  MultiplicityDecision d;
  d.procedure = MultiplicityProcedure::bh;
  d.level = q;
  // Reject everything at or below the crossing p-value, so exact ties with
  // the threshold share its fate even past index i*.
  if (cut > 0) {
    d.threshold_used = v[cut - 1].first;
    for (const auto& [p, id] : v)
      if (p <= d.threshold_used) d.rejected_ids.push_back(id);
  }
  return d;
}

MultiplicityDecision holm(const std::map<std::string, double>& pvals, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw invalid_argument_error("holm: alpha must lie in (0, 1)");
  auto v = sorted_pairs(pvals);
  const std::size_t m = v.size();
  MultiplicityDecision d;
  d.procedure = MultiplicityProcedure::holm;
  d.level = alpha;
  for (std::size_t i = 0; i < m; ++i) {
    if (v[i].first <= alpha / static_cast<double>(m - i)) {
      d.rejected_ids.push_back(v[i].second);
      d.threshold_used = v[i].first;
    } else {
      break;
    }
  }
  return d;
}

}  // namespace replistat
