#include "replistat/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "replistat/errors.hpp"

namespace replistat {

namespace {
constexpr double k_inf = std::numeric_limits<double>::infinity();
}

IntervalSet::IntervalSet(std::vector<Interval> intervals) {
  for (const Interval& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi))
      throw invalid_argument_error("IntervalSet: NaN endpoint");
    if (!(iv.lo < iv.hi))
      throw invalid_argument_error("IntervalSet: interval endpoints must satisfy lo < hi");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const Interval& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      // Overlapping or touching: merge (a measure-zero pinch point is not a gap).
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(iv);
    }
  }
}

IntervalSet IntervalSet::full_line() { return IntervalSet({{-k_inf, k_inf}}); }

IntervalSet IntervalSet::right_of(double c) { return IntervalSet({{c, k_inf}}); }

IntervalSet IntervalSet::left_of(double c) { return IntervalSet({{-k_inf, c}}); }

IntervalSet IntervalSet::two_sided(double c) {
  if (!(c > 0.0)) throw invalid_argument_error("IntervalSet::two_sided: cutoff must be positive");
  return IntervalSet({{-k_inf, -c}, {c, k_inf}});
}

bool IntervalSet::is_full_line() const {
  return intervals_.size() == 1 && intervals_[0].lo == -k_inf && intervals_[0].hi == k_inf;
}

bool IntervalSet::contains(double x) const {
  for (const Interval& iv : intervals_) {
    if (x < iv.lo) return false;
    if (x <= iv.hi) return true;
  }
  return false;
}

IntervalSet IntervalSet::clip(double lo, double hi) const {
  if (!(lo < hi)) throw invalid_argument_error("IntervalSet::clip: lo must be < hi");
  std::vector<Interval> out;
  for (const Interval& iv : intervals_) {
    double a = std::max(iv.lo, lo);
    double b = std::min(iv.hi, hi);
    if (a < b) out.push_back({a, b});
  }
  return IntervalSet(std::move(out));
}

bool IntervalSet::operator==(const IntervalSet& o) const {
  if (intervals_.size() != o.intervals_.size()) return false;
  for (std::size_t i = 0; i < intervals_.size(); ++i)
    if (intervals_[i].lo != o.intervals_[i].lo || intervals_[i].hi != o.intervals_[i].hi)
      return false;
  return true;
}

IntervalSet affine_map(const IntervalSet& s, double a, double b) {
  if (a == 0.0) throw invalid_argument_error("affine_map: scale factor must be nonzero");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw invalid_argument_error("affine_map: coefficients must be finite");
  std::vector<Interval> out;
  out.reserve(s.intervals().size());
  for (const Interval& iv : s.intervals()) {
    double x = a * iv.lo + b;
    double y = a * iv.hi + b;
    // a*inf + b is still +-inf; for a < 0 the endpoints swap.
    if (a > 0.0)
      out.push_back({x, y});
    else
      out.push_back({y, x});
  }
  return IntervalSet(std::move(out));
}

}  // namespace replistat
