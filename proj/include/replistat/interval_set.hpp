#pragma once

#include <vector>

namespace replistat {

// One open interval on the extended real line; lo < hi, infinities allowed.
struct Interval {
  double lo;
  double hi;
};

// Finite union of disjoint open intervals, kept sorted with strictly
// positive gaps. Represents the region of original z-scores compatible
// with having been selected for publication.
class IntervalSet {
 public:
  IntervalSet() = default;  // the empty set

  // Normalizes arbitrary input: sorts, merges overlapping or touching
  // intervals, drops empty ones. Throws invalid_argument_error on NaN
  // endpoints or lo >= hi after normalization input checks.
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet empty_set() { return IntervalSet(); }
  static IntervalSet full_line();
  static IntervalSet right_of(double c);   // (c, +inf)
  static IntervalSet left_of(double c);    // (-inf, c)
  static IntervalSet two_sided(double c);  // (-inf, -c) U (c, +inf), c > 0

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  bool is_full_line() const;

  // Membership. Endpoints are not distinguished from interior points
  // (continuous laws put no mass on them), so the comparison is closed.
  bool contains(double x) const;

  // Intersection with the open interval (lo, hi).
  IntervalSet clip(double lo, double hi) const;

  bool operator==(const IntervalSet& o) const;

 private:
  std::vector<Interval> intervals_;
};

// Image {a*x + b : x in s}; a < 0 reflects the set. a == 0 is rejected.
IntervalSet affine_map(const IntervalSet& s, double a, double b);

}  // namespace replistat
