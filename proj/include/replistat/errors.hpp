#pragma once

#include <stdexcept>
#include <string>

namespace replistat {

// Base class for every error thrown by the library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A function argument violated its documented precondition.
struct invalid_argument_error : error {
  using error::error;
};

// The input file's header (or schema version) does not match the documented schema.
struct schema_error : error {
  schema_error(std::string detail, std::string column)
      : error(std::move(detail)), column(std::move(column)) {}
  std::string column;
};

// A data row could not be parsed; carries the 1-based line number.
struct row_error : error {
  row_error(std::string detail, long line) : error(std::move(detail)), line(line) {}
  long line;
};

// A statistic cannot be approximated by a z-score (e.g. too few degrees of freedom).
struct not_z_approximable_error : error {
  using error::error;
};

// An operation that assumes a selected study received an unselected one.
struct not_selected_error : error {
  using error::error;
};

// An estimator's denominator is empty (no discoveries at the requested threshold).
struct undefined_estimate_error : error {
  using error::error;
};

// The conditional support of a selective test carries no probability mass.
struct degenerate_problem_error : error {
  using error::error;
};

}  // namespace replistat
