#pragma once

#include <functional>

namespace replistat {

// Adaptive quadrature on a finite interval using the Gauss-Kronrod (7, 15)
// pair: the embedded 7-point Gauss value supplies the error estimate, and
// subintervals are bisected until each local error estimate fits within its
// proportional share of abs_tol.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-9, int max_depth = 30);

}  // namespace replistat
