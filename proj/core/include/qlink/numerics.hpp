#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qlink::numerics {

struct LineSearchResult {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of `f` on [lo, hi]. Endpoints are
/// also evaluated so a monotone objective returns its boundary maximum.
LineSearchResult golden_section_maximize(const std::function<double(double)>& f,
                                         double lo, double hi, double tolerance);

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead minimization from `start` with initial edge length `step`.
/// Converges when the simplex diameter drops below `tolerance`.
SimplexResult nelder_mead_minimize(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> start, double step, double tolerance,
    int max_iterations);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Bisection for a sign change of `f` on [lo, hi]. Requires f(lo) and f(hi)
/// to have opposite signs.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tolerance);

}  // namespace qlink::numerics
