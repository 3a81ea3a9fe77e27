#include "qlink/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qlink/errors.hpp"

namespace qlink::numerics {

LineSearchResult golden_section_maximize(const std::function<double(double)>& f,
                                         double lo, double hi, double tolerance) {
  if (hi < lo) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  LineSearchResult best{lo, f(lo)};
  auto consider = [&best](double x, double v) {
    if (v > best.value) best = {x, v};
  };
  consider(hi, f(hi));
  if (hi - lo <= tolerance) return best;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  consider(c, fc);
  consider(d, fd);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  return best;
}

SimplexResult nelder_mead_minimize(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> start, double step, double tolerance, int max_iterations) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t k = 0; k < n; ++k) simplex[k + 1][k] += step;
  std::vector<double> values(n + 1);
  for (std::size_t k = 0; k <= n; ++k) values[k] = f(simplex[k]);

  std::vector<std::size_t> order(n + 1);
  SimplexResult result;
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        d = std::max(d, std::abs(simplex[k][j] - simplex[0][j]));
      }
    }
    return d;
  };
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      s[k] = std::move(simplex[order[k]]);
      v[k] = values[order[k]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };

  std::vector<double> centroid(n), trial(n), trial2(n);
  auto along = [&](double t, std::vector<double>& out) {
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = centroid[j] + t * (simplex[n][j] - centroid[j]);
    }
  };

  sort_simplex();
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (diameter() < tolerance) {
      result.converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[k][j] / static_cast<double>(n);
    }
    along(-1.0, trial);
    const double fr = f(trial);
    if (fr < values[0]) {
      along(-2.0, trial2);
      const double fe = f(trial2);
      if (fe < fr) {
        simplex[n] = trial2;
        values[n] = fe;
      } else {
        simplex[n] = trial;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = trial;
      values[n] = fr;
    } else {
      const bool outside = fr < values[n];
      along(outside ? -0.5 : 0.5, trial2);
      const double fc = f(trial2);
      if (fc < std::min(fr, values[n])) {
        simplex[n] = trial2;
        values[n] = fc;
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          for (std::size_t j = 0; j < n; ++j) {
            simplex[k][j] = simplex[0][j] + 0.5 * (simplex[k][j] - simplex[0][j]);
          }
          values[k] = f(simplex[k]);
        }
      }
    }
    sort_simplex();
  }
  result.iterations = it;
  result.x = simplex[0];
  result.value = values[0];
  return result;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("least_squares_slope: need two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tolerance) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw DomainError("bisect_root: no sign change on the bracket");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qlink::numerics
