#ifndef CURVPCA_CONVERGENCE_HPP
#define CURVPCA_CONVERGENCE_HPP

#include "curvpca/errors.hpp"

#include <cmath>
#include <vector>

namespace curvpca {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  // log(err) at log(eps) = 0
};

/// Least-squares line through (log eps_i, log err_i).
inline SlopeFit fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& err) {
  if (eps.size() != err.size()) throw validation_error("fit_loglog_slope: size mismatch");
  if (eps.size() < 2) throw validation_error("fit_loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !(err[i] > 0.0)) throw validation_error("fit_loglog_slope: values must be positive");
    const double x = std::log(eps[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw validation_error("fit_loglog_slope: scales must differ");
  SlopeFit f;
  f.slope = (m * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / m;
  return f;
}

/// Geometric grid eps0 2^{-j}, j = 0..count-1.
inline std::vector<double> geometric_grid(double eps0, int count) {
  if (!(eps0 > 0.0) || count < 1) throw validation_error("geometric_grid: need eps0 > 0 and count >= 1");
  std::vector<double> g(count);
  for (int j = 0; j < count; ++j) g[j] = std::ldexp(eps0, -j);
  return g;
}

} // namespace curvpca

#endif // CURVPCA_CONVERGENCE_HPP
