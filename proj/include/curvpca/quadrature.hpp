#ifndef CURVPCA_QUADRATURE_HPP
#define CURVPCA_QUADRATURE_HPP

// Gauss-Legendre rules, product rules on S^{n-1}, and a chunked parallel
// reduction whose result does not depend on the number of worker threads.

#include "curvpca/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <numbers>
#include <thread>
#include <vector>

namespace curvpca {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [-1, 1].
inline GaussRule gauss_legendre(int m) {
  if (m < 1) throw validation_error("gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_m.
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (m + 0.5L));
    long double dp = 1.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = x;
      for (int k = 2; k <= m; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_m(x), p0 = P_{m-1}(x)
      dp = m * (x * p1 - p0) / (x * x - 1.0L);
      long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    rule.nodes[i] = static_cast<double>(-x);
    rule.nodes[m - 1 - i] = static_cast<double>(x);
    rule.weights[i] = rule.weights[m - 1 - i] = static_cast<double>(w);
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
inline GaussRule gauss_legendre(int m, double a, double b) {
  GaussRule rule = gauss_legendre(m);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

/// Directions on the unit sphere S^{n-1} in R^n with weights summing to its area.
struct SphereRule {
  Eigen::MatrixXd directions; // n x M
  std::vector<double> weights;

  int dim() const { return static_cast<int>(directions.rows()); }
  std::size_t size() const { return weights.size(); }
};

/// Product rule in hyperspherical coordinates: each polar angle phi_mu in
/// [0, pi] gets an m-point Gauss-Legendre rule carrying sin^{n-1-mu}(phi_mu),
/// the azimuth gets the 2m-point trapezoid rule.  n = 1 is the pair {-1, +1}.
inline SphereRule sphere_rule(int n, int m) {
  if (n < 1) throw validation_error("sphere_rule: dimension must be positive");
  if (m < 1) throw validation_error("sphere_rule: level must be positive");
  SphereRule rule;
  if (n == 1) {
    rule.directions.resize(1, 2);
    rule.directions << -1.0, 1.0;
    rule.weights = {1.0, 1.0};
    return rule;
  }
  const int polar = n - 2;
  const int az = 2 * m;
  std::size_t count = static_cast<std::size_t>(az);
  for (int k = 0; k < polar; ++k) count *= static_cast<std::size_t>(m);
  rule.directions.resize(n, static_cast<Eigen::Index>(count));
  rule.weights.resize(count);

  const GaussRule g = gauss_legendre(m, 0.0, std::numbers::pi);
  std::vector<double> sin_n(m), cos_n(m);
  for (int i = 0; i < m; ++i) {
    sin_n[i] = std::sin(g.nodes[i]);
    cos_n[i] = std::cos(g.nodes[i]);
  }
  const double dtheta = 2.0 * std::numbers::pi / az;

  std::vector<int> idx(polar, 0);
  std::size_t col = 0;
  for (;;) {
    double w = 1.0, prod_sin;
    for (int k = 0; k < polar; ++k) {
      const int i = idx[k];
      w *= g.weights[i] * std::pow(sin_n[i], n - 2 - k);
    }
    for (int t = 0; t < az; ++t) {
      const double th = t * dtheta;
      prod_sin = 1.0;
      for (int k = 0; k < polar; ++k) {
        rule.directions(k, static_cast<Eigen::Index>(col)) = prod_sin * cos_n[idx[k]];
        prod_sin *= sin_n[idx[k]];
      }
      rule.directions(n - 2, static_cast<Eigen::Index>(col)) = prod_sin * std::cos(th);
      rule.directions(n - 1, static_cast<Eigen::Index>(col)) = prod_sin * std::sin(th);
      rule.weights[col] = w * dtheta;
      ++col;
    }
    int k = polar - 1;
    while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
    if (k < 0) break;
  }
  return rule;
}

/// Worker count: 0 means the hardware concurrency.
inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs body(begin, end, acc) over fixed chunks [k*chunk, (k+1)*chunk) of
/// [0, count) and folds the per-chunk accumulators in chunk order, so the
/// floating-point result is the same for every worker count.
template <class Acc, class Body>
Acc chunked_reduce(std::size_t count, std::size_t chunk, int jobs, const Acc& zero, Body&& body) {
  if (chunk == 0) chunk = 1;
  const std::size_t nchunks = (count + chunk - 1) / chunk;
  std::vector<Acc> partial(nchunks, zero);
  auto run = [&](std::size_t k) {
    const std::size_t b = k * chunk, e = std::min(count, b + chunk);
    body(b, e, partial[k]);
  };
  const int workers = std::min<int>(resolve_jobs(jobs), static_cast<int>(std::max<std::size_t>(nchunks, 1)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < nchunks; ++k) run(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < nchunks; k = next++) run(k);
        } catch (...) {
          errors[w] = std::current_exception();
          next = nchunks;
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  Acc total = zero;
  for (auto& p : partial) total += p;
  return total;
}

} // namespace curvpca

#endif // CURVPCA_QUADRATURE_HPP
