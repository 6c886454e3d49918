#ifndef CURVPCA_TESTS_ORACLES_HPP
#define CURVPCA_TESTS_ORACLES_HPP

// Reference values computed independently of the library formulas: Gamma
// function closed forms, hand-derived lens and cap moments, and the random
// graph-model family used by the convergence suites.

#include "curvpca/models.hpp"
#include "curvpca/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Integral of x^a over S^{n-1}: 2 prod Gamma((a_i+1)/2) / Gamma((|a|+n)/2), zero for odd a_i.
inline double sphere_monomial(const std::vector<int>& a) {
  double num = 2.0;
  int deg = 0;
  for (int ai : a) {
    if (ai % 2) return 0.0;
    num *= std::tgamma((ai + 1) / 2.0);
    deg += ai;
  }
  return num / std::tgamma((deg + static_cast<double>(a.size())) / 2.0);
}

inline double ball_monomial(const std::vector<int>& a, double eps) {
  int deg = 0;
  for (int ai : a) deg += ai;
  const double p = static_cast<double>(a.size()) + deg;
  return std::pow(eps, p) / p * sphere_monomial(a);
}

/// Volume of the n-ball of radius eps via the Gamma function.
inline double ball_volume(int n, double eps) { return std::pow(pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(eps, n); }

/// Half ball {y in B^{n+1}(eps), y_{n+1} >= 0}: volume, first moment along the
/// axis, second moments (tangent, axis), and central covariance eigenvalues.
struct HalfBall {
  double volume, first, m2_tangent, m2_axis, lambda_tangent, lambda_normal;
};

inline HalfBall half_ball(int n, double eps) {
  HalfBall h;
  h.volume = ball_volume(n + 1, eps) / 2.0;
  // int_0^eps z V_n(sqrt(eps^2 - z^2)) dz = V_n(1) eps^{n+2}/(n+2)
  h.first = ball_volume(n, 1.0) * std::pow(eps, n + 2) / (n + 2);
  std::vector<int> a(n + 1, 0);
  a[0] = 2;
  h.m2_tangent = ball_monomial(a, eps) / 2.0;
  h.m2_axis = h.m2_tangent;
  h.lambda_tangent = h.m2_tangent;
  h.lambda_normal = h.m2_axis - h.first * h.first / h.volume;
  return h;
}

/// Two-sphere lens: unit sphere interior cut by the eps-ball centred on the sphere (R^3).
inline double lens_volume(double eps) { return 2.0 * pi / 3.0 * std::pow(eps, 3) - pi / 4.0 * std::pow(eps, 4); }

/// Spherical cap of the radius-R sphere in R^3 inside the eps-ball about a
/// surface point.  Its height h = eps^2/(2R) and the axial coordinate is uniform on [0, h].
struct Cap {
  double area, offset, lambda_normal, lambda_tangent;
};

inline Cap cap(double R, double eps) {
  const double h = eps * eps / (2.0 * R);
  Cap c;
  c.area = 2.0 * pi * R * h;
  c.offset = h / 2.0;
  c.lambda_normal = c.area * h * h / 12.0;
  // x^2 + y^2 = 2 R z - z^2 on the sphere, split evenly between x and y.
  c.lambda_tangent = c.area * (R * h / 2.0 - h * h / 6.0);
  return c;
}

/// Lens volume (sphere interior inside the eps-ball) for a sphere of radius R
/// in R^{n+1}, by slicing along the axis.  Simpson's rule on a smooth integrand.
inline double lens_volume_nd(int n, double R, double eps, int panels = 2000) {
  // Axis t from the surface point towards the centre; ball: t^2 + r^2 <= eps^2,
  // sphere interior: (R - t)^2 + r^2 <= R^2.  Cross-section radius
  // r(t)^2 = min(eps^2 - t^2, 2 R t - t^2), t in [0, eps].
  const double t0 = eps * eps / (2.0 * R);
  auto area = [&](double t) {
    const double r2 = std::min(eps * eps - t * t, 2.0 * R * t - t * t);
    return r2 > 0.0 ? ball_volume(n, std::sqrt(r2)) : 0.0;
  };
  auto simpson = [&](double a, double b) {
    double s = area(a) + area(b);
    const double hh = (b - a) / panels;
    for (int i = 1; i < panels; ++i) s += area(a + i * hh) * (i % 2 ? 4.0 : 2.0);
    return s * hh / 3.0;
  };
  return simpson(0.0, t0) + simpson(t0, eps);
}

/// Random graph model with kappas uniform in [-2, 2]^n and cubic/quartic
/// coefficients uniform in [-0.5, 0.5] (symmetrized by the model).
inline curvpca::HypersurfaceModel random_graph(int n, curvpca::Rng& rng) {
  Eigen::VectorXd k(n);
  for (int i = 0; i < n; ++i) k(i) = rng.uniform(-2.0, 2.0);
  std::vector<double> c3(static_cast<std::size_t>(n * n * n)), c4(static_cast<std::size_t>(n * n * n * n));
  for (auto& v : c3) v = rng.uniform(-0.5, 0.5);
  for (auto& v : c4) v = rng.uniform(-0.5, 0.5);
  return curvpca::HypersurfaceModel::graph(k, c3, c4);
}

/// Family used by the convergence suites: five surfaces in R^3, five in R^4.
inline std::vector<curvpca::HypersurfaceModel> model_family(std::uint64_t seed = 1) {
  curvpca::Rng rng(seed);
  std::vector<curvpca::HypersurfaceModel> out;
  for (int i = 0; i < 10; ++i) out.push_back(random_graph(i < 5 ? 2 : 3, rng));
  return out;
}

/// Angle between the lines spanned by unit vectors a and b.
inline double line_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double c = std::abs(a.dot(b));
  return std::atan2((a - a.dot(b) * b).norm(), c);
}

/// Random rotation (QR of a Gaussian matrix, sign-fixed) in dimension d.
inline Eigen::MatrixXd random_rotation(int d, curvpca::Rng& rng) {
  Eigen::MatrixXd G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (R(i, i) < 0) Q.col(i) = -Q.col(i);
  if (Q.determinant() < 0) Q.col(0) = -Q.col(0);
  return Q;
}

} // namespace oracle

#endif // CURVPCA_TESTS_ORACLES_HPP
