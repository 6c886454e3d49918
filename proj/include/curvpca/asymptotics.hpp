#ifndef CURVPCA_ASYMPTOTICS_HPP
#define CURVPCA_ASYMPTOTICS_HPP

// Truncated small-eps expansions of the domain invariants in terms of the
// principal curvatures.  H and the scalar curvature are derived from the
// kappas (Newton identities).  V_k below is the volume of the k-ball of
// radius eps.
//
// Component V+ (n+1 dimensional):
//   V          = V_{n+1}/2 - eps^2 V_n H / (2(n+2))
//   s_N        = 2 (V_n/V_{n+1}) eps^2/(n+2) (1 + (V_n/V_{n+1}) eps^2 H/(n+2))
//   lambda_mu  = V_{n+1} eps^2/(2(n+3)) - V_n eps^4 (2 kappa_mu + H)/(2(n+2)(n+4))
//   lambda_N   = V_{n+1} eps^2/(2(n+3))
//                - 2 (V_n^2/V_{n+1}) eps^4/(n+2)^2 (1 + (V_n/V_{n+1}) eps^2 H/(n+2))
//
// Patch D (n dimensional):
//   V          = V_n (1 + eps^2 (H^2 - 2R)/(8(n+2)))
//   s_N        = eps^2 H / (2(n+2))
//   lambda_mu  = V_n [eps^2/(n+2) + eps^4 (H^2 - 2R - 4 H kappa_mu)/(8(n+2)(n+4))]
//   lambda_N   = V_n eps^4 ((n+1) H^2/(n+2) - R) / (2(n+2)(n+4))
//
// Shell V+ n dB(eps): eps-derivatives of the component raw moments.

#include "curvpca/errors.hpp"
#include "curvpca/models.hpp"
#include "curvpca/sphere_integrals.hpp"

#include <Eigen/Dense>

#include <string>

namespace curvpca {

struct TruncationOrders {
  int volume = 0;
  int barycenter = 0;
  int eigenvalues = 0;
};

struct AsymptoticInvariants {
  double volume = 0.0;
  double barycenter_normal = 0.0;   // tangential components vanish at this order
  Eigen::VectorXd eigenvalues;      // tangent_1..tangent_n, normal
  TruncationOrders truncation_order; // exponent of the first neglected power of eps
};

namespace detail {

inline void check_asymptotic_args(int n, double eps, const Eigen::VectorXd& kappas, const char* who) {
  if (n < 1) throw validation_error(std::string(who) + ": n must be at least 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw validation_error(std::string(who) + ": eps must be positive");
  if (kappas.size() != n)
    throw validation_error(std::string(who) + ": expected " + std::to_string(n) + " curvatures");
  if (!kappas.allFinite()) throw validation_error(std::string(who) + ": curvatures must be finite");
}

} // namespace detail

inline AsymptoticInvariants component_asymptotics(int n, double eps, const Eigen::VectorXd& kappas) {
  detail::check_asymptotic_args(n, eps, kappas, "component_asymptotics");
  const double H = mean_curvature(kappas);
  const double Vn = ball_volume(n, eps), Vn1 = ball_volume(n + 1, eps);
  const double e2 = eps * eps, e4 = e2 * e2;
  const double q = Vn / Vn1;

  AsymptoticInvariants a;
  a.volume = 0.5 * Vn1 - e2 * Vn * H / (2.0 * (n + 2));
  a.barycenter_normal = 2.0 * q * e2 / (n + 2) * (1.0 + q * e2 * H / (n + 2));
  a.eigenvalues.resize(n + 1);
  const double lead = Vn1 * e2 / (2.0 * (n + 3));
  for (int mu = 0; mu < n; ++mu)
    a.eigenvalues(mu) = lead - Vn * e4 * (2.0 * kappas(mu) + H) / (2.0 * (n + 2) * (n + 4));
  a.eigenvalues(n) = lead - 2.0 * (Vn * Vn / Vn1) * e4 / ((n + 2.0) * (n + 2.0)) * (1.0 + q * e2 * H / (n + 2));
  a.truncation_order = {n + 3, 3, n + 5};
  return a;
}

inline AsymptoticInvariants patch_asymptotics(int n, double eps, const Eigen::VectorXd& kappas) {
  detail::check_asymptotic_args(n, eps, kappas, "patch_asymptotics");
  const double H = mean_curvature(kappas);
  const double R = scalar_curvature(kappas);
  const double Vn = ball_volume(n, eps);
  const double e2 = eps * eps, e4 = e2 * e2;

  AsymptoticInvariants a;
  a.volume = Vn * (1.0 + e2 * (H * H - 2.0 * R) / (8.0 * (n + 2)));
  a.barycenter_normal = e2 * H / (2.0 * (n + 2));
  a.eigenvalues.resize(n + 1);
  for (int mu = 0; mu < n; ++mu)
    a.eigenvalues(mu) =
        Vn * (e2 / (n + 2) + e4 * (H * H - 2.0 * R - 4.0 * H * kappas(mu)) / (8.0 * (n + 2) * (n + 4)));
  a.eigenvalues(n) = Vn * e4 * ((n + 1) * H * H / (n + 2) - R) / (2.0 * (n + 2) * (n + 4));
  a.truncation_order = {n + 3, 4, n + 5};
  return a;
}

/// Term-by-term eps-derivative of the component moments
///   M0 = V_{n+1}/2 - eps^2 V_n H/(2(n+2)),   M1_N = eps^2 V_n/(n+2),
///   M2_mu = eps^2 V_{n+1}/(2(n+3)) - eps^4 V_n (2 kappa_mu + H)/(2(n+2)(n+4)),
///   M2_N  = eps^2 V_{n+1}/(2(n+3)),
/// with barycenter and covariance formed from the derivative moments.
inline AsymptoticInvariants shell_asymptotics(int n, double eps, const Eigen::VectorXd& kappas) {
  detail::check_asymptotic_args(n, eps, kappas, "shell_asymptotics");
  const double H = mean_curvature(kappas);
  const double Vn = ball_volume(n, eps), Vn1 = ball_volume(n + 1, eps);
  const double e2 = eps * eps, e3 = e2 * eps;

  const double dM0 = (n + 1) * Vn1 / (2.0 * eps) - eps * Vn * H / 2.0;
  const double dM1 = eps * Vn;
  const double dM2N = eps * Vn1 / 2.0;

  AsymptoticInvariants a;
  a.volume = dM0;
  a.barycenter_normal = dM1 / dM0;
  a.eigenvalues.resize(n + 1);
  for (int mu = 0; mu < n; ++mu)
    a.eigenvalues(mu) = eps * Vn1 / 2.0 - e3 * Vn * (2.0 * kappas(mu) + H) / (2.0 * (n + 2));
  a.eigenvalues(n) = dM2N - dM1 * dM1 / dM0;
  a.truncation_order = {n + 2, 2, n + 4};
  return a;
}

} // namespace curvpca

#endif // CURVPCA_ASYMPTOTICS_HPP
