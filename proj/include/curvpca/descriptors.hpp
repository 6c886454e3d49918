#ifndef CURVPCA_DESCRIPTORS_HPP
#define CURVPCA_DESCRIPTORS_HPP

// Curvature descriptors at scale: invert the truncated expansions of
// asymptotics.hpp for one measured set of invariants.

#include "curvpca/asymptotics.hpp"
#include "curvpca/domains.hpp"
#include "curvpca/errors.hpp"
#include "curvpca/models.hpp"
#include "curvpca/sphere_integrals.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace curvpca {

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // columns, aligned with eigenvalues
};

/// Cyclic Jacobi eigensolver for small dense symmetric matrices.  Eigenvalues
/// come out in descending order (ties keep their diagonal order) and every
/// eigenvector has its first nonzero component positive.
inline EigenDecomposition eig_sym(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  if (n != A.cols()) throw validation_error("eig_sym: matrix is not square");
  if (n < 1 || n > 64) throw validation_error("eig_sym: dimension must be in [1, 64]");
  if (!A.allFinite()) throw validation_error("eig_sym: non-finite entry");
  const double anorm = A.norm();
  if ((A - A.transpose()).norm() > 1e-10 * anorm)
    throw validation_error("eig_sym: matrix is not symmetric");

  Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
  const double target = 1e-14 * anorm;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index q = 0; q < n; ++q)
      for (Eigen::Index p = 0; p < q; ++p) off += 2.0 * S(p, q) * S(p, q);
    if (std::sqrt(off) <= target) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = S(p, q);
        if (apq == 0.0) continue;
        const double tau = (S(q, q) - S(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double skp = S(k, p), skq = S(k, q);
          S(k, p) = c * skp - s * skq;
          S(k, q) = s * skp + c * skq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double spk = S(p, k), sqk = S(q, k);
          S(p, k) = c * spk - s * sqk;
          S(q, k) = s * spk + c * sqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return S(a, a) > S(b, b); });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues(i) = S(order[i], order[i]);
    Eigen::VectorXd v = V.col(order[i]);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(v(k)) > 1e-14) {
        if (v(k) < 0.0) v = -v;
        break;
      }
    }
    out.eigenvectors.col(i) = v;
  }
  return out;
}

enum class DescriptorSource { component, patch, ratio };

inline const char* to_string(DescriptorSource s) {
  switch (s) {
    case DescriptorSource::component: return "component";
    case DescriptorSource::patch: return "patch";
    case DescriptorSource::ratio: return "ratio";
  }
  return "?";
}

struct CurvatureEstimate {
  Eigen::VectorXd kappas;                 // descending; empty when h_singular
  Eigen::MatrixXd principal_directions;   // ambient_dim x n, aligned with kappas
  Eigen::VectorXd normal;
  double H = 0.0;
  double scalar_curv = 0.0;
  double gauss_curv = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd elementary_symmetric;   // K_1..K_n
  double scale = 0.0;
  DescriptorSource source = DescriptorSource::patch;

  Eigen::VectorXd tangent_eigenvalues;    // aligned with principal_directions
  double normal_eigenvalue = 0.0;
  double H_descriptor = 0.0;              // H from the volume (component) or from H^2 (patch)
  double newton_residual = 0.0;           // H^2 - sum kappa^2 - R (patch and ratio sources)
  bool umbilic = false;
  bool h_singular = false;

  bool has_kappas() const { return kappas.size() > 0; }
};

struct DescriptorOptions {
  bool volume_assisted = false;          // component: kappa from lambda and the volume H
  double h_singular_threshold = 1e-6;    // |H| eps below this: no per-direction kappas
  double umbilic_tolerance = 1e-8;       // relative tangent-eigenvalue coincidence
  double min_normal_alignment = 0.5;     // component: |cos(e, s - p)| of the normal
  double negative_h2_tolerance = 1e-8;
  double h_noise_sigmas = 4.0;           // discrete input: also singular when |H| < this many standard errors
};

namespace detail {

inline void check_descriptor_args(const IntegralInvariants& inv, int n, double eps, const char* who) {
  if (n < 1) throw validation_error(std::string(who) + ": n must be at least 1");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw validation_error(std::string(who) + ": eps must be positive");
  if (inv.covariance.rows() != n + 1 || inv.covariance.cols() != n + 1 || inv.barycenter.size() != n + 1 ||
      inv.center.size() != n + 1)
    throw validation_error(std::string(who) + ": invariants do not live in dimension n+1");
  if (!(inv.volume > 0.0)) throw validation_error(std::string(who) + ": volume must be positive");
}

// Fill the derived symmetric functions and sort kappas descending.
inline void finish_estimate(CurvatureEstimate& e, const DescriptorOptions& opt) {
  const Eigen::Index n = e.tangent_eigenvalues.size();
  double lmax = e.tangent_eigenvalues.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(e.tangent_eigenvalues(i) - e.tangent_eigenvalues(j)) <= opt.umbilic_tolerance * lmax)
        e.umbilic = true;
  if (e.has_kappas()) {
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return e.kappas(a) > e.kappas(b); });
    Eigen::VectorXd k(n), lam(n);
    Eigen::MatrixXd dirs(e.principal_directions.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
      k(i) = e.kappas(order[i]);
      lam(i) = e.tangent_eigenvalues(order[i]);
      dirs.col(i) = e.principal_directions.col(order[i]);
    }
    e.kappas = k;
    e.tangent_eigenvalues = lam;
    e.principal_directions = dirs;
    e.elementary_symmetric = elementary_symmetric(k);
    e.gauss_curv = e.elementary_symmetric(n - 1);
  } else {
    e.elementary_symmetric.resize(0);
    e.gauss_curv = n == 1 ? e.H : (n == 2 ? 0.5 * e.scalar_curv : std::numeric_limits<double>::quiet_NaN());
  }
}

// |H| eps below the threshold, or for sampled clouds |H| within
// h_noise_sigmas standard errors of zero.  The standard error uses
// H = 2(n+2) s_N/eps^2 with Var(s_N) = lambda_N / count.
inline bool h_is_singular(const IntegralInvariants& inv, int n, double eps, double H, double lambda_N_normalized,
                          const DescriptorOptions& opt) {
  if (std::abs(H) * eps < opt.h_singular_threshold) return true;
  if (inv.domain_kind == DomainKind::discrete && inv.sample_count > 1 && opt.h_noise_sigmas > 0.0) {
    const double se = 2.0 * (n + 2) / (eps * eps) *
                      std::sqrt(std::max(0.0, lambda_N_normalized) / static_cast<double>(inv.sample_count));
    if (std::abs(H) < opt.h_noise_sigmas * se) return true;
  }
  return false;
}

} // namespace detail

/// Mean curvature from the component volume alone,
///   H_V = (n+2) V_{n+1}/(eps^2 V_n) (1 - 2 V/V_{n+1}).
inline double component_mean_curvature(double volume, int n, double eps) {
  if (n < 1) throw validation_error("component_mean_curvature: n must be at least 1");
  if (!(eps > 0.0)) throw validation_error("component_mean_curvature: eps must be positive");
  if (!(volume > 0.0)) throw validation_error("component_mean_curvature: volume must be positive");
  const double Vn = ball_volume(n, eps), Vn1 = ball_volume(n + 1, eps);
  return (n + 2) * Vn1 / (eps * eps * Vn) * (1.0 - 2.0 * volume / Vn1);
}

/// Component descriptor.  The normal is the eigenvector best aligned with
/// s - p, oriented towards s; kappa_mu comes from the tangent eigenvalues
///   kappa_mu = (n+4)/(eps^4 V_n) [eps^2 V_{n+1}/(n+3) - (n+1) lambda_mu + sum_{a != mu} lambda_a],
/// or, with volume_assisted, from
///   kappa_mu = (n+2)(n+4)/(eps^4 V_n) (eps^2 V_{n+1}/(2(n+3)) - lambda_mu) - H_V/2,
///   H_V = (n+2) V_{n+1}/(eps^2 V_n) (1 - 2 V/V_{n+1}).
inline CurvatureEstimate curvature_from_component(const IntegralInvariants& inv, int n, double eps,
                                                  const DescriptorOptions& opt = {}) {
  detail::check_descriptor_args(inv, n, eps, "curvature_from_component");
  if (inv.domain_kind != DomainKind::component)
    throw validation_error("curvature_from_component: invariants are not of a spherical component");
  if (inv.normalized && inv.volume_kind != VolumeKind::measure)
    throw validation_error("curvature_from_component: normalized invariants need a measured volume");

  const EigenDecomposition ed = eig_sym(inv.raw_covariance());
  const Eigen::VectorXd offset = inv.barycenter - inv.center;
  const double on = offset.norm();
  if (!(on > 0.0)) throw numerical_error("curvature_from_component: barycenter coincides with the centre");
  Eigen::Index iN = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    const double c = std::abs(ed.eigenvectors.col(i).dot(offset)) / on;
    if (c > best) {
      best = c;
      iN = i;
    }
  }
  if (best < opt.min_normal_alignment)
    throw numerical_error("curvature_from_component: ambiguous normal direction (alignment " +
                          std::to_string(best) + ")");

  CurvatureEstimate e;
  e.source = DescriptorSource::component;
  e.scale = eps;
  e.normal = ed.eigenvectors.col(iN);
  if (e.normal.dot(offset) < 0.0) e.normal = -e.normal;
  e.normal_eigenvalue = ed.eigenvalues(iN);
  e.tangent_eigenvalues.resize(n);
  e.principal_directions.resize(n + 1, n);
  for (Eigen::Index i = 0, t = 0; i <= n; ++i) {
    if (i == iN) continue;
    e.tangent_eigenvalues(t) = ed.eigenvalues(i);
    e.principal_directions.col(t++) = ed.eigenvectors.col(i);
  }

  const double Vn = ball_volume(n, eps), Vn1 = ball_volume(n + 1, eps);
  const double e2 = eps * eps, e4 = e2 * e2;
  e.H_descriptor = component_mean_curvature(inv.volume, n, eps);
  e.kappas.resize(n);
  const double lsum = e.tangent_eigenvalues.sum();
  for (int mu = 0; mu < n; ++mu) {
    const double lam = e.tangent_eigenvalues(mu);
    if (opt.volume_assisted)
      e.kappas(mu) = (n + 2) * (n + 4) / (e4 * Vn) * (e2 * Vn1 / (2.0 * (n + 3)) - lam) - 0.5 * e.H_descriptor;
    else
      e.kappas(mu) = (n + 4) / (e4 * Vn) * (e2 * Vn1 / (n + 3) - (n + 2) * lam + lsum);
  }
  e.H = e.kappas.sum();
  e.scalar_curv = scalar_curvature(e.kappas);
  e.newton_residual = 0.0;
  detail::finish_estimate(e, opt);
  return e;
}

/// Patch descriptor from a measured area V and the covariance spectrum:
///   A = 8(n+2)/eps^2 (V/V_n - 1),   B = 2(n+2)(n+4) lambda_N/(eps^4 V_n),
///   R = ((n+2) B - (n+1) A)/n,      H^2 = (n+2)(2B - A)/n,
///   Gamma_mu = 8(n+2)(n+4)/eps^4 (lambda_mu/V_n - eps^2/(n+2)),
///   kappa_mu = (A - Gamma_mu)/(4H).
/// The normal is the smallest-eigenvalue eigenvector, oriented towards the
/// barycenter, which makes H non-negative.
inline CurvatureEstimate curvature_from_patch(const IntegralInvariants& inv, int n, double eps,
                                              const DescriptorOptions& opt = {}) {
  detail::check_descriptor_args(inv, n, eps, "curvature_from_patch");
  if (inv.domain_kind != DomainKind::patch && inv.domain_kind != DomainKind::discrete)
    throw validation_error("curvature_from_patch: invariants are not of a patch");
  if (inv.volume_kind != VolumeKind::measure)
    throw validation_error("curvature_from_patch: missing area; supply an area estimate or use the ratio route");

  const EigenDecomposition ed = eig_sym(inv.raw_covariance());
  CurvatureEstimate e;
  e.source = DescriptorSource::patch;
  e.scale = eps;
  e.normal = ed.eigenvectors.col(n);
  if (e.normal.dot(inv.barycenter - inv.center) < 0.0) e.normal = -e.normal;
  e.normal_eigenvalue = ed.eigenvalues(n);
  e.tangent_eigenvalues = ed.eigenvalues.head(n);
  e.principal_directions = ed.eigenvectors.leftCols(n);

  const double Vn = ball_volume(n, eps);
  const double e2 = eps * eps, e4 = e2 * e2;
  const double A = 8.0 * (n + 2) / e2 * (inv.volume / Vn - 1.0);
  const double B = 2.0 * (n + 2) * (n + 4) * e.normal_eigenvalue / (e4 * Vn);
  e.scalar_curv = ((n + 2) * B - (n + 1) * A) / n;
  const double H2 = (n + 2) * (2.0 * B - A) / n;
  if (H2 < -opt.negative_h2_tolerance)
    throw numerical_error("curvature_from_patch: negative H^2 (" + std::to_string(H2) +
                          "), minimal-surface ambiguity");
  e.H = std::sqrt(std::max(0.0, H2));
  e.H_descriptor = e.H;
  if (detail::h_is_singular(inv, n, eps, e.H, e.normal_eigenvalue / inv.volume, opt)) {
    e.h_singular = true;
    e.kappas.resize(0);
  } else {
    e.kappas.resize(n);
    for (int mu = 0; mu < n; ++mu) {
      const double G = 8.0 * (n + 2) * (n + 4) / e4 * (e.tangent_eigenvalues(mu) / Vn - e2 / (n + 2));
      e.kappas(mu) = (A - G) / (4.0 * e.H);
    }
    e.newton_residual = H2 - e.kappas.squaredNorm() - e.scalar_curv;
  }
  detail::finish_estimate(e, opt);
  return e;
}

/// Limit ratio of two component tangent eigenvalues,
///   (V_{n+1}^2/V_n) (lambda_mu - lambda_nu)/(lambda_mu lambda_nu)
///   -> 4(n+3)^2/((n+2)(n+4)) (kappa_nu - kappa_mu).
inline double component_limit_ratio(double lam_mu, double lam_nu, int n, double eps) {
  if (n < 1) throw validation_error("component_limit_ratio: n must be at least 1");
  if (!(eps > 0.0)) throw validation_error("component_limit_ratio: eps must be positive");
  if (!(lam_mu > 0.0) || !(lam_nu > 0.0)) throw validation_error("component_limit_ratio: eigenvalues must be positive");
  const double Vn = ball_volume(n, eps), Vn1 = ball_volume(n + 1, eps);
  return Vn1 * Vn1 / Vn * (lam_mu - lam_nu) / (lam_mu * lam_nu);
}

struct PatchLimitRatios {
  Eigen::MatrixXd tangent;  // T(mu, nu) = V_n (lambda_mu - lambda_nu)/(lambda_mu lambda_nu)
  double normal = 0.0;      // V_n lambda_N times the mean of 1/(lambda_mu lambda_nu)
};

/// Patch limit ratios from n tangent eigenvalues followed by the normal one:
///   T(mu, nu) -> (n+2)/(2(n+4)) (kappa_nu - kappa_mu) H,
///   normal    -> (n+2)/(2(n+4)) ((n+1) H^2/(n+2) - R).
inline PatchLimitRatios patch_limit_ratios(const Eigen::VectorXd& lams, int n, double eps) {
  if (n < 1) throw validation_error("patch_limit_ratios: n must be at least 1");
  if (!(eps > 0.0)) throw validation_error("patch_limit_ratios: eps must be positive");
  if (lams.size() != n + 1) throw validation_error("patch_limit_ratios: expected n+1 eigenvalues");
  for (int mu = 0; mu < n; ++mu)
    if (!(lams(mu) > 0.0)) throw validation_error("patch_limit_ratios: tangent eigenvalues must be positive");
  const double Vn = ball_volume(n, eps);
  PatchLimitRatios r;
  r.tangent.resize(n, n);
  double inv_mean = 0.0;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      r.tangent(mu, nu) = Vn * (lams(mu) - lams(nu)) / (lams(mu) * lams(nu));
      inv_mean += 1.0 / (lams(mu) * lams(nu));
    }
  r.normal = Vn * lams(n) * inv_mean / (n * n);
  return r;
}

/// Volume-free descriptor for patches of unknown area (e.g. point clouds):
/// H from the barycenter offset, R and kappa differences from the limit
/// ratios of the normalized spectrum scaled by V_n,
///   H = 2(n+2) <s - p, N>/eps^2,   B = 2(n+4)/(n+2) rho_N,
///   R = (n+1) H^2/(n+2) - B,       kappa_mu - kappa_nu = -2(n+4)/((n+2) H) T(mu, nu).
inline CurvatureEstimate curvature_from_ratios(const IntegralInvariants& inv, int n, double eps,
                                               const DescriptorOptions& opt = {}) {
  detail::check_descriptor_args(inv, n, eps, "curvature_from_ratios");
  if (inv.domain_kind != DomainKind::patch && inv.domain_kind != DomainKind::discrete)
    throw validation_error("curvature_from_ratios: invariants are not of a patch");
  const Eigen::MatrixXd normalized = inv.normalized ? inv.covariance : Eigen::MatrixXd(inv.covariance / inv.volume);
  const EigenDecomposition ed = eig_sym(normalized);

  CurvatureEstimate e;
  e.source = DescriptorSource::ratio;
  e.scale = eps;
  const Eigen::VectorXd offset = inv.barycenter - inv.center;
  e.normal = ed.eigenvectors.col(n);
  if (e.normal.dot(offset) < 0.0) e.normal = -e.normal;
  const double Vn = ball_volume(n, eps);
  e.tangent_eigenvalues = ed.eigenvalues.head(n);
  e.normal_eigenvalue = ed.eigenvalues(n);
  e.principal_directions = ed.eigenvectors.leftCols(n);

  const PatchLimitRatios lr = patch_limit_ratios(ed.eigenvalues * Vn, n, eps);
  e.H = 2.0 * (n + 2) * e.normal.dot(offset) / (eps * eps);
  e.H_descriptor = e.H;
  const double B = 2.0 * (n + 4) / (n + 2) * lr.normal;
  e.scalar_curv = (n + 1) * e.H * e.H / (n + 2) - B;
  if (detail::h_is_singular(inv, n, eps, e.H, e.normal_eigenvalue, opt)) {
    e.h_singular = true;
    e.kappas.resize(0);
  } else {
    e.kappas.resize(n);
    const double c = -2.0 * (n + 4) / ((n + 2) * e.H);
    for (int mu = 0; mu < n; ++mu) {
      double diff = 0.0;
      for (int nu = 0; nu < n; ++nu) diff += c * lr.tangent(mu, nu);
      e.kappas(mu) = (e.H + diff) / n;
    }
    e.newton_residual = e.H * e.H - e.kappas.squaredNorm() - e.scalar_curv;
  }
  detail::finish_estimate(e, opt);
  return e;
}

/// Chooses the descriptor that fits the invariants: component, patch with a
/// measured area, or the ratio route for clouds without one.
inline CurvatureEstimate estimate_curvature(const IntegralInvariants& inv, int n, double eps,
                                            const DescriptorOptions& opt = {}) {
  switch (inv.domain_kind) {
    case DomainKind::component: return curvature_from_component(inv, n, eps, opt);
    case DomainKind::patch:
    case DomainKind::discrete:
      if (inv.volume_kind == VolumeKind::measure) return curvature_from_patch(inv, n, eps, opt);
      return curvature_from_ratios(inv, n, eps, opt);
    case DomainKind::shell: break;
  }
  throw validation_error("estimate_curvature: no descriptor for shell invariants");
}

} // namespace curvpca

#endif // CURVPCA_DESCRIPTORS_HPP
