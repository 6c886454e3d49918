#ifndef CURVPCA_DOMAINS_HPP
#define CURVPCA_DOMAINS_HPP

// Volume, barycenter and covariance of ball-induced domains, computed
// numerically:
//
//   patch      D = S n B_p(eps)                  (n-dimensional)
//   component  V+ = {z >= h(x)} n B_p(eps)       (n+1-dimensional)
//   shell      V+ n dB_p(eps)                    (n-dimensional)
//   discrete   points of a cloud inside B_c(eps)
//
// Quadrature is carried out in the chart at p, direction by direction: for a
// unit tangent direction u the surface leaves the ball at radius r(u) and
// height z_r, and the spherical part of dV+ is the meridian arc
// phi in [atan2(z_r, r), pi/2].  Component moments of a homogeneous monomial
// f of degree k use the divergence theorem on V+,
//
//   int_{V+} f = 1/(n+1+k) int_{dV+} f <X, nu>,
//
// where <X, nu> dA = (x.grad h - h) dx on the graph and eps^{n+1} cos^{n-1}phi
// dphi du on the sphere.  Both boundary pieces are smooth in u, so the
// product rules converge geometrically.

#include "curvpca/errors.hpp"
#include "curvpca/models.hpp"
#include "curvpca/quadrature.hpp"
#include "curvpca/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace curvpca {

enum class DomainKind { component, patch, shell, discrete };
enum class VolumeKind { measure, sample_mass };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::component: return "component";
    case DomainKind::patch: return "patch";
    case DomainKind::shell: return "shell";
    case DomainKind::discrete: return "discrete";
  }
  return "?";
}

struct InvariantErrors {
  double volume = 0.0;
  Eigen::VectorXd barycenter;
  Eigen::MatrixXd covariance;
};

struct IntegralInvariants {
  double volume = 0.0;
  Eigen::VectorXd barycenter;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd center;      // ball centre p
  DomainKind domain_kind = DomainKind::patch;
  bool normalized = false;     // covariance divided by volume
  VolumeKind volume_kind = VolumeKind::measure;
  std::optional<InvariantErrors> stderrs;
  std::size_t sample_count = 0;

  int ambient_dim() const { return static_cast<int>(barycenter.size()); }

  /// Invariants of the domain moved by X -> Q X + t.
  IntegralInvariants transformed(const Eigen::MatrixXd& Q, const Eigen::VectorXd& t) const {
    IntegralInvariants out = *this;
    out.barycenter = Q * barycenter + t;
    out.center = Q * center + t;
    out.covariance = Q * covariance * Q.transpose();
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    if (stderrs) {
      out.stderrs->barycenter = (Q.cwiseAbs() * stderrs->barycenter).eval();
      out.stderrs->covariance = (Q.cwiseAbs() * stderrs->covariance * Q.cwiseAbs().transpose()).eval();
    }
    return out;
  }

  /// Unnormalized covariance (requires a measured volume when normalized).
  Eigen::MatrixXd raw_covariance() const { return normalized ? Eigen::MatrixXd(volume * covariance) : covariance; }
};

struct QuadratureConfig {
  int angular_level = 16;      // polar Gauss nodes per angle; azimuth gets twice as many
  int radial_points = 16;
  int max_refinements = 4;
  double tolerance = 1e-12;    // relative change between successive levels
  std::size_t mc_samples = 1u << 20;
  int replicates = 16;
  std::uint64_t seed = 1;
  int jobs = 0;                // 0: hardware concurrency

  void validate() const {
    if (angular_level < 1 || radial_points < 1) throw validation_error("quadrature levels must be positive");
    if (max_refinements < 0) throw validation_error("max_refinements must be non-negative");
    if (!(tolerance > 0.0)) throw validation_error("tolerance must be positive");
    if (replicates < 2) throw validation_error("need at least two replicates");
    if (mc_samples < static_cast<std::size_t>(replicates)) throw validation_error("mc_samples below replicate count");
    if (jobs < 0) throw validation_error("jobs must be non-negative");
  }
};

/// Zeroth, first and second raw moments.
struct RawMoments {
  double m0 = 0.0;
  Eigen::VectorXd m1;
  Eigen::MatrixXd m2;

  RawMoments() = default;
  explicit RawMoments(int d) : m1(Eigen::VectorXd::Zero(d)), m2(Eigen::MatrixXd::Zero(d, d)) {}

  RawMoments& operator+=(const RawMoments& o) {
    m0 += o.m0;
    m1 += o.m1;
    m2 += o.m2;
    return *this;
  }

  void add(double w, const double* X) {
    const int d = static_cast<int>(m1.size());
    m0 += w;
    for (int i = 0; i < d; ++i) {
      const double wx = w * X[i];
      m1[i] += wx;
      double* col = m2.data() + static_cast<Eigen::Index>(i) * d;
      for (int j = i; j < d; ++j) col[j] += wx * X[j];
    }
  }

  // add() fills the lower triangle only.
  void symmetrize() { m2 = m2.selfadjointView<Eigen::Lower>(); }
};

namespace detail {

struct BoundaryPoint {
  double r;
  double z;
};

// Root of g(rho) = rho^2 + h(rho u)^2 - eps^2 on (0, eps], by Newton steps
// kept inside a shrinking bracket.
inline BoundaryPoint boundary_point(const HypersurfaceModel& chart, const double* u, double eps,
                                    double* x, double* grad) {
  const int n = chart.n();
  auto g = [&](double rho, double& dg, double& h) {
    for (int i = 0; i < n; ++i) x[i] = rho * u[i];
    h = chart.eval(x, grad);
    double dh = 0.0;
    for (int i = 0; i < n; ++i) dh += grad[i] * u[i];
    dg = 2.0 * rho + 2.0 * h * dh;
    return rho * rho + h * h - eps * eps;
  };
  double lo = 0.0, hi = eps, dg, h;
  double ghi = g(hi, dg, h);
  if (ghi <= 0.0) return {eps, h};
  double rho = hi, grho = ghi;
  for (int it = 0; it < 200; ++it) {
    double next = rho - grho / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - rho);
    rho = next;
    grho = g(rho, dg, h);
    if (grho > 0.0)
      hi = rho;
    else if (grho < 0.0)
      lo = rho;
    else
      return {rho, h};
    const double tiny = 4.0 * std::numeric_limits<double>::epsilon() * eps;
    if (step <= tiny || hi - lo <= tiny) return {rho, h};
  }
  throw numerical_error("boundary_radius: root finding did not converge");
}

enum class Part { patch, component, shell };

// Raw moments in chart coordinates at fixed rule sizes.
inline RawMoments chart_moments(const HypersurfaceModel& chart, double eps, Part part, int level,
                                int radial, int jobs) {
  const int n = chart.n(), d = n + 1;
  const SphereRule dirs = sphere_rule(n, level);
  const GaussRule gl = gauss_legendre(radial);
  const double eps_n = std::pow(eps, n);

  RawMoments raw = chunked_reduce(
      dirs.size(), 32, jobs, RawMoments(d), [&](std::size_t b, std::size_t e, RawMoments& acc) {
        std::vector<double> x(n), grad(n), X(d);
        for (std::size_t c = b; c < e; ++c) {
          const double* u = dirs.directions.data() + static_cast<Eigen::Index>(c) * n;
          const double wu = dirs.weights[c];
          const BoundaryPoint bp = boundary_point(chart, u, eps, x.data(), grad.data());

          if (part != Part::shell) {
            // Graph piece, rho in [0, r].
            const double half = 0.5 * bp.r;
            for (int i = 0; i < radial; ++i) {
              const double rho = half * (1.0 + gl.nodes[i]);
              for (int k = 0; k < n; ++k) x[k] = rho * u[k];
              const double h = chart.eval(x.data(), grad.data());
              double w = wu * half * gl.weights[i] * std::pow(rho, n - 1);
              if (part == Part::patch) {
                double g2 = 0.0;
                for (int k = 0; k < n; ++k) g2 += grad[k] * grad[k];
                w *= std::sqrt(1.0 + g2);
              } else {
                double xg = 0.0;
                for (int k = 0; k < n; ++k) xg += x[k] * grad[k];
                w *= xg - h;
              }
              for (int k = 0; k < n; ++k) X[k] = x[k];
              X[n] = h;
              acc.add(w, X.data());
            }
          }
          if (part != Part::patch) {
            // Spherical piece, phi in [phi_b, pi/2].
            const double phib = std::atan2(bp.z, bp.r);
            const double half = 0.5 * (0.5 * std::numbers::pi - phib);
            const double mid = 0.5 * (0.5 * std::numbers::pi + phib);
            const double scale = part == Part::component ? eps_n * eps : eps_n;
            for (int i = 0; i < radial; ++i) {
              const double phi = mid + half * gl.nodes[i];
              const double cp = std::cos(phi), sp = std::sin(phi);
              const double w = wu * half * gl.weights[i] * scale * std::pow(cp, n - 1);
              for (int k = 0; k < n; ++k) X[k] = eps * cp * u[k];
              X[n] = eps * sp;
              acc.add(w, X.data());
            }
          }
        }
      });
  raw.symmetrize();
  if (part == Part::component) {
    raw.m0 /= d;
    raw.m1 /= d + 1;
    raw.m2 /= d + 2;
  }
  return raw;
}

inline IntegralInvariants from_chart_moments(const RawMoments& raw, const HypersurfaceModel& chart,
                                             DomainKind kind) {
  if (!(raw.m0 > 0.0)) throw numerical_error("domain has non-positive measure");
  const Eigen::VectorXd s = raw.m1 / raw.m0;
  Eigen::MatrixXd C = raw.m2 - raw.m1 * raw.m1.transpose() / raw.m0;
  C = 0.5 * (C + C.transpose()).eval();
  IntegralInvariants inv;
  inv.volume = raw.m0;
  inv.barycenter = chart.origin() + chart.frame() * s;
  inv.covariance = chart.frame() * C * chart.frame().transpose();
  inv.covariance = 0.5 * (inv.covariance + inv.covariance.transpose()).eval();
  inv.center = chart.origin();
  inv.domain_kind = kind;
  inv.normalized = false;
  inv.volume_kind = VolumeKind::measure;
  return inv;
}

// Refine until volume, barycenter and covariance settle.
inline IntegralInvariants refined_invariants(const HypersurfaceModel& model, const Eigen::VectorXd& p,
                                             double eps, const QuadratureConfig& cfg, Part part,
                                             DomainKind kind) {
  cfg.validate();
  const HypersurfaceModel chart = model.chart_at(p);
  chart.check_scale(eps);
  int level = cfg.angular_level, radial = cfg.radial_points;
  RawMoments prev = chart_moments(chart, eps, part, level, radial, cfg.jobs);
  if (cfg.max_refinements == 0) return from_chart_moments(prev, chart, kind);
  double last_change = 0.0;
  for (int ref = 1; ref <= cfg.max_refinements; ++ref) {
    level *= 2;
    radial *= 2;
    RawMoments cur = chart_moments(chart, eps, part, level, radial, cfg.jobs);
    const IntegralInvariants a = from_chart_moments(prev, chart, kind);
    const IntegralInvariants b = from_chart_moments(cur, chart, kind);
    const double dv = std::abs(a.volume - b.volume) / std::abs(b.volume);
    const double ds = (a.barycenter - b.barycenter).norm() / eps;
    const double dc = (a.covariance - b.covariance).norm() / b.covariance.norm();
    last_change = std::max({dv, ds, dc});
    if (last_change < cfg.tolerance) {
      IntegralInvariants out = b;
      out.sample_count = 0;
      return out;
    }
    prev = std::move(cur);
  }
  throw numerical_error("quadrature did not reach tolerance " + std::to_string(cfg.tolerance) +
                        " (last relative change " + std::to_string(last_change) + ")");
}

} // namespace detail

/// Radius r in (0, eps] at which the surface leaves the ball along the
/// tangent direction u (unit vector in chart coordinates of the model's base).
inline double boundary_radius(const HypersurfaceModel& model, const Eigen::VectorXd& direction, double eps) {
  if (direction.size() != model.n()) throw validation_error("boundary_radius: direction has wrong dimension");
  const double nu = direction.norm();
  if (std::abs(nu - 1.0) > 1e-12) throw validation_error("boundary_radius: direction must be a unit vector");
  model.check_scale(eps);
  std::vector<double> x(model.n()), g(model.n());
  return detail::boundary_point(model, direction.data(), eps, x.data(), g.data()).r;
}

/// Patch invariants by product quadrature over directions x [0, r(u)].
inline IntegralInvariants patch_invariants(const HypersurfaceModel& model, const Eigen::VectorXd& p,
                                           double eps, const QuadratureConfig& cfg = {}) {
  return detail::refined_invariants(model, p, eps, cfg, detail::Part::patch, DomainKind::patch);
}

/// Spherical-component invariants by boundary quadrature.
inline IntegralInvariants component_invariants(const HypersurfaceModel& model, const Eigen::VectorXd& p,
                                               double eps, const QuadratureConfig& cfg = {}) {
  return detail::refined_invariants(model, p, eps, cfg, detail::Part::component, DomainKind::component);
}

/// Invariants of the spherical shell V+ n dB_p(eps).
inline IntegralInvariants shell_invariants(const HypersurfaceModel& model, const Eigen::VectorXd& p,
                                           double eps, const QuadratureConfig& cfg = {}) {
  return detail::refined_invariants(model, p, eps, cfg, detail::Part::shell, DomainKind::shell);
}

/// Spherical-component invariants by randomized quasi-Monte Carlo: Halton
/// points in the cube around p, each replicate shifted by an independent
/// uniform vector (mod 1), filtered by the ball and the side classifier.
inline IntegralInvariants component_invariants_qmc(const HypersurfaceModel& model, const Eigen::VectorXd& p,
                                                   double eps, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  model.chart_at(p).check_scale(eps);
  const int d = model.ambient_dim();
  const int R = cfg.replicates;
  const std::size_t per = cfg.mc_samples / static_cast<std::size_t>(R);
  const Halton halton(d);
  const double cube = std::pow(2.0 * eps, d);

  std::vector<RawMoments> reps(R, RawMoments(d));
  Rng root(cfg.seed);
  for (int r = 0; r < R; ++r) {
    Rng rng = root.split(static_cast<std::uint64_t>(r));
    std::vector<double> shift(d);
    for (auto& s : shift) s = rng.uniform();
    reps[r] = chunked_reduce(per, 4096, cfg.jobs, RawMoments(d), [&](std::size_t b, std::size_t e, RawMoments& acc) {
      std::vector<double> y(d);
      Eigen::VectorXd X(d);
      for (std::size_t i = b; i < e; ++i) {
        halton.point(i + 1, y.data());
        double r2 = 0.0;
        for (int k = 0; k < d; ++k) {
          double v = y[k] + shift[k];
          if (v >= 1.0) v -= 1.0;
          y[k] = eps * (2.0 * v - 1.0);
          r2 += y[k] * y[k];
        }
        if (r2 > eps * eps) continue;
        for (int k = 0; k < d; ++k) X(k) = p(k) + y[k];
        if (side_classifier(model, X) <= 0) continue;
        acc.add(1.0, y.data());
      }
    });
    reps[r].symmetrize();
    const double scale = cube / static_cast<double>(per);
    reps[r].m0 *= scale;
    reps[r].m1 *= scale;
    reps[r].m2 *= scale;
  }

  RawMoments mean(d);
  for (auto& m : reps) mean += m;
  mean.m0 /= R;
  mean.m1 /= R;
  mean.m2 /= R;
  if (!(mean.m0 > 0.0)) throw numerical_error("component_invariants_qmc: no sample fell inside the domain");

  auto finish = [&](const RawMoments& m, double& v, Eigen::VectorXd& s, Eigen::MatrixXd& C) {
    v = m.m0;
    s = m.m1 / m.m0;
    C = m.m2 - m.m1 * m.m1.transpose() / m.m0;
  };
  IntegralInvariants inv;
  Eigen::VectorXd s;
  Eigen::MatrixXd C;
  finish(mean, inv.volume, s, C);
  inv.barycenter = p + s;
  inv.covariance = 0.5 * (C + C.transpose());
  inv.center = p;
  inv.domain_kind = DomainKind::component;
  inv.sample_count = per * static_cast<std::size_t>(R);

  InvariantErrors err{0.0, Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
  for (auto& m : reps) {
    double v;
    Eigen::VectorXd sr;
    Eigen::MatrixXd Cr;
    finish(m, v, sr, Cr);
    err.volume += (v - inv.volume) * (v - inv.volume);
    err.barycenter += (sr - s).cwiseAbs2();
    err.covariance += (Cr - C).cwiseAbs2();
  }
  const double f = 1.0 / (static_cast<double>(R) * (R - 1));
  err.volume = std::sqrt(err.volume * f);
  err.barycenter = (err.barycenter * f).cwiseSqrt();
  err.covariance = (err.covariance * f).cwiseSqrt();
  inv.stderrs = err;
  return inv;
}

/// Normalized discrete invariants of the cloud points within eps of center
/// (brute-force scan).  Volume is area_estimate when given, otherwise the
/// total weight of the selected points.
inline IntegralInvariants cloud_patch_invariants(const PointCloud& cloud, const Eigen::VectorXd& center,
                                                 double eps, std::optional<double> area_estimate = {}) {
  cloud.validate();
  if (center.size() != cloud.dim) throw validation_error("center has wrong dimension");
  if (!(eps > 0.0)) throw validation_error("radius must be positive");
  if (area_estimate && !(*area_estimate > 0.0)) throw validation_error("area estimate must be positive");
  const int d = cloud.dim;
  RawMoments m(d);
  std::size_t count = 0;
  Eigen::VectorXd y(d);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    y = cloud.points.col(static_cast<Eigen::Index>(i)) - center;
    if (y.squaredNorm() > eps * eps) continue;
    m.add(cloud.weight(i), y.data());
    ++count;
  }
  m.symmetrize();
  if (count < static_cast<std::size_t>(d + 1))
    throw validation_error("too few neighbours: " + std::to_string(count) + " within radius, need " +
                           std::to_string(d + 1));
  if (!(m.m0 > 0.0)) throw validation_error("zero total weight");
  IntegralInvariants inv;
  const Eigen::VectorXd s = m.m1 / m.m0;
  Eigen::MatrixXd C = m.m2 / m.m0 - s * s.transpose();
  inv.covariance = 0.5 * (C + C.transpose());
  inv.barycenter = center + s;
  inv.center = center;
  inv.domain_kind = DomainKind::discrete;
  inv.normalized = true;
  inv.volume = area_estimate ? *area_estimate : m.m0;
  inv.volume_kind = area_estimate ? VolumeKind::measure : VolumeKind::sample_mass;
  inv.sample_count = count;
  return inv;
}

} // namespace curvpca

#endif // CURVPCA_DOMAINS_HPP
