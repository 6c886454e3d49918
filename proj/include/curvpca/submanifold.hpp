#ifndef CURVPCA_SUBMANIFOLD_HPP
#define CURVPCA_SUBMANIFOLD_HPP

// Codimension-k curvature: split a submanifold cloud into k hypersurface
// projections, estimate each with the hypersurface descriptors, and
// reassemble the second fundamental form and the Gauss-equation Riemann
// tensor.
//
// Convention: R(mu, nu, a, b) = <II(mu, b), II(nu, a)> - <II(mu, a), II(nu, b)>,
// Ric(nu, a) = sum_mu R(mu, nu, a, mu), scalar = trace Ric.  A round sphere
// has R_1212 = -1 and scalar 2.

#include "curvpca/descriptors.hpp"
#include "curvpca/domains.hpp"
#include "curvpca/errors.hpp"
#include "curvpca/models.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace curvpca {

struct AdaptedFrame {
  Eigen::MatrixXd tangent_basis;  // d x n
  Eigen::MatrixXd normal_basis;   // d x k
  Eigen::VectorXd eigenvalues;    // scatter spectrum, descending (empty for injected frames)
  bool estimated = false;

  int n() const { return static_cast<int>(tangent_basis.cols()); }
  int k() const { return static_cast<int>(normal_basis.cols()); }
  int ambient_dim() const { return static_cast<int>(tangent_basis.rows()); }
  Eigen::MatrixXd combined() const {
    Eigen::MatrixXd F(ambient_dim(), n() + k());
    F << tangent_basis, normal_basis;
    return F;
  }
};

enum class RiemannSource { second_fundamental_form, scalar_only };

struct SubmanifoldCurvature {
  int n = 0;
  int k = 0;
  std::vector<double> second_fundamental_form;  // II(mu, nu, j) at (mu n + nu) k + j
  bool has_second_fundamental_form = false;
  std::vector<double> riemann;                  // R(mu, nu, a, b) at ((mu n + nu) n + a) n + b
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  Eigen::VectorXd mean_curvature_vector;        // H_j = trace of the j-th Hessian
  RiemannSource source = RiemannSource::second_fundamental_form;
  // k = 1 only: |Ric - (H S - S^2)|_max and |scalar - (H^2 - |S|^2)|.
  double ricci_identity_residual = 0.0;
  double newton_identity_residual = 0.0;

  double II(int mu, int nu, int j) const { return second_fundamental_form[(mu * n + nu) * k + j]; }
  double& II(int mu, int nu, int j) { return second_fundamental_form[(mu * n + nu) * k + j]; }
  double R(int a, int b, int c, int d) const { return riemann[((a * n + b) * n + c) * n + d]; }
  double& R(int a, int b, int c, int d) { return riemann[((a * n + b) * n + c) * n + d]; }

  /// Hessian of the j-th normal component.
  Eigen::MatrixXd hessian(int j) const {
    Eigen::MatrixXd S(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) S(a, b) = II(a, b, j);
    return S;
  }
};

/// Frame from the scatter of the cloud within eps of center: the top n
/// eigenvectors span the tangent space.  Without n, the dimension is taken
/// at the smallest ratio lambda_{i+1}/lambda_i, which must be below max_gap_ratio.
inline AdaptedFrame estimate_frame(const PointCloud& cloud, const Eigen::VectorXd& center, double eps,
                                   std::optional<int> n = {}, double max_gap_ratio = 0.1) {
  const IntegralInvariants inv = cloud_patch_invariants(cloud, center, eps);
  const int d = cloud.dim;
  const EigenDecomposition ed = eig_sym(inv.covariance);
  int dim = 0;
  if (n) {
    if (*n < 1 || *n >= d) throw validation_error("estimate_frame: n must be in [1, ambient_dim - 1]");
    dim = *n;
  } else {
    double best = std::numeric_limits<double>::infinity();
    const double floor = 1e-14 * ed.eigenvalues(0);
    for (int i = 0; i + 1 < d; ++i) {
      if (ed.eigenvalues(i) <= floor) break;
      const double r = std::max(0.0, ed.eigenvalues(i + 1)) / ed.eigenvalues(i);
      if (r < best) {
        best = r;
        dim = i + 1;
      }
    }
    if (dim == 0 || best > max_gap_ratio)
      throw numerical_error("estimate_frame: no clear spectral gap; supply the manifold dimension");
  }
  AdaptedFrame f;
  f.tangent_basis = ed.eigenvectors.leftCols(dim);
  f.normal_basis = ed.eigenvectors.rightCols(d - dim);
  f.eigenvalues = ed.eigenvalues;
  f.estimated = true;
  return f;
}

/// Coordinate frame of a graph model at its base point.
inline AdaptedFrame exact_frame(const SubmanifoldModel& model) {
  const int n = model.n(), d = model.ambient_dim();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  AdaptedFrame f;
  f.tangent_basis = I.leftCols(n);
  f.normal_basis = I.rightCols(d - n);
  return f;
}

inline void check_frame(const AdaptedFrame& f, int ambient_dim) {
  if (f.ambient_dim() != ambient_dim || f.normal_basis.rows() != ambient_dim)
    throw validation_error("frame does not match the ambient dimension");
  if (f.n() < 1 || f.k() < 1 || f.n() + f.k() != ambient_dim)
    throw validation_error("frame must split the ambient space into tangent and normal parts");
  const Eigen::MatrixXd F = f.combined();
  if ((F.transpose() * F - Eigen::MatrixXd::Identity(ambient_dim, ambient_dim)).cwiseAbs().maxCoeff() > 1e-10)
    throw validation_error("frame is not orthonormal");
}

/// Hypersurface coordinates (<X - c, e_1>, ..., <X - c, e_n>, <X - c, N_j>),
/// with j counted from 1.
inline PointCloud project_to_hypersurface(const PointCloud& cloud, const AdaptedFrame& frame, int j,
                                          const Eigen::VectorXd& center) {
  cloud.validate();
  check_frame(frame, cloud.dim);
  if (j < 1 || j > frame.k())
    throw validation_error("project_to_hypersurface: normal index must be in [1, " + std::to_string(frame.k()) + "]");
  if (center.size() != cloud.dim) throw validation_error("project_to_hypersurface: center has wrong dimension");
  const int n = frame.n();
  Eigen::MatrixXd P(n + 1, cloud.dim);
  P.topRows(n) = frame.tangent_basis.transpose();
  P.row(n) = frame.normal_basis.col(j - 1).transpose();
  PointCloud out(n + 1);
  out.points = P * (cloud.points.colwise() - center);
  out.weights = cloud.weights;
  return out;
}

/// II(D) = sum_j [V_j K_j V_j^T] N_j from per-projection estimates expressed
/// in the projection coordinates (tangent axes first, N_j last).  Each
/// estimate is re-signed so that its normal agrees with +N_j.
inline SubmanifoldCurvature assemble_second_fundamental_form(const std::vector<CurvatureEstimate>& estimates,
                                                             const AdaptedFrame& frame) {
  const int n = frame.n(), k = frame.k();
  if (static_cast<int>(estimates.size()) != k)
    throw validation_error("assemble_second_fundamental_form: need one estimate per normal direction");
  SubmanifoldCurvature sc;
  sc.n = n;
  sc.k = k;
  sc.second_fundamental_form.assign(static_cast<std::size_t>(n * n * k), 0.0);
  sc.mean_curvature_vector = Eigen::VectorXd::Zero(k);
  sc.has_second_fundamental_form = true;
  for (int j = 0; j < k; ++j) {
    const CurvatureEstimate& e = estimates[j];
    if (e.normal.size() != n + 1 || e.principal_directions.rows() != n + 1)
      throw validation_error("assemble_second_fundamental_form: estimate has wrong dimension");
    if (!e.has_kappas()) throw numerical_error("assemble_second_fundamental_form: estimate has no principal curvatures");
    const double sgn = e.normal(n) < 0.0 ? -1.0 : 1.0;
    Eigen::MatrixXd Vj = e.principal_directions.topRows(n);
    // Orthonormalize the tangent parts; they are unit only up to the tilt of the estimated normal.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Vj);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    for (int c = 0; c < n; ++c)
      if (Q.col(c).dot(Vj.col(c)) < 0.0) Q.col(c) = -Q.col(c);
    const Eigen::MatrixXd S = sgn * Q * e.kappas.asDiagonal() * Q.transpose();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) sc.II(a, b, j) = 0.5 * (S(a, b) + S(b, a));
    sc.mean_curvature_vector(j) = S.trace();
  }
  return sc;
}

/// Second fundamental form of a graph model at its base point.
inline SubmanifoldCurvature exact_second_fundamental_form(const SubmanifoldModel& model) {
  const int n = model.n(), k = model.k();
  SubmanifoldCurvature sc;
  sc.n = n;
  sc.k = k;
  sc.second_fundamental_form.assign(static_cast<std::size_t>(n * n * k), 0.0);
  sc.mean_curvature_vector.resize(k);
  sc.has_second_fundamental_form = true;
  for (int j = 0; j < k; ++j) {
    const Eigen::MatrixXd& Hj = model.hessians()[j];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) sc.II(a, b, j) = Hj(a, b);
    sc.mean_curvature_vector(j) = Hj.trace();
  }
  return sc;
}

/// Riemann, Ricci and scalar curvature from the second fundamental form.
inline SubmanifoldCurvature riemann_from_II(SubmanifoldCurvature sc) {
  if (!sc.has_second_fundamental_form) throw validation_error("riemann_from_II: second fundamental form missing");
  const int n = sc.n, k = sc.k;
  if (static_cast<int>(sc.second_fundamental_form.size()) != n * n * k)
    throw validation_error("riemann_from_II: tensor has wrong size");
  auto dot = [&](int a, int b, int c, int d) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += sc.II(a, b, j) * sc.II(c, d, j);
    return s;
  };
  sc.riemann.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) sc.R(a, b, c, d) = dot(a, d, b, c) - dot(a, c, b, d);
  sc.ricci = Eigen::MatrixXd::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) sc.ricci(b, c) += sc.R(a, b, c, a);
  sc.scalar = sc.ricci.trace();
  sc.source = RiemannSource::second_fundamental_form;
  if (k == 1) {
    const Eigen::MatrixXd S = sc.hessian(0);
    const double H = S.trace();
    sc.ricci_identity_residual = (sc.ricci - (H * S - S * S)).cwiseAbs().maxCoeff();
    sc.newton_identity_residual = std::abs(sc.scalar - (H * H - S.squaredNorm()));
  }
  return sc;
}

/// Surface (n = 2) curvature from the scalar alone:
/// R(mu, nu, a, b) = scalar/2 (delta_{mu b} delta_{nu a} - delta_{mu a} delta_{nu b}).
inline SubmanifoldCurvature riemann_from_scalar(int n, int k, double scalar) {
  if (n != 2) throw numerical_error("riemann_from_scalar: the scalar determines the Riemann tensor only for n = 2");
  SubmanifoldCurvature sc;
  sc.n = n;
  sc.k = k;
  sc.riemann.assign(16, 0.0);
  const double c = 0.5 * scalar;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) sc.R(a, b, x, y) = c * ((a == y) * (b == x) - (a == x) * (b == y));
  sc.ricci = c * Eigen::MatrixXd::Identity(2, 2);
  sc.scalar = scalar;
  sc.source = RiemannSource::scalar_only;
  return sc;
}

/// Largest violation of pair antisymmetry, pair exchange and the first Bianchi identity.
inline double riemann_symmetry_residual(const SubmanifoldCurvature& sc) {
  const int n = sc.n;
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          r = std::max(r, std::abs(sc.R(a, b, c, d) + sc.R(b, a, c, d)));
          r = std::max(r, std::abs(sc.R(a, b, c, d) + sc.R(a, b, d, c)));
          r = std::max(r, std::abs(sc.R(a, b, c, d) - sc.R(c, d, a, b)));
          r = std::max(r, std::abs(sc.R(a, b, c, d) + sc.R(a, c, d, b) + sc.R(a, d, b, c)));
        }
  return r;
}

struct SubmanifoldOptions {
  std::optional<int> n;               // manifold dimension; detected from the spectrum when absent
  std::optional<AdaptedFrame> frame;  // injected frame; estimated when absent
  DescriptorOptions descriptor;
  double max_gap_ratio = 0.1;
};

struct SubmanifoldReport {
  AdaptedFrame frame;
  std::vector<IntegralInvariants> invariants;       // per projection
  std::vector<CurvatureEstimate> per_hypersurface;  // per projection
  SubmanifoldCurvature curvature;
};

/// Full pipeline at one scale.  The frame comes from the points within eps of
/// center; each projection keeps every cloud point whose projected image lies
/// within eps, and is analysed with the volume-free patch descriptor.  When
/// some projection has H ~ 0 (no principal curvatures) and n = 2, the Riemann
/// tensor falls back to the summed projection scalars.
inline SubmanifoldReport analyze_submanifold(const PointCloud& cloud, const Eigen::VectorXd& center, double eps,
                                             const SubmanifoldOptions& opt = {}) {
  cloud.validate();
  SubmanifoldReport rep;
  if (opt.frame) {
    check_frame(*opt.frame, cloud.dim);
    if (opt.n && *opt.n != opt.frame->n()) throw validation_error("analyze_submanifold: n disagrees with the frame");
    rep.frame = *opt.frame;
  } else {
    rep.frame = estimate_frame(cloud, center, eps, opt.n, opt.max_gap_ratio);
  }
  const int n = rep.frame.n(), k = rep.frame.k();
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n + 1);
  bool complete = true;
  double scalar_sum = 0.0;
  for (int j = 1; j <= k; ++j) {
    const PointCloud proj = project_to_hypersurface(cloud, rep.frame, j, center);
    rep.invariants.push_back(cloud_patch_invariants(proj, origin, eps));
    rep.per_hypersurface.push_back(estimate_curvature(rep.invariants.back(), n, eps, opt.descriptor));
    complete = complete && rep.per_hypersurface.back().has_kappas();
    scalar_sum += rep.per_hypersurface.back().scalar_curv;
  }
  if (complete) {
    rep.curvature = riemann_from_II(assemble_second_fundamental_form(rep.per_hypersurface, rep.frame));
  } else {
    rep.curvature = riemann_from_scalar(n, k, scalar_sum);
    rep.curvature.mean_curvature_vector.resize(k);
    for (int j = 0; j < k; ++j) {
      const CurvatureEstimate& e = rep.per_hypersurface[j];
      rep.curvature.mean_curvature_vector(j) = e.normal(n) < 0.0 ? -e.H : e.H;
    }
  }
  return rep;
}

} // namespace curvpca

#endif // CURVPCA_SUBMANIFOLD_HPP
