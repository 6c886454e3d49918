#ifndef CURVPCA_MODELS_HPP
#define CURVPCA_MODELS_HPP

// Synthetic hypersurfaces and codimension-k graphs with exact curvature.
//
// A hypersurface model is a height function z = h(x) over the tangent space
// of a base point, placed in ambient space by an origin o and an orthogonal
// frame F whose first n columns span the tangent space and whose last column
// is the normal N:
//
//   X(x) = o + F (x, h(x)).
//
// N points into the region V+ = {z >= h(x)}.  With this orientation a
// sphere's interior is the V+ side and its principal curvatures are +1/R.

#include "curvpca/errors.hpp"
#include "curvpca/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace curvpca {

/// Finite set of ambient points, stored column-wise, with optional weights.
struct PointCloud {
  int dim = 0;
  Eigen::MatrixXd points;       // dim x N
  std::vector<double> weights;  // empty: unit weights

  PointCloud() = default;
  explicit PointCloud(int d, Eigen::Index count = 0) : dim(d), points(d, count) {}

  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
  bool weighted() const { return !weights.empty(); }
  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }

  void validate() const {
    if (dim < 1) throw validation_error("PointCloud: dimension must be positive");
    if (points.rows() != dim) throw validation_error("PointCloud: point length does not match dim");
    if (!weights.empty()) {
      if (weights.size() != size()) throw validation_error("PointCloud: weight count mismatch");
      for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
          throw validation_error("PointCloud: weights must be positive");
    }
    if (!points.allFinite()) throw validation_error("PointCloud: non-finite coordinate");
  }
};

/// Exact curvature data at a surface point.
struct CurvatureOracle {
  Eigen::VectorXd kappas;
  Eigen::MatrixXd directions; // ambient_dim x n, columns are principal directions
  Eigen::VectorXd normal;
  double H = 0.0;
  double scalar_curv = 0.0;
};

/// Elementary symmetric polynomials K_1..K_n of the kappas.
inline Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& k) {
  const Eigen::Index n = k.size();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
  e(0) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j >= 1; --j) e(j) += k(i) * e(j - 1);
  return e.tail(n);
}

inline double mean_curvature(const Eigen::VectorXd& k) { return k.sum(); }

/// 2 K_2 = H^2 - sum kappa^2.
inline double scalar_curvature(const Eigen::VectorXd& k) {
  const double h = k.sum();
  return h * h - k.squaredNorm();
}

namespace detail {

// Average of a flattened order-p tensor over all index permutations.
inline std::vector<double> symmetrize(const std::vector<double>& t, int n, int order) {
  std::size_t total = 1;
  for (int i = 0; i < order; ++i) total *= static_cast<std::size_t>(n);
  if (t.size() != total)
    throw validation_error("tensor of order " + std::to_string(order) + " needs " +
                           std::to_string(total) + " coefficients, got " +
                           std::to_string(t.size()));
  for (double v : t)
    if (!std::isfinite(v)) throw validation_error("graph coefficients must be finite");
  std::vector<double> out(total, 0.0);
  std::vector<int> idx(order), perm(order);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (int i = order - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(r % n);
      r /= n;
    }
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    int count = 0;
    do {
      std::size_t f = 0;
      for (int i = 0; i < order; ++i) f = f * n + idx[perm[i]];
      sum += t[f];
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[flat] = sum / count;
  }
  return out;
}

inline double frobenius(const std::vector<double>& t) {
  double s = 0.0;
  for (double v : t) s += v * v;
  return std::sqrt(s);
}

// Orthogonal matrix whose last column is nu (Householder reflection of e_d).
inline Eigen::MatrixXd frame_with_normal(const Eigen::VectorXd& nu) {
  const Eigen::Index d = nu.size();
  Eigen::VectorXd v = -nu;
  v(d - 1) += 1.0;
  const double vv = v.squaredNorm();
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(d, d);
  if (vv > 1e-24) F -= 2.0 * v * v.transpose() / vv;
  return F;
}

} // namespace detail

class HypersurfaceModel {
public:
  enum class Kind { graph, sphere };

  /// Paraboloid z = 1/2 sum kappa_mu x_mu^2 plus optional cubic and quartic
  /// terms sum C_ijk x_i x_j x_k and sum Q_ijkl x_i x_j x_k x_l (flattened
  /// row-major, any symmetry; empty means absent).
  static HypersurfaceModel graph(const Eigen::VectorXd& kappas,
                                 const std::vector<double>& cubic = {},
                                 const std::vector<double>& quartic = {}) {
    const int n = static_cast<int>(kappas.size());
    if (n < 1) throw validation_error("graph model needs at least one curvature");
    if (!kappas.allFinite()) throw validation_error("graph coefficients must be finite");
    HypersurfaceModel m;
    m.kind_ = Kind::graph;
    m.n_ = n;
    m.kappas_ = kappas;
    if (!cubic.empty()) m.cubic_ = detail::symmetrize(cubic, n, 3);
    if (!quartic.empty()) m.quartic_ = detail::symmetrize(quartic, n, 4);
    m.origin_ = Eigen::VectorXd::Zero(n + 1);
    m.frame_ = Eigen::MatrixXd::Identity(n + 1, n + 1);
    // 0.5 / max|kappa|; a flat paraboloid falls back on the higher-order terms.
    double c = kappas.cwiseAbs().maxCoeff();
    if (c == 0.0) {
      if (!m.cubic_.empty()) c = std::max(c, detail::frobenius(m.cubic_));
      if (!m.quartic_.empty()) c = std::max(c, detail::frobenius(m.quartic_));
    }
    m.chart_radius_ = c > 0.0 ? 0.5 / c : std::numeric_limits<double>::infinity();
    return m;
  }

  /// Sphere of radius R centred at the origin of R^d; base point -R e_d, so
  /// the normal at the base point is +e_d (towards the centre).
  static HypersurfaceModel sphere(int ambient_dim, double R) {
    if (ambient_dim < 2) throw validation_error("sphere: ambient dimension must be at least 2");
    if (!(R > 0.0) || !std::isfinite(R)) throw validation_error("sphere: radius must be positive");
    HypersurfaceModel m;
    m.kind_ = Kind::sphere;
    m.n_ = ambient_dim - 1;
    m.radius_ = R;
    m.origin_ = Eigen::VectorXd::Zero(ambient_dim);
    m.origin_(ambient_dim - 1) = -R;
    m.frame_ = Eigen::MatrixXd::Identity(ambient_dim, ambient_dim);
    m.chart_radius_ = 0.5 * R;
    return m;
  }

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  int ambient_dim() const { return n_ + 1; }
  const Eigen::VectorXd& origin() const { return origin_; }
  const Eigen::MatrixXd& frame() const { return frame_; }
  Eigen::VectorXd normal() const { return frame_.col(n_); }
  const Eigen::VectorXd& kappas() const { return kappas_; }
  const std::vector<double>& cubic() const { return cubic_; }
  const std::vector<double>& quartic() const { return quartic_; }
  double radius() const { return radius_; }
  Eigen::VectorXd center() const {
    if (kind_ != Kind::sphere) throw validation_error("center: not a sphere model");
    return origin_ + radius_ * frame_.col(n_);
  }

  double chart_radius() const { return chart_radius_; }
  void set_chart_radius(double r) {
    if (!(r > 0.0)) throw validation_error("chart radius must be positive");
    if (kind_ == Kind::sphere && r >= radius_)
      throw validation_error("sphere chart radius must be below the sphere radius");
    chart_radius_ = r;
  }
  /// Largest admissible ball radius.
  double max_scale() const { return 0.8 * chart_radius_; }

  void check_scale(double eps) const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw validation_error("radius must be positive");
    if (eps > max_scale() * (1.0 + 1e-12))
      throw chart_error("radius " + std::to_string(eps) + " exceeds the chart limit " +
                        std::to_string(max_scale()));
  }

  /// Height h(x) and optionally its gradient, no chart check.
  double eval(const double* x, double* grad = nullptr) const {
    const int n = n_;
    if (kind_ == Kind::sphere) {
      double r2 = 0.0;
      for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
      const double s = std::sqrt(radius_ * radius_ - r2);
      if (grad)
        for (int i = 0; i < n; ++i) grad[i] = x[i] / s;
      return r2 / (radius_ + s);
    }
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      z += 0.5 * kappas_[i] * x[i] * x[i];
      if (grad) grad[i] = kappas_[i] * x[i];
    }
    if (!cubic_.empty()) {
      const double* c = cubic_.data();
      for (int i = 0; i < n; ++i) {
        double t = 0.0;
        for (int j = 0; j < n; ++j) {
          double tj = 0.0;
          for (int k = 0; k < n; ++k) tj += c[(i * n + j) * n + k] * x[k];
          t += tj * x[j];
        }
        z += t * x[i];
        if (grad) grad[i] += 3.0 * t;
      }
    }
    if (!quartic_.empty()) {
      const double* q = quartic_.data();
      for (int i = 0; i < n; ++i) {
        double u = 0.0;
        for (int j = 0; j < n; ++j) {
          double uj = 0.0;
          for (int k = 0; k < n; ++k) {
            double ujk = 0.0;
            for (int l = 0; l < n; ++l) ujk += q[((i * n + j) * n + k) * n + l] * x[l];
            uj += ujk * x[k];
          }
          u += uj * x[j];
        }
        z += u * x[i];
        if (grad) grad[i] += 4.0 * u;
      }
    }
    return z;
  }

  double height(const Eigen::VectorXd& x) const {
    check_tangent(x);
    return eval(x.data());
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    check_tangent(x);
    Eigen::VectorXd g(n_);
    eval(x.data(), g.data());
    return g;
  }

  /// Ambient point of local coordinates (x, z).
  Eigen::VectorXd to_ambient(const Eigen::VectorXd& x, double z) const {
    Eigen::VectorXd y(n_ + 1);
    y.head(n_) = x;
    y(n_) = z;
    return origin_ + frame_ * y;
  }

  /// Local coordinates (x, z) of an ambient point.
  Eigen::VectorXd to_local(const Eigen::VectorXd& X) const {
    check_ambient(X);
    return frame_.transpose() * (X - origin_);
  }

  Eigen::VectorXd surface_point(const Eigen::VectorXd& x) const { return to_ambient(x, height(x)); }

  /// Same surface moved by X -> Q X + t (Q orthogonal).
  HypersurfaceModel rigid_transformed(const Eigen::MatrixXd& Q, const Eigen::VectorXd& t) const {
    const int d = ambient_dim();
    if (Q.rows() != d || Q.cols() != d || t.size() != d)
      throw validation_error("rigid_transformed: dimension mismatch");
    if ((Q.transpose() * Q - Eigen::MatrixXd::Identity(d, d)).norm() > 1e-10)
      throw validation_error("rigid_transformed: matrix is not orthogonal");
    HypersurfaceModel m = *this;
    m.origin_ = Q * origin_ + t;
    m.frame_ = Q * frame_;
    return m;
  }

  /// The model re-expressed in a chart based at the surface point p.  Graph
  /// models only support their own base point; spheres support any point.
  HypersurfaceModel chart_at(const Eigen::VectorXd& p) const {
    check_ambient(p);
    const double scale = 1.0 + origin_.norm();
    if (kind_ == Kind::graph) {
      if ((p - origin_).norm() > 1e-9 * scale)
        throw validation_error("graph models are evaluated at their base point only");
      return *this;
    }
    const Eigen::VectorXd c = center();
    const double dist = (p - c).norm();
    if (std::abs(dist - radius_) > 1e-9 * radius_)
      throw validation_error("point is not on the sphere");
    if ((p - origin_).norm() <= 1e-14 * scale) return *this;
    HypersurfaceModel m = *this;
    m.origin_ = p;
    m.frame_ = detail::frame_with_normal((c - p) / dist);
    return m;
  }

private:
  void check_tangent(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw validation_error("tangent vector has wrong dimension");
    if (x.norm() > chart_radius_)
      throw chart_error("tangent point outside the chart radius");
  }
  void check_ambient(const Eigen::VectorXd& X) const {
    if (X.size() != n_ + 1) throw validation_error("ambient point has wrong dimension");
  }

  Kind kind_ = Kind::graph;
  int n_ = 0;
  Eigen::VectorXd kappas_;
  std::vector<double> cubic_, quartic_;
  double radius_ = 0.0;
  Eigen::VectorXd origin_;
  Eigen::MatrixXd frame_;
  double chart_radius_ = 0.0;
};

/// Height of a graph model over tangent coordinates x.
inline double graph_eval(const HypersurfaceModel& model, const Eigen::VectorXd& x) {
  if (model.kind() != HypersurfaceModel::Kind::graph)
    throw validation_error("graph_eval: model is not a graph");
  return model.height(x);
}

/// Exact principal curvatures, directions and normal at a surface point.
inline CurvatureOracle exact_curvatures(const HypersurfaceModel& model, const Eigen::VectorXd& p) {
  const HypersurfaceModel chart = model.chart_at(p);
  const int n = model.n();
  CurvatureOracle o;
  o.kappas = model.kind() == HypersurfaceModel::Kind::sphere
                 ? Eigen::VectorXd::Constant(n, 1.0 / model.radius())
                 : model.kappas();
  o.directions = chart.frame().leftCols(n);
  o.normal = chart.normal();
  o.H = mean_curvature(o.kappas);
  o.scalar_curv = scalar_curvature(o.kappas);
  return o;
}

/// +1 on the V+ side, -1 on the other side, 0 on the surface (within 1e-13).
inline int side_classifier(const HypersurfaceModel& model, const Eigen::VectorXd& X) {
  if (model.kind() == HypersurfaceModel::Kind::sphere) {
    if (X.size() != model.ambient_dim()) throw validation_error("ambient point has wrong dimension");
    const double gap = model.radius() - (X - model.center()).norm();
    if (std::abs(gap) <= 1e-13 * model.radius()) return 0;
    return gap > 0.0 ? 1 : -1;
  }
  const Eigen::VectorXd y = model.to_local(X);
  const int n = model.n();
  const double h = model.height(y.head(n));
  const double gap = y(n) - h;
  if (std::abs(gap) <= 1e-13 * (1.0 + std::abs(y(n)))) return 0;
  return gap > 0.0 ? 1 : -1;
}

namespace detail {

// Uniform point in the n-ball of radius eps.
inline void uniform_in_ball(Rng& rng, int n, double eps, double* x) {
  double s = 0.0;
  do {
    s = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = rng.normal();
      s += x[i] * x[i];
    }
  } while (s == 0.0);
  const double r = eps * std::pow(rng.uniform(), 1.0 / n) / std::sqrt(s);
  for (int i = 0; i < n; ++i) x[i] *= r;
}

} // namespace detail

/// Points of the patch {X on the surface, |X - p| <= eps}, uniform with respect
/// to surface area: tangent points are drawn uniformly in the eps-disk and
/// accepted with probability sqrt(1 + |grad h|^2) / bound.
inline PointCloud sample_patch(const HypersurfaceModel& model, const Eigen::VectorXd& p, double eps,
                               std::size_t count, std::uint64_t seed) {
  if (count < 1) throw validation_error("sample_patch: count must be at least 1");
  const HypersurfaceModel chart = model.chart_at(p);
  chart.check_scale(eps);
  const int n = chart.n();

  // Upper bound of |grad h| on the eps-disk.
  double gmax;
  if (chart.kind() == HypersurfaceModel::Kind::sphere) {
    gmax = eps / std::sqrt(chart.radius() * chart.radius() - eps * eps);
  } else {
    gmax = chart.kappas().cwiseAbs().maxCoeff() * eps;
    if (!chart.cubic().empty()) gmax += 3.0 * detail::frobenius(chart.cubic()) * eps * eps;
    if (!chart.quartic().empty()) gmax += 4.0 * detail::frobenius(chart.quartic()) * eps * eps * eps;
  }
  const double bound = std::sqrt(1.0 + gmax * gmax);

  Rng rng(seed);
  PointCloud cloud(n + 1, static_cast<Eigen::Index>(count));
  std::vector<double> x(n), g(n);
  Eigen::VectorXd xv(n);
  std::size_t got = 0;
  while (got < count) {
    detail::uniform_in_ball(rng, n, eps, x.data());
    const double h = chart.eval(x.data(), g.data());
    double r2 = h * h, g2 = 0.0;
    for (int i = 0; i < n; ++i) {
      r2 += x[i] * x[i];
      g2 += g[i] * g[i];
    }
    if (r2 > eps * eps) continue;
    if (rng.uniform() * bound > std::sqrt(1.0 + g2)) continue;
    for (int i = 0; i < n; ++i) xv(i) = x[i];
    cloud.points.col(static_cast<Eigen::Index>(got++)) = chart.to_ambient(xv, h);
  }
  return cloud;
}

/// Codimension-k graph x -> (x, f_1(x), ..., f_k(x)) with f_j(x) = 1/2 x^T H_j x.
class SubmanifoldModel {
public:
  explicit SubmanifoldModel(std::vector<Eigen::MatrixXd> hessians) : hessians_(std::move(hessians)) {
    if (hessians_.empty()) throw validation_error("submanifold needs at least one normal direction");
    n_ = static_cast<int>(hessians_[0].rows());
    if (n_ < 1) throw validation_error("submanifold dimension must be positive");
    double c = 0.0;
    for (auto& h : hessians_) {
      if (h.rows() != n_ || h.cols() != n_) throw validation_error("hessians must all be n x n");
      if (!h.allFinite()) throw validation_error("hessian entries must be finite");
      if ((h - h.transpose()).norm() > 1e-12 * (1.0 + h.norm()))
        throw validation_error("hessians must be symmetric");
      h = 0.5 * (h + h.transpose()).eval();
      c = std::max(c, h.cwiseAbs().rowwise().sum().maxCoeff());
    }
    chart_radius_ = c > 0.0 ? 0.5 / c : std::numeric_limits<double>::infinity();
  }

  /// The minimal surface (x, y) -> (x, y, (x^2 - y^2)/2, xy) in R^4.
  static SubmanifoldModel codim2_example() {
    Eigen::MatrixXd h1(2, 2), h2(2, 2);
    h1 << 1, 0, 0, -1;
    h2 << 0, 1, 1, 0;
    return SubmanifoldModel({h1, h2});
  }

  int n() const { return n_; }
  int k() const { return static_cast<int>(hessians_.size()); }
  int ambient_dim() const { return n_ + k(); }
  const std::vector<Eigen::MatrixXd>& hessians() const { return hessians_; }
  double chart_radius() const { return chart_radius_; }
  void set_chart_radius(double r) {
    if (!(r > 0.0)) throw validation_error("chart radius must be positive");
    chart_radius_ = r;
  }
  double max_scale() const { return 0.8 * chart_radius_; }

  Eigen::VectorXd point(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw validation_error("tangent vector has wrong dimension");
    Eigen::VectorXd X(ambient_dim());
    X.head(n_) = x;
    for (int j = 0; j < k(); ++j) X(n_ + j) = 0.5 * x.dot(hessians_[j] * x);
    return X;
  }

private:
  std::vector<Eigen::MatrixXd> hessians_;
  int n_ = 0;
  double chart_radius_ = 0.0;
};

/// Area-uniform sample of the submanifold inside the ambient eps-ball about the
/// base point.  The acceptance weight is sqrt(det(I + J^T J)).
inline PointCloud sample_submanifold_patch(const SubmanifoldModel& model, double eps, std::size_t count,
                                           std::uint64_t seed) {
  if (count < 1) throw validation_error("sample_submanifold_patch: count must be at least 1");
  if (!(eps > 0.0)) throw validation_error("radius must be positive");
  if (eps > model.max_scale() * (1.0 + 1e-12)) throw chart_error("radius exceeds the chart limit");
  const int n = model.n(), k = model.k();
  double jf2 = 0.0;
  for (auto& h : model.hessians()) jf2 += h.squaredNorm();
  jf2 *= eps * eps;
  // prod(1 + s_i^2) <= (1 + |J|_F^2 / n)^n
  const double bound = std::pow(1.0 + jf2 / n, 0.5 * n);

  Rng rng(seed);
  PointCloud cloud(n + k, static_cast<Eigen::Index>(count));
  Eigen::VectorXd x(n);
  Eigen::MatrixXd J(k, n);
  std::size_t got = 0;
  while (got < count) {
    detail::uniform_in_ball(rng, n, eps, x.data());
    const Eigen::VectorXd X = model.point(x);
    if (X.squaredNorm() > eps * eps) continue;
    for (int j = 0; j < k; ++j) J.row(j) = (model.hessians()[j] * x).transpose();
    const double w = std::sqrt((Eigen::MatrixXd::Identity(n, n) + J.transpose() * J).determinant());
    if (rng.uniform() * bound > w) continue;
    cloud.points.col(static_cast<Eigen::Index>(got++)) = X;
  }
  return cloud;
}

} // namespace curvpca

#endif // CURVPCA_MODELS_HPP
