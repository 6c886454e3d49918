#include "oracles.hpp"

#include "curvpca/domains.hpp"
#include "curvpca/sphere_integrals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace curvpca;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Eigen::VectorXd sorted_eigs(const Eigen::MatrixXd& C) {
  Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(C).eigenvalues();
  return e.reverse();
}

const Eigen::VectorXd south = (Eigen::VectorXd(3) << 0, 0, -1).finished();

} // namespace

TEST(BoundaryRadius, Examples) {
  const auto flat = HypersurfaceModel::graph(vec({0, 0}));
  EXPECT_DOUBLE_EQ(boundary_radius(flat, vec({0.6, 0.8}), 0.3), 0.3);

  const auto para = HypersurfaceModel::graph(vec({1, 1}));
  const double eps = 0.2;
  const double want = std::sqrt(2.0 * (std::sqrt(1.0 + eps * eps) - 1.0));
  const double r = boundary_radius(para, vec({1, 0}), eps);
  EXPECT_NEAR(r, want, 1e-13);
  EXPECT_NEAR(r, 0.199017, 1e-6);
  EXPECT_LE(std::abs(r - (eps - eps * eps * eps / 8)), std::pow(eps, 4));

  const auto s = HypersurfaceModel::sphere(3, 1.0);
  EXPECT_NEAR(boundary_radius(s, vec({0, 1}), eps), eps * std::sqrt(1 - eps * eps / 4), 1e-13);
}

TEST(BoundaryRadius, Errors) {
  const auto para = HypersurfaceModel::graph(vec({1, 1}));
  EXPECT_THROW(boundary_radius(para, vec({1, 1}), 0.2), validation_error);
  EXPECT_THROW(boundary_radius(para, vec({1}), 0.2), validation_error);
  EXPECT_THROW(boundary_radius(para, vec({1, 0}), 0.45), chart_error);
}

TEST(BoundaryRadius, ThirdOrderExpansion) {
  Rng rng(21);
  const auto m = oracle::model_family()[3];
  std::vector<double> ratios;
  for (double eps = 0.2; eps > 0.012; eps /= 2) {
    if (eps > m.max_scale()) continue;
    double worst = 0.0;
    Rng dr(4);
    for (int t = 0; t < 64; ++t) {
      Eigen::VectorXd u(2);
      u << dr.normal(), dr.normal();
      u.normalize();
      const double k = m.kappas()(0) * u(0) * u(0) + m.kappas()(1) * u(1) * u(1);
      worst = std::max(worst, std::abs(boundary_radius(m, u, eps) - (eps - k * k * eps * eps * eps / 8)) / std::pow(eps, 4));
    }
    ratios.push_back(worst);
  }
  ASSERT_GE(ratios.size(), 3u);
  for (std::size_t i = 1; i < ratios.size(); ++i) EXPECT_LT(ratios[i], 2.0 * ratios[0] + 1.0);
}

TEST(PatchInvariants, SphereCap) {
  const auto s = HypersurfaceModel::sphere(3, 1.0);
  const double eps = 0.2;
  const auto inv = patch_invariants(s, south, eps);
  EXPECT_NEAR(inv.volume, std::numbers::pi * eps * eps, 1e-13);
  EXPECT_NEAR((inv.barycenter - south).dot(vec({0, 0, 1})), eps * eps / 4, 1e-14);
  EXPECT_NEAR(inv.barycenter.head(2).norm(), 0.0, 1e-14);
  const auto cap = oracle::cap(1.0, eps);
  const Eigen::VectorXd e = sorted_eigs(inv.covariance);
  EXPECT_NEAR(e(0), cap.lambda_tangent, 1e-14);
  EXPECT_NEAR(e(1), cap.lambda_tangent, 1e-14);
  EXPECT_NEAR(e(2), cap.lambda_normal, 1e-15);
  EXPECT_EQ(inv.domain_kind, DomainKind::patch);
  EXPECT_FALSE(inv.normalized);
}

TEST(PatchInvariants, FlatDisk) {
  const auto flat = HypersurfaceModel::graph(vec({0, 0}));
  const auto inv = patch_invariants(flat, Eigen::VectorXd::Zero(3), 0.5);
  EXPECT_NEAR(inv.volume, std::numbers::pi / 4, 1e-14);
  EXPECT_LT(inv.barycenter.norm(), 1e-15);
  EXPECT_NEAR(inv.covariance(0, 0), 0.049087385212340517, 1e-15);
  EXPECT_NEAR(inv.covariance(1, 1), 0.049087385212340517, 1e-15);
  EXPECT_NEAR(inv.covariance(2, 2), 0.0, 1e-15);
}

TEST(ComponentInvariants, FlatHalfBall) {
  const auto flat = HypersurfaceModel::graph(vec({0, 0}));
  const auto inv = component_invariants(flat, Eigen::VectorXd::Zero(3), 1.0);
  EXPECT_NEAR(inv.volume, 2 * std::numbers::pi / 3, 1e-13);
  const Eigen::VectorXd e = sorted_eigs(inv.covariance);
  EXPECT_NEAR(e(0), 2 * std::numbers::pi / 15, 1e-13);
  EXPECT_NEAR(e(1), 2 * std::numbers::pi / 15, 1e-13);
  EXPECT_NEAR(e(2), 2 * std::numbers::pi / 15 - 3 * std::numbers::pi / 32, 1e-13);
  const auto hb = oracle::half_ball(2, 1.0);
  EXPECT_NEAR(e(2), hb.lambda_normal, 1e-13);
}

TEST(ComponentInvariants, SphereLens) {
  const auto s = HypersurfaceModel::sphere(3, 1.0);
  const auto inv = component_invariants(s, south, 0.2);
  EXPECT_NEAR(inv.volume, 0.0154985, 1e-7);
  EXPECT_NEAR(inv.volume, oracle::lens_volume(0.2), 1e-14);
  for (int d : {4, 5}) {
    const auto sd = HypersurfaceModel::sphere(d, 1.5);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
    p(d - 1) = -1.5;
    EXPECT_NEAR(component_invariants(sd, p, 0.3).volume / oracle::lens_volume_nd(d - 1, 1.5, 0.3), 1.0, 1e-8);
  }
}

TEST(ComponentInvariants, VolumeMonotoneInRadius) {
  const auto m = oracle::model_family()[0];
  double prev = 0.0;
  for (int i = 1; i <= 8; ++i) {
    const double eps = m.max_scale() * i / 8.0;
    const double v = component_invariants(m, Eigen::VectorXd::Zero(3), eps).volume;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(ComponentInvariants, QuadratureAgreesWithQmc) {
  for (int idx : {0, 6}) {
    const auto m = oracle::model_family()[idx];
    const int d = m.ambient_dim();
    const Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
    const double eps = 0.5 * m.max_scale();
    const auto q = component_invariants(m, p, eps);
    QuadratureConfig cfg;
    cfg.mc_samples = 1u << 18;
    const auto mc = component_invariants_qmc(m, p, eps, cfg);
    ASSERT_TRUE(mc.stderrs.has_value());
    const auto& se = *mc.stderrs;
    EXPECT_LE(std::abs(q.volume - mc.volume), 4 * se.volume);
    for (int i = 0; i < d; ++i) {
      EXPECT_LE(std::abs(q.barycenter(i) - mc.barycenter(i)), 4 * se.barycenter(i) + 1e-15) << i;
      for (int j = 0; j < d; ++j)
        EXPECT_LE(std::abs(q.covariance(i, j) - mc.covariance(i, j)), 4 * se.covariance(i, j) + 1e-15) << i << j;
    }
  }
}

TEST(ShellInvariants, IsRadialDerivativeOfComponent) {
  const auto m = oracle::model_family()[4];
  const Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
  const double eps = 0.5 * m.max_scale(), h = 1e-4 * eps;
  const double dV =
      (component_invariants(m, p, eps + h).volume - component_invariants(m, p, eps - h).volume) / (2 * h);
  const auto sh = shell_invariants(m, p, eps);
  EXPECT_NEAR(sh.volume / dV, 1.0, 1e-2);
  EXPECT_EQ(sh.domain_kind, DomainKind::shell);
  // Flat: hemisphere area.
  const auto flat = shell_invariants(HypersurfaceModel::graph(vec({0, 0})), p, 0.7);
  EXPECT_NEAR(flat.volume, 2 * std::numbers::pi * 0.49, 1e-12);
}

TEST(Invariants, CovariancePsdAndEquivariant) {
  Rng rng(77);
  for (int idx : {1, 8}) {
    const auto m = oracle::model_family()[idx];
    const int d = m.ambient_dim();
    const double eps = 0.6 * m.max_scale();
    const Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
    const Eigen::MatrixXd Q = oracle::random_rotation(d, rng);
    Eigen::VectorXd t(d);
    for (int i = 0; i < d; ++i) t(i) = rng.uniform(-2, 2);
    const auto mt = m.rigid_transformed(Q, t);
    for (auto fn : {&patch_invariants, &component_invariants}) {
      const auto a = fn(m, p, eps, {});
      const auto b = fn(mt, t, eps, {});
      const Eigen::VectorXd ea = sorted_eigs(a.covariance), eb = sorted_eigs(b.covariance);
      EXPECT_GE(ea.minCoeff(), -1e-12 * a.covariance.trace());
      EXPECT_LT((ea - eb).cwiseAbs().maxCoeff(), 1e-10 * ea.maxCoeff());
      EXPECT_LT((Q * a.barycenter + t - b.barycenter).norm(), 1e-12);
      EXPECT_NEAR(a.volume, b.volume, 1e-12 * a.volume);
      const auto at = a.transformed(Q, t);
      EXPECT_LT((at.covariance - b.covariance).norm(), 1e-12 * a.covariance.norm());
    }
  }
}

TEST(CloudInvariants, CollinearRankOne) {
  PointCloud c(3, 4);
  c.points << 0, 0.1, 0.2, 0.3, 0, 0.05, 0.1, 0.15, 0, 0, 0, 0;
  const auto inv = cloud_patch_invariants(c, Eigen::VectorXd::Zero(3), 1.0);
  const Eigen::VectorXd e = sorted_eigs(inv.covariance);
  EXPECT_GT(e(0), 1e-3);
  EXPECT_NEAR(e(1), 0.0, 1e-15);
  EXPECT_NEAR(e(2), 0.0, 1e-15);
  EXPECT_TRUE(inv.normalized);
  EXPECT_EQ(inv.volume_kind, VolumeKind::sample_mass);
}

TEST(CloudInvariants, DuplicationInvariance) {
  const PointCloud c = sample_patch(HypersurfaceModel::sphere(3, 1.0), south, 0.2, 500, 3);
  PointCloud dup(3, 1000);
  dup.points << c.points, c.points;
  const auto a = cloud_patch_invariants(c, south, 0.2);
  const auto b = cloud_patch_invariants(dup, south, 0.2);
  EXPECT_LT((a.barycenter - b.barycenter).norm(), 1e-15);
  EXPECT_LT((a.covariance - b.covariance).norm(), 1e-15);
  PointCloud w = c;
  w.weights.assign(c.size(), 3.0);
  const auto cw = cloud_patch_invariants(w, south, 0.2);
  EXPECT_LT((a.covariance - cw.covariance).norm(), 1e-15);
}

TEST(CloudInvariants, CapNormalVariance) {
  const double eps = 0.2;
  const PointCloud c = sample_patch(HypersurfaceModel::sphere(3, 1.0), south, eps, 100000, 17);
  const auto inv = cloud_patch_invariants(c, south, eps, std::numbers::pi * eps * eps);
  EXPECT_EQ(inv.volume_kind, VolumeKind::measure);
  const Eigen::VectorXd e = sorted_eigs(inv.covariance);
  EXPECT_NEAR(e(2) / (std::pow(eps, 4) / 48), 1.0, 0.05);
}

TEST(CloudInvariants, Errors) {
  PointCloud c(3, 3);
  c.points.setZero();
  EXPECT_THROW(cloud_patch_invariants(c, Eigen::VectorXd::Zero(3), 1.0), validation_error);
  EXPECT_THROW(cloud_patch_invariants(c, Eigen::VectorXd::Zero(2), 1.0), validation_error);
  c.weights = {1.0, -1.0, 1.0};
  EXPECT_THROW(cloud_patch_invariants(c, Eigen::VectorXd::Zero(3), 1.0), validation_error);
}
