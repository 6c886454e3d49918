#include "curvpca/quadrature.hpp"
#include "curvpca/rng.hpp"
#include "curvpca/sphere_integrals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

using namespace curvpca;

TEST(GaussLegendre, ExactForDegree2mMinus1) {
  for (int m = 1; m <= 40; ++m) {
    const GaussRule g = gauss_legendre(m);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14) << m;
    for (int p = 0; p <= 2 * m - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(s, exact, 1e-14) << "m=" << m << " p=" << p;
    }
    for (int i = 0; i < m; ++i) EXPECT_DOUBLE_EQ(g.nodes[i], -g.nodes[m - 1 - i]);
  }
  EXPECT_THROW(gauss_legendre(0), validation_error);
}

TEST(GaussLegendre, MappedInterval) {
  const GaussRule g = gauss_legendre(6, 1.0, 3.0);
  double s = 0.0;
  for (int i = 0; i < 6; ++i) s += g.weights[i] * g.nodes[i] * g.nodes[i] * g.nodes[i];
  EXPECT_NEAR(s, (81.0 - 1.0) / 4.0, 1e-13);
}

TEST(SphereRule, WeightsAndMonomials) {
  // Spectral accuracy on polynomials once the polar rule resolves sin powers.
  for (int n = 1; n <= 5; ++n) {
    const int m = 24;
    const SphereRule r = sphere_rule(n, m);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    EXPECT_NEAR(wsum, n == 1 ? 2.0 : sphere_area(n), 1e-10) << n;
    for (std::size_t j = 0; j < r.size(); ++j)
      EXPECT_NEAR(r.directions.col(static_cast<Eigen::Index>(j)).norm(), 1.0, 1e-14);
    std::vector<int> e(n, 0);
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; b <= (n > 1 ? 4 : 0); ++b) {
        e[0] = a;
        if (n > 1) e[n - 1] = b;
        double s = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) {
          double f = r.weights[j];
          for (int c = 0; c < n; ++c) f *= std::pow(r.directions(c, static_cast<Eigen::Index>(j)), e[c]);
          s += f;
        }
        const double exact = n == 1 ? (a % 2 ? 0.0 : 2.0) : monomial_sphere_integral(n, std::span<const int>(e));
        EXPECT_NEAR(s, exact, 1e-10) << "n=" << n << " a=" << a << " b=" << b;
      }
    }
  }
  EXPECT_THROW(sphere_rule(0, 4), validation_error);
  EXPECT_THROW(sphere_rule(3, 0), validation_error);
}

TEST(ChunkedReduce, IndependentOfWorkerCount) {
  const std::size_t count = 100003;
  auto body = [](std::size_t b, std::size_t e, double& acc) {
    for (std::size_t i = b; i < e; ++i) acc += std::sin(0.001 * static_cast<double>(i)) / (1.0 + i);
  };
  const double ref = chunked_reduce(count, 97, 1, 0.0, body);
  for (int jobs : {2, 3, 4, 8}) EXPECT_EQ(chunked_reduce(count, 97, jobs, 0.0, body), ref) << jobs;
  double serial = 0.0;
  body(0, count, serial);
  EXPECT_NEAR(ref, serial, 1e-12);
}

TEST(ChunkedReduce, PropagatesWorkerExceptions) {
  auto body = [](std::size_t b, std::size_t, int&) {
    if (b >= 50) throw std::runtime_error("boom");
  };
  EXPECT_THROW(chunked_reduce<int>(100, 10, 4, 0, body), std::runtime_error);
  EXPECT_THROW(chunked_reduce<int>(100, 10, 1, 0, body), std::runtime_error);
}

TEST(ResolveJobs, Defaults) {
  EXPECT_GE(resolve_jobs(0), 1);
  EXPECT_EQ(resolve_jobs(3), 3);
}

TEST(Rng, DeterministicAndSplittable) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng s1 = Rng(42).split(1), s2 = Rng(42).split(2), s1b = Rng(42).split(1);
  EXPECT_NE(s1.next_u64(), s2.next_u64());
  Rng s1c = Rng(42).split(1);
  EXPECT_EQ(s1b.next_u64(), s1c.next_u64());
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, Moments) {
  Rng r(7);
  const int N = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < N; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / N, 0.5, 5 * std::sqrt(1.0 / 12 / N));
  EXPECT_NEAR(sn / N, 0.0, 5 / std::sqrt(N));
  EXPECT_NEAR(sn2 / N, 1.0, 5 * std::sqrt(2.0 / N));
}

TEST(Halton, RadicalInverse) {
  const Halton h(3);
  EXPECT_DOUBLE_EQ(h.value(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(h.value(2, 0), 0.25);
  EXPECT_DOUBLE_EQ(h.value(3, 0), 0.75);
  EXPECT_NEAR(h.value(1, 1), 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(h.value(1, 2), 1.0 / 5.0, 1e-16);
  EXPECT_THROW(Halton(0), validation_error);
  EXPECT_THROW(Halton(Halton::max_dim + 1), validation_error);
}
