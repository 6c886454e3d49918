#ifndef CURVPCA_SPHERE_INTEGRALS_HPP
#define CURVPCA_SPHERE_INTEGRALS_HPP

// Closed-form integrals of coordinate monomials over unit spheres, balls and
// half-balls in R^n.
//
// For even exponents a_i = alpha_i / 2 with A = sum a_i the sphere integral is
//
//   C_alpha = 2 prod Gamma((alpha_i+1)/2) / Gamma(sum (alpha_i+1)/2)
//           = n C_2 * prod (2 a_i - 1)!! / prod_{j<A} (n + 2j),
//
// so every sphere constant is an exact rational multiple of
// C_2 = pi^{n/2} / Gamma(n/2 + 1), the volume of the unit n-ball.  The rational
// factor is kept exact and multiplied by C_2 only at the end.

#include "curvpca/errors.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace curvpca {

/// Largest supported monomial degree.
inline constexpr int max_monomial_degree = 32;
/// Largest supported dimension (keeps the exact rational factor in 128 bits).
inline constexpr int max_sphere_dimension = 64;

/// Exact non-negative rational number, reduced after every operation.
class Rational {
public:
  __extension__ using int_type = unsigned __int128;

  constexpr Rational() = default;
  constexpr Rational(std::uint64_t num, std::uint64_t den = 1) : num_(num), den_(den) {
    if (den == 0) throw validation_error("Rational: zero denominator");
    reduce();
  }

  constexpr Rational& operator*=(const Rational& o) {
    // Cross-reduce first so intermediate products stay small.
    int_type g1 = gcd(num_, o.den_);
    int_type g2 = gcd(o.num_, den_);
    num_ = (num_ / g1) * (o.num_ / g2);
    den_ = (den_ / g2) * (o.den_ / g1);
    reduce();
    return *this;
  }
  friend constexpr Rational operator*(Rational a, const Rational& b) { return a *= b; }

  friend constexpr bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  constexpr double value() const {
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
  }
  constexpr int_type numerator() const { return num_; }
  constexpr int_type denominator() const { return den_; }

private:
  static constexpr int_type gcd(int_type a, int_type b) {
    while (b != 0) {
      int_type t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  constexpr void reduce() {
    int_type g = gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  int_type num_ = 0;
  int_type den_ = 1;
};

namespace detail {

inline void check_dimension(int n, const char* who) {
  if (n < 1 || n > max_sphere_dimension)
    throw validation_error(std::string(who) + ": dimension must be in [1, " +
                           std::to_string(max_sphere_dimension) + "], got " + std::to_string(n));
}

inline void check_radius(double eps, const char* who) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw validation_error(std::string(who) + ": radius must be positive and finite");
}

inline int checked_degree(int n, std::span<const int> exps, const char* who) {
  check_dimension(n, who);
  if (static_cast<int>(exps.size()) != n)
    throw validation_error(std::string(who) + ": exponent count " + std::to_string(exps.size()) +
                           " does not match dimension " + std::to_string(n));
  int degree = 0;
  for (int a : exps) {
    if (a < 0) throw validation_error(std::string(who) + ": negative exponent");
    degree += a;
  }
  if (degree > max_monomial_degree)
    throw validation_error(std::string(who) + ": degree " + std::to_string(degree) +
                           " exceeds the supported maximum of " +
                           std::to_string(max_monomial_degree));
  return degree;
}

} // namespace detail

/// Gamma(k/2) for a positive integer k, by the recursion Gamma(x+1) = x Gamma(x)
/// from Gamma(1/2) = sqrt(pi) and Gamma(1) = 1.
inline double half_integer_gamma(int twice_arg) {
  if (twice_arg < 1) throw validation_error("half_integer_gamma: argument must be positive");
  long double g = (twice_arg % 2 == 0) ? 1.0L : std::sqrt(std::numbers::pi_v<long double>);
  for (int k = (twice_arg % 2 == 0) ? 2 : 1; k + 2 <= twice_arg; k += 2) g *= k / 2.0L;
  return static_cast<double>(g);
}

/// C_2 = pi^{n/2} / Gamma(n/2 + 1): volume of the unit n-ball.
inline double unit_ball_volume(int n) {
  detail::check_dimension(n, "unit_ball_volume");
  long double sqrt_pi_pow = std::pow(std::sqrt(std::numbers::pi_v<long double>), n);
  return static_cast<double>(sqrt_pi_pow / half_integer_gamma(n + 2));
}

/// Exact ratio C_alpha / C_2 for an all-even exponent vector; zero when any
/// exponent is odd.
inline Rational sphere_integral_ratio(int n, std::span<const int> exps) {
  const int degree = detail::checked_degree(n, exps, "sphere_integral_ratio");
  for (int a : exps)
    if (a % 2 != 0) return Rational(0);
  Rational r(static_cast<std::uint64_t>(n));
  for (int a : exps)
    for (int odd = 1; odd < a; odd += 2) r *= Rational(static_cast<std::uint64_t>(odd));
  for (int j = 0; j < degree / 2; ++j) r *= Rational(1, static_cast<std::uint64_t>(n + 2 * j));
  return r;
}

inline Rational sphere_integral_ratio(int n, std::initializer_list<int> exps) {
  return sphere_integral_ratio(n, std::span<const int>(exps.begin(), exps.size()));
}

/// Integral of x_1^{a_1} ... x_n^{a_n} over the unit sphere S^{n-1} in R^n.
inline double monomial_sphere_integral(int n, std::span<const int> exps) {
  Rational r = sphere_integral_ratio(n, exps);
  if (r.numerator() == 0) return 0.0;
  return r.value() * unit_ball_volume(n);
}

inline double monomial_sphere_integral(int n, std::initializer_list<int> exps) {
  return monomial_sphere_integral(n, std::span<const int>(exps.begin(), exps.size()));
}

/// Integral of the monomial over the ball of radius eps in R^n.
inline double monomial_ball_integral(int n, std::span<const int> exps, double eps) {
  detail::check_radius(eps, "monomial_ball_integral");
  const int degree = detail::checked_degree(n, exps, "monomial_ball_integral");
  const int p = n + degree;
  return std::pow(eps, p) / p * monomial_sphere_integral(n, exps);
}

inline double monomial_ball_integral(int n, std::initializer_list<int> exps, double eps) {
  return monomial_ball_integral(n, std::span<const int>(exps.begin(), exps.size()), eps);
}

/// V_n(eps) = eps^n C_2.
inline double ball_volume(int n, double eps) {
  detail::check_radius(eps, "ball_volume");
  return std::pow(eps, n) * unit_ball_volume(n);
}

/// Area of the unit sphere S^{n-1} in R^n, n C_2.
inline double sphere_area(int n) { return n * unit_ball_volume(n); }

/// Integral of x_1 over the half-ball {x in B^n(eps), x_1 >= 0}.
/// Equals eps^{n+1} pi^{(n-1)/2} / (2 Gamma((n+3)/2)) = eps^2 V_{n-1}(eps) / (n+1).
inline double half_ball_first_moment(int n, double eps) {
  if (n < 2) throw validation_error("half_ball_first_moment: dimension must be at least 2");
  detail::check_dimension(n, "half_ball_first_moment");
  detail::check_radius(eps, "half_ball_first_moment");
  long double sqrt_pi_pow = std::pow(std::sqrt(std::numbers::pi_v<long double>), n - 1);
  return static_cast<double>(std::pow(static_cast<long double>(eps), n + 1) * sqrt_pi_pow /
                             (2.0L * half_integer_gamma(n + 3)));
}

} // namespace curvpca

#endif // CURVPCA_SPHERE_INTEGRALS_HPP
