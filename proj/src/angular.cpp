#include "molpol/angular.hpp"

#include "molpol/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace molpol::angular {

Rational::Rational(long long n, long long d) {
  if (d == 0)
    throw DomainError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : n;
  den = g ? d / g : d;
}

Rational Rational::operator+(const Rational &o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational &o) const {
  return Rational(num * o.num, den * o.den);
}

double SignedSqrtRational::value() const {
  if (sign == 0)
    return 0.0;
  return sign * std::sqrt(square.get_d());
}

namespace {

mpz_class factorial(long n) {
  mpz_class f = 1;
  for (long k = 2; k <= n; ++k)
    f *= k;
  return f;
}

// Argument of a factorial in the Racah expression, given twice its value.
// Returns -1 when the doubled value is odd (non-integral), which signals an
// unphysical combination and a vanishing symbol.
long half(long two_x) {
  if (two_x % 2 != 0)
    return -1;
  return two_x / 2;
}

} // namespace

SignedSqrtRational wigner3j_exact(int two_j1, int two_j2, int two_j3,
                                  int two_m1, int two_m2, int two_m3) {
  SignedSqrtRational out;
  if (two_j1 < 0 || two_j2 < 0 || two_j3 < 0)
    return out;
  if (two_m1 + two_m2 + two_m3 != 0)
    return out;
  if (std::abs(two_m1) > two_j1 || std::abs(two_m2) > two_j2 ||
      std::abs(two_m3) > two_j3)
    return out;
  if (two_j3 < std::abs(two_j1 - two_j2) || two_j3 > two_j1 + two_j2)
    return out;

  const long a1 = half(two_j1 + two_m1), b1 = half(two_j1 - two_m1);
  const long a2 = half(two_j2 + two_m2), b2 = half(two_j2 - two_m2);
  const long a3 = half(two_j3 + two_m3), b3 = half(two_j3 - two_m3);
  const long t1 = half(two_j1 + two_j2 - two_j3);
  const long t2 = half(two_j1 - two_j2 + two_j3);
  const long t3 = half(-two_j1 + two_j2 + two_j3);
  if (a1 < 0 || b1 < 0 || a2 < 0 || b2 < 0 || a3 < 0 || b3 < 0 || t1 < 0 ||
      t2 < 0 || t3 < 0)
    return out;

  // Racah sum, over k such that every factorial argument is nonnegative.
  const long p1 = half(two_j3 - two_j2 + two_m1); // j3 - j2 + m1
  const long p2 = half(two_j3 - two_j1 - two_m2); // j3 - j1 - m2
  long k_lo = std::max(0L, std::max(-p1, -p2));
  long k_hi = std::min(t1, std::min(b1, a2));
  if (k_lo > k_hi)
    return out;

  mpq_class sum = 0;
  for (long k = k_lo; k <= k_hi; ++k) {
    mpz_class den = factorial(k) * factorial(t1 - k) * factorial(b1 - k) *
                    factorial(a2 - k) * factorial(p1 + k) * factorial(p2 + k);
    mpq_class term(1, den);
    term.canonicalize();
    if (k % 2 != 0)
      term = -term;
    sum += term;
  }
  if (sum == 0)
    return out;

  mpq_class delta(factorial(t1) * factorial(t2) * factorial(t3),
                  factorial(half(two_j1 + two_j2 + two_j3) + 1));
  delta.canonicalize();
  mpz_class prod = factorial(a1) * factorial(b1) * factorial(a2) *
                   factorial(b2) * factorial(a3) * factorial(b3);

  // (-1)^(j1-j2-m3); the exponent is integral once the checks above pass.
  const long e = (two_j1 - two_j2 - two_m3) / 2;
  const int phase = (((e % 2) + 2) % 2) ? -1 : 1;

  out.sign = (sum > 0 ? 1 : -1) * phase;
  out.square = delta * prod * sum * sum;
  out.square.canonicalize();
  return out;
}

namespace {

int doubled(double x, const char *what) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9)
    throw DomainError(std::string(what) +
                      " is not an integer or half-integer");
  return static_cast<int>(r);
}

} // namespace

double wigner3j(double j1, double j2, double j3, double m1, double m2,
                double m3) {
  return wigner3j_exact(doubled(j1, "j1"), doubled(j2, "j2"),
                        doubled(j3, "j3"), doubled(m1, "m1"),
                        doubled(m2, "m2"), doubled(m3, "m3"))
      .value();
}

RotationalWeights rotational_weights(int J, int M) {
  if (J < 0 || std::abs(M) > J)
    throw DomainError("rotational_weights: require 0 <= |M| <= J");
  const long long j = J, m = M;
  const long long den = (2 * j + 3) * (2 * j - 1);
  RotationalWeights w;
  w.J = J;
  w.M = M;
  w.w_par = Rational(2 * j * j + 2 * j - 1 - 2 * m * m, den);
  w.w_perp = Rational(2 * j * j + 2 * j - 2 + 2 * m * m, den);
  return w;
}

Rational anisotropy_weight(int J, int M) {
  if (J < 0 || std::abs(M) > J)
    throw DomainError("anisotropy_weight: require 0 <= |M| <= J");
  const long long j = J, m = M;
  return Rational(2 * j * (j + 1) - 6 * m * m,
                  3 * (2 * j + 3) * (2 * j - 1));
}

} // namespace molpol::angular
