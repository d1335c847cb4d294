#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace molpol::angular {

// Reduced fraction with int64 terms; denominator kept positive. Covers the
// rotational-weight formulas exactly for any physical J.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  double value() const { return static_cast<double>(num) / den; }
  Rational operator+(const Rational &o) const;
  Rational operator*(const Rational &o) const;
  bool operator==(const Rational &o) const {
    return num == o.num && den == o.den;
  }
};

// Value of a 3-j symbol as sign * sqrt(p/q) with p/q an exact nonnegative
// rational. sign is 0 when the symbol vanishes by a selection rule.
struct SignedSqrtRational {
  int sign = 0;
  mpq_class square{0};

  double value() const;
  mpq_class signed_square() const { return sign < 0 ? -square : square; }
};

// Exact 3-j symbol; arguments are twice the (half-)integer quantum numbers.
SignedSqrtRational wigner3j_exact(int two_j1, int two_j2, int two_j3,
                                  int two_m1, int two_m2, int two_m3);

// Floating-point boundary over the exact evaluation. Invalid couplings
// (selection rules, non-integral j+m) give exactly 0, never an error.
double wigner3j(double j1, double j2, double j3, double m1, double m2,
                double m3);

// Weights converting the molecular-frame parallel/perpendicular response
// into the lab-frame response of the |J M> rotational state. They sum to 1
// exactly for every (J, M).
struct RotationalWeights {
  int J = 0;
  int M = 0;
  Rational w_par;
  Rational w_perp;
};

RotationalWeights rotational_weights(int J, int M); // throws DomainError

// Weight of the anisotropy term in the iso/aniso decomposition:
// alpha_JM = alpha_iso + anisotropy_weight(J,M) * (alpha_par - alpha_perp).
Rational anisotropy_weight(int J, int M); // throws DomainError

} // namespace molpol::angular
