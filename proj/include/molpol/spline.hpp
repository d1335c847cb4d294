#pragma once

#include <vector>

namespace molpol {

// Interpolating cubic spline. The default not-a-knot end conditions
// reproduce any cubic polynomial exactly on the full interval; natural end
// conditions are kept for comparison runs.
class CubicSpline {
public:
  enum class Boundary { NotAKnot, Natural };

  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y,
              Boundary bc = Boundary::NotAKnot);

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  bool empty() const { return x_.empty(); }
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

private:
  std::size_t interval(double x) const;

  std::vector<double> x_, y_;
  std::vector<double> m_; // second derivatives at the knots
};

} // namespace molpol
