#include "molpol/spline.hpp"

#include "molpol/errors.hpp"

#include <algorithm>
#include <cmath>

namespace molpol {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y,
                         Boundary bc)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n < 2)
    throw ValidationError("spline needs at least two matching points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw ValidationError("spline abscissae must be strictly increasing");

  m_.assign(n, 0.0);
  if (n == 2)
    return; // linear segment
  if (n == 3)
    bc = Boundary::Natural; // not-a-knot needs four points

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    h[i] = x_[i + 1] - x_[i];
  auto div_diff = [&](std::size_t i) {
    return (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
  };

  // Tridiagonal system for the interior moments M_1 .. M_{n-2}.
  const std::size_t m = n - 2;
  std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), rhs(m, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const std::size_t r = i - 1;
    lo[r] = h[i - 1] / 6.0;
    di[r] = (h[i - 1] + h[i]) / 3.0;
    up[r] = h[i] / 6.0;
    rhs[r] = div_diff(i);
  }
  if (bc == Boundary::NotAKnot) {
    // Fold M_0 = [(h0+h1) M_1 - h0 M_2]/h1 into the first row, and the
    // mirrored relation into the last row.
    di[0] += (h[0] * (h[0] + h[1])) / (6.0 * h[1]);
    up[0] += -h[0] * h[0] / (6.0 * h[1]);
    lo[0] = 0.0;
    const double ha = h[n - 3], hb = h[n - 2];
    di[m - 1] += (hb * (ha + hb)) / (6.0 * ha);
    lo[m - 1] += -hb * hb / (6.0 * ha);
    up[m - 1] = 0.0;
  }

  // Thomas algorithm.
  for (std::size_t r = 1; r < m; ++r) {
    const double w = lo[r] / di[r - 1];
    di[r] -= w * up[r - 1];
    rhs[r] -= w * rhs[r - 1];
  }
  m_[n - 2] = rhs[m - 1] / di[m - 1];
  for (std::size_t r = m - 1; r-- > 0;)
    m_[r + 1] = (rhs[r] - up[r] * m_[r + 2]) / di[r];

  if (bc == Boundary::NotAKnot) {
    m_[0] = ((h[0] + h[1]) * m_[1] - h[0] * m_[2]) / h[1];
    m_[n - 1] =
        ((h[n - 3] + h[n - 2]) * m_[n - 2] - h[n - 2] * m_[n - 3]) / h[n - 3];
  }
}

std::size_t CubicSpline::interval(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin())
    return 0;
  std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::operator()(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double a = x_[i + 1] - x, b = x - x_[i];
  return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
         (y_[i] / h - m_[i] * h / 6.0) * a +
         (y_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
}

double CubicSpline::derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double a = x_[i + 1] - x, b = x - x_[i];
  return -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) +
         (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0;
}

double CubicSpline::second_derivative(double x) const {
  const std::size_t i = interval(x);
  const double h = x_[i + 1] - x_[i];
  return (m_[i] * (x_[i + 1] - x) + m_[i + 1] * (x - x_[i])) / h;
}

} // namespace molpol
