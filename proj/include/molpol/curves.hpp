#pragma once

#include "molpol/spline.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace molpol::curves {

enum class Symmetry { Sigma, Pi };
enum class Spin { Singlet, Triplet };

// One electronic state's potential, tabulated in (bohr, hartree), with an
// analytic -sum(Cn/R^n) tail past stitch_R and an exponential wall below the
// first tabulated point. Immutable after loading; evaluation is pure.
class PotentialCurve {
public:
  PotentialCurve(std::string label, Symmetry symmetry, Spin spin,
                 std::vector<double> r, std::vector<double> v,
                 std::vector<std::pair<int, double>> long_range,
                 std::optional<double> asymptote,
                 std::optional<double> stitch_r);

  const std::string &label() const { return label_; }
  Symmetry symmetry() const { return symmetry_; }
  Spin spin() const { return spin_; }
  double asymptote() const { return asymptote_; }
  double stitch_r() const { return stitch_r_; }
  double r_min() const { return r_.front(); }
  double r_max() const { return r_.back(); }
  const std::vector<double> &r_points() const { return r_; }
  const std::vector<double> &v_points() const { return v_; }
  const std::vector<std::pair<int, double>> &long_range() const {
    return long_range_;
  }

  double evaluate(double r) const;   // throws DomainError for r <= 0
  double derivative(double r) const; // same domain as evaluate
  double minimum_value() const { return v_min_; }

private:
  double tail(double r) const;
  double tail_derivative(double r) const;

  std::string label_;
  Symmetry symmetry_;
  Spin spin_;
  std::vector<double> r_, v_;
  std::vector<std::pair<int, double>> long_range_;
  double asymptote_ = 0.0;
  double stitch_r_ = 0.0;
  CubicSpline spline_;
  double v_min_ = 0.0;

  // Exponential wall A exp(-b R) + c through the first three points; falls
  // back to the end cubic when the data do not rise inward.
  bool wall_ok_ = false;
  double wall_a_ = 0.0, wall_b_ = 0.0, wall_c_ = 0.0;

  // Tail blend matching value and slope at stitch_R; decays exponentially.
  double blend_v_ = 0.0, blend_d_ = 0.0;
  static constexpr double blend_eta_ = 1.0; // 1/bohr
};

// R-dependent permanent (from == to) or transition dipole moment, in
// (bohr, a.u.). Constant extrapolation beyond both tabulated ends.
class DipoleFunction {
public:
  DipoleFunction(std::string from_state, std::string to_state, int q_component,
                 std::vector<double> r, std::vector<double> d);

  const std::string &from_state() const { return from_; }
  const std::string &to_state() const { return to_; }
  int q_component() const { return q_; }
  const std::vector<double> &r_points() const { return r_; }

  double evaluate(double r) const;

private:
  std::string from_, to_;
  int q_ = 0;
  std::vector<double> r_, d_;
  CubicSpline spline_;
};

// R-dependent spin-orbit coupling between two electronic states, in
// (bohr, hartree). Constant extrapolation beyond both ends.
class SpinOrbitCoupling {
public:
  SpinOrbitCoupling(std::string state_a, std::string state_b,
                    std::vector<double> r, std::vector<double> w);

  const std::string &state_a() const { return a_; }
  const std::string &state_b() const { return b_; }
  double evaluate(double r) const;

private:
  std::string a_, b_;
  std::vector<double> r_, w_;
  CubicSpline spline_;
};

// Text-file loaders; see README for the header directives. Errors carry the
// file name and line number.
PotentialCurve load_curve(const std::string &path);
DipoleFunction load_dipole(const std::string &path);
SpinOrbitCoupling load_soc(const std::string &path);

} // namespace molpol::curves
