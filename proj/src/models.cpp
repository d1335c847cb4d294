#include "molpol/models.hpp"

#include "molpol/errors.hpp"
#include "molpol/units.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace molpol::models {

namespace {
constexpr double pi = std::numbers::pi;
}

Complex twolevel_alpha(const TwoLevel &tl, double omega,
                       SignConvention convention) {
  if (!(tl.gamma2 > 0))
    throw ConfigError("twolevel_alpha: gamma2 must be positive");
  const double w12 = tl.omega12();
  const double hg = 0.5 * tl.gamma2;
  const double d2 = tl.d12 * tl.d12;
  const double xr = w12 - omega, xa = w12 + omega;
  const double dr = xr * xr + hg * hg, da = xa * xa + hg * hg;
  const double re = d2 * (xr / dr + xa / da);
  const double im = convention == SignConvention::ConstantSign
                        ? d2 * (hg / dr + hg / da)
                        : d2 * (hg / dr - hg / da);
  return {re, im};
}

namespace {

// Amplitude equations for the driven two-level system. `gamma` enters with
// its sign so the same right-hand side serves the decaying right vector and
// the growing auxiliary one that builds the left vector.
struct TwoLevelRhs {
  double e1, e2, gamma, d, omega, amplitude, t_ramp;

  double envelope(double t) const {
    if (t >= t_ramp)
      return 1.0;
    if (t <= 0)
      return 0.0;
    return 0.5 * (1.0 - std::cos(pi * t / t_ramp));
  }

  void operator()(double t, const Complex *c, Complex *dc) const {
    const Complex i(0, 1);
    const double coupling =
        -d * amplitude * envelope(t) * std::cos(omega * t);
    dc[0] = -i * (e1 * c[0] + coupling * c[1]);
    dc[1] = -i * ((Complex(e2, -0.5 * gamma)) * c[1] + coupling * c[0]);
  }
};

void rk4_step(const TwoLevelRhs &rhs, double t, double h, Complex *c) {
  Complex k1[2], k2[2], k3[2], k4[2], tmp[2];
  rhs(t, c, k1);
  for (int j = 0; j < 2; ++j)
    tmp[j] = c[j] + 0.5 * h * k1[j];
  rhs(t + 0.5 * h, tmp, k2);
  for (int j = 0; j < 2; ++j)
    tmp[j] = c[j] + 0.5 * h * k2[j];
  rhs(t + 0.5 * h, tmp, k3);
  for (int j = 0; j < 2; ++j)
    tmp[j] = c[j] + h * k3[j];
  rhs(t + h, tmp, k4);
  for (int j = 0; j < 2; ++j)
    c[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

} // namespace

OracleResult twolevel_oracle(const TwoLevel &tl, double omega) {
  if (!(omega > 0))
    throw ConfigError("twolevel_oracle: field frequency must be positive");
  if (!tl.weak_field())
    throw OracleError("twolevel_oracle: field too strong for the "
                      "perturbative regime");
  if (tl.gamma2 > 0 && !tl.off_resonant(omega))
    throw OracleError("twolevel_oracle: drive too close to resonance");

  const double period = 2.0 * pi / omega;
  const double t_ramp = tl.field.ramp_cycles * period;
  const double t_measure = tl.field.measure_cycles * period;

  // Commensurate fixed step: an integer number per optical cycle, fine
  // enough for the fastest phase in the problem.
  const double w_fast =
      std::max({std::abs(tl.e1), std::abs(tl.e2), omega, tl.omega12()});
  int steps_per_cycle = 64;
  while (steps_per_cycle * omega < 420.0 * w_fast)
    steps_per_cycle *= 2;

  TwoLevelRhs right{tl.e1, tl.e2, tl.gamma2, tl.d12,
                    omega, tl.field.amplitude, t_ramp};
  TwoLevelRhs grown{tl.e1, tl.e2, -tl.gamma2, tl.d12,
                    omega, tl.field.amplitude, t_ramp};

  Complex c[2] = {{1, 0}, {0, 0}};
  Complex g[2] = {{1, 0}, {0, 0}};
  const double h = period / steps_per_cycle;
  const long n_ramp = std::lround(t_ramp / h);
  const long n_measure = std::lround(t_measure / h);

  double t = 0;
  for (long s = 0; s < n_ramp; ++s, t += h) {
    rk4_step(right, t, h, c);
    rk4_step(grown, t, h, g);
  }

  // Fourier quadrature of the induced dipole at exp(+i omega t), as two
  // consecutive half windows of an integer cycle count each (trapezoid on a
  // periodic integrand). Their disagreement measures leftover transients.
  Complex acc_plus[2] = {{0, 0}, {0, 0}};
  Complex acc_minus[2] = {{0, 0}, {0, 0}};
  const long half = n_measure / 2;
  for (long s = 0; s <= n_measure; ++s) {
    const Complex ell1 = std::conj(g[0]);
    const Complex ell2 = std::conj(g[1]);
    const Complex d_plus = (ell1 * c[1] + ell2 * c[0]) * tl.d12;
    const Complex d_minus =
        (std::conj(c[0]) * c[1] + std::conj(c[1]) * c[0]) * tl.d12;
    const Complex phase = std::exp(Complex(0, omega * t));
    double w0 = 0, w1 = 0;
    if (s < half)
      w0 = (s == 0) ? 0.5 : 1.0;
    else if (s == half)
      w0 = w1 = 0.5;
    else
      w1 = (s == n_measure) ? 0.5 : 1.0;
    acc_plus[0] += w0 * d_plus * phase * h;
    acc_plus[1] += w1 * d_plus * phase * h;
    acc_minus[0] += w0 * d_minus * phase * h;
    acc_minus[1] += w1 * d_minus * phase * h;
    if (s < n_measure) {
      rk4_step(right, t, h, c);
      rk4_step(grown, t, h, g);
      t += h;
    }
  }

  const double norm = 2.0 / (tl.field.amplitude * (t_measure / 2.0));
  const Complex plus_a = acc_plus[0] * norm, plus_b = acc_plus[1] * norm;
  const Complex minus_a = acc_minus[0] * norm, minus_b = acc_minus[1] * norm;

  OracleResult out;
  out.constant_sign = 0.5 * (plus_a + plus_b);
  out.opposite_sign = 0.5 * (minus_a + minus_b);
  const double scale =
      std::max(std::abs(out.constant_sign), std::abs(out.opposite_sign));
  out.transient_metric =
      std::max(std::abs(plus_a - plus_b), std::abs(minus_a - minus_b)) /
      std::max(scale, 1e-300);
  if (out.transient_metric > 2e-3)
    throw OracleError("twolevel_oracle: ramp too fast, transient "
                      "contamination metric " +
                      std::to_string(out.transient_metric));
  return out;
}

namespace {

void check_pole(double omega, double pole, const char *which) {
  if (std::abs(omega - pole) <= 1e-9 || std::abs(omega + pole) <= 1e-9)
    throw DomainError(std::string("effective model: frequency inside the ") +
                      which + " pole neighbourhood");
}

} // namespace

double effective_alpha(const EffectiveModel &m, double omega) {
  check_pole(omega, m.omega_sigma, "Sigma");
  check_pole(omega, m.omega_pi, "Pi");
  const double ds2 = m.d_sigma * m.d_sigma;
  const double dp2 = m.d_pi * m.d_pi;
  double a = 2.0 * m.omega_sigma * ds2 /
                 (m.omega_sigma * m.omega_sigma - omega * omega) +
             2.0 * m.omega_pi * dp2 / (m.omega_pi * m.omega_pi - omega * omega);
  if (!m.core.empty())
    a += core_alpha(m.core, omega).real();
  return a;
}

double effective_anisotropy(const EffectiveModel &m, double omega) {
  check_pole(omega, m.omega_sigma, "Sigma");
  check_pole(omega, m.omega_pi, "Pi");
  const double ds2 = m.d_sigma * m.d_sigma;
  const double dp2 = m.d_pi * m.d_pi;
  return 6.0 * m.omega_sigma * ds2 /
             (m.omega_sigma * m.omega_sigma - omega * omega) -
         3.0 * m.omega_pi * dp2 / (m.omega_pi * m.omega_pi - omega * omega);
}

double effective_tuneout_closed_form(const EffectiveModel &m) {
  const double a = m.omega_sigma * m.d_sigma * m.d_sigma;
  const double b = m.omega_pi * m.d_pi * m.d_pi;
  return std::sqrt((a * m.omega_pi * m.omega_pi +
                    b * m.omega_sigma * m.omega_sigma) /
                   (a + b));
}

namespace {

bool inside_windows(double omega_cm,
                    const std::vector<std::pair<double, double>> &windows) {
  for (const auto &[lo, hi] : windows)
    if (omega_cm >= lo && omega_cm <= hi)
      return true;
  return false;
}

// Two-pole model and its derivatives with respect to
// (ln w_sigma, ln d_sigma, ln w_pi, ln d_pi).
struct TwoPole {
  double ws, ds, wp, dp;

  double value(double w) const {
    return 2.0 * ws * ds * ds / (ws * ws - w * w) +
           2.0 * wp * dp * dp / (wp * wp - w * w);
  }
  void gradient(double w, double *g) const {
    const double das = ws * ws - w * w;
    const double dap = wp * wp - w * w;
    g[0] = ws * (-2.0 * ds * ds * (ws * ws + w * w) / (das * das));
    g[1] = ds * (4.0 * ws * ds / das);
    g[2] = wp * (-2.0 * dp * dp * (wp * wp + w * w) / (dap * dap));
    g[3] = dp * (4.0 * wp * dp / dap);
  }
};

} // namespace

EffectiveModel fit_effective_samples(
    const std::vector<FitSample> &samples, const response::CoreModel &core,
    const std::vector<std::pair<double, double>> &windows_cm1,
    const std::optional<EffectiveModel> &initial) {
  using units::cm1_to_hartree;
  using units::hartree_to_cm1;

  const double fit_lo = cm1_to_hartree(1000.0);
  const double fit_hi = cm1_to_hartree(20000.0);
  std::vector<double> w_fit, t_fit;
  for (const auto &s : samples) {
    if (s.omega < fit_lo || s.omega > fit_hi)
      continue;
    if (inside_windows(hartree_to_cm1(s.omega), windows_cm1))
      continue;
    double c = 0;
    if (!core.empty())
      c = core_alpha(core, s.omega).real();
    w_fit.push_back(s.omega);
    t_fit.push_back(s.alpha_re - c);
  }
  if (w_fit.size() < 8)
    throw FitError("fit_effective: fewer than 8 usable samples between 1000 "
                   "and 20000 cm-1 outside the excluded windows");

  // Robust relative residuals: denominators floored at a fraction of the
  // median magnitude so a tune-out crossing cannot dominate the fit.
  std::vector<double> mags(t_fit.size());
  for (std::size_t i = 0; i < t_fit.size(); ++i)
    mags[i] = std::abs(t_fit[i]);
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  const double floor_mag = std::max(1e-30, 0.05 * mags[mags.size() / 2]);
  std::vector<double> denom(t_fit.size());
  for (std::size_t i = 0; i < t_fit.size(); ++i)
    denom[i] = std::max(std::abs(t_fit[i]), floor_mag);

  // Starting point.
  double ws, ds, wp, dp;
  if (initial) {
    ws = initial->omega_sigma;
    ds = initial->d_sigma;
    wp = initial->omega_pi;
    dp = initial->d_pi;
  } else {
    double w_zero = 0;
    for (std::size_t i = 1; i < w_fit.size(); ++i)
      if (t_fit[i - 1] > 0 && t_fit[i] < 0) {
        w_zero = 0.5 * (w_fit[i - 1] + w_fit[i]);
        break;
      }
    if (w_zero > 0) {
      ws = 0.85 * w_zero;
      wp = 1.15 * w_zero;
    } else {
      ws = 0.6 * w_fit.back();
      wp = 0.9 * w_fit.back();
    }
    const double t_low = std::max(t_fit.front(), 1.0);
    ds = std::sqrt(t_low * ws / 4.0);
    dp = std::sqrt(t_low * wp / 4.0);
  }

  auto rms_of = [&](const TwoPole &m) {
    double acc = 0;
    for (std::size_t i = 0; i < w_fit.size(); ++i) {
      const double r = (m.value(w_fit[i]) - t_fit[i]) / denom[i];
      acc += r * r;
    }
    return std::sqrt(acc / w_fit.size());
  };

  TwoPole model{ws, ds, wp, dp};
  double lambda = 1e-3;
  double rms = rms_of(model);
  std::vector<double> trace{rms};
  bool converged = false;
  for (int iter = 0; iter < 200 && !converged; ++iter) {
    Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
    Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
    for (std::size_t i = 0; i < w_fit.size(); ++i) {
      double g[4];
      model.gradient(w_fit[i], g);
      const double r = (model.value(w_fit[i]) - t_fit[i]) / denom[i];
      for (int a = 0; a < 4; ++a) {
        jtr(a) += g[a] / denom[i] * r;
        for (int b = 0; b < 4; ++b)
          jtj(a, b) += g[a] * g[b] / (denom[i] * denom[i]);
      }
    }
    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      Eigen::Matrix4d damped = jtj;
      for (int a = 0; a < 4; ++a)
        damped(a, a) *= 1.0 + lambda;
      const Eigen::Vector4d step = damped.ldlt().solve(-jtr);
      TwoPole trial{model.ws * std::exp(step(0)),
                    model.ds * std::exp(step(1)),
                    model.wp * std::exp(step(2)),
                    model.dp * std::exp(step(3))};
      const double trial_rms = rms_of(trial);
      if (std::isfinite(trial_rms) && trial_rms <= rms) {
        const double drop = rms - trial_rms;
        model = trial;
        rms = trial_rms;
        trace.push_back(rms);
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        if (drop < 1e-14 || step.cwiseAbs().maxCoeff() < 1e-12)
          converged = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted)
      converged = true; // damping exhausted: local optimum
  }
  if (!converged || !std::isfinite(rms)) {
    std::ostringstream os;
    os << "fit_effective: no convergence after 200 iterations; rms trace:";
    for (double r : trace)
      os << " " << r;
    throw FitError(os.str());
  }

  EffectiveModel out;
  out.core = core;
  out.excluded_windows_cm1 = windows_cm1;
  // Keep the Sigma label on the lower pole.
  if (model.ws <= model.wp) {
    out.omega_sigma = model.ws;
    out.d_sigma = std::abs(model.ds);
    out.omega_pi = model.wp;
    out.d_pi = std::abs(model.dp);
  } else {
    out.omega_sigma = model.wp;
    out.d_sigma = std::abs(model.dp);
    out.omega_pi = model.ws;
    out.d_pi = std::abs(model.ds);
    out.degenerate_warning = true;
  }
  out.fit_rms_percent = 100.0 * rms;
  out.pole_contaminated = out.fit_rms_percent > 10.0;
  return out;
}

EffectiveModel
fit_effective(const response::ResponseSpectrum &spectrum,
              const response::CoreModel &core,
              const std::vector<std::pair<double, double>> &windows_cm1,
              const std::optional<EffectiveModel> &initial) {
  if (spectrum.frequencies.size() < 2)
    throw FitError("fit_effective: spectrum too small");

  // Log-spaced subset of the spectrum grid.
  const double lo = std::max(spectrum.frequencies.front(),
                             units::cm1_to_hartree(1000.0));
  const double hi = std::min(spectrum.frequencies.back(),
                             units::cm1_to_hartree(20000.0));
  if (!(hi > lo))
    throw FitError("fit_effective: spectrum does not cover 1000-20000 cm-1");
  const int n_samples = 400;
  std::vector<FitSample> samples;
  std::size_t last_idx = static_cast<std::size_t>(-1);
  for (int k = 0; k < n_samples; ++k) {
    const double w = lo * std::pow(hi / lo, k / double(n_samples - 1));
    const auto it = std::lower_bound(spectrum.frequencies.begin(),
                                     spectrum.frequencies.end(), w);
    std::size_t idx = it - spectrum.frequencies.begin();
    if (idx >= spectrum.frequencies.size())
      idx = spectrum.frequencies.size() - 1;
    if (idx == last_idx)
      continue;
    last_idx = idx;
    samples.push_back(
        {spectrum.frequencies[idx], spectrum.alpha_iso[idx].real()});
  }
  return fit_effective_samples(samples, core, windows_cm1, initial);
}

} // namespace molpol::models
