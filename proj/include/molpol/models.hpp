#pragma once

#include "molpol/response.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace molpol::models {

using response::Complex;
using response::SignConvention;

// Two non-degenerate levels driven by a linearly polarized classical field;
// the upper level carries the width gamma2.
struct TwoLevel {
  double e1 = 0, e2 = 0; // hartree
  double d12 = 0;        // a.u.
  double gamma2 = 0;     // hartree

  struct Field {
    double omega = 0;     // hartree
    double amplitude = 0; // a.u.
    double ramp_cycles = 60;
    double measure_cycles = 16;
  } field;

  double omega12() const { return e2 - e1; }
  bool weak_field() const {
    return std::abs(d12 * field.amplitude) < 0.01 * std::abs(omega12());
  }
  bool off_resonant(double omega) const {
    return std::abs(omega12() - omega) > 10.0 * gamma2 / 2.0;
  }
};

Complex twolevel_alpha(const TwoLevel &tl, double omega,
                       SignConvention convention);

// Direct time integration of the amplitude equations with an adiabatic
// half-cosine switch-on; alpha is extracted by Fourier quadrature of the
// induced dipole over an integer number of cycles. Returns both imaginary-
// part prescriptions evaluated from the same trajectory.
struct OracleResult {
  Complex constant_sign;
  Complex opposite_sign;
  double transient_metric = 0; // window-to-window drift, relative
};

OracleResult twolevel_oracle(const TwoLevel &tl, double omega);

// Two effective molecular transitions plus the core term: the five-ish
// parameter summary of the full sum over states.
struct EffectiveModel {
  double omega_sigma = 0; // hartree
  double d_sigma = 0;     // a.u.
  double omega_pi = 0;    // hartree
  double d_pi = 0;        // a.u.
  response::CoreModel core;
  std::vector<std::pair<double, double>> excluded_windows_cm1;
  double fit_rms_percent = 0;
  bool degenerate_warning = false;  // omega_sigma >= omega_pi at optimum
  bool pole_contaminated = false;   // fit rms indicates unexcluded poles
};

double effective_alpha(const EffectiveModel &m, double omega);
double effective_anisotropy(const EffectiveModel &m, double omega);

// Zero of the two-pole part (no core) in closed form, in hartree.
double effective_tuneout_closed_form(const EffectiveModel &m);

struct FitSample {
  double omega = 0;    // hartree
  double alpha_re = 0; // a.u., isotropic real part
};

// Damped Gauss-Newton least squares on relative residuals of
// (Re alpha_iso - core) against the two-pole model. Samples are taken
// log-spaced between 1000 and 20000 cm^-1, outside the excluded windows.
EffectiveModel
fit_effective(const response::ResponseSpectrum &spectrum,
              const response::CoreModel &core,
              const std::vector<std::pair<double, double>> &windows_cm1,
              const std::optional<EffectiveModel> &initial = std::nullopt);

EffectiveModel
fit_effective_samples(const std::vector<FitSample> &samples,
                      const response::CoreModel &core,
                      const std::vector<std::pair<double, double>> &windows_cm1,
                      const std::optional<EffectiveModel> &initial =
                          std::nullopt);

} // namespace molpol::models
