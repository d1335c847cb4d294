#pragma once

#include "molpol/response.hpp"

#include <functional>
#include <vector>

namespace molpol::analysis {

// Re alpha (a.u.) as a function of frequency in cm^-1; all scan and root
// bookkeeping in this module is done on the cm^-1 axis.
using AlphaFn = std::function<double(double)>;

struct Window {
  double lo = 0, hi = 0; // cm^-1
  bool contains(double w) const { return w >= lo && w <= hi; }
};

struct MagicRoot {
  double omega_cm = 0;             // polished crossing frequency
  double alpha_au = 0;             // ground-state DDP there, a.u.
  double alpha_mhz = 0;            // same in MHz/(W/cm^2)
  double sensitivity_percent = 0;  // 100 (a_g - a_F)/a_F at omega + 5 cm^-1
};

struct MagicReport {
  std::vector<MagicRoot> roots;          // outside the excluded windows
  std::vector<MagicRoot> excluded_roots; // inside them, kept separately
  double alpha_g_1064_au = 0, alpha_g_1550_au = 0;
  double ratio_1064 = 0, ratio_1550 = 0; // alpha_g / alpha_F
};

// Bracket sign changes of g - f on a regular grid, polish each bracket by
// bisection, and classify the roots against the excluded windows.
MagicReport find_magic(const AlphaFn &alpha_g, const AlphaFn &alpha_f,
                       double lo_cm, double hi_cm,
                       const std::vector<Window> &excluded,
                       double step_cm = 0.02);

struct TuneoutReport {
  std::vector<double> roots;          // cm^-1
  std::vector<double> excluded_roots; // cm^-1
};

TuneoutReport find_tuneout(const AlphaFn &alpha, double lo_cm, double hi_cm,
                           const std::vector<Window> &excluded,
                           double step_cm = 0.02);

enum class Region { I, II, III };

struct RegionThresholds {
  double factor = 10.0; // resonant when Im exceeds factor x median
};

struct ClassifiedWindow {
  Window window;
  Region region = Region::I;
};

// Partition the scanned range by absorption behaviour: smooth below the
// first resonance (I), resonant (II), smooth above resonances (III).
std::vector<ClassifiedWindow>
classify_regions(const response::ResponseSpectrum &spectrum,
                 const RegionThresholds &thresholds = {});

double ratio_at(const AlphaFn &alpha_g, const AlphaFn &alpha_f,
                double wavelength_nm);

} // namespace molpol::analysis
