#include "molpol/analysis.hpp"

#include "molpol/errors.hpp"
#include "molpol/units.hpp"

#include <algorithm>
#include <cmath>

namespace molpol::analysis {

namespace {

bool in_any(const std::vector<Window> &ws, double x) {
  return std::any_of(ws.begin(), ws.end(),
                     [x](const Window &w) { return w.contains(x); });
}

// Bisection polish of a bracketed sign change; Re alpha has poles, so the
// bracket is never abandoned for a faster method.
double polish(const std::function<double(double)> &f, double lo, double hi,
              double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo < 1e-10 || mid == lo || mid == hi)
      return mid;
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    if ((fm > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> bracket_roots(const std::function<double(double)> &diff,
                                  double lo_cm, double hi_cm, double step_cm) {
  if (!(step_cm > 0) || !(hi_cm > lo_cm))
    throw ConfigError("root scan: need hi > lo and a positive step");
  const long n = std::lround(std::ceil((hi_cm - lo_cm) / step_cm));
  std::vector<double> roots;
  long n_brackets = 0;
  double x_prev = lo_cm;
  double f_prev = diff(x_prev);
  for (long i = 1; i <= n; ++i) {
    const double x = std::min(lo_cm + i * step_cm, hi_cm);
    const double fx = diff(x);
    if (f_prev == 0.0) {
      roots.push_back(x_prev);
      ++n_brackets;
    } else if (std::isfinite(f_prev) && std::isfinite(fx) &&
               (f_prev > 0) != (fx > 0)) {
      ++n_brackets;
      roots.push_back(polish(diff, x_prev, x, f_prev));
    }
    if (n_brackets > std::max<long>(32, n / 4))
      throw DomainError("root scan: the two quantities coincide over much of "
                        "the range (degenerate input); no discrete root list "
                        "exists");
    x_prev = x;
    f_prev = fx;
  }
  return roots;
}

} // namespace

MagicReport find_magic(const AlphaFn &alpha_g, const AlphaFn &alpha_f,
                       double lo_cm, double hi_cm,
                       const std::vector<Window> &excluded, double step_cm) {
  auto diff = [&](double w) { return alpha_g(w) - alpha_f(w); };
  MagicReport report;
  for (double root : bracket_roots(diff, lo_cm, hi_cm, step_cm)) {
    MagicRoot r;
    r.omega_cm = root;
    r.alpha_au = alpha_g(root);
    r.alpha_mhz = r.alpha_au * units::mhz_w_cm2_per_au;
    const double g5 = alpha_g(root + 5.0), f5 = alpha_f(root + 5.0);
    r.sensitivity_percent = 100.0 * (g5 - f5) / f5;
    (in_any(excluded, root) ? report.excluded_roots : report.roots)
        .push_back(r);
  }
  report.alpha_g_1064_au = alpha_g(units::nm_to_cm1(1064.0));
  report.alpha_g_1550_au = alpha_g(units::nm_to_cm1(1550.0));
  report.ratio_1064 = ratio_at(alpha_g, alpha_f, 1064.0);
  report.ratio_1550 = ratio_at(alpha_g, alpha_f, 1550.0);
  return report;
}

TuneoutReport find_tuneout(const AlphaFn &alpha, double lo_cm, double hi_cm,
                           const std::vector<Window> &excluded,
                           double step_cm) {
  TuneoutReport report;
  for (double root : bracket_roots(alpha, lo_cm, hi_cm, step_cm))
    (in_any(excluded, root) ? report.excluded_roots : report.roots)
        .push_back(root);
  return report;
}

std::vector<ClassifiedWindow>
classify_regions(const response::ResponseSpectrum &spectrum,
                 const RegionThresholds &thresholds) {
  if (spectrum.convention != response::SignConvention::ConstantSign)
    throw ConfigError("classify_regions: needs a constant-sign spectrum "
                      "(even imaginary part)");
  const std::size_t n = spectrum.frequencies.size();
  if (n < 2)
    throw ConfigError("classify_regions: spectrum too small");

  std::vector<double> im(n);
  for (std::size_t i = 0; i < n; ++i)
    im[i] = std::abs(spectrum.alpha_iso[i].imag());
  std::vector<double> sorted(im);
  std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
  const double median = sorted[n / 2];
  const double cut = thresholds.factor * median;

  auto to_cm = [&](std::size_t i) {
    return units::hartree_to_cm1(spectrum.frequencies[i]);
  };

  std::vector<ClassifiedWindow> out;
  bool seen_resonance = false;
  std::size_t start = 0;
  bool cur_resonant = median > 0 && std::isfinite(cut) && im[0] > cut;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool resonant = i < n && median > 0 && std::isfinite(cut) &&
                          im[i] > cut;
    if (i == n || resonant != cur_resonant) {
      ClassifiedWindow w;
      w.window = {to_cm(start), to_cm(i == n ? n - 1 : i)};
      if (cur_resonant) {
        w.region = Region::II;
        seen_resonance = true;
      } else {
        w.region = seen_resonance ? Region::III : Region::I;
      }
      out.push_back(w);
      start = i == n ? n - 1 : i;
      cur_resonant = resonant;
    }
  }
  return out;
}

double ratio_at(const AlphaFn &alpha_g, const AlphaFn &alpha_f,
                double wavelength_nm) {
  if (!(wavelength_nm > 0))
    throw DomainError("ratio_at: wavelength must be positive");
  const double w_cm = units::nm_to_cm1(wavelength_nm);
  const double f = alpha_f(w_cm);
  if (std::abs(f) < 1e-12)
    throw DomainError("ratio_at: reference polarizability vanishes at the "
                      "requested wavelength");
  return alpha_g(w_cm) / f;
}

} // namespace molpol::analysis
