#pragma once

#include <string>

namespace molpol::units {

// Conversion constants, stored once at full printed precision. Every other
// module converts through these; no value is redefined elsewhere.
inline constexpr double hartree_per_cm1 = 1.0 / 219474.63137;
inline constexpr double bohr_per_nm = 1.0 / 0.052917721092;
inline constexpr double debye_per_au = 2.54158059;
inline constexpr double mhz_w_cm2_per_au = 4.6883572e-8;

// Auxiliary constants (mass and time are not part of convert()'s dimension
// classes; they back reduced-mass input and lifetime-to-width conversion).
inline constexpr double electron_mass_per_amu = 1822.888486209;
inline constexpr double seconds_per_atu = 2.418884326509e-17;

enum class Unit {
  Hartree,
  InvCm,
  Bohr,
  Nanometer,
  Angstrom,
  DipoleAu,
  Debye,
  PolarizabilityAu,
  MhzPerWcm2,
};

std::string unit_name(Unit u);

// Scale `value` from `from` to `to`. Both tags must belong to the same
// dimension class (energy, length, dipole, polarizability); otherwise a
// UnitError naming both tags is thrown. Identity conversions return the
// value unchanged.
double convert(double value, Unit from, Unit to);

inline double cm1_to_hartree(double x) { return x * hartree_per_cm1; }
inline double hartree_to_cm1(double x) { return x / hartree_per_cm1; }

// Width (hartree) of a level with the given radiative lifetime.
inline double lifetime_ns_to_hartree(double tau_ns) {
  return seconds_per_atu / (tau_ns * 1e-9);
}

// Laser vacuum wavelength to photon energy.
inline double nm_to_cm1(double lambda_nm) { return 1e7 / lambda_nm; }

inline double amu_to_au(double m_amu) { return m_amu * electron_mass_per_amu; }

} // namespace molpol::units
