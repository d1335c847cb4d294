#include "molpol/units.hpp"

#include "molpol/errors.hpp"

namespace molpol::units {

namespace {

enum class Dim { Energy, Length, Dipole, Polarizability };

Dim dimension(Unit u) {
  switch (u) {
  case Unit::Hartree:
  case Unit::InvCm:
    return Dim::Energy;
  case Unit::Bohr:
  case Unit::Nanometer:
  case Unit::Angstrom:
    return Dim::Length;
  case Unit::DipoleAu:
  case Unit::Debye:
    return Dim::Dipole;
  case Unit::PolarizabilityAu:
  case Unit::MhzPerWcm2:
    return Dim::Polarizability;
  }
  throw UnitError("unknown unit tag");
}

// Factor taking one unit of `u` to the atomic unit of its dimension class.
double to_atomic(Unit u) {
  switch (u) {
  case Unit::Hartree:
    return 1.0;
  case Unit::InvCm:
    return hartree_per_cm1;
  case Unit::Bohr:
    return 1.0;
  case Unit::Nanometer:
    return bohr_per_nm;
  case Unit::Angstrom:
    return bohr_per_nm / 10.0;
  case Unit::DipoleAu:
    return 1.0;
  case Unit::Debye:
    return 1.0 / debye_per_au;
  case Unit::PolarizabilityAu:
    return 1.0;
  case Unit::MhzPerWcm2:
    return 1.0 / mhz_w_cm2_per_au;
  }
  throw UnitError("unknown unit tag");
}

} // namespace

std::string unit_name(Unit u) {
  switch (u) {
  case Unit::Hartree:
    return "hartree";
  case Unit::InvCm:
    return "cm-1";
  case Unit::Bohr:
    return "bohr";
  case Unit::Nanometer:
    return "nm";
  case Unit::Angstrom:
    return "angstrom";
  case Unit::DipoleAu:
    return "au(dipole)";
  case Unit::Debye:
    return "debye";
  case Unit::PolarizabilityAu:
    return "au(polarizability)";
  case Unit::MhzPerWcm2:
    return "MHz/(W/cm2)";
  }
  return "?";
}

double convert(double value, Unit from, Unit to) {
  if (from == to)
    return value;
  if (dimension(from) != dimension(to))
    throw UnitError("cannot convert " + unit_name(from) + " to " +
                    unit_name(to) + ": different dimension classes");
  return value * (to_atomic(from) / to_atomic(to));
}

} // namespace molpol::units
