#pragma once

#include "molpol/angular.hpp"
#include "molpol/curves.hpp"
#include "molpol/solver.hpp"

#include <complex>
#include <string>
#include <vector>

namespace molpol::response {

using Complex = std::complex<double>;

// Sign of i*gamma/2 in the anti-resonant term. The real part is identical
// for both; the imaginary part is even in omega for ConstantSign and odd
// for OppositeSign.
enum class SignConvention { ConstantSign, OppositeSign };

enum class Channel { Parallel, Perpendicular };
enum class Origin { GroundRovib, Electronic, Core };

struct Transition {
  std::string state; // excited electronic label ("X" for rovibrational)
  int v = 0;
  double omega_t = 0; // hartree
  double d2 = 0;      // squared vibrationally averaged dipole, a.u.^2
  double gamma = 0;   // width, hartree
  Channel channel = Channel::Parallel;
  Origin origin = Origin::Electronic;
};

struct TransitionTable {
  std::vector<Transition> entries;
};

struct ExcitedState {
  const solver::LevelBasis *basis = nullptr;
  const curves::DipoleFunction *tdm = nullptr;
  double lifetime_ns = 0; // <= 0: use the table default
};

// Assemble all transitions out of the (ground, v, J=0) level: one entry per
// excited rovibrational level, plus the pure-rotational and rovibrational
// entries within the ground state when a permanent dipole is given.
TransitionTable
build_transition_table(const solver::LevelBasis &ground, int v,
                       const std::vector<ExcitedState> &excited,
                       const curves::DipoleFunction *ground_pdm,
                       double lifetime_ns);

struct AlphaPair {
  Complex par;
  Complex perp;
};

// Sum-over-states dynamic polarizability of the table at one frequency,
// split into molecular-frame parallel and perpendicular channels.
AlphaPair alpha_sum(const TransitionTable &table, double omega,
                    SignConvention convention);

// Closed-shell ion cores described by one or two effective transitions each.
class CoreModel {
public:
  struct Ion {
    std::string name;
    std::vector<std::pair<double, double>> lines; // (omega_k hartree, d_k^2)
  };

  CoreModel() = default;
  explicit CoreModel(std::vector<Ion> ions) : ions_(std::move(ions)) {}

  // Built-in parameters for K+, Rb+ and Cs+; other names are rejected.
  static CoreModel for_ions(const std::vector<std::string> &names);

  const std::vector<Ion> &ions() const { return ions_; }
  bool empty() const { return ions_.empty(); }
  double static_value() const;
  double lowest_resonance() const; // +inf when empty

private:
  std::vector<Ion> ions_;
};

// Real-valued core response; a frequency within 1e-12 of a core resonance
// is a domain error.
Complex core_alpha(const CoreModel &core, double omega);

struct ResponseSpectrum {
  std::vector<double> frequencies; // hartree
  std::vector<Complex> alpha_iso, alpha_par, alpha_perp, gamma_aniso;
  std::vector<Complex> alpha_gr, alpha_exc;
  std::vector<Complex> alpha_jm;
  SignConvention convention = SignConvention::ConstantSign;
};

ResponseSpectrum scan(const TransitionTable &table, const CoreModel &core,
                      const std::vector<double> &omega_grid,
                      SignConvention convention,
                      const angular::RotationalWeights &weights);

// Atomic lines for the atom-pair description of a Feshbach molecule.
struct AtomicLine {
  double omega_t = 0; // hartree
  double d2 = 0;      // a.u.^2
  double gamma = 0;   // hartree
};

struct AtomLines {
  std::string label;
  std::vector<AtomicLine> lines;
};

Complex atom_alpha(const std::vector<AtomicLine> &lines, double omega,
                   SignConvention convention);

// File format: columns (label, transition energy cm-1, |d| a.u.,
// lifetime ns optional).
std::vector<AtomLines> load_atomic_lines(const std::string &path,
                                         double default_lifetime_ns);

// Long-range pair polarizability averaged over level v's density:
// parallel and perpendicular components of two polarizable atoms.
std::pair<double, double> longrange_alpha(double alpha1_static,
                                          double alpha2_static,
                                          const solver::LevelBasis &levels,
                                          int v);

// The same expansion at a fixed internuclear distance.
std::pair<double, double> longrange_alpha_fixed(double alpha1, double alpha2,
                                                double r);

} // namespace molpol::response
