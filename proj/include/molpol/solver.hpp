#pragma once

#include "molpol/curves.hpp"

#include <functional>
#include <string>
#include <vector>

namespace molpol::solver {

enum class GridMapping { Uniform, Mapped };

struct GridConfig {
  GridMapping mapping = GridMapping::Mapped;
  int n = 0;           // 0: choose from the density rule
  double beta = 2.2;   // points per local de Broglie wavelength
  double e_floor = 0;  // 0: 5% of (E_max - V_min)
  double r_min = 0;    // 0: inner turning point at E_max minus a margin
  double r_max = 0;    // 0: 1.5x the last tabulated point
};

// Radial grid for a sine-basis DVR with hard walls at r_min and r_max. A
// mapped grid concentrates nodes where the local wavelength is short; the
// working coordinate x in [0,1] is uniform and jacobian = dR/dx at the nodes.
struct RadialGrid {
  double r_min = 0, r_max = 0;
  int n = 0;
  GridMapping mapping = GridMapping::Uniform;
  double h = 0;                 // working-coordinate spacing
  std::vector<double> nodes;    // R_i, strictly increasing
  std::vector<double> jacobian; // dR/dx at nodes; all 1 for uniform
  std::vector<double> weights;  // quadrature weight of each node, h * J_i

  bool same_family(const RadialGrid &o) const;
};

struct StateOfInterest {
  const curves::PotentialCurve *curve = nullptr;
  double e_max = 0; // hartree, absolute scale
};

RadialGrid build_grid(const curves::PotentialCurve &curve, double reduced_mass,
                      double e_max, const GridConfig &config = {});

// One grid dense enough for every listed state; all bases solved on it can
// be combined in matrix elements without re-interpolation.
RadialGrid build_grid_multi(const std::vector<StateOfInterest> &states,
                            double reduced_mass,
                            const GridConfig &config = {});

enum class LevelKind { Bound, BoxContinuum };

struct Level {
  int v = 0;
  double energy = 0; // hartree, absolute scale
  LevelKind kind = LevelKind::Bound;
  double b_rot = 0;          // <1/(2 mu R^2)>
  std::vector<double> psi;   // wavefunction amplitude per node
  std::vector<double> psi_b; // second channel (coupled solves only)
  double channel_fraction_a = 1.0;
};

struct LevelBasis {
  std::string state;                 // channel-a label
  std::string state_b;               // empty for single-channel solves
  curves::Symmetry symmetry = curves::Symmetry::Sigma;
  curves::Symmetry symmetry_b = curves::Symmetry::Sigma;
  double reduced_mass = 0;
  double asymptote = 0; // dissociation threshold used for the bound test
  RadialGrid grid;
  std::vector<Level> levels;

  // Quadrature of f(R) over |psi_v|^2 (channel a plus channel b).
  double expectation(int v, const std::function<double(double)> &f) const;
  // <v| f(R) |w> between two bases sharing this grid, channel a only.
  static double matrix_element(const LevelBasis &bra, int v,
                               const LevelBasis &ket, int w,
                               const std::function<double(double)> &f);
};

LevelBasis solve_single(const curves::PotentialCurve &curve,
                        const RadialGrid &grid, double reduced_mass,
                        double e_max);

LevelBasis solve_coupled(const curves::PotentialCurve &curve_a,
                         const curves::PotentialCurve &curve_b,
                         const curves::SpinOrbitCoupling &soc,
                         const RadialGrid &grid, double reduced_mass,
                         double e_max);

} // namespace molpol::solver
