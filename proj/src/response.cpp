#include "molpol/response.hpp"

#include "molpol/errors.hpp"
#include "molpol/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace molpol::response {

namespace {

// One transition's contribution per unit d^2. Computed from the explicit
// real/imaginary decomposition so both conventions share the identical real
// part bit for bit.
Complex response_term(double omega_t, double gamma, double omega,
                      SignConvention convention) {
  const double hg = 0.5 * gamma;
  const double xr = omega_t - omega;
  const double xa = omega_t + omega;
  const double dr = xr * xr + hg * hg;
  const double da = xa * xa + hg * hg;
  const double re = xr / dr + xa / da;
  const double im = convention == SignConvention::ConstantSign
                        ? hg / dr + hg / da
                        : hg / dr - hg / da;
  return {re, im};
}

double gamma_from_ns(double lifetime_ns) {
  if (!(lifetime_ns > 0))
    throw ConfigError("lifetime must be positive");
  return units::lifetime_ns_to_hartree(lifetime_ns);
}

} // namespace

TransitionTable
build_transition_table(const solver::LevelBasis &ground, int v,
                       const std::vector<ExcitedState> &excited,
                       const curves::DipoleFunction *ground_pdm,
                       double lifetime_ns) {
  if (v < 0 || v >= static_cast<int>(ground.levels.size()))
    throw ConfigError("build_transition_table: ground level v=" +
                      std::to_string(v) + " not present in the basis");
  const double default_gamma = gamma_from_ns(lifetime_ns);
  const solver::Level &gl = ground.levels[v];
  const auto &grid = ground.grid;

  TransitionTable table;

  // Transitions within the ground electronic state, J=0 -> J'=1. The pure
  // rotational line sits at 2B_v; rovibrational lines at dE_vib + 2B_v'.
  if (ground_pdm) {
    if (ground_pdm->from_state() != ground.state ||
        ground_pdm->to_state() != ground.state)
      throw ConfigError("ground PDM must connect the ground state to itself");
    std::vector<double> pdm_at_node(grid.n);
    for (int i = 0; i < grid.n; ++i)
      pdm_at_node[i] = ground_pdm->evaluate(grid.nodes[i]);

    for (const auto &lv : ground.levels) {
      double me = 0;
      for (int i = 0; i < grid.n; ++i)
        me += grid.weights[i] * gl.psi[i] * pdm_at_node[i] * lv.psi[i];
      const double omega_t = lv.v == gl.v
                                 ? 2.0 * gl.b_rot
                                 : lv.energy - gl.energy + 2.0 * lv.b_rot;
      if (!(omega_t > 0))
        continue; // only upward entries enter the table
      Transition t;
      t.state = ground.state;
      t.v = lv.v;
      t.omega_t = omega_t;
      t.d2 = me * me;
      t.gamma = default_gamma;
      t.channel = Channel::Parallel;
      t.origin = Origin::GroundRovib;
      table.entries.push_back(t);
    }
  }

  for (const auto &exc : excited) {
    if (!exc.basis || !exc.tdm)
      throw ConfigError("build_transition_table: null excited state entry");
    const auto &basis = *exc.basis;
    if (!grid.same_family(basis.grid))
      throw ConfigError("build_transition_table: excited state '" +
                        basis.state + "' was solved on a different grid");

    // Route the dipole to the channel it couples to; a spin-orbit-coupled
    // basis uses only the dipole-allowed component of each level.
    bool use_channel_b = false;
    curves::Symmetry sym = basis.symmetry;
    if (exc.tdm->to_state() == basis.state) {
      use_channel_b = false;
      sym = basis.symmetry;
    } else if (!basis.state_b.empty() &&
               exc.tdm->to_state() == basis.state_b) {
      use_channel_b = true;
      sym = basis.symmetry_b;
    } else {
      throw ConfigError("dipole " + exc.tdm->from_state() + "-" +
                        exc.tdm->to_state() + " does not reach state '" +
                        basis.state + "'");
    }
    if (exc.tdm->from_state() != ground.state)
      throw ConfigError("dipole " + exc.tdm->from_state() + "-" +
                        exc.tdm->to_state() + " does not start from '" +
                        ground.state + "'");
    const bool perp = sym == curves::Symmetry::Pi;
    if ((perp && exc.tdm->q_component() == 0) ||
        (!perp && exc.tdm->q_component() != 0))
      throw ConfigError("dipole " + exc.tdm->from_state() + "-" +
                        exc.tdm->to_state() +
                        ": q component inconsistent with the target state "
                        "symmetry");

    const double gamma = exc.lifetime_ns > 0 ? gamma_from_ns(exc.lifetime_ns)
                                             : default_gamma;
    std::vector<double> tdm_at_node(grid.n);
    for (int i = 0; i < grid.n; ++i)
      tdm_at_node[i] = exc.tdm->evaluate(grid.nodes[i]);

    for (const auto &lv : basis.levels) {
      const auto &psi = use_channel_b ? lv.psi_b : lv.psi;
      double me = 0;
      for (int i = 0; i < grid.n; ++i)
        me += grid.weights[i] * gl.psi[i] * tdm_at_node[i] * psi[i];
      const double omega_t = lv.energy - gl.energy;
      if (!(omega_t > 0))
        throw DataError("excited level " + basis.state + " v=" +
                        std::to_string(lv.v) +
                        " lies below the ground level");
      Transition t;
      t.state = use_channel_b ? basis.state_b : basis.state;
      t.v = lv.v;
      t.omega_t = omega_t;
      t.d2 = me * me;
      t.gamma = gamma;
      t.channel = perp ? Channel::Perpendicular : Channel::Parallel;
      t.origin = Origin::Electronic;
      table.entries.push_back(t);
    }
  }
  return table;
}

AlphaPair alpha_sum(const TransitionTable &table, double omega,
                    SignConvention convention) {
  AlphaPair a{{0, 0}, {0, 0}};
  for (const auto &t : table.entries) {
    const Complex term = t.d2 * response_term(t.omega_t, t.gamma, omega,
                                              convention);
    (t.channel == Channel::Parallel ? a.par : a.perp) += term;
  }
  return a;
}

CoreModel CoreModel::for_ions(const std::vector<std::string> &names) {
  using units::cm1_to_hartree;
  std::vector<Ion> ions;
  for (const auto &name : names) {
    if (name == "K+")
      ions.push_back({name,
                      {{cm1_to_hartree(157105.0), 0.304},
                       {cm1_to_hartree(199440.0), 1.383}}});
    else if (name == "Rb+")
      ions.push_back({name,
                      {{cm1_to_hartree(165912.0), 2.728},
                       {cm1_to_hartree(362918.0), 1.401}}});
    else if (name == "Cs+")
      ions.push_back({name,
                      {{cm1_to_hartree(142044.0), 4.488},
                       {cm1_to_hartree(553515.0), 1.860}}});
    else
      throw ConfigError("no built-in core parameters for ion '" + name +
                        "'");
  }
  return CoreModel(std::move(ions));
}

double CoreModel::static_value() const {
  double a = 0;
  for (const auto &ion : ions_)
    for (const auto &[w, d2] : ion.lines)
      a += 2.0 * d2 / w;
  return a;
}

double CoreModel::lowest_resonance() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto &ion : ions_)
    for (const auto &[w, d2] : ion.lines)
      lo = std::min(lo, w);
  return lo;
}

Complex core_alpha(const CoreModel &core, double omega) {
  double a = 0;
  for (const auto &ion : core.ions()) {
    for (const auto &[wk, d2] : ion.lines) {
      if (std::abs(omega - wk) < 1e-12 || std::abs(omega + wk) < 1e-12)
        throw DomainError("core_alpha: frequency coincides with a core "
                          "resonance of " +
                          ion.name);
      a += 2.0 * wk * d2 / (wk * wk - omega * omega);
    }
  }
  return {a, 0.0};
}

ResponseSpectrum scan(const TransitionTable &table, const CoreModel &core,
                      const std::vector<double> &omega_grid,
                      SignConvention convention,
                      const angular::RotationalWeights &weights) {
  ResponseSpectrum sp;
  sp.convention = convention;
  sp.frequencies = omega_grid;
  const std::size_t m = omega_grid.size();
  sp.alpha_iso.resize(m);
  sp.alpha_par.resize(m);
  sp.alpha_perp.resize(m);
  sp.gamma_aniso.resize(m);
  sp.alpha_gr.resize(m);
  sp.alpha_exc.resize(m);
  sp.alpha_jm.resize(m);
  const double w_par = weights.w_par.value();
  const double w_perp = weights.w_perp.value();

  for (std::size_t k = 0; k < m; ++k) {
    const double omega = omega_grid[k];
    Complex par{0, 0}, perp{0, 0}, par_gr{0, 0};
    for (const auto &t : table.entries) {
      const Complex term =
          t.d2 * response_term(t.omega_t, t.gamma, omega, convention);
      if (t.channel == Channel::Parallel) {
        par += term;
        if (t.origin == Origin::GroundRovib)
          par_gr += term;
      } else {
        perp += term;
      }
    }
    const Complex c = core_alpha(core, omega);
    par += c;
    perp += c;
    const Complex iso = par / 3.0 + 2.0 * perp / 3.0;
    const Complex gr = par_gr / 3.0;
    sp.alpha_par[k] = par;
    sp.alpha_perp[k] = perp;
    sp.alpha_iso[k] = iso;
    sp.gamma_aniso[k] = par - perp;
    sp.alpha_gr[k] = gr;
    sp.alpha_exc[k] = iso - gr;
    sp.alpha_jm[k] = w_par * par + w_perp * perp;
  }
  return sp;
}

Complex atom_alpha(const std::vector<AtomicLine> &lines, double omega,
                   SignConvention convention) {
  Complex a{0, 0};
  for (const auto &l : lines)
    a += l.d2 * response_term(l.omega_t, l.gamma, omega, convention);
  return a;
}

std::vector<AtomLines> load_atomic_lines(const std::string &path,
                                         double default_lifetime_ns) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open file: " + path);
  std::vector<AtomLines> atoms;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (auto p = s.find('#'); p != std::string::npos)
      s.erase(p);
    std::istringstream ss(s);
    std::string label;
    if (!(ss >> label))
      continue;
    double e_cm = 0, d = 0, tau_ns = default_lifetime_ns;
    if (!(ss >> e_cm >> d))
      throw ParseError(path + ":" + std::to_string(line) +
                       ": expected columns label, energy(cm-1), |d|(a.u.)");
    ss >> tau_ns; // optional
    if (!(e_cm > 0) || !(tau_ns > 0))
      throw ValidationError(path + ":" + std::to_string(line) +
                            ": transition energy and lifetime must be "
                            "positive");
    AtomicLine al;
    al.omega_t = units::cm1_to_hartree(e_cm);
    al.d2 = d * d;
    al.gamma = units::lifetime_ns_to_hartree(tau_ns);
    auto it = std::find_if(atoms.begin(), atoms.end(),
                           [&](const AtomLines &a) { return a.label == label; });
    if (it == atoms.end()) {
      atoms.push_back({label, {al}});
    } else {
      it->lines.push_back(al);
    }
  }
  if (atoms.empty())
    throw ValidationError(path + ": no atomic lines found");
  return atoms;
}

std::pair<double, double> longrange_alpha_fixed(double alpha1, double alpha2,
                                                double r) {
  const double r3 = r * r * r;
  const double r6 = r3 * r3;
  const double p = alpha1 * alpha2;
  const double s = alpha1 + alpha2;
  const double par = s + 4.0 * p / r3 + 4.0 * p * s / r6;
  const double perp = s - 2.0 * p / r3 + p * s / r6;
  return {par, perp};
}

std::pair<double, double> longrange_alpha(double alpha1_static,
                                          double alpha2_static,
                                          const solver::LevelBasis &levels,
                                          int v) {
  if (v < 0 || v >= static_cast<int>(levels.levels.size()))
    throw ConfigError("longrange_alpha: level v=" + std::to_string(v) +
                      " not present");
  const double inv_r3 = levels.expectation(
      v, [](double r) { return 1.0 / (r * r * r); });
  const double inv_r6 = levels.expectation(v, [](double r) {
    const double r3 = r * r * r;
    return 1.0 / (r3 * r3);
  });
  const double p = alpha1_static * alpha2_static;
  const double s = alpha1_static + alpha2_static;
  const double par = s + 4.0 * p * inv_r3 + 4.0 * p * s * inv_r6;
  const double perp = s - 2.0 * p * inv_r3 + p * s * inv_r6;
  return {par, perp};
}

} // namespace molpol::response
