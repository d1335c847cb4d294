#include "molpol/solver.hpp"

#include "molpol/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace molpol::solver {

namespace {

constexpr double pi = std::numbers::pi;

double envelope_kinetic(const std::vector<StateOfInterest> &states, double r) {
  double e = -1e300;
  for (const auto &s : states)
    e = std::max(e, s.e_max - s.curve->evaluate(r));
  return e;
}

double local_wavelength(const std::vector<StateOfInterest> &states, double r,
                        double mu, double e_floor) {
  const double e = std::max(envelope_kinetic(states, r), e_floor);
  return 2.0 * pi / std::sqrt(2.0 * mu * e);
}

// Exact sine-basis kinetic matrix for a particle in the box [0, L] with n
// interior points (Colbert-Miller form).
Eigen::MatrixXd sine_dvr_kinetic(int n, double box_length, double mu) {
  Eigen::MatrixXd t(n, n);
  const double pref = (1.0 / (2.0 * mu)) * pi * pi /
                      (2.0 * box_length * box_length);
  const int np1 = n + 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      double val;
      if (i == j) {
        const double s = std::sin(pi * i / np1);
        val = (2.0 * np1 * np1 + 1.0) / 3.0 - 1.0 / (s * s);
      } else {
        const double sm = std::sin(pi * (i - j) / (2.0 * np1));
        const double sp = std::sin(pi * (i + j) / (2.0 * np1));
        val = 1.0 / (sm * sm) - 1.0 / (sp * sp);
        if ((i - j) % 2 != 0)
          val = -val;
      }
      t(i - 1, j - 1) = pref * val;
      t(j - 1, i - 1) = pref * val;
    }
  }
  return t;
}

// First-derivative matrix of the n-mode sine basis on [0,1], in the grid
// representation. Antisymmetric.
Eigen::MatrixXd sine_dvr_derivative(int n) {
  const int np1 = n + 1;
  Eigen::MatrixXd u(n, n);
  const double norm = std::sqrt(2.0 / np1);
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      u(k - 1, i - 1) = norm * std::sin(pi * k * i / np1);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= n; ++k)
    for (int m = 1; m <= n; ++m)
      if ((k + m) % 2 != 0)
        d(k - 1, m - 1) = 4.0 * k * m / double(k * k - m * m);
  Eigen::MatrixXd tmp = d * u;
  return u * tmp;
}

// Kinetic matrix on a mapped grid: T = (1/2mu) (S D S)^T (S D S) with
// S = diag(1/sqrt(J)). Positive semidefinite, so no eigenvalue can fall
// below the potential minimum.
Eigen::MatrixXd mapped_kinetic(const RadialGrid &grid, double mu) {
  const int n = grid.n;
  Eigen::MatrixXd a = sine_dvr_derivative(n);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i)
    s(i) = 1.0 / std::sqrt(grid.jacobian[i]);
  a = s.asDiagonal() * a * s.asDiagonal();
  Eigen::MatrixXd t = (a.transpose() * a) / (2.0 * mu);
  return 0.5 * (t + t.transpose());
}

struct Diagonalized {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
};

Diagonalized diagonalize(const Eigen::MatrixXd &h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericError("eigensolver failed to converge on a " +
                       std::to_string(h.rows()) + "x" +
                       std::to_string(h.cols()) + " Hamiltonian");
  return {es.eigenvalues(), es.eigenvectors()};
}

// Deterministic overall sign: largest-magnitude coefficient positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> c) {
  int imax = 0;
  c.cwiseAbs().maxCoeff(&imax);
  if (c(imax) < 0)
    c = -c;
}

} // namespace

bool RadialGrid::same_family(const RadialGrid &o) const {
  if (n != o.n || nodes.size() != o.nodes.size())
    return false;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i] - o.nodes[i]) > 1e-9 * (1.0 + std::abs(nodes[i])))
      return false;
  return true;
}

RadialGrid build_grid_multi(const std::vector<StateOfInterest> &states,
                            double reduced_mass, const GridConfig &config) {
  if (states.empty())
    throw ConfigError("build_grid: no states given");
  if (!(reduced_mass > 0))
    throw ConfigError("build_grid: reduced mass must be positive");
  for (const auto &s : states) {
    if (!s.curve)
      throw ConfigError("build_grid: null curve");
    if (!(s.e_max > s.curve->asymptote()))
      throw ConfigError("build_grid: E_max must lie above the asymptote of "
                        "state '" +
                        s.curve->label() + "'");
  }

  double data_r_min = 1e300, data_r_max = 0;
  for (const auto &s : states) {
    data_r_min = std::min(data_r_min, s.curve->r_min());
    data_r_max = std::max(data_r_max, s.curve->r_max());
  }
  const double r_max =
      config.r_max > 0 ? config.r_max : 1.5 * data_r_max;

  // Locate the inner turning point of the envelope to place the left wall.
  double r_min = config.r_min;
  const double scan_lo = std::max(1e-3, 0.1 * data_r_min);
  if (r_min <= 0) {
    double r_tp = r_max;
    const int n_scan = 4000;
    for (int i = 0; i <= n_scan; ++i) {
      const double r = scan_lo + (r_max - scan_lo) * i / n_scan;
      if (envelope_kinetic(states, r) > 0) {
        r_tp = r;
        break;
      }
    }
    r_min = std::max(scan_lo, r_tp - std::max(1.0, 0.1 * r_tp));
  }
  if (!(r_max > r_min))
    throw ConfigError("build_grid: R_max must exceed R_min");
  if (envelope_kinetic(states, r_max) < 0)
    throw ConfigError(
        "build_grid: R_max lies below the outer classical turning point at "
        "E_max; enlarge R_max");

  // Scan the envelope for its minimum potential (largest local momentum).
  double e_kin_max = 0;
  {
    const int n_scan = 4000;
    for (int i = 0; i <= n_scan; ++i) {
      const double r = r_min + (r_max - r_min) * i / n_scan;
      e_kin_max = std::max(e_kin_max, envelope_kinetic(states, r));
    }
  }
  const double e_floor =
      config.e_floor > 0 ? config.e_floor : 0.05 * e_kin_max;

  RadialGrid grid;
  grid.r_min = r_min;
  grid.r_max = r_max;
  grid.mapping = config.mapping;

  if (config.mapping == GridMapping::Uniform) {
    const double lambda_min =
        2.0 * pi / std::sqrt(2.0 * reduced_mass * e_kin_max);
    const int n_req = static_cast<int>(
        std::ceil(config.beta * (r_max - r_min) / lambda_min));
    const int n = config.n > 0 ? config.n : std::max(8, n_req);
    if (n < n_req)
      throw ConfigError("build_grid: N = " + std::to_string(config.n) +
                        " is below the density bound; requires at least N = " +
                        std::to_string(n_req));
    grid.n = n;
    grid.h = (r_max - r_min) / (n + 1);
    grid.nodes.resize(n);
    grid.jacobian.assign(n, 1.0);
    grid.weights.assign(n, grid.h);
    for (int i = 0; i < n; ++i)
      grid.nodes[i] = r_min + (i + 1) * grid.h;
    return grid;
  }

  // Cumulative phase integral s(R) = int dR / lambda(R) on an auxiliary
  // grid; the mapped nodes are its equidistant preimages.
  const int n_aux = 32768;
  std::vector<double> aux_r(n_aux + 1), aux_s(n_aux + 1), aux_inv(n_aux + 1);
  const double dr = (r_max - r_min) / n_aux;
  for (int i = 0; i <= n_aux; ++i) {
    aux_r[i] = r_min + i * dr;
    aux_inv[i] =
        1.0 / local_wavelength(states, aux_r[i], reduced_mass, e_floor);
  }
  aux_s[0] = 0;
  for (int i = 1; i <= n_aux; ++i)
    aux_s[i] = aux_s[i - 1] + 0.5 * dr * (aux_inv[i - 1] + aux_inv[i]);
  const double total_phase = aux_s[n_aux];

  const int n_req = static_cast<int>(std::ceil(config.beta * total_phase));
  const int n = config.n > 0 ? config.n : std::max(8, n_req);
  if (n < n_req)
    throw ConfigError("build_grid: N = " + std::to_string(config.n) +
                      " is below the density bound; requires at least N = " +
                      std::to_string(n_req));

  grid.n = n;
  grid.h = 1.0 / (n + 1);
  grid.nodes.resize(n);
  grid.jacobian.resize(n);
  grid.weights.resize(n);
  for (int i = 1; i <= n; ++i) {
    const double target = total_phase * i / (n + 1);
    auto it = std::lower_bound(aux_s.begin(), aux_s.end(), target);
    std::size_t k = std::min<std::size_t>(
        aux_s.size() - 1,
        std::max<std::size_t>(1, static_cast<std::size_t>(it - aux_s.begin())));
    double r = aux_r[k - 1] + (target - aux_s[k - 1]) /
                                  std::max(aux_s[k] - aux_s[k - 1], 1e-300) *
                                  dr;
    for (int newton = 0; newton < 3; ++newton) {
      const double inv_here =
          1.0 / local_wavelength(states, r, reduced_mass, e_floor);
      const double s_here = aux_s[k - 1] + 0.5 * (r - aux_r[k - 1]) *
                                               (aux_inv[k - 1] + inv_here);
      r -= (s_here - target) / inv_here;
      r = std::clamp(r, r_min, r_max);
    }
    grid.nodes[i - 1] = r;
    grid.jacobian[i - 1] =
        total_phase * local_wavelength(states, r, reduced_mass, e_floor);
    grid.weights[i - 1] = grid.h * grid.jacobian[i - 1];
  }
  for (int i = 1; i < n; ++i)
    if (!(grid.nodes[i] > grid.nodes[i - 1]))
      throw NumericError("build_grid: mapped nodes are not increasing");
  return grid;
}

RadialGrid build_grid(const curves::PotentialCurve &curve, double reduced_mass,
                      double e_max, const GridConfig &config) {
  return build_grid_multi({{&curve, e_max}}, reduced_mass, config);
}

double LevelBasis::expectation(
    int v, const std::function<double(double)> &f) const {
  const Level &lv = levels.at(v);
  double acc = 0;
  for (int i = 0; i < grid.n; ++i) {
    double dens = lv.psi[i] * lv.psi[i];
    if (!lv.psi_b.empty())
      dens += lv.psi_b[i] * lv.psi_b[i];
    acc += grid.weights[i] * dens * f(grid.nodes[i]);
  }
  return acc;
}

double LevelBasis::matrix_element(const LevelBasis &bra, int v,
                                  const LevelBasis &ket, int w,
                                  const std::function<double(double)> &f) {
  if (!bra.grid.same_family(ket.grid))
    throw ConfigError("matrix_element: level bases use different grids");
  const Level &lb = bra.levels.at(v);
  const Level &lk = ket.levels.at(w);
  double acc = 0;
  for (int i = 0; i < bra.grid.n; ++i)
    acc += bra.grid.weights[i] * lb.psi[i] * f(bra.grid.nodes[i]) * lk.psi[i];
  return acc;
}

LevelBasis solve_single(const curves::PotentialCurve &curve,
                        const RadialGrid &grid, double reduced_mass,
                        double e_max) {
  if (grid.n <= 0)
    throw ConfigError("solve_single: empty grid");
  const int n = grid.n;

  Eigen::MatrixXd h = grid.mapping == GridMapping::Uniform
                          ? sine_dvr_kinetic(n, grid.r_max - grid.r_min,
                                             reduced_mass)
                          : mapped_kinetic(grid, reduced_mass);
  for (int i = 0; i < n; ++i)
    h(i, i) += curve.evaluate(grid.nodes[i]);

  auto eig = diagonalize(h);

  LevelBasis basis;
  basis.state = curve.label();
  basis.symmetry = curve.symmetry();
  basis.reduced_mass = reduced_mass;
  basis.asymptote = curve.asymptote();
  basis.grid = grid;

  for (int k = 0; k < n; ++k) {
    if (eig.energies(k) > e_max)
      break;
    Eigen::VectorXd c = eig.vectors.col(k);
    fix_sign(c);
    Level lv;
    lv.v = static_cast<int>(basis.levels.size());
    lv.energy = eig.energies(k);
    lv.kind = lv.energy < basis.asymptote ? LevelKind::Bound
                                          : LevelKind::BoxContinuum;
    lv.psi.resize(n);
    double b = 0;
    for (int i = 0; i < n; ++i) {
      lv.psi[i] = c(i) / std::sqrt(grid.weights[i]);
      const double r = grid.nodes[i];
      b += c(i) * c(i) / (2.0 * reduced_mass * r * r);
    }
    lv.b_rot = b;
    basis.levels.push_back(std::move(lv));
  }
  return basis;
}

LevelBasis solve_coupled(const curves::PotentialCurve &curve_a,
                         const curves::PotentialCurve &curve_b,
                         const curves::SpinOrbitCoupling &soc,
                         const RadialGrid &grid, double reduced_mass,
                         double e_max) {
  if (grid.n <= 0)
    throw ConfigError("solve_coupled: empty grid");
  const int n = grid.n;

  Eigen::MatrixXd t = grid.mapping == GridMapping::Uniform
                          ? sine_dvr_kinetic(n, grid.r_max - grid.r_min,
                                             reduced_mass)
                          : mapped_kinetic(grid, reduced_mass);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = t;
  h.bottomRightCorner(n, n) = t;
  for (int i = 0; i < n; ++i) {
    const double r = grid.nodes[i];
    h(i, i) += curve_a.evaluate(r);
    h(n + i, n + i) += curve_b.evaluate(r);
    const double w = soc.evaluate(r);
    h(i, n + i) = w;
    h(n + i, i) = w;
  }

  auto eig = diagonalize(h);

  LevelBasis basis;
  basis.state = curve_a.label();
  basis.state_b = curve_b.label();
  basis.symmetry = curve_a.symmetry();
  basis.symmetry_b = curve_b.symmetry();
  basis.reduced_mass = reduced_mass;
  basis.asymptote = std::min(curve_a.asymptote(), curve_b.asymptote());
  basis.grid = grid;

  for (int k = 0; k < 2 * n; ++k) {
    if (eig.energies(k) > e_max)
      break;
    Eigen::VectorXd c = eig.vectors.col(k);
    fix_sign(c);
    Level lv;
    lv.v = static_cast<int>(basis.levels.size());
    lv.energy = eig.energies(k);
    lv.kind = lv.energy < basis.asymptote ? LevelKind::Bound
                                          : LevelKind::BoxContinuum;
    lv.psi.resize(n);
    lv.psi_b.resize(n);
    double fa = 0, b = 0;
    for (int i = 0; i < n; ++i) {
      lv.psi[i] = c(i) / std::sqrt(grid.weights[i]);
      lv.psi_b[i] = c(n + i) / std::sqrt(grid.weights[i]);
      fa += c(i) * c(i);
      const double r = grid.nodes[i];
      b += (c(i) * c(i) + c(n + i) * c(n + i)) /
           (2.0 * reduced_mass * r * r);
    }
    lv.channel_fraction_a = fa;
    lv.b_rot = b;
    basis.levels.push_back(std::move(lv));
  }
  return basis;
}

} // namespace molpol::solver
