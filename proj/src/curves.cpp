#include "molpol/curves.hpp"

#include "molpol/errors.hpp"
#include "molpol/units.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace molpol::curves {

namespace {

using units::Unit;

Unit parse_length_unit(const std::string &s, const std::string &ctx) {
  if (s == "bohr" || s == "au")
    return Unit::Bohr;
  if (s == "nm")
    return Unit::Nanometer;
  if (s == "angstrom" || s == "A")
    return Unit::Angstrom;
  throw ParseError(ctx + ": unknown length unit '" + s + "'");
}

Unit parse_energy_unit(const std::string &s, const std::string &ctx) {
  if (s == "hartree" || s == "au")
    return Unit::Hartree;
  if (s == "cm-1" || s == "cm^-1")
    return Unit::InvCm;
  throw ParseError(ctx + ": unknown energy unit '" + s + "'");
}

struct MorseModel {
  double de, a, re; // in file units at parse time
};

// Common text-format front end: '#' directives and comments, then a
// whitespace-separated numeric body.
struct CurveFile {
  std::string path;
  Unit length_unit = Unit::Bohr;
  Unit y_is_dipole = Unit::Hartree; // set per file kind
  std::string label, symmetry = "Sigma", spin = "singlet";
  std::string from, to;
  int q = 0;
  std::optional<double> asymptote, stitch_r;
  std::vector<std::pair<int, double>> long_range; // file units
  std::optional<MorseModel> model;
  std::vector<double> col_r, col_y;
  std::vector<int> body_lines; // line number per body row
  Unit y_unit = Unit::InvCm;

  std::string ctx(int line) const {
    return path + ":" + std::to_string(line);
  }
};

bool is_number_start(const std::string &tok) {
  return !tok.empty() &&
         (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '-' ||
          tok[0] == '+' || tok[0] == '.');
}

double to_double(const std::string &tok, const std::string &ctx) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception &) {
    throw ParseError(ctx + ": malformed number '" + tok + "'");
  }
  if (pos != tok.size())
    throw ParseError(ctx + ": malformed number '" + tok + "'");
  return v;
}

void parse_directive(CurveFile &f, const std::string &body, int line,
                     bool dipole_file) {
  std::istringstream ss(body);
  std::string key;
  ss >> key;
  if (!key.empty() && key.back() == ':')
    key.pop_back();
  auto rest_tokens = [&]() {
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) {
      if (!t.empty() && t.back() == ':')
        t.pop_back();
      toks.push_back(t);
    }
    return toks;
  };
  const std::string ctx = f.ctx(line);

  if (key == "units") {
    auto t = rest_tokens();
    if (t.size() != 2)
      throw ParseError(ctx + ": units directive needs <length> <energy>");
    f.length_unit = parse_length_unit(t[0], ctx);
    if (dipole_file) {
      if (t[1] == "au")
        f.y_unit = Unit::DipoleAu;
      else if (t[1] == "debye")
        f.y_unit = Unit::Debye;
      else
        throw ParseError(ctx + ": unknown dipole unit '" + t[1] + "'");
    } else {
      f.y_unit = parse_energy_unit(t[1], ctx);
    }
  } else if (key == "label") {
    auto t = rest_tokens();
    if (t.size() != 1)
      throw ParseError(ctx + ": label directive needs one token");
    f.label = t[0];
  } else if (key == "symmetry") {
    auto t = rest_tokens();
    if (t.size() != 1 || (t[0] != "Sigma" && t[0] != "Pi"))
      throw ParseError(ctx + ": symmetry must be Sigma or Pi");
    f.symmetry = t[0];
  } else if (key == "spin") {
    auto t = rest_tokens();
    if (t.size() != 1 || (t[0] != "singlet" && t[0] != "triplet"))
      throw ParseError(ctx + ": spin must be singlet or triplet");
    f.spin = t[0];
  } else if (key == "asymptote") {
    auto t = rest_tokens();
    if (t.size() != 1)
      throw ParseError(ctx + ": asymptote directive needs one value");
    f.asymptote = to_double(t[0], ctx);
  } else if (key == "stitch_R" || key == "stitch_r") {
    auto t = rest_tokens();
    if (t.size() != 1)
      throw ParseError(ctx + ": stitch_R directive needs one value");
    f.stitch_r = to_double(t[0], ctx);
  } else if (key.size() > 1 && key[0] == 'C' &&
             std::isdigit(static_cast<unsigned char>(key[1]))) {
    const int n = std::stoi(key.substr(1));
    if (n < 3)
      throw ParseError(ctx + ": long-range power must be >= 3");
    auto t = rest_tokens();
    if (t.size() != 1)
      throw ParseError(ctx + ": " + key + " directive needs one value");
    f.long_range.emplace_back(n, to_double(t[0], ctx));
  } else if (key == "model") {
    auto t = rest_tokens();
    if (t.empty() || t[0] != "morse")
      throw ParseError(ctx + ": only 'model morse' is supported");
    MorseModel m{0, 0, 0};
    bool got_de = false, got_a = false, got_re = false;
    for (std::size_t i = 1; i < t.size(); ++i) {
      auto eq = t[i].find('=');
      if (eq == std::string::npos)
        throw ParseError(ctx + ": model parameter '" + t[i] +
                         "' is not key=value");
      const std::string k = t[i].substr(0, eq);
      const double v = to_double(t[i].substr(eq + 1), ctx);
      if (k == "De") {
        m.de = v;
        got_de = true;
      } else if (k == "a") {
        m.a = v;
        got_a = true;
      } else if (k == "Re") {
        m.re = v;
        got_re = true;
      } else {
        throw ParseError(ctx + ": unknown morse parameter '" + k + "'");
      }
    }
    if (!got_de || !got_a || !got_re)
      throw ParseError(ctx + ": model morse needs De, a and Re");
    f.model = m;
  } else if (key == "grid") {
    auto t = rest_tokens();
    if (t.size() != 3)
      throw ParseError(ctx + ": grid directive needs <Rmin> <Rmax> <N>");
    const double lo = to_double(t[0], ctx), hi = to_double(t[1], ctx);
    const double nd = to_double(t[2], ctx);
    const int n = static_cast<int>(nd);
    if (!(hi > lo) || n < 2 || nd != n)
      throw ParseError(ctx + ": grid needs Rmax > Rmin and integer N >= 2");
    for (int i = 0; i < n; ++i)
      f.col_r.push_back(lo + (hi - lo) * i / (n - 1));
  } else if (key == "from") {
    auto t = rest_tokens();
    if (t.size() != 1)
      throw ParseError(ctx + ": from directive needs one token");
    f.from = t[0];
  } else if (key == "to") {
    auto t = rest_tokens();
    if (t.size() != 1)
      throw ParseError(ctx + ": to directive needs one token");
    f.to = t[0];
  } else if (key == "states") {
    auto t = rest_tokens();
    if (t.size() != 2)
      throw ParseError(ctx + ": states directive needs two labels");
    f.from = t[0];
    f.to = t[1];
  } else if (key == "q") {
    auto t = rest_tokens();
    if (t.size() != 1)
      throw ParseError(ctx + ": q directive needs one value");
    const double q = to_double(t[0], ctx);
    if (q != 0 && q != 1 && q != -1)
      throw ParseError(ctx + ": q must be 0, +1 or -1");
    f.q = static_cast<int>(q);
  }
  // Unrecognised '#' lines are plain comments.
}

CurveFile read_curve_file(const std::string &path, bool dipole_file) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open file: " + path);
  CurveFile f;
  f.path = path;
  f.y_unit = dipole_file ? Unit::DipoleAu : Unit::InvCm;
  std::string raw;
  int line = 0;
  bool body_started = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (auto p = s.find('\r'); p != std::string::npos)
      s.erase(p);
    std::istringstream ss(s);
    std::string first;
    if (!(ss >> first))
      continue; // blank
    if (first[0] == '#') {
      if (body_started)
        continue; // trailing comments
      std::string body = s.substr(s.find('#') + 1);
      parse_directive(f, body, line, dipole_file);
      continue;
    }
    body_started = true;
    std::vector<std::string> toks{first};
    std::string t;
    while (ss >> t)
      toks.push_back(t);
    for (const auto &tok : toks)
      if (!is_number_start(tok))
        throw ParseError(f.ctx(line) + ": malformed line '" + s + "'");
    if (toks.size() == 1 && f.model) {
      f.col_r.push_back(to_double(toks[0], f.ctx(line)));
      f.body_lines.push_back(line);
    } else if (toks.size() == 2) {
      f.col_r.push_back(to_double(toks[0], f.ctx(line)));
      f.col_y.push_back(to_double(toks[1], f.ctx(line)));
      f.body_lines.push_back(line);
    } else {
      throw ParseError(f.ctx(line) + ": expected two columns, got " +
                       std::to_string(toks.size()));
    }
  }
  if (!f.col_y.empty() && f.col_y.size() != f.col_r.size())
    throw ParseError(path + ": mixed one- and two-column body");
  return f;
}

void check_monotone(const CurveFile &f) {
  for (std::size_t i = 1; i < f.col_r.size(); ++i) {
    if (!(f.col_r[i] > f.col_r[i - 1])) {
      const int line = i < f.body_lines.size() ? f.body_lines[i] : 0;
      throw ValidationError(f.ctx(line) +
                            ": R values must be strictly increasing");
    }
  }
}

} // namespace

PotentialCurve::PotentialCurve(std::string label, Symmetry symmetry, Spin spin,
                               std::vector<double> r, std::vector<double> v,
                               std::vector<std::pair<int, double>> long_range,
                               std::optional<double> asymptote,
                               std::optional<double> stitch_r)
    : label_(std::move(label)), symmetry_(symmetry), spin_(spin),
      r_(std::move(r)), v_(std::move(v)), long_range_(std::move(long_range)) {
  if (r_.size() < 8)
    throw ValidationError("potential curve '" + label_ +
                          "' needs at least 8 points");
  if (r_.size() != v_.size())
    throw ValidationError("potential curve '" + label_ +
                          "': R and V column lengths differ");
  for (std::size_t i = 1; i < r_.size(); ++i)
    if (!(r_[i] > r_[i - 1]))
      throw ValidationError("potential curve '" + label_ +
                            "': R must be strictly increasing");
  if (r_.front() <= 0.0)
    throw ValidationError("potential curve '" + label_ + "': R must be > 0");
  if (!long_range_.empty() && !asymptote)
    throw ValidationError("potential curve '" + label_ +
                          "': long-range coefficients given without an "
                          "asymptote");
  asymptote_ = asymptote ? *asymptote : v_.back();
  stitch_r_ = stitch_r ? *stitch_r : r_.back();
  if (stitch_r_ <= r_.front() || stitch_r_ > r_.back())
    throw ValidationError("potential curve '" + label_ +
                          "': stitch_R outside the tabulated range");

  spline_ = CubicSpline(r_, v_);
  v_min_ = v_[0];
  for (double x : v_)
    v_min_ = std::min(v_min_, x);

  // Inner wall through the first three points; requires rising repulsion.
  const double r0 = r_[0], r1 = r_[1], r2 = r_[2];
  const double v0 = v_[0], v1 = v_[1], v2 = v_[2];
  if (v0 > v1 && v1 > v2) {
    const double target = (v0 - v1) / (v1 - v2);
    auto ratio = [&](double b) {
      const double u1 = std::exp(-b * (r1 - r0));
      const double u2 = std::exp(-b * (r2 - r0));
      return (1.0 - u1) / (u1 - u2);
    };
    double lo = 1e-8, hi = 1.0;
    if (ratio(lo) < target) {
      while (ratio(hi) < target && hi < 1e6)
        hi *= 2.0;
      if (hi < 1e6) {
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (ratio(mid) < target ? lo : hi) = mid;
        }
        wall_b_ = 0.5 * (lo + hi);
        const double u1 = std::exp(-wall_b_ * (r1 - r0));
        wall_a_ = (v0 - v1) / (1.0 - u1);
        wall_c_ = v0 - wall_a_;
        wall_ok_ = true;
      }
    }
  }

  blend_v_ = spline_(stitch_r_) - tail(stitch_r_);
  blend_d_ = spline_.derivative(stitch_r_) - tail_derivative(stitch_r_);
}

double PotentialCurve::tail(double r) const {
  double v = asymptote_;
  for (const auto &[n, cn] : long_range_)
    v -= cn / std::pow(r, n);
  return v;
}

double PotentialCurve::tail_derivative(double r) const {
  double d = 0.0;
  for (const auto &[n, cn] : long_range_)
    d += n * cn / std::pow(r, n + 1);
  return d;
}

double PotentialCurve::evaluate(double r) const {
  if (!(r > 0.0))
    throw DomainError("potential curve '" + label_ +
                      "': R must be positive");
  if (r < r_.front()) {
    if (wall_ok_)
      return wall_a_ * std::exp(-wall_b_ * (r - r_.front())) + wall_c_;
    return spline_(r);
  }
  if (r <= stitch_r_)
    return spline_(r);
  const double x = r - stitch_r_;
  const double g =
      (blend_v_ + (blend_d_ + blend_eta_ * blend_v_) * x) *
      std::exp(-blend_eta_ * x);
  return tail(r) + g;
}

double PotentialCurve::derivative(double r) const {
  if (!(r > 0.0))
    throw DomainError("potential curve '" + label_ +
                      "': R must be positive");
  if (r < r_.front()) {
    if (wall_ok_)
      return -wall_b_ * wall_a_ * std::exp(-wall_b_ * (r - r_.front()));
    return spline_.derivative(r);
  }
  if (r <= stitch_r_)
    return spline_.derivative(r);
  const double x = r - stitch_r_;
  const double s = blend_d_ + blend_eta_ * blend_v_;
  const double g = (s - blend_eta_ * (blend_v_ + s * x)) *
                   std::exp(-blend_eta_ * x);
  return tail_derivative(r) + g;
}

DipoleFunction::DipoleFunction(std::string from_state, std::string to_state,
                               int q_component, std::vector<double> r,
                               std::vector<double> d)
    : from_(std::move(from_state)), to_(std::move(to_state)), q_(q_component),
      r_(std::move(r)), d_(std::move(d)) {
  if (r_.size() < 2 || r_.size() != d_.size())
    throw ValidationError("dipole function " + from_ + "-" + to_ +
                          ": needs matching R and d columns");
  for (std::size_t i = 1; i < r_.size(); ++i)
    if (!(r_[i] > r_[i - 1]))
      throw ValidationError("dipole function " + from_ + "-" + to_ +
                            ": R must be strictly increasing");
  if (q_ != 0 && q_ != 1 && q_ != -1)
    throw ValidationError("dipole function " + from_ + "-" + to_ +
                          ": q must be 0 or +-1");
  spline_ = CubicSpline(r_, d_);
}

double DipoleFunction::evaluate(double r) const {
  if (r <= r_.front())
    return d_.front();
  if (r >= r_.back())
    return d_.back();
  return spline_(r);
}

SpinOrbitCoupling::SpinOrbitCoupling(std::string state_a, std::string state_b,
                                     std::vector<double> r,
                                     std::vector<double> w)
    : a_(std::move(state_a)), b_(std::move(state_b)), r_(std::move(r)),
      w_(std::move(w)) {
  if (r_.size() < 2 || r_.size() != w_.size())
    throw ValidationError("spin-orbit coupling " + a_ + "-" + b_ +
                          ": needs matching R and W columns");
  for (std::size_t i = 1; i < r_.size(); ++i)
    if (!(r_[i] > r_[i - 1]))
      throw ValidationError("spin-orbit coupling " + a_ + "-" + b_ +
                            ": R must be strictly increasing");
  spline_ = CubicSpline(r_, w_);
}

double SpinOrbitCoupling::evaluate(double r) const {
  if (r <= r_.front())
    return w_.front();
  if (r >= r_.back())
    return w_.back();
  return spline_(r);
}

PotentialCurve load_curve(const std::string &path) {
  CurveFile f = read_curve_file(path, false);
  check_monotone(f);
  if (f.col_r.empty())
    throw ParseError(path + ": no grid points");

  const double lscale = units::convert(1.0, f.length_unit, Unit::Bohr);
  const double escale = units::convert(1.0, f.y_unit, Unit::Hartree);

  std::vector<double> r(f.col_r), v;
  for (double &x : r)
    x *= lscale;

  if (f.model) {
    const double de = f.model->de * escale;
    const double a = f.model->a / lscale;
    const double re = f.model->re * lscale;
    const double asym = f.asymptote ? *f.asymptote * escale : 0.0;
    v.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double y = 1.0 - std::exp(-a * (r[i] - re));
      v[i] = asym + de * (y * y - 1.0);
    }
    f.asymptote = asym; // already in hartree
  } else {
    if (f.col_y.size() != f.col_r.size())
      throw ParseError(path + ": body must have two columns R V");
    v = f.col_y;
    for (double &x : v)
      x *= escale;
    if (f.asymptote)
      f.asymptote = *f.asymptote * escale;
  }

  std::vector<std::pair<int, double>> lr;
  for (auto [n, cn] : f.long_range)
    lr.emplace_back(n, cn * escale * std::pow(lscale, n));
  std::optional<double> stitch;
  if (f.stitch_r)
    stitch = *f.stitch_r * lscale;

  std::string label = f.label;
  if (label.empty()) {
    auto slash = path.find_last_of('/');
    auto stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
    if (auto dot = stem.find('.'); dot != std::string::npos)
      stem = stem.substr(0, dot);
    label = stem;
  }
  return PotentialCurve(label,
                        f.symmetry == "Pi" ? Symmetry::Pi : Symmetry::Sigma,
                        f.spin == "triplet" ? Spin::Triplet : Spin::Singlet,
                        std::move(r), std::move(v), std::move(lr), f.asymptote,
                        stitch);
}

DipoleFunction load_dipole(const std::string &path) {
  CurveFile f = read_curve_file(path, true);
  check_monotone(f);
  if (f.col_r.size() != f.col_y.size() || f.col_r.empty())
    throw ParseError(path + ": body must have two columns R d");
  const double lscale = units::convert(1.0, f.length_unit, Unit::Bohr);
  const double dscale = units::convert(1.0, f.y_unit, Unit::DipoleAu);
  std::vector<double> r(f.col_r), d(f.col_y);
  for (double &x : r)
    x *= lscale;
  for (double &x : d)
    x *= dscale;
  return DipoleFunction(f.from, f.to, f.q, std::move(r), std::move(d));
}

SpinOrbitCoupling load_soc(const std::string &path) {
  CurveFile f = read_curve_file(path, false);
  check_monotone(f);
  if (f.col_r.size() != f.col_y.size() || f.col_r.empty())
    throw ParseError(path + ": body must have two columns R W");
  const double lscale = units::convert(1.0, f.length_unit, Unit::Bohr);
  const double escale = units::convert(1.0, f.y_unit, Unit::Hartree);
  std::vector<double> r(f.col_r), w(f.col_y);
  for (double &x : r)
    x *= lscale;
  for (double &x : w)
    x *= escale;
  return SpinOrbitCoupling(f.from, f.to, std::move(r), std::move(w));
}

} // namespace molpol::curves
