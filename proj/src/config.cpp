#include "molpol/config.hpp"

#include "molpol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace molpol::cli {

namespace {

double parse_double(const std::string &v, const std::string &key) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception &) {
    throw InputError("config key '" + key + "': malformed number '" + v +
                     "'");
  }
  if (pos != v.size())
    throw InputError("config key '" + key + "': malformed number '" + v +
                     "'");
  return x;
}

int parse_int(const std::string &v, const std::string &key) {
  const double x = parse_double(v, key);
  const int i = static_cast<int>(x);
  if (x != i)
    throw InputError("config key '" + key + "': expected an integer");
  return i;
}

std::vector<std::string> split_ws(const std::string &s) {
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t)
    out.push_back(t);
  return out;
}

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  return s.substr(b, e - b + 1);
}

} // namespace

void apply_override(JobConfig &c, const std::string &key,
                    const std::string &value) {
  if (key == "molecule") {
    c.molecule = value;
  } else if (key == "reduced_mass") {
    c.reduced_mass_amu = parse_double(value, key);
  } else if (key == "curve") {
    c.curve_files.push_back(value);
  } else if (key == "tdm") {
    c.tdm_files.push_back(value);
  } else if (key == "pdm") {
    c.pdm_file = value;
  } else if (key == "soc") {
    c.soc_files.push_back(value);
  } else if (key == "atoms") {
    c.atoms_file = value;
  } else if (key == "core") {
    c.core_ions.clear();
    for (const auto &ion : split_ws(value))
      if (ion != "none")
        c.core_ions.push_back(ion);
  } else if (key == "scan") {
    auto t = split_ws(value);
    if (t.size() != 3)
      throw InputError("config key 'scan' needs: lo hi step (cm-1)");
    c.scan_lo_cm = parse_double(t[0], key);
    c.scan_hi_cm = parse_double(t[1], key);
    c.scan_step_cm = parse_double(t[2], key);
  } else if (key == "scan_lo") {
    c.scan_lo_cm = parse_double(value, key);
  } else if (key == "scan_hi") {
    c.scan_hi_cm = parse_double(value, key);
  } else if (key == "scan_step") {
    c.scan_step_cm = parse_double(value, key);
  } else if (key == "lifetime_ns") {
    c.lifetime_ns = parse_double(value, key);
  } else if (key.rfind("lifetime_ns.", 0) == 0) {
    c.lifetime_ns_by_state[key.substr(12)] = parse_double(value, key);
  } else if (key == "convention") {
    if (value == "constant-sign")
      c.convention = response::SignConvention::ConstantSign;
    else if (value == "opposite-sign")
      c.convention = response::SignConvention::OppositeSign;
    else
      throw InputError("config key 'convention': expected constant-sign or "
                       "opposite-sign");
  } else if (key == "J") {
    c.j_rot = parse_int(value, key);
  } else if (key == "M") {
    c.m_rot = parse_int(value, key);
  } else if (key == "v") {
    c.v_level = parse_int(value, key);
  } else if (key == "ground_state") {
    c.ground_state = value;
  } else if (key == "e_max_above") {
    c.e_max_above = parse_double(value, key);
  } else if (key == "mapping") {
    if (value == "uniform")
      c.grid.mapping = solver::GridMapping::Uniform;
    else if (value == "mapped")
      c.grid.mapping = solver::GridMapping::Mapped;
    else
      throw InputError("config key 'mapping': expected uniform or mapped");
  } else if (key == "beta") {
    c.grid.beta = parse_double(value, key);
  } else if (key == "grid_n") {
    c.grid.n = parse_int(value, key);
  } else if (key == "r_min") {
    c.grid.r_min = parse_double(value, key);
  } else if (key == "r_max") {
    c.grid.r_max = parse_double(value, key);
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else if (key == "fit_window") {
    auto t = split_ws(value);
    if (t.size() != 2)
      throw InputError("config key 'fit_window' needs: lo hi (cm-1)");
    c.fit_windows_cm1.emplace_back(parse_double(t[0], key),
                                   parse_double(t[1], key));
  } else if (key == "feshbach") {
    if (value != "atom-pair" && value != "last-bound-level")
      throw InputError("config key 'feshbach': expected atom-pair or "
                       "last-bound-level");
    c.feshbach_source = value;
  } else if (key == "ground_model") {
    c.ground_model_file = value;
  } else {
    throw InputError("unknown config key '" + key + "'");
  }
}

JobConfig parse_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open config file: " + path);
  JobConfig c;
  c.source_path = path;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (auto p = s.find('#'); p != std::string::npos)
      s.erase(p);
    s = trim(s);
    if (s.empty())
      continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw InputError(path + ":" + std::to_string(line) +
                       ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    try {
      apply_override(c, key, value);
    } catch (const InputError &e) {
      throw InputError(path + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  return c;
}

void validate(const JobConfig &c) {
  namespace fs = std::filesystem;
  auto must_exist = [](const std::string &p) {
    if (!p.empty() && !fs::exists(p))
      throw InputError("referenced file does not exist: " + p);
  };
  for (const auto &p : c.curve_files)
    must_exist(p);
  for (const auto &p : c.tdm_files)
    must_exist(p);
  for (const auto &p : c.soc_files)
    must_exist(p);
  must_exist(c.pdm_file);
  must_exist(c.atoms_file);
  must_exist(c.ground_model_file);
  if (!(c.scan_step_cm > 0))
    throw InputError("scan step must be positive");
  if (!(c.scan_lo_cm < c.scan_hi_cm))
    throw InputError("scan range must have lo < hi");
  if (!c.curve_files.empty() && !(c.reduced_mass_amu > 0))
    throw InputError("reduced_mass (amu) must be positive when curves are "
                     "given");
  if (c.j_rot < 0 || std::abs(c.m_rot) > c.j_rot)
    throw InputError("need 0 <= |M| <= J");
  if (c.v_level < 0)
    throw InputError("v must be >= 0");
  if (!(c.lifetime_ns > 0))
    throw InputError("lifetime_ns must be positive");
}

std::string canonical_text(const JobConfig &c) {
  std::ostringstream os;
  os.precision(17);
  os << "molecule=" << c.molecule << "\n";
  os << "reduced_mass=" << c.reduced_mass_amu << "\n";
  for (const auto &p : c.curve_files)
    os << "curve=" << p << "\n";
  for (const auto &p : c.tdm_files)
    os << "tdm=" << p << "\n";
  if (!c.pdm_file.empty())
    os << "pdm=" << c.pdm_file << "\n";
  for (const auto &p : c.soc_files)
    os << "soc=" << p << "\n";
  if (!c.atoms_file.empty())
    os << "atoms=" << c.atoms_file << "\n";
  if (!c.core_ions.empty()) {
    os << "core=";
    for (const auto &ion : c.core_ions)
      os << ion << " ";
    os << "\n";
  }
  os << "scan=" << c.scan_lo_cm << " " << c.scan_hi_cm << " "
     << c.scan_step_cm << "\n";
  os << "lifetime_ns=" << c.lifetime_ns << "\n";
  for (const auto &[state, tau] : c.lifetime_ns_by_state)
    os << "lifetime_ns." << state << "=" << tau << "\n";
  os << "convention="
     << (c.convention == response::SignConvention::ConstantSign
             ? "constant-sign"
             : "opposite-sign")
     << "\n";
  os << "J=" << c.j_rot << "\nM=" << c.m_rot << "\nv=" << c.v_level << "\n";
  os << "ground_state=" << c.ground_state << "\n";
  os << "e_max_above=" << c.e_max_above << "\n";
  os << "mapping="
     << (c.grid.mapping == solver::GridMapping::Uniform ? "uniform"
                                                        : "mapped")
     << "\n";
  os << "beta=" << c.grid.beta << "\ngrid_n=" << c.grid.n << "\nr_min="
     << c.grid.r_min << "\nr_max=" << c.grid.r_max << "\n";
  for (const auto &[lo, hi] : c.fit_windows_cm1)
    os << "fit_window=" << lo << " " << hi << "\n";
  os << "feshbach=" << c.feshbach_source << "\n";
  if (!c.ground_model_file.empty())
    os << "ground_model=" << c.ground_model_file << "\n";
  return os.str();
}

std::string config_hash(const JobConfig &c) {
  const std::string text = canonical_text(c);
  std::uint64_t h = 1469598103934665603ull; // FNV-1a
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

} // namespace molpol::cli
