#pragma once

#include "molpol/response.hpp"
#include "molpol/solver.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace molpol::cli {

// One job: a molecule's input files plus scan and model switches. Parsed
// from a key=value text file; individual keys can be overridden afterwards
// (command-line flags use that path).
struct JobConfig {
  std::string molecule = "molecule";
  double reduced_mass_amu = 0;

  std::vector<std::string> curve_files;
  std::vector<std::string> tdm_files;
  std::string pdm_file;
  std::vector<std::string> soc_files;
  std::string atoms_file;
  std::vector<std::string> core_ions;

  double scan_lo_cm = 0;
  double scan_hi_cm = 20000;
  double scan_step_cm = 0.02;
  double lifetime_ns = 10;
  std::map<std::string, double> lifetime_ns_by_state;
  response::SignConvention convention =
      response::SignConvention::ConstantSign;
  int j_rot = 0;
  int m_rot = 0;
  int v_level = 0;

  std::string ground_state = "X";
  double e_max_above = 0.05; // hartree above each state's asymptote
  solver::GridConfig grid;
  std::string out_dir = ".";

  std::vector<std::pair<double, double>> fit_windows_cm1;
  std::string feshbach_source = "atom-pair"; // or "last-bound-level"
  std::string ground_model_file;             // effective-model JSON

  std::string source_path; // where the config was read from, if any
};

JobConfig parse_config_file(const std::string &path);

// Apply one key=value override on top of a parsed config. Unknown keys are
// an InputError.
void apply_override(JobConfig &config, const std::string &key,
                    const std::string &value);

// Referenced files must exist; ranges must be ordered. Throws InputError.
void validate(const JobConfig &config);

// Canonical text rendering of the effective configuration; its FNV-1a hash
// is embedded in every output file so reruns are attributable.
std::string canonical_text(const JobConfig &config);
std::string config_hash(const JobConfig &config);

} // namespace molpol::cli
