#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swirl/background.hpp"
#include "swirl/core.hpp"
#include "swirl/supersonic.hpp"

namespace swirl {

/// One analytic term of a profile definition, e.g. "sin_bump 0.05".
struct ProfileTerm {
  std::string family;  // zero, constant, sin_bump, cos_bump, poly_odd, table
  double a = 0.0;
  std::filesystem::path table;  // for "table <file>"
};

/// Sum of terms separated by a lone "+", e.g. "constant 1 + cos_bump -0.01".
struct ProfileSpec {
  std::vector<ProfileTerm> terms;
  std::string text;  // as written, for messages

  RadialProfile sample(double r0, std::size_t n, Parity parity) const;
};

ProfileSpec parse_profile(const std::string& text, const std::filesystem::path& base_dir = {});

enum class UpstreamMode { wq, ps };

struct RunConfig {
  GasModel gas;
  double L = 1.0, r0 = 1.0;
  std::size_t nz = 129, nr = 129;

  UpstreamMode mode = UpstreamMode::wq;
  ProfileSpec w, q;  // wq mode
  double M0sq = 4.0, p0 = 1.0;
  ProfileSpec p, s;  // ps mode
  double q0 = 2.0;

  bool has_perturbation = false;
  double sigma = 0.0;
  ProfileSpec w_en, q_en, p_ex;

  double cfl = 0.8;
  int max_refine = 16;
  double solvability_tol = 1e-9;
  double endpoint_tol = 1e-6;
  std::size_t locator_samples = 257;

  UpstreamSpecWQ upstream_wq() const;
  UpstreamSpecPS upstream_ps() const;
  PerturbationInput perturbation() const;
  MarchOptions march_options() const;
};

/// key=value pairs per section, with the line each came from.
struct IniEntry {
  std::string value;
  int line = 0;
};
using IniData = std::map<std::string, std::map<std::string, IniEntry>>;
IniData parse_ini(std::istream& in, const std::string& source);

/// Parse and validate. Every failure is a config or io SolverError.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_string(const std::string& text,
                              const std::filesystem::path& base_dir = {});

/// Endpoint and range checks on a parsed config.
void validate_config(const RunConfig& cfg);

}  // namespace swirl
