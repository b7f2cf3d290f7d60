#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "wigmix/fock.hpp"
#include "wigmix/grid.hpp"

namespace wigmix {

/// Structural problem in a scenario description (missing/invalid fields,
/// contradictory options, unsatisfiable state constructions). Distinct from
/// runtime numeric failures so front ends can map the two to different exit
/// codes.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One input mode: kind plus the parameters that kind needs.
///
/// kinds: "fock" (n), "coherent" (alpha_re, alpha_im),
/// "squeezed_vacuum" (z, theta). leakage_bound is forwarded to the state
/// constructors; the bundled squeezed-pair preset relaxes it deliberately
/// (see presets()).
struct StateSpec {
  std::string kind = "fock";
  int n = 0;
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double z = 0.0;
  double theta = 0.0;
  double leakage_bound = 1e-8;

  FockVector build(Cutoff cutoff) const;  ///< throws config_error
  bool is_gaussian() const;  ///< representable by first/second moments
};

/// Full description of one run: two input states, the evaluation points,
/// discretization, and output toggles.
///
/// Evaluation points come either from `taus` directly or from
/// `reflectivities` via tau = (2/pi) asin(sqrt(R)); exactly one of the two
/// lists must be non-empty. `resolved_taus()` returns the final list either
/// way.
struct ScenarioConfig {
  std::string name = "custom";
  std::string description;
  StateSpec state_a, state_b;
  std::vector<double> taus;
  std::vector<double> reflectivities;
  PhaseSpaceGrid grid = PhaseSpaceGrid::standard();
  int cutoff = 30;
  std::filesystem::path out_dir;

  bool currents = true;
  bool velocity = true;
  bool field_lines = true;
  bool observables = true;
  bool continuity = false;

  double continuity_dtau = 1e-3;
  bool gaussian_cross_check = false;
  int seed_density = 8;
  double seed_floor_rel = 1e-3;      ///< field-line seed thinning, rel. max|J|
  double velocity_threshold_rel = 1e-4;  ///< |W| mask level, rel. max|W|
  double velocity_j_floor = 1e-3;    ///< singular-cell current floor (absolute)

  std::vector<double> resolved_taus() const;
  void validate() const;  ///< throws config_error naming the offending field
};

/// Parses a JSON scenario file. Unknown keys are rejected (they are almost
/// always typos), with the offending key named.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Parses a JSON config from text (same schema as load_config).
ScenarioConfig parse_config(const std::string& text);

/// Serializes the config back to JSON text (the same schema load_config
/// accepts, round-trip stable, keeping whichever evaluation-point list the
/// author gave); embedded in the run manifest.
std::string config_to_json(const ScenarioConfig& config);

/// Applies one "dotted.key=value" override on top of a config, e.g.
/// "cutoff=80", "grid.nx=121", "toggles.continuity=true",
/// "states.1.alpha_im=0.5", "reflectivities=[0.25,0.5]".
ScenarioConfig apply_override(const ScenarioConfig& config,
                              const std::string& assignment);

struct PresetInfo {
  std::string name;
  std::string description;
};

/// The five bundled scenarios.
std::vector<PresetInfo> list_presets();

/// Bundled scenario by name; throws config_error listing valid names.
ScenarioConfig preset(const std::string& name);

/// Everything run_scenario wrote.
struct RunResult {
  std::filesystem::path out_dir;
  std::filesystem::path manifest_path;
  std::vector<std::string> files;  ///< relative to out_dir, manifest excluded
};

/// Executes a validated config: per evaluation point and mode writes the
/// distribution grid, current grid, velocity grid with its singular-cell
/// list, and field lines (subject to the toggles); plus one observables
/// table, an optional Gaussian cross-check table, and a manifest
/// (manifest.json) holding the resolved config and the SHA-256 of every
/// written file. Data files are byte-identical across runs of the same
/// config; the manifest's timestamp is the only non-deterministic output.
RunResult run_scenario(const ScenarioConfig& config);

}  // namespace wigmix
