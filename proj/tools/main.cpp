// Command-line front end for the wigmix library.
//
// Subcommands:
//   run <config.json>   run a scenario described by a JSON config file
//   preset <name>       run a built-in scenario preset
//   list-presets        list the built-in presets
//   selftest            fast built-in consistency checks
//
// Output directory resolution, in order of precedence: --out on the command
// line, then the config's own out_dir, then $WIGMIX_OUT_DIR/<name>, then
// ./wigmix-out/<name>.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wigmix/currents.hpp"
#include "wigmix/fock.hpp"
#include "wigmix/gaussian.hpp"
#include "wigmix/grid.hpp"
#include "wigmix/scenario.hpp"
#include "wigmix/wigner.hpp"

namespace {

using namespace wigmix;

int list_presets_command() {
  for (const PresetInfo& info : list_presets()) {
    std::cout << info.name << "\n    " << info.description << "\n";
  }
  return 0;
}

// Fast consistency subset: exact algebraic identities and one convergence
// probe, all at small cutoffs so the whole run stays in the seconds range.
// The slow research-grade studies (high-cutoff Gaussian agreement, the
// radial-variation probe at the stationary mixing point) live in the test
// suite, not here.
int selftest_command() {
  int failures = 0;
  auto check = [&failures](const char* name, bool ok, double measured) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  (" << measured
              << ")\n";
    if (!ok) ++failures;
  };

  // Two single photons on a balanced mixer: the coincidence amplitude
  // cancels, leaving an equal mixture of |0> and |2> on each output.
  {
    const Cutoff cutoff{6};
    const auto psi = apply_beam_splitter(
        product_state(make_fock(1, cutoff), make_fock(1, cutoff)), {0.5});
    const DensityOperator rho_b = reduce(psi, Mode::b);
    const double defect =
        std::abs(rho_b.rho(0, 0).real() - 0.5) + std::abs(rho_b.rho(1, 1)) +
        std::abs(rho_b.rho(2, 2).real() - 0.5);
    check("balanced two-photon interference empties the odd diagonal",
          defect < 1e-10, defect);
    const double purity_err = std::abs(rho_b.purity() - 0.5);
    check("its reduced state has purity 1/2", purity_err < 1e-10, purity_err);

    PhaseSpaceGrid probe{-2.0, 2.0, -2.0, 2.0, 5, 5};
    const ScalarField w = weyl_field(rho_b, probe);
    const double origin_err = std::abs(w.at(2, 2) - 1.0 / std::numbers::pi);
    check("its distribution at the origin equals 1/pi", origin_err < 1e-10,
          origin_err);
  }

  // Mixing is unitary: norm, total photon number, and (for pure product
  // inputs) the two subsystem purities are preserved exactly.
  {
    const Cutoff cutoff{25};
    const auto input = product_state(
        make_fock(3, cutoff),
        make_coherent(complexd(std::numbers::sqrt2, std::numbers::sqrt2),
                      cutoff));
    const auto psi = apply_beam_splitter(input, {0.29});
    const double norm_err = std::abs(psi.norm() - 1.0);
    check("mixing preserves the state norm", norm_err < 1e-12, norm_err);
    const double energy_err =
        std::abs(psi.total_photon_number() - input.total_photon_number());
    check("mixing preserves the total photon number", energy_err < 1e-10,
          energy_err);
    const double purity_gap = std::abs(reduce(psi, Mode::a).purity() -
                                       reduce(psi, Mode::b).purity());
    check("subsystem purities agree for a pure input", purity_gap < 1e-10,
          purity_gap);
  }

  // Coherent inputs stay Gaussian, so the number-basis pipeline must land
  // on the closed-form distribution and current.
  {
    const Cutoff cutoff{20};
    const complexd alpha(1.0, 0.5), beta(-0.3, 0.8);
    const auto psi = apply_beam_splitter(
        product_state(make_coherent(alpha, cutoff), make_coherent(beta, cutoff)),
        {0.37});
    const GaussianMoments g = evolve_moments(
        join(coherent_moments(alpha), coherent_moments(beta)), {0.37});
    PhaseSpaceGrid grid{-4.0, 4.0, -4.0, 4.0, 41, 41};
    const ScalarField w = weyl_field(reduce(psi, Mode::b), grid);
    const ScalarField gw = reduced_wigner(g, Mode::b, grid);
    const VectorField j = current(psi, Mode::b, grid);
    const VectorField gj = reduced_current(g, Mode::b, grid);
    double err = 0.0;
    for (std::size_t cell = 0; cell < grid.size(); ++cell) {
      err = std::max({err, std::abs(w.values[cell] - gw.values[cell]),
                      std::abs(j.jx[cell] - gj.jx[cell]),
                      std::abs(j.jp[cell] - gj.jp[cell])});
    }
    check("coherent mixing matches the Gaussian closed forms", err < 1e-9,
          err);
  }

  // The continuity defect carries O(dtau^2) + O(dx^2) errors, so halving
  // the step and the grid spacing together must shrink it at second order.
  {
    const Cutoff cutoff{6};
    const auto input =
        product_state(make_fock(1, cutoff), make_fock(1, cutoff));
    auto at_tau = [&input](double tau) {
      return apply_beam_splitter(input, {tau});
    };
    const double tau = MixerParameter::from_reflectivity(0.25).tau;
    PhaseSpaceGrid coarse_grid{-6.0, 6.0, -6.0, 6.0, 121, 121};
    PhaseSpaceGrid fine_grid{-6.0, 6.0, -6.0, 6.0, 241, 241};
    const double coarse =
        continuity_residual(at_tau, Mode::b, coarse_grid, tau, 2e-2).max_abs;
    const double fine =
        continuity_residual(at_tau, Mode::b, fine_grid, tau, 1e-2).max_abs;
    const double order = std::log2(coarse / fine);
    check("continuity residual shrinks at second order under joint refinement",
          order > 1.7 && order < 2.3, order);
  }

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "wigmix: reduced Wigner distributions and phase-space currents for two "
      "bosonic modes mixed at a variable beam splitter"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool print_only = false;

  CLI::App* run_cmd =
      app.add_subcommand("run", "Run a scenario from a JSON config file");
  run_cmd->add_option("config", config_path, "Path to the JSON config")
      ->required();

  CLI::App* preset_cmd =
      app.add_subcommand("preset", "Run a built-in scenario preset");
  preset_cmd->add_option("name", preset_name, "Preset name (see list-presets)")
      ->required();

  for (CLI::App* cmd : {run_cmd, preset_cmd}) {
    cmd->add_option("--out", out_dir,
                    "Output directory (takes precedence over the config and "
                    "WIGMIX_OUT_DIR)");
    cmd->add_option("--override", overrides,
                    "Config override as dotted.key=value, e.g. cutoff=80 or "
                    "toggles.continuity=true (repeatable)")
        ->take_all();
    cmd->add_flag("--print", print_only,
                  "Print the resolved config as JSON instead of running");
  }

  CLI::App* list_cmd =
      app.add_subcommand("list-presets", "List the built-in scenario presets");
  CLI::App* selftest_cmd = app.add_subcommand(
      "selftest", "Run the fast built-in consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) return list_presets_command();
    if (selftest_cmd->parsed()) return selftest_command();

    wigmix::ScenarioConfig config = run_cmd->parsed()
                                        ? wigmix::load_config(config_path)
                                        : wigmix::preset(preset_name);
    for (const std::string& assignment : overrides) {
      config = wigmix::apply_override(config, assignment);
    }
    if (!out_dir.empty()) {
      config.out_dir = out_dir;
    } else if (config.out_dir.empty()) {
      const char* env = std::getenv("WIGMIX_OUT_DIR");
      const std::filesystem::path base =
          (env != nullptr && *env != '\0') ? env : "wigmix-out";
      config.out_dir = base / config.name;
    }

    if (print_only) {
      std::cout << wigmix::config_to_json(config);
      return 0;
    }

    const wigmix::RunResult result = wigmix::run_scenario(config);
    std::cout << "wrote " << result.files.size() << " data files + manifest to "
              << result.out_dir.string() << "\n";
    return 0;
  } catch (const wigmix::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
