// Command-line front end: run adaptive planning campaigns, generate
// primitive libraries, and verify stored libraries against their dynamics.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "alp/harness.hpp"
#include "alp/presets.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoPath = 2;
constexpr int kExitInvariant = 3;

alp::Scenario load_scenario(const std::string& path) {
  return alp::parse_scenario(alp::read_text_file(path));
}

int cmd_plan(const std::string& scenario_path, const std::string& out_dir, int executions,
             std::int64_t seed, bool emit_plots) {
  alp::Scenario s = load_scenario(scenario_path);
  if (executions > 0) s.executions = executions;
  if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);

  auto report = alp::run_campaign(s, out_dir, emit_plots);
  std::fputs(report.metrics_csv.c_str(), stdout);
  for (const auto& rec : report.records) {
    std::printf("execution %d: nominal %d, %zu primitives, cost %.6f, tube %.4f, max dev %.5f%s\n",
                rec.index, rec.nominal_id, rec.plan.offsets.size(), rec.plan_cost, rec.delta,
                rec.max_tube_dev,
                rec.tube_violation ? "  [TUBE VIOLATION]" : (rec.diam_increase ? "  [SET GREW]" : ""));
  }
  if (report.any_violation) {
    std::fprintf(stderr, "error: an execution violated its tube or grew the model set\n");
    return kExitInvariant;
  }
  std::printf("wrote outputs to %s\n", out_dir.c_str());
  return kExitOk;
}

int cmd_gen_primitives(const std::string& scenario_path, const std::string& out_file) {
  alp::Scenario s = load_scenario(scenario_path);
  auto id = alp::init_identifier(s.psi, s.gamma, s.adaptation_rate, s.tracking_gain,
                                 Eigen::VectorXd::Zero(3));
  auto off = alp::offline_plan(s, id);
  alp::PrimitiveLibrary lib = *off.library;
  alp::write_text_file(out_file, alp::library_to_json(lib));
  std::printf("tube radius %.4f, %zu nominal sets, %zu entries, digest %s\n", off.delta,
              lib.nominal_params.size(), lib.entries.size(), lib.digest.c_str());
  std::printf("wrote %s\n", out_file.c_str());
  return kExitOk;
}

int cmd_verify(const std::string& lib_path) {
  auto lib = alp::library_from_json(alp::read_text_file(lib_path));

  alp::SystemModel sys;
  if (lib.model_label == "planar_position") {
    sys = alp::planar_position_model(1e6, 1e6, 1e6);
  } else if (lib.model_label == "quadrotor_attitude") {
    sys = alp::quadrotor_attitude_model(lib.model_omega, 1e6, 1e6);
  } else {
    std::fprintf(stderr, "error: cannot rebuild dynamics for model '%s'\n",
                 lib.model_label.c_str());
    return kExitError;
  }

  int bad = 0;
  for (const auto& [key, mp] : lib.entries) {
    double err = alp::verify_primitive(mp, sys, lib.nominal_params[static_cast<std::size_t>(key.first)],
                                       lib.lattice);
    bool ok = err <= 1e-4;
    if (!ok) ++bad;
    std::printf("nominal %d offset %s: endpoint error %.3e %s\n", key.first, key.second.c_str(),
                err, ok ? "ok" : "FAIL");
  }
  std::printf("%zu entries checked, %d failed\n", lib.entries.size(), bad);
  return bad == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive lattice motion planning"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", out_file = "library.json", lib_path;
  int executions = -1;
  std::int64_t seed = -1;
  bool emit_plots = false;

  auto* plan = app.add_subcommand("plan", "run a multi-execution campaign");
  plan->add_option("--scenario", scenario_path, "scenario file")->required();
  plan->add_option("--out", out_dir, "output directory");
  plan->add_option("--executions", executions, "override the execution count");
  plan->add_option("--seed", seed, "override the scenario seed");
  plan->add_flag("--emit-plots", emit_plots, "write the overlay plot");

  auto* gen = app.add_subcommand("gen-primitives", "generate the primitive library");
  gen->add_option("--scenario", scenario_path, "scenario file")->required();
  gen->add_option("--out", out_file, "library file")->required();

  auto* verify = app.add_subcommand("verify", "re-verify a stored library");
  verify->add_option("--library", lib_path, "library file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(scenario_path, out_dir, executions, seed, emit_plots);
    if (gen->parsed()) return cmd_gen_primitives(scenario_path, out_file);
    if (verify->parsed()) return cmd_verify(lib_path);
  } catch (const alp::NoPath& e) {
    std::fprintf(stderr, "no path: %s\n", e.what());
    return kExitNoPath;
  } catch (const alp::InvariantViolation& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
