// Command-line front end.  All real work lives in the headers; this file only
// maps flags onto the harness options and exceptions onto exit codes.

#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "vrinfer/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"VR telemetry privacy toolkit: simulate sessions, run inference attacks,\n"
               "score them against ground truth, and apply a bounded-noise defense."};
  app.require_subcommand(1);

  vrinfer::SimulateOptions sim;
  CLI::App* s = app.add_subcommand("simulate", "Generate labeled sessions for a synthetic population");
  s->add_option("--users", sim.n_users, "population size")->capture_default_str();
  s->add_option("--seed", sim.seed, "population seed")->capture_default_str();
  s->add_option("--session-seed", sim.session_seed,
                "telemetry noise seed; set to rerun the same people with fresh noise (default: --seed)");
  s->add_option("--out", sim.out_dir, "output directory, one subdirectory per user")->required();
  s->add_option("--script", sim.script_path, "scenario script json (default: built-in 600 s scenario)");
  s->add_option("--noise", sim.noise_path, "noise model json (default: calibrated sensor noise)");
  s->add_option("--servers", sim.servers_path, "game server fleet json");
  s->add_option("--layout", sim.layout_path, "language panel layout json");

  vrinfer::AttackOptions atk;
  CLI::App* a = app.add_subcommand("attack", "Recover personal attributes from one session");
  a->add_option("session", atk.session_dir, "session directory")->required();
  a->add_option("--tier", atk.tier,
                "attacker capabilities: PrivilegedI|PrivilegedII|PrivilegedIII|NonPrivileged")
      ->capture_default_str();
  a->add_option("--out", atk.out_path, "report path (default: <session>/report.json)");
  a->add_option("--servers", atk.servers_path, "server fleet json used for multilateration");
  a->add_option("--layout", atk.layout_path, "panel layout json used for gaze analysis");
  a->add_option("--devices", atk.devices_path, "device spec table json used for model fingerprinting");

  vrinfer::EvaluateOptions ev;
  bool no_inference = false;
  CLI::App* e = app.add_subcommand("evaluate", "Score attack reports against ground-truth profiles");
  e->add_option("sessions", ev.sessions_dir, "directory of session directories")->required();
  e->add_option("--probe-reports", ev.reports_b_dir,
                "second session set of the same users, enables re-identification scoring");
  e->add_option("--out", ev.out_path, "accuracy path (default: <sessions>/accuracy.json)");
  e->add_option("--folds", ev.folds, "cross-validation folds for demographic models")
      ->capture_default_str();
  e->add_option("--seed", ev.seed, "fold-shuffle seed")->capture_default_str();
  e->add_flag("--no-inference", no_inference, "skip the cross-validated demographic models");

  vrinfer::DefendOptions def;
  CLI::App* d = app.add_subcommand("defend", "Add bounded Laplace noise to trace positions");
  d->add_option("--in", def.in_path, "trace.csv, or a session directory to copy with a noised trace")
      ->required();
  d->add_option("--out", def.out_path, "output path (file or directory, matching --in)")->required();
  d->add_option("--epsilon", def.epsilon, "noise budget; smaller is noisier")->capture_default_str();
  d->add_option("--seed", def.seed, "noise seed")->capture_default_str();
  d->add_option("--bounds", def.bounds_path, "position bounds json (default: 6x3x6 m play space)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return vrinfer::kExitConfigError;
  }

  try {
    if (s->parsed()) return vrinfer::cmd_simulate(sim);
    if (a->parsed()) return vrinfer::cmd_attack(atk);
    if (e->parsed()) {
      ev.with_inference = !no_inference;
      return vrinfer::cmd_evaluate(ev);
    }
    if (d->parsed()) return vrinfer::cmd_defend(def);
  } catch (const vrinfer::Error& err) {
    std::fprintf(stderr, "%s\n", err.what());
    return vrinfer::exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return vrinfer::kExitConfigError;
  }
  return vrinfer::kExitOk;
}
