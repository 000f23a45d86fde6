// Command-line driver for the toric-code free-fermion experiments.
//
// Subcommands: ground, quench-uniform, quench-disorder, thermal-bound,
// phase-diagram, selftest. Every run writes a manifest plus CSV files into
// the output directory; reruns with identical config and seed are
// byte-identical.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure,
// 4 self-test failure.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tcff/experiments.hpp"
#include "tcff/selftest.hpp"

namespace {

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;
};

tcff::Config resolve_config(const GlobalOptions& opt) {
  tcff::Config cfg;
  if (!opt.config_path.empty()) cfg = tcff::Config::from_file(opt.config_path);
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw tcff::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

tcff::RunContext make_context(const GlobalOptions& opt, const std::string& sub) {
  tcff::RunContext ctx;
  ctx.out_dir = opt.out_dir;
  ctx.seed = opt.seed;
  ctx.threads = opt.threads > 0
                    ? opt.threads
                    : std::max(1u, std::thread::hardware_concurrency());
  (void)sub;
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toric-code topological order via free-fermion chains"};
  app.require_subcommand(1);

  GlobalOptions opt;
  app.add_option("--config", opt.config_path, "key = value config file");
  app.add_option("--set", opt.overrides, "override a config key (repeatable)")
      ->type_name("KEY=VALUE");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--seed", opt.seed, "master seed for seeded experiments");
  app.add_option("--threads", opt.threads, "worker threads (0 = hardware)");

  auto* ground = app.add_subcommand("ground", "ground-state Wilson loops and QFI curves");
  auto* quench_u = app.add_subcommand("quench-uniform", "uniform quench vs long-time closed forms");
  auto* quench_d = app.add_subcommand("quench-disorder", "disorder-averaged quench ensemble");
  auto* thermal = app.add_subcommand("thermal-bound", "finite-temperature QFI upper bound");
  auto* phase = app.add_subcommand("phase-diagram", "scaling topological index over a field grid");
  auto* selftest = app.add_subcommand("selftest", "fast built-in consistency checks");
  for (auto* sub : {ground, quench_u, quench_d, thermal, phase, selftest}) {
    sub->fallthrough();  // global flags may follow the subcommand
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) {
      return tcff::run_selftest(true) ? 0 : 4;
    }
    const tcff::Config cfg = resolve_config(opt);
    if (ground->parsed()) {
      tcff::run_ground(cfg, make_context(opt, "ground"));
    } else if (quench_u->parsed()) {
      tcff::run_quench_uniform(cfg, make_context(opt, "quench-uniform"));
    } else if (quench_d->parsed()) {
      tcff::run_quench_disorder(cfg, make_context(opt, "quench-disorder"));
    } else if (thermal->parsed()) {
      tcff::run_thermal(cfg, make_context(opt, "thermal-bound"));
    } else if (phase->parsed()) {
      tcff::run_phase_diagram(cfg, make_context(opt, "phase-diagram"));
    }
    return 0;
  } catch (const tcff::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const tcff::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
