// Command-line front end. Everything goes through the public C API so this
// binary doubles as a smoke test of the shared library surface.
#include <CLI11.hpp>
#include <lcfopt.h>

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

namespace {

struct ConfigDeleter {
  void operator()(lcf_config* c) const { lcf_config_free(c); }
};
using ConfigPtr = std::unique_ptr<lcf_config, ConfigDeleter>;

int fail(const char* what) {
  const char* msg = lcf_last_error();
  std::fprintf(stderr, "lcfopt: %s: %s\n", what,
               (msg != nullptr && msg[0] != '\0') ? msg : "unknown error");
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-cycle-fatigue reliability toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lcf_version()));

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;

  CLI::Option* out_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  const char* names[] = {"life", "assess", "sample", "optimize"};
  const char* briefs[] = {
      "Tabulate the strain-life curve for the configured material",
      "Compute the failure probability of the configured design",
      "Draw crack-initiation histories from the fitted point process",
      "Optimize the design surface subject to the configured constraints"};
  for (int i = 0; i < 4; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], briefs[i]);
    sub->add_option("--config", config_path, "Path to the JSON run configuration")
        ->required();
    out_opt = sub->add_option("--out", out_dir, "Output directory (overrides config)");
    seed_opt = sub->add_option("--seed", seed, "RNG seed (overrides config)");
    threads_opt = sub->add_option("--threads", threads, "Worker thread count (overrides config)");
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  lcf_config* raw = nullptr;
  if (lcf_config_load(config_path.c_str(), &raw) != LCF_OK) {
    return fail("config");
  }
  ConfigPtr cfg(raw);

  // The option pointers belong to the last subcommand registered; query the
  // active one by name so overrides apply regardless of which ran.
  out_opt = sub->get_option("--out");
  seed_opt = sub->get_option("--seed");
  threads_opt = sub->get_option("--threads");
  if (out_opt->count() > 0 &&
      lcf_config_set_output_dir(cfg.get(), out_dir.c_str()) != LCF_OK) {
    return fail("--out");
  }
  if (seed_opt->count() > 0 && lcf_config_set_seed(cfg.get(), seed) != LCF_OK) {
    return fail("--seed");
  }
  if (threads_opt->count() > 0 &&
      lcf_config_set_threads(cfg.get(), threads) != LCF_OK) {
    return fail("--threads");
  }

  const std::string name = sub->get_name();
  lcf_status status = LCF_INTERNAL;
  if (name == "life") {
    status = lcf_run_life(cfg.get());
  } else if (name == "assess") {
    status = lcf_run_assess(cfg.get(), nullptr);
  } else if (name == "sample") {
    status = lcf_run_sample(cfg.get());
  } else if (name == "optimize") {
    status = lcf_run_optimize(cfg.get(), nullptr);
  }
  if (status != LCF_OK) {
    return fail(name.c_str());
  }
  return 0;
}
