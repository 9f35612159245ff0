// Command-line front end. Talks to the shared library exclusively through
// the public C interface. Exit codes: 0 pass, 1 error, 2 computed fail.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schechter_heat.h"

int main(int argc, char** argv) {
  CLI::App app{"window-norm and heat-kernel experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  unsigned seed = 1234;

  const std::vector<std::pair<std::string, std::string>> tasks = {
      {"classify", "window-norm class membership of a potential"},
      {"tnorm", "operator norm of the potential-Bessel composition"},
      {"conditions", "window smallness profile over the spectral parameter"},
      {"resolvent-check", "perturbed resolvent diagnostics"},
      {"heat", "heat kernel envelope and smoothness fits"},
      {"dg", "off-diagonal mass decay between two regions"},
  };
  for (const auto& t : tasks) {
    CLI::App* sub = app.add_subcommand(t.first, t.second);
    sub->add_option("--config", config, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for report files");
    sub->add_option("--seed", seed, "seed for randomized probes");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string task = app.get_subcommands().front()->get_name();

  char* declared = nullptr;
  if (sh_config_task(config.c_str(), &declared) != SH_OK) {
    std::fprintf(stderr, "error: %s\n", sh_last_error());
    return 1;
  }
  if (task != declared) {
    std::fprintf(stderr, "error: config declares task '%s' but '%s' was requested\n",
                 declared, task.c_str());
    sh_string_free(declared);
    return 1;
  }
  sh_string_free(declared);

  int passed = 0;
  char* summary = nullptr;
  const sh_status status = sh_run_experiment(
      config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), seed, &passed, &summary);
  if (status != SH_OK) {
    std::fprintf(stderr, "error: %s\n", sh_last_error());
    return 1;
  }
  std::printf("%s: %s\n", passed ? "PASS" : "FAIL", summary ? summary : "");
  sh_string_free(summary);
  return passed ? 0 : 2;
}
