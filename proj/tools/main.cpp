#include <bnf/bnf.h>

#include <CLI11.hpp>
#include <cstdio>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff normal form toolkit for cluster-resonant Hamiltonian PDEs"};
  app.set_version_flag("--version", std::string(bnf_version()));
  app.require_subcommand(1, 1);

  std::string config, out = ".";
  uint64_t seed = 0;
  int workers = 1;
  double tol = 0.0;
  bool has_tol = false;

  const char* verbs[][2] = {
      {"clusters", "cluster decomposition and frequency slack"},
      {"nf", "Birkhoff normal form up to order r"},
      {"simulate", "integrate the full flow and log super-actions"},
      {"lifespan", "exit-time or normal-form drift experiment"},
      {"mass-scan", "small-divisor certificates over a mass grid"},
      {"verify-inequalities", "numerical scans of the weight inequalities"},
  };
  for (auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v[0], v[1]);
    sub->add_option("--config", config, "INI run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "random seed for initial data");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "integrator tolerance override")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  has_tol = sub->count("--tol") > 0;
  bnf_run_options opt{};
  opt.command = sub->get_name().c_str();
  opt.config_path = config.empty() ? nullptr : config.c_str();
  opt.out_dir = out.c_str();
  opt.seed = seed;
  opt.workers = workers;
  opt.has_tol = has_tol ? 1 : 0;
  opt.tol = tol;
  const bnf_status st = bnf_run(&opt);
  if (st != BNF_OK) {
    std::fprintf(stderr, "bnf %s: %s\n", opt.command, bnf_last_error());
    return bnf_exit_code(st);
  }
  return 0;
}
