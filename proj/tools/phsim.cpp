// phsim: run one experiment described by an INI config.
//
//   phsim <kind> --config FILE [--out DIR] [--seed N] [--quiet]
//
// Exit codes: 0 success, 2 invalid config or parameters, 3 numerical divergence,
// 4 I/O error, 1 anything else.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "phs/config.hpp"
#include "phs/errors.hpp"
#include "phs/experiments.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int run(phs::ExperimentKind kind, const Options& opt) {
  auto cfg = phs::load_config(opt.config, kind, opt.seed);
  const std::string dir = opt.out.empty() ? cfg.output.directory : opt.out;
  const auto summary = phs::run_experiment(cfg, dir);
  if (!opt.quiet) std::cout << summary.line << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Port-Hamiltonian particle system simulator"};
  app.require_subcommand(1);
  Options opt;

  const char* help[] = {
      "integrate and record trajectory and diagnostics",
      "check velocity alignment against the Gronwall envelope",
      "test the built-in Casimir candidate battery",
      "W2 growth between a run and a perturbed copy",
      "median W2 between flows at N and 2N particles",
      "velocity variance against the mean-field decay envelope",
      "two coupled species",
  };
  for (int k = 0; k < 7; ++k) {
    const auto kind = static_cast<phs::ExperimentKind>(k);
    auto* sub = app.add_subcommand(phs::to_string(kind), help[k]);
    sub->add_option("--config", opt.config, "INI configuration file")->required();
    sub->add_option("--out", opt.out, "output directory (overrides [output] directory)");
    sub->add_option("--seed", opt.seed, "overrides [initial] seed");
    sub->add_flag("--quiet", opt.quiet, "suppress the summary line");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (auto* sub : app.get_subcommands())
      return run(phs::parse_kind(sub->get_name()), opt);
  } catch (const phs::IoError& e) {
    std::cerr << "phsim: I/O error: " << e.what() << '\n';
    return 4;
  } catch (const phs::DivergenceError& e) {
    std::cerr << "phsim: divergence: " << e.what() << '\n';
    return 3;
  } catch (const phs::StepError& e) {
    std::cerr << "phsim: divergence: " << e.what() << '\n';
    return 3;
  } catch (const phs::ValidationError& e) {
    std::cerr << "phsim: invalid config: " << e.what() << '\n';
    return 2;
  } catch (const phs::Error& e) {
    // Parameter, domain, dimension, size, frame and degeneracy errors.
    std::cerr << "phsim: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "phsim: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
