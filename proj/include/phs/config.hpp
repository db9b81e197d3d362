#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phs/ensemble.hpp"
#include "phs/integrate.hpp"
#include "phs/ports.hpp"
#include "phs/sampling.hpp"

namespace phs {

enum class ExperimentKind {
  simulate,
  flocking,
  casimir,
  dobrushin,
  self_convergence,
  meanfield_decay,
  couple
};

std::string to_string(ExperimentKind k);
/// Throws ValidationError for unknown names.
ExperimentKind parse_kind(const std::string& name);

enum class SamplerKind { gaussian, uniform_box, explicit_list };

struct InitialConfig {
  SamplerKind sampler = SamplerKind::gaussian;
  std::optional<std::uint64_t> seed;
  GaussianSampler gaussian{{0.0}, {1.0}, {0.0}, {1.0}};
  UniformBoxSampler box;
  ExplicitSampler explicit_data;

  bool operator==(const InitialConfig&) const = default;
};

struct ExperimentParams {
  std::optional<double> epsilon;
  std::size_t sample_count = 100;
  double tolerance = 1e-12;
  std::uint64_t seed = 0;
  std::optional<double> perturbation_scale;
  std::vector<std::size_t> n_list;
  double t_eval = 1.0;
  std::size_t repeats = 10;
  std::optional<double> psi_lower;
  double grad_sup = 0.0;

  bool operator==(const ExperimentParams&) const = default;
};

struct SecondSpecies {
  ModelSpec model;
  InitialConfig initial;
  KernelSpec cross;

  bool operator==(const SecondSpecies&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  /// Subset of {csv, jsonl, json}.
  std::vector<std::string> formats{"csv", "jsonl", "json"};

  bool wants(const std::string& f) const;
  bool operator==(const OutputConfig&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::simulate;
  ModelSpec model;
  Frame frame = Frame::centered;
  InitialConfig initial;
  IntegratorConfig integrator;
  ExperimentParams experiment;
  std::optional<SecondSpecies> species2;
  OutputConfig output;

  /// Cross-field checks for the chosen kind; throws ValidationError.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses INI text. `kind` is the subcommand; an [experiment] kind key must agree with it.
ExperimentConfig parse_config(const std::string& text, ExperimentKind kind);

/// Reads and parses a file; seed_override replaces [initial] seed. Missing file -> IoError.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentKind kind,
                             std::optional<std::uint64_t> seed_override = std::nullopt);

/// INI text that parses back to an equal config.
std::string write_config(const ExperimentConfig& cfg);

/// Initial ensemble of the first species (frame applied).
Ensemble initial_ensemble(const ExperimentConfig& cfg);
/// Initial ensemble of species 2 (absolute frame).
Ensemble second_species_ensemble(const ExperimentConfig& cfg);
/// Seeded sampler for arbitrary sizes, drawing as [initial] describes.
EnsembleSampler make_sampler(const ExperimentConfig& cfg);

SpeciesCouplingSpec coupling_spec(const ExperimentConfig& cfg);

}  // namespace phs
