#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "phs/ensemble.hpp"

namespace phs {

/// Reproducible random source: std::mt19937_64 (fully specified by the standard)
/// with hand-rolled uniform and normal transforms, since the standard
/// distributions are implementation defined.
///
///   uniform01: (engine() >> 11) * 2^-53, in [0, 1)
///   normal:    Box-Muller on two uniforms, u1 mapped to (0, 1]; both outputs used in order
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Uniform integer in [0, bound).
  std::size_t index(std::size_t bound);

private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Distinct uniformly chosen indices from [0, population), partial Fisher-Yates.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count,
                                                    Rng& rng);

struct GaussianSampler {
  std::vector<double> position_mean;  // length 1 (broadcast) or d
  std::vector<double> position_std;
  std::vector<double> velocity_mean;
  std::vector<double> velocity_std;
  bool operator==(const GaussianSampler&) const = default;
};

struct UniformBoxSampler {
  std::vector<double> position_lo;
  std::vector<double> position_hi;
  std::vector<double> velocity_lo;
  std::vector<double> velocity_hi;
  bool operator==(const UniformBoxSampler&) const = default;
};

struct ExplicitSampler {
  std::vector<double> positions;  // n * d, row-major
  std::vector<double> velocities;
  bool operator==(const ExplicitSampler&) const = default;
};

/// Draws particle by particle (d position coordinates, then d velocity
/// coordinates), so the first n particles of a draw of size m >= n coincide
/// with a draw of size n under the same seed.
Ensemble sample_gaussian(const GaussianSampler& s, std::size_t n, std::size_t d, std::uint64_t seed,
                         Frame frame);
Ensemble sample_uniform_box(const UniformBoxSampler& s, std::size_t n, std::size_t d,
                            std::uint64_t seed, Frame frame);
Ensemble sample_explicit(const ExplicitSampler& s, std::size_t n, std::size_t d, Frame frame);

/// Seeded sampler of initial ensembles of a requested size.
using EnsembleSampler = std::function<Ensemble(std::size_t n, std::uint64_t seed)>;

}  // namespace phs
