#include "phs/sampling.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "phs/errors.hpp"

namespace phs {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::size_t Rng::index(std::size_t bound) {
  if (bound == 0) throw ParameterError("index bound must be positive");
  auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(bound));
  return i < bound ? i : bound - 1;
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count,
                                                    Rng& rng) {
  if (count > population) throw SizeError("cannot draw more indices than the population holds");
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t k = 0; k < count; ++k) std::swap(idx[k], idx[k + rng.index(population - k)]);
  idx.resize(count);
  return idx;
}

namespace {

double component(const std::vector<double>& v, std::size_t k, std::size_t d, const char* what) {
  if (v.size() == 1) return v[0];
  if (v.size() == d) return v[k];
  throw DimensionError(std::string(what) + " must have 1 or d entries");
}

Ensemble finish(std::size_t n, std::size_t d, std::vector<double> pos, std::vector<double> vel,
                Frame frame) {
  Ensemble e = Ensemble::from_data(n, d, std::move(pos), std::move(vel));
  if (frame == Frame::centered) e = shift_to_center(e).ensemble;
  return e;
}

}  // namespace

Ensemble sample_gaussian(const GaussianSampler& s, std::size_t n, std::size_t d, std::uint64_t seed,
                         Frame frame) {
  Rng rng(seed);
  std::vector<double> pos(n * d), vel(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k)
      pos[i * d + k] = rng.normal(component(s.position_mean, k, d, "position_mean"),
                                  component(s.position_std, k, d, "position_std"));
    for (std::size_t k = 0; k < d; ++k)
      vel[i * d + k] = rng.normal(component(s.velocity_mean, k, d, "velocity_mean"),
                                  component(s.velocity_std, k, d, "velocity_std"));
  }
  return finish(n, d, std::move(pos), std::move(vel), frame);
}

Ensemble sample_uniform_box(const UniformBoxSampler& s, std::size_t n, std::size_t d,
                            std::uint64_t seed, Frame frame) {
  Rng rng(seed);
  std::vector<double> pos(n * d), vel(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k)
      pos[i * d + k] = rng.uniform(component(s.position_lo, k, d, "position_lo"),
                                   component(s.position_hi, k, d, "position_hi"));
    for (std::size_t k = 0; k < d; ++k)
      vel[i * d + k] = rng.uniform(component(s.velocity_lo, k, d, "velocity_lo"),
                                   component(s.velocity_hi, k, d, "velocity_hi"));
  }
  return finish(n, d, std::move(pos), std::move(vel), frame);
}

Ensemble sample_explicit(const ExplicitSampler& s, std::size_t n, std::size_t d, Frame frame) {
  if (s.positions.size() != n * d || s.velocities.size() != n * d)
    throw DimensionError("explicit initial data must list n * d positions and velocities");
  return finish(n, d, s.positions, s.velocities, frame);
}

}  // namespace phs
