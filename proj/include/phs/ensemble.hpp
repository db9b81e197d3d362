#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phs/kernels.hpp"

namespace phs {

enum class Frame { absolute, centered };

/// Particle state z = (p, v) with p the absolute positions x (absolute frame) or
/// the positions r relative to the centre of mass (centered frame).
///
/// Storage is row-major: coordinate k of particle i lives at index i * d + k.
struct Ensemble {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> positions;
  std::vector<double> velocities;
  Frame frame = Frame::absolute;
  /// Mean velocity of the initial data. Fixed at construction, carried along by the
  /// integrator and never recomputed from the evolving state.
  std::vector<double> reference_mean_velocity;

  /// Absolute-frame ensemble; reference_mean_velocity is the mean of `velocities`.
  static Ensemble from_data(std::size_t n, std::size_t d, std::vector<double> positions,
                            std::vector<double> velocities);

  std::span<const double> position(std::size_t i) const { return {positions.data() + i * d, d}; }
  std::span<const double> velocity(std::size_t i) const { return {velocities.data() + i * d, d}; }
  std::span<double> position(std::size_t i) { return {positions.data() + i * d, d}; }
  std::span<double> velocity(std::size_t i) { return {velocities.data() + i * d, d}; }

  std::vector<double> mean_position() const;
  std::vector<double> mean_velocity() const;

  /// v-bar in the centered frame; the zero vector in the absolute frame.
  std::vector<double> velocity_offset() const;

  /// Flat state (positions followed by velocities), length 2 n d.
  std::vector<double> state() const;
  /// Copy of this ensemble with the flat state replaced.
  Ensemble with_state(std::span<const double> z) const;

  /// Throws DimensionError / DomainError on inconsistent sizes or non-finite data.
  void validate() const;

  bool operator==(const Ensemble&) const = default;
};

struct ShiftResult {
  Ensemble ensemble;
  /// True when the input was already centered and returned unchanged.
  bool already_centered = false;
};

/// r_i = x_i - mean(x). Idempotent: a centered input is returned as is.
ShiftResult shift_to_center(const Ensemble& ens);

struct ModelSpec {
  PotentialSpec potential;
  DampingSpec damping;
  std::size_t n = 0;
  std::size_t d = 0;

  KernelSpec kernel() const { return damping.kernel(); }
  /// Validates parameters and that the ensemble matches (n, d).
  void check(const Ensemble& ens) const;
  ModelSpec resized(std::size_t new_n) const;

  bool operator==(const ModelSpec&) const = default;
};

}  // namespace phs
