#include "phs/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phs/errors.hpp"

namespace phs {

namespace {

std::vector<double> column_mean(const std::vector<double>& data, std::size_t n, std::size_t d) {
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) mean[k] += data[i * d + k];
  for (double& m : mean) m /= static_cast<double>(n);
  return mean;
}

}  // namespace

Ensemble Ensemble::from_data(std::size_t n, std::size_t d, std::vector<double> positions,
                             std::vector<double> velocities) {
  Ensemble e;
  e.n = n;
  e.d = d;
  e.positions = std::move(positions);
  e.velocities = std::move(velocities);
  e.frame = Frame::absolute;
  e.reference_mean_velocity.assign(d, 0.0);
  e.validate();
  e.reference_mean_velocity = e.mean_velocity();
  return e;
}

std::vector<double> Ensemble::mean_position() const { return column_mean(positions, n, d); }
std::vector<double> Ensemble::mean_velocity() const { return column_mean(velocities, n, d); }

std::vector<double> Ensemble::velocity_offset() const {
  if (frame == Frame::centered) return reference_mean_velocity;
  return std::vector<double>(d, 0.0);
}

std::vector<double> Ensemble::state() const {
  std::vector<double> z;
  z.reserve(positions.size() + velocities.size());
  z.insert(z.end(), positions.begin(), positions.end());
  z.insert(z.end(), velocities.begin(), velocities.end());
  return z;
}

Ensemble Ensemble::with_state(std::span<const double> z) const {
  if (z.size() != 2 * n * d) throw DimensionError("flat state has the wrong length");
  Ensemble e = *this;
  std::copy(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n * d), e.positions.begin());
  std::copy(z.begin() + static_cast<std::ptrdiff_t>(n * d), z.end(), e.velocities.begin());
  return e;
}

void Ensemble::validate() const {
  if (n == 0) throw DimensionError("ensemble needs at least one particle");
  if (d == 0) throw DimensionError("space dimension must be at least 1");
  if (positions.size() != n * d || velocities.size() != n * d)
    throw DimensionError("ensemble arrays must hold n * d = " + std::to_string(n * d) +
                         " values");
  if (reference_mean_velocity.size() != d)
    throw DimensionError("reference mean velocity must have d components");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(positions.begin(), positions.end(), finite) ||
      !std::all_of(velocities.begin(), velocities.end(), finite))
    throw DomainError("ensemble contains non-finite values");
}

ShiftResult shift_to_center(const Ensemble& ens) {
  if (ens.frame == Frame::centered) return {ens, true};
  Ensemble out = ens;
  const auto xbar = ens.mean_position();
  for (std::size_t i = 0; i < ens.n; ++i)
    for (std::size_t k = 0; k < ens.d; ++k) out.positions[i * ens.d + k] -= xbar[k];
  out.reference_mean_velocity = ens.mean_velocity();
  out.frame = Frame::centered;
  return {std::move(out), false};
}

void ModelSpec::check(const Ensemble& ens) const {
  potential.validate();
  damping.validate();
  potential.check_dimension(d);
  if (ens.n != n || ens.d != d)
    throw DimensionError("ensemble (n=" + std::to_string(ens.n) + ", d=" + std::to_string(ens.d) +
                         ") does not match model (n=" + std::to_string(n) +
                         ", d=" + std::to_string(d) + ")");
}

ModelSpec ModelSpec::resized(std::size_t new_n) const {
  ModelSpec m = *this;
  m.n = new_n;
  return m;
}

}  // namespace phs
