#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace phs {

// ---------------------------------------------------------------------------
// Alignment kernels psi : R_{>=0} -> R_{>=0}. The argument is always the
// Euclidean norm of the displacement between two particles.
// ---------------------------------------------------------------------------

/// psi(s) = K / (delta^2 + s^2)^beta
struct CuckerSmale {
  double K = 1.0;
  double delta = 1.0;
  double beta = 1.0;
  bool operator==(const CuckerSmale&) const = default;
};

/// psi(s) = c
struct ConstantKernel {
  double c = 1.0;
  bool operator==(const ConstantKernel&) const = default;
};

struct ZeroKernel {
  bool operator==(const ZeroKernel&) const = default;
};

struct KernelSpec {
  std::variant<CuckerSmale, ConstantKernel, ZeroKernel> form{ZeroKernel{}};
  /// User-declared uniform lower bound of psi on the experiment's support.
  std::optional<double> lower_bound;

  static KernelSpec cucker_smale(double K, double delta, double beta);
  static KernelSpec constant(double c);
  static KernelSpec zero();

  /// Throws ParameterError on invalid parameters.
  void validate() const;
  std::string name() const;
  bool is_zero() const;

  bool operator==(const KernelSpec&) const = default;
};

/// psi(s). Throws DomainError for negative or NaN s.
double eval_alignment(const KernelSpec& spec, double s);

/// psi evaluated from the squared distance; no validation, used in the O(N^2) loops.
double alignment_from_squared(const KernelSpec& spec, double s2) noexcept;

/// Checks a declared lower_bound against psi on a grid over [0, 2 * support_radius]
/// (the largest pairwise distance inside a ball of that radius). True when no
/// lower_bound is set.
bool lower_bound_holds(const KernelSpec& spec, double support_radius,
                       std::size_t grid_points = 1001);

// ---------------------------------------------------------------------------
// Interaction potentials V : R^d -> R with antisymmetric gradient.
// ---------------------------------------------------------------------------

/// V(q) = R exp(-|q|^2 / r) - A exp(-|q|^2 / a)
struct Morse {
  double R = 0.0;
  double A = 0.0;
  double r = 1.0;
  double a = 1.0;
  bool operator==(const Morse&) const = default;
};

/// Kuramoto coupling V(q) = -cos(q), one-dimensional only.
struct CosinePotential {
  bool operator==(const CosinePotential&) const = default;
};

struct ZeroPotential {
  bool operator==(const ZeroPotential&) const = default;
};

struct PotentialSpec {
  std::variant<Morse, CosinePotential, ZeroPotential> form{ZeroPotential{}};
  /// sup_q |grad V(q)| when known analytically or numerically.
  std::optional<double> grad_sup_bound;

  /// Builds the spec and fills grad_sup_bound by a radial golden-section search.
  static PotentialSpec morse(double R, double A, double r, double a);
  static PotentialSpec cosine();
  static PotentialSpec zero();

  void validate() const;
  std::string name() const;
  bool is_zero() const;
  /// Throws DimensionError when the variant does not support dimension d.
  void check_dimension(std::size_t d) const;

  bool operator==(const PotentialSpec&) const = default;
};

double eval_potential(const PotentialSpec& spec, std::span<const double> q);
void eval_potential_gradient(const PotentialSpec& spec, std::span<const double> q,
                             std::span<double> out);
std::vector<double> eval_potential_gradient(const PotentialSpec& spec,
                                            std::span<const double> q);

/// sup over s >= 0 of |d/ds V(s e)| for the radial Morse profile; golden-section
/// refinement of the best point of a coarse scan, to 1e-10 in s.
double morse_grad_sup(const Morse& m);

// ---------------------------------------------------------------------------
// Damping block of the port-Hamiltonian form.
// ---------------------------------------------------------------------------

/// Psi(z): state dependent weighted graph Laplacian built from a kernel.
struct AlignmentLaplacian {
  KernelSpec kernel;
  bool operator==(const AlignmentLaplacian&) const = default;
};

/// R = diag(0, gamma I).
struct UniformFriction {
  double gamma = 1.0;
  bool operator==(const UniformFriction&) const = default;
};

struct DampingSpec {
  std::variant<AlignmentLaplacian, UniformFriction> form{AlignmentLaplacian{}};

  static DampingSpec alignment_laplacian(KernelSpec kernel);
  static DampingSpec uniform_friction(double gamma);

  void validate() const;
  bool is_friction() const;
  /// Alignment kernel, or the zero kernel for uniform friction.
  KernelSpec kernel() const;
  double gamma() const;

  bool operator==(const DampingSpec&) const = default;
};

// ---------------------------------------------------------------------------

struct AdmissibilityReport {
  std::size_t sample_count = 0;
  std::size_t dimension = 0;
  double max_antisymmetry_violation = 0.0;
  /// |fd - grad| / max(|grad|, 1), central differences with step fd_step.
  double max_gradient_fd_error = 0.0;
  double min_alignment = 0.0;
  double fd_step = 1e-6;

  bool antisymmetry_ok = false;
  bool gradient_ok = false;
  bool alignment_nonnegative = false;
  bool all_pass() const { return antisymmetry_ok && gradient_ok && alignment_nonnegative; }

  static constexpr double antisymmetry_tol = 1e-12;
  static constexpr double gradient_tol = 1e-6;
};

/// Samples displacements uniformly in [-3, 3]^d and distances in [0, 100].
/// dimension = 0 picks 1 for the cosine potential and 2 otherwise.
AdmissibilityReport check_admissibility(const KernelSpec& kernel, const PotentialSpec& potential,
                                        std::size_t sample_count, std::uint64_t seed,
                                        std::size_t dimension = 0);

}  // namespace phs
