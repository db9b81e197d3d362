#include "phs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phs/errors.hpp"
#include "phs/sampling.hpp"

namespace phs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double squared_norm(std::span<const double> q) {
  double s2 = 0.0;
  for (double c : q) s2 += c * c;
  return s2;
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }
bool nonneg_finite(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

// --- KernelSpec -------------------------------------------------------------

KernelSpec KernelSpec::cucker_smale(double K, double delta, double beta) {
  KernelSpec k;
  k.form = CuckerSmale{K, delta, beta};
  k.validate();
  return k;
}

KernelSpec KernelSpec::constant(double c) {
  KernelSpec k;
  k.form = ConstantKernel{c};
  k.validate();
  return k;
}

KernelSpec KernelSpec::zero() { return KernelSpec{}; }

void KernelSpec::validate() const {
  std::visit(overloaded{
                 [](const CuckerSmale& cs) {
                   if (!positive_finite(cs.K) || !positive_finite(cs.delta) ||
                       !nonneg_finite(cs.beta))
                     throw ParameterError("cucker_smale kernel needs K > 0, delta > 0, beta >= 0");
                 },
                 [](const ConstantKernel& c) {
                   if (!nonneg_finite(c.c)) throw ParameterError("constant kernel needs c >= 0");
                 },
                 [](const ZeroKernel&) {},
             },
             form);
  if (lower_bound && !nonneg_finite(*lower_bound))
    throw ParameterError("kernel lower_bound must be a nonnegative number");
}

std::string KernelSpec::name() const {
  return std::visit(overloaded{
                        [](const CuckerSmale&) { return std::string("cucker_smale"); },
                        [](const ConstantKernel&) { return std::string("constant"); },
                        [](const ZeroKernel&) { return std::string("zero"); },
                    },
                    form);
}

bool KernelSpec::is_zero() const {
  if (std::holds_alternative<ZeroKernel>(form)) return true;
  if (const auto* c = std::get_if<ConstantKernel>(&form)) return c->c == 0.0;
  return false;
}

double alignment_from_squared(const KernelSpec& spec, double s2) noexcept {
  switch (spec.form.index()) {
    case 0: {
      const auto& cs = *std::get_if<CuckerSmale>(&spec.form);
      const double base = cs.delta * cs.delta + s2;
      if (cs.beta == 1.0) return cs.K / base;
      return cs.K / std::pow(base, cs.beta);
    }
    case 1:
      return std::get_if<ConstantKernel>(&spec.form)->c;
    default:
      return 0.0;
  }
}

double eval_alignment(const KernelSpec& spec, double s) {
  if (!(s >= 0.0)) throw DomainError("alignment kernel evaluated at a negative distance");
  return alignment_from_squared(spec, s * s);
}

bool lower_bound_holds(const KernelSpec& spec, double support_radius, std::size_t grid_points) {
  if (!spec.lower_bound) return true;
  if (!(support_radius >= 0.0)) throw DomainError("support radius must be nonnegative");
  const double smax = 2.0 * support_radius;
  const std::size_t m = std::max<std::size_t>(grid_points, 2);
  for (std::size_t k = 0; k < m; ++k) {
    const double s = smax * static_cast<double>(k) / static_cast<double>(m - 1);
    if (eval_alignment(spec, s) < *spec.lower_bound) return false;
  }
  return true;
}

// --- PotentialSpec ------------------------------------------------------------

PotentialSpec PotentialSpec::morse(double R, double A, double r, double a) {
  PotentialSpec p;
  p.form = Morse{R, A, r, a};
  p.validate();
  p.grad_sup_bound = morse_grad_sup(std::get<Morse>(p.form));
  return p;
}

PotentialSpec PotentialSpec::cosine() {
  PotentialSpec p;
  p.form = CosinePotential{};
  p.grad_sup_bound = 1.0;
  return p;
}

PotentialSpec PotentialSpec::zero() {
  PotentialSpec p;
  p.grad_sup_bound = 0.0;
  return p;
}

void PotentialSpec::validate() const {
  if (const auto* m = std::get_if<Morse>(&form)) {
    if (!nonneg_finite(m->R) || !nonneg_finite(m->A) || !positive_finite(m->r) ||
        !positive_finite(m->a))
      throw ParameterError("morse potential needs R, A >= 0 and r, a > 0");
  }
  if (grad_sup_bound && !nonneg_finite(*grad_sup_bound))
    throw ParameterError("grad_sup_bound must be a nonnegative number");
}

std::string PotentialSpec::name() const {
  return std::visit(overloaded{
                        [](const Morse&) { return std::string("morse"); },
                        [](const CosinePotential&) { return std::string("cosine"); },
                        [](const ZeroPotential&) { return std::string("zero"); },
                    },
                    form);
}

bool PotentialSpec::is_zero() const {
  if (std::holds_alternative<ZeroPotential>(form)) return true;
  if (const auto* m = std::get_if<Morse>(&form)) return m->R == 0.0 && m->A == 0.0;
  return false;
}

void PotentialSpec::check_dimension(std::size_t d) const {
  if (d == 0) throw DimensionError("space dimension must be at least 1");
  if (std::holds_alternative<CosinePotential>(form) && d != 1)
    throw DimensionError("cosine (Kuramoto) potential is defined for d = 1 only, got d = " +
                         std::to_string(d));
}

double eval_potential(const PotentialSpec& spec, std::span<const double> q) {
  spec.check_dimension(q.size());
  return std::visit(overloaded{
                        [&](const Morse& m) {
                          const double s2 = squared_norm(q);
                          return m.R * std::exp(-s2 / m.r) - m.A * std::exp(-s2 / m.a);
                        },
                        [&](const CosinePotential&) { return -std::cos(q[0]); },
                        [](const ZeroPotential&) { return 0.0; },
                    },
                    spec.form);
}

void eval_potential_gradient(const PotentialSpec& spec, std::span<const double> q,
                             std::span<double> out) {
  spec.check_dimension(q.size());
  if (out.size() != q.size()) throw DimensionError("gradient output has the wrong length");
  std::visit(overloaded{
                 [&](const Morse& m) {
                   const double s2 = squared_norm(q);
                   const double f = -2.0 * m.R / m.r * std::exp(-s2 / m.r) +
                                    2.0 * m.A / m.a * std::exp(-s2 / m.a);
                   for (std::size_t k = 0; k < q.size(); ++k) out[k] = f * q[k];
                 },
                 [&](const CosinePotential&) { out[0] = std::sin(q[0]); },
                 [&](const ZeroPotential&) { std::fill(out.begin(), out.end(), 0.0); },
             },
             spec.form);
}

std::vector<double> eval_potential_gradient(const PotentialSpec& spec, std::span<const double> q) {
  std::vector<double> out(q.size());
  eval_potential_gradient(spec, q, out);
  return out;
}

double morse_grad_sup(const Morse& m) {
  auto slope = [&](double s) {
    const double s2 = s * s;
    return std::abs(2.0 * s * (m.R / m.r * std::exp(-s2 / m.r) - m.A / m.a * std::exp(-s2 / m.a)));
  };
  // Coarse scan picks the lobe holding the global maximum; |V'| may have two lobes.
  const double smax = 8.0 * std::sqrt(std::max(m.r, m.a));
  constexpr std::size_t grid = 4000;
  const double h = smax / grid;
  std::size_t best = 0;
  double best_val = -1.0;
  for (std::size_t k = 0; k <= grid; ++k) {
    const double v = slope(h * static_cast<double>(k));
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  double lo = h * static_cast<double>(best == 0 ? 0 : best - 1);
  double hi = h * static_cast<double>(std::min(best + 1, grid));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = slope(x1);
  double f2 = slope(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = slope(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = slope(x1);
    }
  }
  return std::max({best_val, f1, f2, slope(0.5 * (lo + hi))});
}

// --- DampingSpec --------------------------------------------------------------

DampingSpec DampingSpec::alignment_laplacian(KernelSpec kernel) {
  DampingSpec d;
  d.form = AlignmentLaplacian{std::move(kernel)};
  d.validate();
  return d;
}

DampingSpec DampingSpec::uniform_friction(double gamma) {
  DampingSpec d;
  d.form = UniformFriction{gamma};
  d.validate();
  return d;
}

void DampingSpec::validate() const {
  if (const auto* f = std::get_if<UniformFriction>(&form)) {
    if (!positive_finite(f->gamma)) throw ParameterError("uniform friction needs gamma > 0");
  } else {
    std::get<AlignmentLaplacian>(form).kernel.validate();
  }
}

bool DampingSpec::is_friction() const { return std::holds_alternative<UniformFriction>(form); }

KernelSpec DampingSpec::kernel() const {
  if (const auto* a = std::get_if<AlignmentLaplacian>(&form)) return a->kernel;
  return KernelSpec::zero();
}

double DampingSpec::gamma() const {
  if (const auto* f = std::get_if<UniformFriction>(&form)) return f->gamma;
  return 0.0;
}

// --- admissibility --------------------------------------------------------------

AdmissibilityReport check_admissibility(const KernelSpec& kernel, const PotentialSpec& potential,
                                        std::size_t sample_count, std::uint64_t seed,
                                        std::size_t dimension) {
  if (sample_count == 0) throw ParameterError("sample_count must be positive");
  const std::size_t d =
      dimension != 0 ? dimension
                     : (std::holds_alternative<CosinePotential>(potential.form) ? 1 : 2);
  potential.check_dimension(d);

  AdmissibilityReport rep;
  rep.sample_count = sample_count;
  rep.dimension = d;
  rep.fd_step = 1e-5;
  rep.min_alignment = std::numeric_limits<double>::infinity();

  Rng rng(seed);
  std::vector<double> q(d), mq(d), g(d), gm(d), qp(d);
  for (std::size_t s = 0; s < sample_count; ++s) {
    for (std::size_t k = 0; k < d; ++k) {
      q[k] = rng.uniform(-3.0, 3.0);
      mq[k] = -q[k];
    }
    eval_potential_gradient(potential, q, g);
    eval_potential_gradient(potential, mq, gm);
    double anti = 0.0;
    for (std::size_t k = 0; k < d; ++k) anti += (g[k] + gm[k]) * (g[k] + gm[k]);
    rep.max_antisymmetry_violation = std::max(rep.max_antisymmetry_violation, std::sqrt(anti));

    double err2 = 0.0;
    double gn2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      qp = q;
      qp[k] = q[k] + rep.fd_step;
      const double vp = eval_potential(potential, qp);
      qp[k] = q[k] - rep.fd_step;
      const double vm = eval_potential(potential, qp);
      const double fd = (vp - vm) / (2.0 * rep.fd_step);
      err2 += (fd - g[k]) * (fd - g[k]);
      gn2 += g[k] * g[k];
    }
    rep.max_gradient_fd_error =
        std::max(rep.max_gradient_fd_error, std::sqrt(err2) / std::max(std::sqrt(gn2), 1.0));

    const double dist = rng.uniform(0.0, 100.0);
    rep.min_alignment = std::min(rep.min_alignment, eval_alignment(kernel, dist));
  }
  rep.antisymmetry_ok = rep.max_antisymmetry_violation <= AdmissibilityReport::antisymmetry_tol;
  rep.gradient_ok = rep.max_gradient_fd_error <= AdmissibilityReport::gradient_tol;
  rep.alignment_nonnegative = rep.min_alignment >= 0.0;
  return rep;
}

}  // namespace phs
