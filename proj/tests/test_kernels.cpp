#include <doctest.h>

#include <cmath>
#include <vector>

#include "phs/errors.hpp"
#include "phs/kernels.hpp"
#include "phs/sampling.hpp"

using namespace phs;

namespace {

const auto cs111 = KernelSpec::cucker_smale(1, 1, 1);
const auto morse2111 = PotentialSpec::morse(2, 1, 1, 1);

std::vector<double> fd_gradient(const PotentialSpec& p, std::vector<double> q, double h) {
  std::vector<double> g(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double x = q[k];
    q[k] = x + h;
    const double fp = eval_potential(p, q);
    q[k] = x - h;
    const double fm = eval_potential(p, q);
    q[k] = x;
    g[k] = (fp - fm) / (2 * h);
  }
  return g;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<PotentialSpec> all_potentials() {
  return {morse2111, PotentialSpec::morse(2, 1, 1, 4), PotentialSpec::morse(0.5, 1.5, 0.7, 2.3),
          PotentialSpec::cosine(), PotentialSpec::zero()};
}

std::size_t dim_for(const PotentialSpec& p) {
  return std::holds_alternative<CosinePotential>(p.form) ? 1 : 3;
}

}  // namespace

TEST_CASE("alignment kernel closed forms") {
  CHECK(eval_alignment(cs111, 0.0) == 1.0);
  CHECK(eval_alignment(cs111, 1.0) == 0.5);
  CHECK(eval_alignment(KernelSpec::zero(), 3.7) == 0.0);
  CHECK(eval_alignment(KernelSpec::constant(2.5), 9.0) == 2.5);
  const auto k = KernelSpec::cucker_smale(2.0, 0.5, 0.75);
  CHECK(eval_alignment(k, 1.3) == doctest::Approx(2.0 / std::pow(0.25 + 1.69, 0.75)).epsilon(1e-15));
  CHECK(alignment_from_squared(k, 1.69) == doctest::Approx(eval_alignment(k, 1.3)).epsilon(1e-15));
}

TEST_CASE("negative distance is a domain error") {
  CHECK_THROWS_AS(eval_alignment(cs111, -1e-300), DomainError);
  CHECK_THROWS_AS(eval_alignment(cs111, std::nan("")), DomainError);
}

TEST_CASE("invalid kernel and potential parameters") {
  CHECK_THROWS_AS(KernelSpec::cucker_smale(0, 1, 1).validate(), ParameterError);
  CHECK_THROWS_AS(KernelSpec::cucker_smale(1, 0, 1).validate(), ParameterError);
  CHECK_THROWS_AS(KernelSpec::cucker_smale(1, 1, -1).validate(), ParameterError);
  CHECK_THROWS_AS(KernelSpec::constant(-1).validate(), ParameterError);
  CHECK_THROWS_AS(PotentialSpec::morse(-1, 1, 1, 1).validate(), ParameterError);
  CHECK_THROWS_AS(PotentialSpec::morse(1, 1, 0, 1).validate(), ParameterError);
  CHECK_THROWS_AS(DampingSpec::uniform_friction(0).validate(), ParameterError);
}

TEST_CASE("potential values") {
  const std::vector<double> zero1{0.0}, one1{1.0};
  CHECK(eval_potential(morse2111, zero1) == 1.0);
  CHECK(eval_potential(PotentialSpec::cosine(), zero1) == -1.0);
  CHECK(eval_potential(morse2111, one1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  // independent scalar evaluation: 2 e^{-1} - e^{-1}
  CHECK(std::abs(eval_potential(morse2111, one1) - 0.36787944117144233) < 1e-15);
}

TEST_CASE("cosine potential is one-dimensional") {
  const std::vector<double> q2{0.1, 0.2};
  CHECK_THROWS_AS(eval_potential(PotentialSpec::cosine(), q2), DimensionError);
  CHECK_THROWS_AS(eval_potential_gradient(PotentialSpec::cosine(), q2), DimensionError);
}

TEST_CASE("potential gradients") {
  for (const auto& p : all_potentials()) {
    const std::vector<double> z(dim_for(p), 0.0);
    for (double g : eval_potential_gradient(p, z)) CHECK(g == 0.0);
  }
  const std::vector<double> one1{1.0};
  const auto g = eval_potential_gradient(morse2111, one1);
  CHECK(g[0] == doctest::Approx(-2 * std::exp(-1.0)).epsilon(1e-15));
  const auto fd = fd_gradient(morse2111, one1, 1e-6);
  CHECK(std::abs(fd[0] - g[0]) < 1e-8);
  const std::vector<double> half_pi{M_PI / 2};
  CHECK(eval_potential_gradient(PotentialSpec::cosine(), half_pi)[0] == doctest::Approx(1.0));
}

TEST_CASE("property: gradient antisymmetry on 1000 samples") {
  for (const auto& p : all_potentials()) {
    Rng rng(11);
    const std::size_t d = dim_for(p);
    double worst = 0;
    for (int s = 0; s < 1000; ++s) {
      std::vector<double> q(d), mq(d);
      for (std::size_t k = 0; k < d; ++k) {
        q[k] = rng.uniform(-4, 4);
        mq[k] = -q[k];
      }
      const auto a = eval_potential_gradient(p, q);
      const auto b = eval_potential_gradient(p, mq);
      for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, std::abs(a[k] + b[k]));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("property: gradient matches central differences") {
  for (const auto& p : all_potentials()) {
    Rng rng(5);
    const std::size_t d = dim_for(p);
    double worst = 0;
    for (int s = 0; s < 100; ++s) {
      std::vector<double> q(d);
      for (auto& x : q) x = rng.uniform(-3, 3);
      const auto g = eval_potential_gradient(p, q);
      const auto fd = fd_gradient(p, q, 1e-5);
      std::vector<double> diff(d);
      for (std::size_t k = 0; k < d; ++k) diff[k] = fd[k] - g[k];
      worst = std::max(worst, norm(diff) / std::max(norm(g), 1.0));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("property: alignment is nonnegative") {
  Rng rng(3);
  for (const auto& k : {cs111, KernelSpec::cucker_smale(3, 0.1, 2.5), KernelSpec::constant(0),
                        KernelSpec::zero()})
    for (int s = 0; s < 1000; ++s) CHECK(eval_alignment(k, rng.uniform(0, 100)) >= 0.0);
}

TEST_CASE("morse gradient bound") {
  SUBCASE("repulsive profile: sup of 2 s e^{-s^2} is sqrt(2/e)") {
    REQUIRE(morse2111.grad_sup_bound.has_value());
    CHECK(*morse2111.grad_sup_bound == doctest::Approx(std::sqrt(2.0 / std::exp(1.0))).epsilon(1e-9));
  }
  SUBCASE("property: bound dominates |grad V| on random samples") {
    for (const auto& p : {morse2111, PotentialSpec::morse(2, 1, 1, 4),
                          PotentialSpec::morse(0.5, 1.5, 0.7, 2.3)}) {
      Rng rng(9);
      for (int s = 0; s < 1000; ++s) {
        std::vector<double> q{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(norm(eval_potential_gradient(p, q)) <= *p.grad_sup_bound + 1e-12);
      }
    }
  }
  CHECK(*PotentialSpec::cosine().grad_sup_bound == 1.0);
  CHECK(*PotentialSpec::zero().grad_sup_bound == 0.0);
}

TEST_CASE("admissibility report") {
  const auto r = check_admissibility(cs111, morse2111, 100, 7);
  CHECK(r.all_pass());
  CHECK(r.max_antisymmetry_violation <= 1e-12);
  CHECK(r.max_gradient_fd_error <= 1e-6);
  const auto z = check_admissibility(KernelSpec::zero(), PotentialSpec::zero(), 10, 0);
  CHECK(z.all_pass());
  CHECK(z.min_alignment == 0.0);
  CHECK(check_admissibility(cs111, PotentialSpec::cosine(), 50, 1).dimension == 1);
}

TEST_CASE("declared lower bound against the support radius") {
  auto k = cs111;
  k.lower_bound = 0.1999;  // psi(2) = 0.2, distances up to 2 * radius
  CHECK(lower_bound_holds(k, 1.0));
  CHECK_FALSE(lower_bound_holds(k, 1.5));
  CHECK(lower_bound_holds(cs111, 100.0));
}
