#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "phs/errors.hpp"
#include "phs/phs_core.hpp"
#include "phs/sampling.hpp"
#include "phs/spectrum.hpp"
#include "phs/stability.hpp"

using namespace phs;

namespace {

const auto cs111 = KernelSpec::cucker_smale(1, 1, 1);
const auto morse2111 = PotentialSpec::morse(2, 1, 1, 1);

// Characteristic polynomial by Faddeev-LeVerrier: coefficients c[0..n] of
// det(lambda I - A) = sum c[k] lambda^(n-k), c[0] = 1.
std::vector<double> charpoly(const std::vector<double>& a, std::size_t n) {
  std::vector<double> m(n * n, 0.0), am(n * n);
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I
    std::vector<double> next(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t l = 0; l < n; ++l) s += a[i * n + l] * m[l * n + j];
        next[i * n + j] = s + (i == j ? c[k - 1] : 0.0);
      }
    m = next;
    double tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i * n + l] * m[l * n + i];
    c[k] = -tr / static_cast<double>(k);
  }
  return c;
}

// Durand-Kerner followed by real Newton polishing.
std::vector<double> real_roots(const std::vector<double>& c) {
  const std::size_t n = c.size() - 1;
  using cd = std::complex<double>;
  auto p = [&](cd x) {
    cd r = 0;
    for (double k : c) r = r * x + k;
    return r;
  };
  std::vector<cd> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(cd(0.4, 0.9), static_cast<double>(i));
  for (int it = 0; it < 2000; ++it)
    for (std::size_t i = 0; i < n; ++i) {
      cd den = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= p(z[i]) / den;
    }
  std::vector<double> out;
  for (auto r : z) {
    double x = r.real();
    for (int it = 0; it < 50; ++it) {
      double f = 0, df = 0;
      for (double k : c) {
        df = df * x + f;
        f = f * x + k;
      }
      if (df == 0) break;
      x -= f / df;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Ensemble ens1d(std::vector<double> x, std::vector<double> v) {
  const auto n = x.size();
  return shift_to_center(Ensemble::from_data(n, 1, std::move(x), std::move(v))).ensemble;
}

}  // namespace

TEST_CASE("second smallest eigenvalue examples") {
  CHECK(second_smallest_eigenvalue(std::vector<double>{0.5, -0.5, -0.5, 0.5}, 2) ==
        doctest::Approx(1.0));
  const double a = 2.0 / 3, b = -1.0 / 3;
  CHECK(second_smallest_eigenvalue(std::vector<double>{a, b, b, b, a, b, b, b, a}, 3) ==
        doctest::Approx(1.0));
  CHECK(second_smallest_eigenvalue(std::vector<double>(16, 0.0), 4) == 0.0);
  CHECK_THROWS_AS(second_smallest_eigenvalue(std::vector<double>{1, 0.5, 0.4, 1}, 2), InputError);
}

TEST_CASE("property: eigenvalues agree with characteristic polynomial roots") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 2 + seed % 3;
    const auto e = sample_gaussian({{0.0}, {2.0}, {0.0}, {1.0}}, n, 2, seed, Frame::absolute);
    const auto psi = assemble_psi(e, cs111).damping;
    const auto roots = real_roots(charpoly(psi, n));
    const auto ev = symmetric_eigenvalues(psi, n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(roots[k] - ev[k]) <= 1e-10);
    CHECK(std::abs(second_smallest_eigenvalue(psi, n) - std::max(roots[1], 0.0)) <= 1e-10);
  }
}

TEST_CASE("lasalle residual") {
  CHECK(lasalle_residual(ens1d({1, 1, 1}, {2, 2, 2}), morse2111) == 0.0);
  CHECK(lasalle_residual(ens1d({0, 3}, {1, -1}), PotentialSpec::zero()) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(lasalle_residual(Ensemble::from_data(1, 1, {0}, {0}), morse2111), FrameError);

  SUBCASE("two particles at the Morse equilibrium distance") {
    // Attractive tail: V = 2 e^{-s^2} - e^{-s^2/4}; the radial derivative vanishes where
    // 4 e^{-s^2} = 0.5 e^{-s^2/4}. Oracle: bisection on the radial profile.
    const auto p = PotentialSpec::morse(2, 1, 1, 4);
    auto radial = [](double s) { return s * (-4 * std::exp(-s * s) + 0.5 * std::exp(-s * s / 4)); };
    double lo = 0.5, hi = 3.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (radial(mid) < 0 ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    CHECK(s * s == doctest::Approx(4.0 / 3.0 * std::log(8.0)).epsilon(1e-12));
    CHECK(lasalle_residual(ens1d({-s / 2, s / 2}, {0.3, 0.3}), p) <= 1e-10);
  }
}

TEST_CASE("Gronwall envelope") {
  CHECK(gronwall_envelope(1, 0, 1, 0.5, 0) == 1.0);
  CHECK(gronwall_envelope(1, 0, 1, 0.5, 1) == doctest::Approx(std::exp(-1.5)));
  CHECK(gronwall_envelope(0, 0, 0.3, 0.1, 7) == 0.0);
  CHECK(gronwall_envelope(2, 3, 1, 0.5, 2) == doctest::Approx((2 + 4 * 9) * std::exp(-3.0)));
  CHECK_THROWS_AS(gronwall_envelope(1, 0, 1, 2.0, 1), ParameterError);
  CHECK_THROWS_AS(gronwall_envelope(1, 0, 1, 0.0, 1), ParameterError);
}

TEST_CASE("fit_decay_rate") {
  std::vector<double> t{0, 0.5, 1}, v;
  for (double x : t) v.push_back(std::exp(-2 * x));
  CHECK(fit_decay_rate(t, v) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit_decay_rate(t, std::vector<double>{3, 3, 3}) == 0.0);
  std::vector<double> t11, v11;
  for (int k = 0; k <= 10; ++k) {
    t11.push_back(0.7 * k);
    v11.push_back(5 * std::exp(-0.3 * 0.7 * k));
  }
  CHECK(std::abs(fit_decay_rate(t11, v11) - 0.3) <= 1e-10);
  CHECK_THROWS_AS(fit_decay_rate(t, std::vector<double>{1, 0, 1}), DomainError);
  CHECK_THROWS_AS(fit_decay_rate(std::vector<double>{0, 1}, std::vector<double>{1, 1}),
                  ParameterError);
}

TEST_CASE("check_flocking") {
  IntegratorConfig c;
  c.dt = 0.01;
  c.t_end = 1.0;
  c.record_every = 5;
  SUBCASE("already flocked") {
    const auto e = ens1d({0, 0.4, 1.1, 2}, {0.5, 0.5, 0.5, 0.5});
    ModelSpec m{PotentialSpec::zero(), DampingSpec::alignment_laplacian(cs111), 4, 1};
    const auto rep = check_flocking(simulate(e, m, c), m.potential);
    CHECK(rep.envelope_violations == 0);
    CHECK(rep.final_residual <= 1e-10);
    CHECK_FALSE(rep.fitted_rate.has_value());
  }
  SUBCASE("zero kernel has no spectral gap") {
    const auto e = ens1d({0, 1, 2}, {1, 0, -1});
    ModelSpec m{morse2111, DampingSpec::alignment_laplacian(KernelSpec::zero()), 3, 1};
    CHECK_THROWS_AS(check_flocking(simulate(e, m, c), m.potential), ParameterError);
  }
  SUBCASE("epsilon outside (0, 2 lambda2_min)") {
    const auto e = ens1d({0, 1, 2}, {1, 0, -1});
    ModelSpec m{morse2111, DampingSpec::alignment_laplacian(cs111), 3, 1};
    const auto traj = simulate(e, m, c);
    CHECK_THROWS_AS(check_flocking(traj, m.potential, 10.0), ParameterError);
    const auto rep = check_flocking(traj, m.potential);
    CHECK(rep.epsilon == doctest::Approx(rep.lambda2_min / 2));
    CHECK(rep.envelope_violations == 0);
  }
  SUBCASE("too few records") {
    const auto e = ens1d({0, 1}, {1, 0});
    ModelSpec m{morse2111, DampingSpec::alignment_laplacian(cs111), 2, 1};
    c.record_every = 50;
    CHECK_THROWS_AS(check_flocking(simulate(e, m, c), m.potential), ParameterError);
  }
}

TEST_CASE("Casimir battery") {
  ModelSpec m{morse2111, DampingSpec::alignment_laplacian(cs111), 6, 2};
  for (const auto& cand : casimir_battery()) {
    const auto r = casimir_test(cand, m, 50, 3, 1e-12);
    CAPTURE(cand.name);
    if (cand.name == "constant") {
      CHECK(r.passed);
      CHECK(r.max_residual == 0.0);
    } else {
      CHECK_FALSE(r.passed);
      CHECK(r.max_residual >= 0.1);
    }
  }
  SUBCASE("sum of velocities: residual (-1, -1 Psi) = (-1, 0), norm sqrt(Nd)") {
    const auto battery = casimir_battery();
    const auto it = std::find_if(battery.begin(), battery.end(),
                                 [](const auto& c) { return c.name == "sum_v"; });
    CHECK(casimir_test(*it, m, 20, 1, 1e-12).max_residual == doctest::Approx(std::sqrt(12.0)));
  }
  SUBCASE("sum of positions: residual (0, 1)") {
    const auto battery = casimir_battery();
    const auto it = std::find_if(battery.begin(), battery.end(),
                                 [](const auto& c) { return c.name == "sum_r"; });
    CHECK(casimir_test(*it, m, 20, 1, 1e-12).max_residual == doctest::Approx(std::sqrt(12.0)));
  }
  SUBCASE("friction damping") {
    ModelSpec f{PotentialSpec::cosine(), DampingSpec::uniform_friction(0.5), 4, 1};
    CHECK(casimir_test(casimir_battery()[0], f, 10, 0, 1e-12).passed);
    CHECK_FALSE(casimir_test(casimir_battery()[1], f, 10, 0, 1e-12).passed);
  }
}
