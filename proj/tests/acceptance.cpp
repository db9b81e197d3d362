// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of
// failing criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "phs/assignment.hpp"
#include "phs/meanfield.hpp"
#include "phs/phs_core.hpp"
#include "phs/ports.hpp"
#include "phs/sampling.hpp"
#include "phs/spectrum.hpp"
#include "phs/stability.hpp"

using namespace phs;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
public:
  template <class T>
  Detail& operator<<(const T& x) {
    os_ << x;
    return *this;
  }
  std::string str() const { return os_.str(); }
  Detail() { os_.precision(4); }

private:
  std::ostringstream os_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const auto cs111 = KernelSpec::cucker_smale(1, 1, 1);
const auto morse2111 = PotentialSpec::morse(2, 1, 1, 1);
const GaussianSampler unit{{0.0}, {1.0}, {0.0}, {1.0}};

ModelSpec cs_morse(std::size_t n, std::size_t d) {
  return {morse2111, DampingSpec::alignment_laplacian(cs111), n, d};
}

IntegratorConfig rk4(double dt, double t_end, std::size_t every) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = every;
  return c;
}

Ensemble flocking_initial() {
  return sample_gaussian(unit, 32, 2, 1, Frame::centered);
}

Ensemble random_state(std::uint64_t seed, std::size_t n, std::size_t d) {
  const GaussianSampler s{{0.0}, {2.0}, {0.5}, {1.0}};
  return sample_gaussian(s, n, d, seed, Frame::centered);
}

// 1 and 2 share one run.
std::pair<Outcome, Outcome> dissipativity_and_momentum() {
  const auto t0 = Clock::now();
  const auto traj = simulate(flocking_initial(), cs_morse(32, 2), rk4(1e-3, 20.0, 1));
  const double secs = seconds_since(t0);
  double worst_rise = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.size(); ++k)
    worst_rise = std::max(worst_rise,
                          traj.diagnostics[k].hamiltonian - traj.diagnostics[k - 1].hamiltonian);
  double drift = 0;
  const auto& ref = traj.states.front().mean_velocity();
  for (const auto& s : traj.states) {
    const auto m = s.mean_velocity();
    for (std::size_t k = 0; k < m.size(); ++k) drift = std::max(drift, std::abs(m[k] - ref[k]));
  }
  Outcome a, b;
  a.pass = worst_rise <= 1e-8 && secs <= 60.0;
  a.detail = (Detail() << "records=" << traj.size() << " max H(t_k+1)-H(t_k)=" << worst_rise
                       << " (tol 1e-8) runtime=" << secs << "s (limit 60)")
                 .str();
  b.pass = drift <= 1e-9;
  b.detail = (Detail() << "max ||vbar(t)-vbar(0)||_inf=" << drift << " (tol 1e-9)").str();
  return {a, b};
}

Outcome structure_matrix() {
  double asym = 0, min_eig = std::numeric_limits<double>::infinity(), const_img = 0, gap = 0;
  const KernelSpec kernels[] = {cs111, KernelSpec::cucker_smale(2, 0.5, 0.75),
                                KernelSpec::constant(0.8)};
  Rng rng(77);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t n = 2 + seed % 15, d = 1 + seed % 3;
    const auto e = random_state(seed, n, d);
    const auto s = assemble_psi(e, kernels[seed % 3]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        asym = std::max(asym, std::abs(s.damping[i * n + j] - s.damping[j * n + i]));
    const auto ev = symmetric_eigenvalues(s.damping, n);
    min_eig = std::min(min_eig, ev.front());
    std::vector<double> w(d), ones(n * d), u(n * d);
    for (auto& x : w) x = rng.normal();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < d; ++k) ones[i * d + k] = w[k];
    for (double x : s.apply(ones)) const_img = std::max(const_img, std::abs(x));
    for (auto& x : u) x = rng.normal();
    for (std::size_t k = 0; k < d; ++k) {
      double m = 0;
      for (std::size_t i = 0; i < n; ++i) m += u[i * d + k];
      m /= double(n);
      for (std::size_t i = 0; i < n; ++i) u[i * d + k] -= m;
    }
    double norm2 = 0;
    for (double x : u) norm2 += x * x;
    const double lam2 = second_smallest_eigenvalue(s.damping, n);
    gap = std::max(gap, lam2 * norm2 - s.quadratic_form(u));
  }
  Outcome o;
  o.pass = asym <= 1e-12 && min_eig >= -1e-10 && const_img == 0.0 && gap <= 1e-10;
  o.detail = (Detail() << "1000 states: max asymmetry=" << asym << " min eig=" << min_eig
                       << " max |Psi 1w|=" << const_img << " max (lambda2|u|^2 - u'Psi u)=" << gap)
                 .str();
  return o;
}

Outcome vector_field_equivalence() {
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 20, d = 1 + seed % 3;
    const auto e = random_state(seed + 5000, n, d);
    const auto m = cs_morse(n, d);
    const auto a = phs_rhs(e, m), b = direct_rhs(e, m);
    for (std::size_t q = 0; q < a.size(); ++q) worst = std::max(worst, std::abs(a[q] - b[q]));
  }
  Outcome o;
  o.pass = worst <= 1e-12;
  o.detail = (Detail() << "100 states: max |phs_rhs - direct_rhs|=" << worst << " (tol 1e-12)").str();
  return o;
}

Outcome gradient_consistency() {
  const double h = 1e-5;
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 10, d = 1 + seed % 3;
    const auto e = random_state(seed + 9000, n, d);
    const auto g = hamiltonian_gradient(e, morse2111);
    auto z = e.state();
    for (std::size_t q = 0; q < z.size(); ++q) {
      const double keep = z[q];
      z[q] = keep + h;
      const double hp = hamiltonian(e.with_state(z), morse2111);
      z[q] = keep - h;
      const double hm = hamiltonian(e.with_state(z), morse2111);
      z[q] = keep;
      const double fd = (hp - hm) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[q]) / std::max(std::abs(g[q]), 1.0));
    }
  }
  const auto adm = check_admissibility(cs111, morse2111, 1000, 3);
  Outcome o;
  o.pass = worst <= 1e-6 && adm.max_antisymmetry_violation <= 1e-12;
  o.detail = (Detail() << "100 states: max FD error=" << worst
                       << " (tol 1e-6); 1000 samples: max |gradV(q)+gradV(-q)|="
                       << adm.max_antisymmetry_violation << " (tol 1e-12)")
                 .str();
  return o;
}

Outcome flocking() {
  const auto traj = simulate(flocking_initial(), cs_morse(32, 2), rk4(1e-3, 30.0, 100));
  const auto rep = check_flocking(traj, morse2111);
  const double need = 0.5 * (2 * rep.lambda2_min - rep.epsilon);
  const bool env_ok = rep.envelope_violations == 0;
  const bool res_ok = rep.final_residual <= 1e-4;
  const bool rate_ok = rep.fitted_rate && *rep.fitted_rate >= need;
  Outcome o;
  o.pass = env_ok && res_ok && rate_ok;
  o.detail = (Detail() << "lambda2_min=" << rep.lambda2_min << " eps=" << rep.epsilon
                       << " violations=" << rep.envelope_violations << (env_ok ? " ok" : " FAIL")
                       << "; final residual=" << rep.final_residual << " (tol 1e-4)"
                       << (res_ok ? " ok" : " FAIL") << "; fitted rate="
                       << (rep.fitted_rate ? *rep.fitted_rate : std::nan("")) << " (need >= "
                       << need << ")" << (rate_ok ? " ok" : " FAIL"))
                 .str();
  return o;
}

Outcome casimir() {
  const auto m = cs_morse(8, 2);
  Outcome o;
  Detail dt;
  for (const auto& cand : casimir_battery()) {
    const auto r = casimir_test(cand, m, 100, 11, 1e-12);
    const bool ok = cand.name == "constant" ? r.passed : (!r.passed && r.max_residual >= 0.1);
    o.pass = o.pass && ok;
    dt << cand.name << (r.passed ? " passes" : " fails") << " (residual " << r.max_residual
       << ") ";
  }
  o.detail = dt.str();
  return o;
}

EmpiricalMeasure random_cloud(std::size_t m, std::size_t d, Rng& rng) {
  EmpiricalMeasure f;
  f.m = m;
  f.d = d;
  f.atoms.resize(m * 2 * d);
  for (auto& a : f.atoms) a = rng.normal();
  return f;
}

double brute_w2sq(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  std::vector<std::size_t> p(a.m);
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (std::size_t i = 0; i < a.m; ++i) {
      const auto x = a.atom(i), y = b.atom(p[i]);
      for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
    }
    best = std::min(best, s / double(a.m));
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

Outcome exact_ot() {
  Rng rng(8);
  double diff = 0;
  for (std::size_t m = 2; m <= 7; ++m)
    for (int rep = 0; rep < 50; ++rep) {
      const auto a = random_cloud(m, 2, rng), b = random_cloud(m, 2, rng);
      diff = std::max(diff, std::abs(wasserstein2(a, b).cost - brute_w2sq(a, b)));
    }
  double sym = 0, tri = std::numeric_limits<double>::infinity(), self = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto a = random_cloud(5, 2, rng), b = random_cloud(5, 2, rng),
               c = random_cloud(5, 2, rng);
    const double ab = wasserstein2(a, b).distance, bc = wasserstein2(b, c).distance,
                 ac = wasserstein2(a, c).distance;
    sym = std::max(sym, std::abs(ab - wasserstein2(b, a).distance));
    tri = std::min(tri, ab + bc - ac);
    self = std::max(self, wasserstein2(a, a).distance);
  }
  Outcome o;
  o.pass = diff <= 1e-12 && sym <= 1e-12 && tri >= -1e-10 && self == 0.0;
  o.detail = (Detail() << "300 instances: max |W2^2 - brute force|=" << diff
                       << "; 100 triples: max asymmetry=" << sym << " min triangle slack=" << tri
                       << " max W2(mu,mu)=" << self)
                 .str();
  return o;
}

Outcome meanfield_identities() {
  double dh = 0, dd = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 30, d = 1 + seed % 3;
    const auto e = random_state(seed + 20000, n, d);
    const auto f = empirical_from_ensemble(e);
    dh = std::max(dh, std::abs(double(n) * meanfield_hamiltonian(f, morse2111) -
                               hamiltonian(e, morse2111)));
    dd = std::max(dd, std::abs(double(n) * meanfield_dissipation(f, cs111) -
                               dissipation_rate(e, DampingSpec::alignment_laplacian(cs111))));
  }
  Outcome o;
  o.pass = dh <= 1e-12 && dd <= 1e-12;
  o.detail = (Detail() << "100 states: max |N H_mf - H|=" << dh << " max |N D_mf - D|=" << dd
                       << " (tol 1e-12)")
                 .str();
  return o;
}

Outcome meanfield_decay() {
  const auto e = sample_gaussian(unit, 256, 2, 21, Frame::centered);
  const ModelSpec m{PotentialSpec::zero(),
                    DampingSpec::alignment_laplacian(KernelSpec::constant(1)), 256, 2};
  const auto traj = simulate(e, m, rk4(1e-3, 10.0, 100));
  const auto rep = meanfield_decay_check(traj, 1.0, 0.0, 0.5);
  Outcome o;
  o.pass = rep.envelope_violations == 0;
  o.detail = (Detail() << rep.records << " records, violations=" << rep.envelope_violations
                       << " max variance/envelope=" << rep.max_envelope_ratio << " fitted rate="
                       << (rep.fitted_rate ? *rep.fitted_rate : std::nan("")))
                 .str();
  return o;
}

Outcome dobrushin() {
  const auto e = sample_gaussian(unit, 64, 2, 31, Frame::centered);
  const auto m = cs_morse(64, 2);
  const auto a = dobrushin_experiment(e, 1e-3, m, rk4(1e-3, 5.0, 100), 32);
  const auto b = dobrushin_experiment(e, 1e-3, m, rk4(5e-4, 5.0, 200), 32);
  bool finite = std::isfinite(a.fitted_rate) && std::isfinite(b.fitted_rate);
  for (const auto* r : {&a, &b})
    for (double w : r->w2) finite = finite && std::isfinite(w);
  const double rel = std::abs(a.fitted_rate - b.fitted_rate) / std::abs(b.fitted_rate);
  Outcome o;
  o.pass = finite && rel <= 0.2;
  o.detail = (Detail() << "W2(0)=" << a.initial_w2 << " c(dt=1e-3)=" << a.fitted_rate
                       << " c(dt=5e-4)=" << b.fitted_rate << " relative change=" << rel
                       << " (tol 0.2) least-squares slopes " << a.least_squares_rate << ", "
                       << b.least_squares_rate << "; max ratio " << a.max_ratio)
                 .str();
  return o;
}

Outcome self_convergence_run() {
  const auto t0 = Clock::now();
  const EnsembleSampler s = [](std::size_t n, std::uint64_t seed) {
    return sample_gaussian(unit, n, 2, seed, Frame::centered);
  };
  const std::vector<std::size_t> ns{64, 256, 1024};
  const auto rows = self_convergence(cs_morse(64, 2), s, ns, 1.0, 10, rk4(5e-2, 1.0, 1), 100);
  const double secs = seconds_since(t0);
  bool decreasing = true;
  Detail dt;
  dt << "median W2:";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    dt << " N=" << rows[k].n << ":" << rows[k].median_w2;
    if (k > 0 && !(rows[k].median_w2 < rows[k - 1].median_w2)) decreasing = false;
  }
  dt << " runtime=" << secs << "s (limit 600)";
  Outcome o;
  o.pass = decreasing && secs <= 600.0;
  o.detail = dt.str();
  return o;
}

Outcome port_composition() {
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + seed % 16, d = 1 + seed % 3;
    const auto e = random_state(seed + 30000, n, d);
    const auto m = cs_morse(n, d);
    const auto net = compose_network(n, m, e);
    if (net.structure.damping != assemble_psi(e, cs111).damping) ++mismatches;
    if (net.hamiltonian != hamiltonian(e, morse2111)) ++mismatches;
  }
  Outcome o;
  o.pass = mismatches == 0;
  o.detail = (Detail() << "100 states, inexact (Psi, H) matches: " << mismatches).str();
  return o;
}

Outcome species_coupling() {
  double row = 0, min_eig = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + seed % 10;
    const auto a = sample_gaussian(unit, n, 2, seed, Frame::absolute);
    const auto b = sample_gaussian(unit, n, 2, seed + 500, Frame::absolute);
    const SpeciesCouplingSpec spec{cs_morse(n, 2),
                                   {PotentialSpec::morse(1, 2, 1, 3),
                                    DampingSpec::alignment_laplacian(KernelSpec::constant(0.5)), n,
                                    2},
                                   KernelSpec::cucker_smale(0.7, 1, 0.5)};
    const auto s = assemble_coupled_structure(spec, a, b);
    for (std::size_t i = 0; i < s.n; ++i) {
      double r = 0;
      for (std::size_t j = 0; j < s.n; ++j) r += s.damping[i * s.n + j];
      row = std::max(row, std::abs(r));
    }
    min_eig = std::min(min_eig, smallest_eigenvalue(s.damping, s.n));
  }

  const auto cfg = rk4(1e-3, 5.0, 10);
  const auto a = sample_gaussian(unit, 16, 2, 41, Frame::absolute);
  const auto b = sample_gaussian(unit, 16, 2, 42, Frame::absolute);

  const SpeciesCouplingSpec indep{cs_morse(16, 2),
                                  {PotentialSpec::morse(1, 2, 1, 3),
                                   DampingSpec::alignment_laplacian(KernelSpec::constant(0.5)), 16,
                                   2},
                                  KernelSpec::zero()};
  const auto tc = simulate_coupled(indep, a, b, cfg);
  const auto t1 = simulate(a, indep.first, cfg), t2 = simulate(b, indep.second, cfg);
  bool bitwise = tc.size() == t1.size();
  for (std::size_t k = 0; bitwise && k < tc.size(); ++k)
    bitwise = tc.first[k].state() == t1.states[k].state() &&
              tc.second[k].state() == t2.states[k].state();

  // Equal kernels and no potential: the coupled flow is the 2N flow with the kernel doubled,
  // since each species normalizes by its own size N.
  const ModelSpec align{PotentialSpec::zero(), DampingSpec::alignment_laplacian(cs111), 16, 2};
  const auto te = simulate_coupled({align, align, cs111}, a, b, cfg);
  auto x = a.positions, v = a.velocities;
  x.insert(x.end(), b.positions.begin(), b.positions.end());
  v.insert(v.end(), b.velocities.begin(), b.velocities.end());
  const ModelSpec big{PotentialSpec::zero(),
                      DampingSpec::alignment_laplacian(KernelSpec::cucker_smale(2, 1, 1)), 32, 2};
  const auto ts = simulate(Ensemble::from_data(32, 2, x, v), big, cfg);
  double single = 0;
  for (std::size_t k = 0; k < te.size(); ++k)
    for (std::size_t q = 0; q < 32; ++q) {
      single = std::max(single, std::abs(te.first[k].positions[q] - ts.states[k].positions[q]));
      single = std::max(single, std::abs(te.second[k].positions[q] - ts.states[k].positions[32 + q]));
      single = std::max(single, std::abs(te.first[k].velocities[q] - ts.states[k].velocities[q]));
      single =
          std::max(single, std::abs(te.second[k].velocities[q] - ts.states[k].velocities[32 + q]));
    }

  const SpeciesCouplingSpec full{cs_morse(16, 2), cs_morse(16, 2),
                                 KernelSpec::cucker_smale(0.5, 1, 1)};
  const auto th = simulate_coupled(full, a, b, rk4(1e-3, 20.0, 1));
  double rise = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < th.size(); ++k)
    rise = std::max(rise, th.diagnostics[k].hamiltonian - th.diagnostics[k - 1].hamiltonian);

  Outcome o;
  o.pass = row <= 1e-14 && min_eig >= -1e-10 && bitwise && single <= 1e-12 && rise <= 1e-8;
  o.detail = (Detail() << "max |row sum|=" << row << " min eig=" << min_eig
                       << "; psi_c=0 bitwise=" << (bitwise ? "yes" : "no")
                       << "; max diff to 2N run (doubled kernel)=" << single
                       << "; coupled max H rise=" << rise)
                 .str();
  return o;
}

Outcome kuramoto() {
  const double gamma = 0.5;
  const GaussianSampler s{{0.0}, {0.5}, {0.0}, {0.5}};
  const auto e = sample_gaussian(s, 16, 1, 51, Frame::centered);
  const ModelSpec m{PotentialSpec::cosine(), DampingSpec::uniform_friction(gamma), 16, 1};
  const auto traj = simulate(e, m, rk4(1e-3, 30.0, 1));
  double rise = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.size(); ++k)
    rise = std::max(rise, traj.diagnostics[k].hamiltonian - traj.diagnostics[k - 1].hamiltonian);
  std::vector<double> t, dev2, dev;
  for (std::size_t k = 0; k < traj.size(); k += 100) {
    const double v2 = velocity_deviation_sq(traj.states[k]);
    if (!(v2 > 0)) continue;
    t.push_back(traj.times[k]);
    dev2.push_back(v2);
    dev.push_back(std::sqrt(v2));
  }
  const double rate_sq = fit_decay_rate(t, dev2);
  const double rate_norm = fit_decay_rate(t, dev);
  Outcome o;
  o.pass = rise <= 1e-8 && rate_sq >= 0.9 * gamma;
  o.detail = (Detail() << "max H rise per step=" << rise << "; fitted rate of |v-1vbar|^2="
                       << rate_sq << " (need >= " << 0.9 * gamma << "); of |v-1vbar|: "
                       << rate_norm)
                 .str();
  return o;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::pair<Outcome, Outcome> first_two;
  bool have_first_two = false;
  auto run_first_two = [&](int which) {
    if (!have_first_two) {
      first_two = dissipativity_and_momentum();
      have_first_two = true;
    }
    return which == 1 ? first_two.first : first_two.second;
  };
  const std::vector<Item> items{
      {1, "dissipativity", [&] { return run_first_two(1); }},
      {2, "momentum conservation", [&] { return run_first_two(2); }},
      {3, "structure matrix", structure_matrix},
      {4, "vector-field equivalence", vector_field_equivalence},
      {5, "gradient consistency", gradient_consistency},
      {6, "flocking", flocking},
      {7, "Casimir characterization", casimir},
      {8, "exact OT oracle", exact_ot},
      {9, "mean-field identities", meanfield_identities},
      {10, "mean-field decay", meanfield_decay},
      {11, "Dobrushin growth", dobrushin},
      {12, "self-convergence", self_convergence_run},
      {13, "port composition", port_composition},
      {14, "species coupling", species_coupling},
      {15, "Kuramoto", kuramoto},
  };
  int failures = 0;
  for (const auto& it : items) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", it.id, it.name,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", int(items.size()) - failures, items.size());
  return failures;
}
