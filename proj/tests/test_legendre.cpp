#include <doctest.h>

#include <cmath>
#include <numbers>

#include "metrobound/error.hpp"
#include "metrobound/legendre.hpp"
#include "metrobound/qfi.hpp"
#include "oracles.hpp"

using namespace metrobound;

namespace {

ConstraintSet ghz_witness(int N, double F) {
  const Basis b = Basis::symmetric(N, 0.5);
  const CVec g = ghz_state(N, Basis::Kind::Symmetric).vector();
  ConstraintSet cs(b);
  cs.add(Operator(g * g.adjoint(), b), F);
  return cs;
}

// Constraint operators drawn from a fixed menu, valued on the given state.
ConstraintSet constraints_from(const QuantumState& s, unsigned mask) {
  const Basis& b = s.basis();
  const SpinTriple j = collective_operators(b);
  const int N = b.n_particles;
  std::vector<Operator> menu = {j.y, j.x * j.x, j.x, j.y * j.y};
  const CVec g = ghz_state(N, Basis::Kind::Symmetric).vector();
  menu.emplace_back(g * g.adjoint(), b);
  if (N % 2 == 0) {
    const CVec d = dicke_state(N, N / 2, Axis::X, Basis::Kind::Symmetric).vector();
    menu.emplace_back(d * d.adjoint(), b);
  }
  ConstraintSet cs(b);
  for (std::size_t k = 0; k < menu.size(); ++k) {
    if (mask & (1u << k)) cs.add(menu[k], s.expect(menu[k]));
  }
  return cs;
}

}  // namespace

TEST_SUITE("legendre") {

TEST_CASE("one-dimensional transform") {
  auto f = [](double x) { return x * x - 1.9 * x - 0.3; };
  for (double r : {-2.0, 0.0, 1.0, 5.0, 3.3}) {
    CHECK(std::abs(legendre_1d(f, r, -100.0, 100.0) - (r * r / 4.0 + 0.95 * r + 1.2025)) < 1e-9);
  }
  CHECK(std::abs(legendre_1d([](double x) { return x * x; }, 0.0, -10.0, 10.0)) < 1e-12);
  auto fhat = [&](double r) { return legendre_1d(f, r, -100.0, 100.0); };
  for (double x : {-1.0, 0.0, 0.5, 2.0}) CHECK(std::abs(legendre_1d(fhat, x, -50.0, 50.0) - f(x)) < 1e-8);
  CHECK_THROWS_AS(legendre_1d([](double x) { return x; }, 2.0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(legendre_1d(f, 0.0, 1.0, 1.0), Error);
}

TEST_CASE("hat function examples") {
  const int N = 4;
  const ConstraintSet cs = ghz_witness(N, 0.5);
  const Operator jz = collective_operator(Axis::Z, cs.basis);
  const std::vector<double> zero = {0.0};
  const HatValue h0 = legendre_hat(zero, cs, jz);
  CHECK(std::abs(h0.value) < 1e-12);
  CHECK(std::abs(h0.mu_star - std::round(h0.mu_star)) < 1e-6);
  for (double r : {1.0, 5.0, 30.0, 64.0}) {
    const std::vector<double> rv = {r};
    CHECK(legendre_hat(rv, cs, jz).value == doctest::Approx(r / 2 + r * r / (16.0 * N * N)).epsilon(1e-10));
  }
  for (double r : {70.0, 100.0, 400.0}) {
    const std::vector<double> rv = {r};
    CHECK(legendre_hat(rv, cs, jz).value == doctest::Approx(r - N * N).epsilon(1e-10));
  }
}

TEST_CASE("trivial and analytic bounds") {
  const Basis b = Basis::symmetric(6, 0.5);
  const Operator jz = collective_operator(Axis::Z, b);
  for (double w : {-2.5, 0.0, 1.0}) {
    ConstraintSet cs(b);
    cs.add(jz, w);
    CHECK(qfi_lower_bound(cs, jz).bound < 1e-8);
  }
  CHECK(std::abs(ghz_fidelity_bound_numeric(1.0, 4).bound - 16.0) < 1e-6);
  CHECK(std::abs(ghz_fidelity_bound_numeric(0.5, 4).bound) < 1e-6);
  CHECK(ghz_fidelity_bound(0.5, 4) == 0.0);
  CHECK(ghz_fidelity_bound(0.3, 4) == 0.0);
  CHECK(ghz_fidelity_bound(1.0, 4) == 16.0);
  CHECK(ghz_fidelity_bound(0.817, 8) / 8 == doctest::Approx(3.21).epsilon(0.08 / 3.21));
  CHECK_THROWS_AS(ghz_fidelity_bound(1.2, 4), Error);
  CHECK_THROWS_AS(dicke_fidelity_bound(-0.1, 4), Error);

  for (int N : {4, 6}) {
    for (double F : {0.5, 0.55, 0.6, 0.7, 0.8, 0.9, 1.0}) {
      const BoundResult r = ghz_fidelity_bound_numeric(F, N);
      CHECK(std::abs(r.bound - ghz_fidelity_bound(F, N)) < 1e-4);
    }
  }
}

TEST_CASE("Dicke fidelity bound") {
  CHECK(dicke_fidelity_bound(1.0, 4).bound == doctest::Approx(12.0).epsilon(1e-8));
  CHECK(dicke_fidelity_floor(4) == doctest::Approx(0.375));
  CHECK(dicke_fidelity_bound(0.375, 4).bound == 0.0);
  CHECK(dicke_fidelity_bound(0.8872, 4).bound / 4 == doctest::Approx(1.680).epsilon(0.036 / 1.680));
  double prev = -1.0;
  for (double F : {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
    const double v = dicke_fidelity_bound(F, 6).bound;
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
}

TEST_CASE("Dicke fidelity bound scales with N squared") {
  for (double F : {0.2, 0.5, 0.7}) {
    std::vector<double> scaled;
    for (int N : {50, 100, 200}) scaled.push_back(dicke_fidelity_bound(F, N).bound / (double(N) * N));
    const double hi = std::max({scaled[0], scaled[1], scaled[2]});
    const double lo = std::min({scaled[0], scaled[1], scaled[2]});
    CHECK(hi > 0.0);
    CHECK(hi - lo <= 0.1 * hi);
  }
}

TEST_CASE("soundness on states with known QFI") {
  std::vector<QuantumState> states;
  for (int N : {3, 4, 5, 6, 8}) {
    states.push_back(ghz_state(N, Basis::Kind::Symmetric));
    states.push_back(squeezing_ground_state(N, 0.4 * N, 1).state);
    states.push_back(squeezing_ground_state(N, 0.6, -1).state);
    states.push_back(rotate(polarized_state(N, 0.5, Axis::Y, Basis::Kind::Symmetric),
                            collective_operator(Axis::X, Basis::symmetric(N, 0.5)), 0.3));
    states.push_back(QuantumState::from_density(oracle::random_density(N + 1, 2, 6000 + N), Basis::symmetric(N, 0.5)));
    if (N % 2 == 0) {
      states.push_back(dicke_state(N, N / 2, Axis::X, Basis::Kind::Symmetric));
      states.push_back(thermal_dicke(N, 1.0));
    }
  }
  oracle::Lcg g{99};
  int cases = 0;
  for (std::size_t i = 0; cases < 50; ++i) {
    const QuantumState& s = states[i % states.size()];
    const unsigned menu = s.basis().n_particles % 2 == 0 ? 6 : 5;
    unsigned mask = 0;
    while (mask == 0 || std::popcount(mask) > 3) mask = static_cast<unsigned>(g.uniform() * (1u << menu));
    const ConstraintSet cs = constraints_from(s, mask);
    const Operator jz = collective_operator(Axis::Z, s.basis());
    const BoundResult r = qfi_lower_bound(cs, jz);
    CHECK(r.bound <= qfi(s, jz) + 1e-6);
    CHECK(r.bound >= 0.0);
    ++cases;
  }
}

TEST_CASE("adding a constraint never lowers the bound") {
  const QuantumState s = squeezing_ground_state(6, 2.0, 1).state;
  const Operator jz = collective_operator(Axis::Z, s.basis());
  const ConstraintSet one = constraints_from(s, 0b1);
  const ConstraintSet two = constraints_from(s, 0b11);
  const ConstraintSet three = constraints_from(s, 0b10011);
  const BoundResult b1 = qfi_lower_bound(one, jz);
  LegendreOptions o;
  o.warm_start = std::vector<double>{b1.r_star[0], 0.0};
  const BoundResult b2 = qfi_lower_bound(two, jz, o);
  o.warm_start = std::vector<double>{b2.r_star[0], b2.r_star[1], 0.0};
  const BoundResult b3 = qfi_lower_bound(three, jz, o);
  CHECK(b2.bound >= b1.bound - 1e-8);
  CHECK(b3.bound >= b2.bound - 1e-8);
  CHECK(b3.bound <= qfi(s, jz) + 1e-6);
}

TEST_CASE("bound is convex in a constraint value") {
  for (double lo : {0.5, 0.6, 0.75}) {
    const double hi = lo + 0.2;
    const double mid = 0.5 * (lo + hi);
    const double blo = dicke_fidelity_bound(lo, 4).bound;
    const double bhi = dicke_fidelity_bound(hi, 4).bound;
    const double bmid = dicke_fidelity_bound(mid, 4).bound;
    CHECK(bmid <= 0.5 * (blo + bhi) + 1e-8);
  }
  const int N = 6;
  for (double v : {1.0, 2.0, 3.0}) {
    const double blo = spin_squeezing_bound(2.0, v - 0.4, N).bound;
    const double bhi = spin_squeezing_bound(2.0, v + 0.4, N).bound;
    const double bmid = spin_squeezing_bound(2.0, v, N).bound;
    CHECK(bmid <= 0.5 * (blo + bhi) + 1e-8);
  }
}

TEST_CASE("outer objective is concave along rays") {
  const QuantumState s = squeezing_ground_state(6, 1.0, 1).state;
  const ConstraintSet cs = constraints_from(s, 0b11);
  const LegendreProblem p(cs, collective_operator(Axis::Z, s.basis()));
  auto phi = [&](const std::vector<double>& r) {
    return r[0] * cs.values[0] + r[1] * cs.values[1] - p.hat(r).value;
  };
  oracle::Lcg g{5};
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> a = {20.0 * (g.uniform() - 0.5), 10.0 * (g.uniform() - 0.5)};
    const std::vector<double> b = {20.0 * (g.uniform() - 0.5), 10.0 * (g.uniform() - 0.5)};
    const std::vector<double> m = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    CHECK(phi(m) >= 0.5 * (phi(a) + phi(b)) - 1e-8);
  }
}

TEST_CASE("spin-squeezing constraint sets") {
  const int N = 4;
  const double jyM = 0.0, varM = 0.25 * N * N;
  CHECK(pezze_smerzi_bound(jyM, varM) == 0.0);
  CHECK(spin_squeezing_bound(jyM, varM, N).bound == doctest::Approx(double(N)).epsilon(1e-6));
  const QuantumState mix = mixture({{0.5, polarized_state(N, 0.5, Axis::X, Basis::Kind::Symmetric)},
                                    {0.5, rotate(polarized_state(N, 0.5, Axis::X, Basis::Kind::Symmetric),
                                                 collective_operator(Axis::Z, Basis::symmetric(N, 0.5)),
                                                 std::numbers::pi)}});
  CHECK(qfi(mix, collective_operator(Axis::Z, mix.basis())) == doctest::Approx(double(N)));

  const GroundState gs = squeezing_ground_state(N, 1.0, 1);
  const Operator jy = collective_operator(Axis::Y, gs.state.basis());
  const Operator jx = collective_operator(Axis::X, gs.state.basis());
  const double mean_jy = gs.state.expect(jy);
  const double var_jx = gs.state.variance(jx);
  const BoundResult r = spin_squeezing_bound(mean_jy, var_jx, N);
  const double ps = pezze_smerzi_bound(mean_jy, var_jx);
  CHECK(r.bound >= ps - 1e-8);
  CHECK((r.bound - ps) / r.bound <= 0.026);
  CHECK(r.bound <= qfi(gs.state, collective_operator(Axis::Z, gs.state.basis())) + 1e-6);
  const BoundResult r3 = spin_squeezing_bound(mean_jy, var_jx, N, true);
  CHECK(r3.bound >= r.bound - 1e-6);

  const double jx4 = gs.state.expect(jx * jx * jx * jx);
  const BoundResult r4 = spin_squeezing_bound(mean_jy, var_jx, N, false, jx4);
  CHECK(r4.bound >= r.bound - 1e-6);
  CHECK(r4.bound <= qfi(gs.state, collective_operator(Axis::Z, gs.state.basis())) + 1e-6);

  CHECK_THROWS_AS(spin_squeezing_bound(2.0, 0.01, N), Error);
  try {
    spin_squeezing_bound(2.0, 0.01, N);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
  }
  CHECK_THROWS_AS(spin_squeezing_bound(1.0, -1.0, N), Error);
}

TEST_CASE("constraint validation") {
  const Basis b = Basis::symmetric(4, 0.5);
  ConstraintSet cs(b);
  cs.add(collective_operator(Axis::Y, b), 2.5);
  try {
    cs.validate();
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
  }
  ConstraintSet other(b);
  CHECK_THROWS_AS(other.add(collective_operator(Axis::Y, Basis::symmetric(5, 0.5)), 0.0), Error);
  CHECK_THROWS_AS(other.validate(), Error);
}

TEST_CASE("scaling schemes") {
  CHECK(dicke_gamma(112, 6e6, 6e6, 7900) == doctest::Approx(1.301).epsilon(0.001 / 1.301));
  const int N = 10;
  const double shell = 0.25 * N * (N + 2);
  CHECK(dicke_gamma(0.2 * shell, 0.3 * shell, 0.5 * shell, N) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(dicke_gamma(shell, shell, shell, N), Error);

  const DickeExperimentResult r = dicke_experiment_bound(112, 6e6, 7900, {60, 80});
  CHECK(r.sweep.size() == 2);
  CHECK(r.sweep[1].bound_per_n >= r.sweep[0].bound_per_n - 1e-9);
  CHECK(r.bound_per_n == r.sweep[1].bound_per_n);
  CHECK_THROWS_AS(dicke_experiment_bound(112, 6e6, 7900, {10}), Error);
}

TEST_CASE("validity of the symmetric-subspace reduction") {
  const int N = 4;
  const Basis f = Basis::full(N, 0.5);
  const CVec g = ghz_state(N, Basis::Kind::Full).vector();
  CHECK(is_permutation_invariant(Operator(g * g.adjoint(), f)));
  CHECK_FALSE(is_permutation_invariant(single_particle_operator(0, Axis::Z, f)));
  CHECK(is_permutation_invariant(collective_operator(Axis::X, f)));

  const SpinTriple j = collective_operators(f);
  const std::vector<Operator> ops = {j.y, j.x * j.x};
  const std::vector<double> zero = {0.0, 0.0};
  const SymmetricValidity v0 = symmetric_validity_check(ops, j.z, zero, 0.0);
  CHECK(v0.permutation_invariant);
  CHECK_FALSE(v0.nondegenerate);
  CHECK_FALSE(v0.certified());

  const std::vector<double> r = {2.0, -0.5};
  const SymmetricValidity v1 = symmetric_validity_check(ops, j.z, r, 0.3);
  CHECK(v1.certified());

  const std::vector<Operator> local = {single_particle_operator(1, Axis::Z, f)};
  const std::vector<double> one = {1.0};
  CHECK_FALSE(symmetric_validity_check(local, j.z, one, 0.0).certified());
}

}  // TEST_SUITE
