#include <doctest.h>

#include <cmath>
#include <numbers>

#include "metrobound/error.hpp"
#include "metrobound/qfi.hpp"
#include "metrobound/spin_algebra.hpp"
#include "oracles.hpp"

using namespace metrobound;

namespace {

QuantumState random_state(const Basis& b, int rank, std::uint64_t seed) {
  return QuantumState::from_density(oracle::random_density(static_cast<int>(b.dim()), rank, seed), b);
}

Operator random_hermitian(const Basis& b, std::uint64_t seed) {
  oracle::Lcg g{seed};
  const Index d = b.dim();
  CMat a(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index k = 0; k < d; ++k) a(i, k) = cplx(g.normal(), g.normal());
  }
  return Operator(0.5 * (a + a.adjoint()), b);
}

}  // namespace

TEST_SUITE("qfi") {

TEST_CASE("documented values") {
  const QuantumState d4 = dicke_state(4, 2, Axis::X, Basis::Kind::Symmetric);
  CHECK(qfi(d4, collective_operator(Axis::Z, d4.basis())) == doctest::Approx(12.0).epsilon(1e-12));
  const QuantumState up = polarized_state(5, 1.0, Axis::Z, Basis::Kind::Symmetric);
  CHECK(std::abs(qfi(up, collective_operator(Axis::Z, up.basis()))) < 1e-12);
  const QuantumState mixed = maximally_mixed(Basis::full(4, 0.5));
  CHECK(std::abs(qfi(mixed, collective_operator(Axis::Z, mixed.basis()))) < 1e-12);
  for (int N : {2, 5, 9}) {
    const QuantumState g = ghz_state(N, Basis::Kind::Symmetric);
    CHECK(qfi(g, collective_operator(Axis::Z, g.basis())) == doctest::Approx(double(N * N)));
  }
}

TEST_CASE("agrees with the logarithmic-derivative oracle") {
  for (int seed = 1; seed <= 12; ++seed) {
    const Basis b = seed % 2 ? Basis::full(3, 0.5) : Basis::symmetric(5, 0.5);
    const int rank = 1 + seed % 4;
    const QuantumState s = random_state(b, rank, seed);
    const Operator g = seed % 3 ? collective_operator(Axis::Y, b) : random_hermitian(b, 100 + seed);
    CHECK(std::abs(qfi(s, g) - oracle::qfi_sld(s.density(), g.matrix)) < 1e-8);
  }
  const QuantumState t = thermal_dicke(6, 1.5);
  const Operator jz = collective_operator(Axis::Z, t.basis());
  CHECK(std::abs(qfi(t, jz) - oracle::qfi_sld(t.density(), jz.matrix)) < 1e-8);
}

TEST_CASE("pure states reduce to four times the variance") {
  const Basis b = Basis::full(4, 0.5);
  for (int seed = 0; seed < 5; ++seed) {
    const QuantumState s = QuantumState::from_vector(oracle::random_vector(16, 40 + seed), b);
    const Operator g = collective_operator(Axis::X, b);
    CHECK(qfi(s, g) == doctest::Approx(4.0 * s.variance(g)).epsilon(1e-12));
    CHECK(std::abs(qfi(EigenDecomposition::of(QuantumState::from_density(s.density(), b)), g.matrix) -
                   4.0 * s.variance(g)) < 1e-8);
  }
}

TEST_CASE("eigen decomposition invariants") {
  const QuantumState s = random_state(Basis::full(3, 0.5), 3, 7);
  const EigenDecomposition e = EigenDecomposition::of(s);
  CHECK(e.reconstruction_error(s.density()) < 1e-10);
  for (Index k = 1; k < e.values.size(); ++k) CHECK(e.values(k - 1) >= e.values(k));
  CHECK(e.values.minCoeff() >= 0.0);
}

TEST_CASE("convexity in the state") {
  const Basis b = Basis::full(3, 0.5);
  const Operator g = collective_operator(Axis::Z, b);
  for (int seed = 0; seed < 6; ++seed) {
    const QuantumState r1 = random_state(b, 2, 200 + seed);
    const QuantumState r2 = random_state(b, 3, 300 + seed);
    const double f1 = qfi(r1, g), f2 = qfi(r2, g);
    for (int k = 1; k <= 9; ++k) {
      const double p = 0.1 * k;
      const QuantumState m = mixture({{p, r1}, {1.0 - p, r2}});
      CHECK(qfi(m, g) <= p * f1 + (1.0 - p) * f2 + 1e-8);
    }
  }
  const Basis s6 = Basis::symmetric(6, 0.5);
  const Operator jz = collective_operator(Axis::Z, s6);
  const QuantumState a = dicke_state(6, 3, Axis::X, Basis::Kind::Symmetric);
  const QuantumState c = ghz_state(6, Basis::Kind::Symmetric);
  const QuantumState m = mixture({{0.4, a}, {0.6, c}});
  CHECK(qfi(m, jz) <= 0.4 * qfi(a, jz) + 0.6 * qfi(c, jz) + 1e-8);
}

TEST_CASE("bounded by four times the variance") {
  const Basis b = Basis::symmetric(6, 0.5);
  for (int seed = 0; seed < 10; ++seed) {
    const QuantumState s = random_state(b, 1 + seed % 5, 500 + seed);
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const Operator g = collective_operator(a, b);
      CHECK(qfi(s, g) <= 4.0 * s.variance(g) + 1e-8);
    }
  }
}

TEST_CASE("unitary covariance") {
  const Basis b = Basis::full(3, 0.5);
  for (int seed = 0; seed < 5; ++seed) {
    const QuantumState s = random_state(b, 2, 600 + seed);
    const Operator a = random_hermitian(b, 700 + seed);
    const CMat u = linalg::unitary_exp(random_hermitian(b, 800 + seed).matrix, 0.7);
    const QuantumState rotated = QuantumState::from_density(u * s.density() * u.adjoint(), b);
    const Operator back(u.adjoint() * a.matrix * u, b);
    CHECK(std::abs(qfi(rotated, a) - qfi(s, back)) < 1e-8);
  }
}

TEST_CASE("additive under tensor products") {
  const Basis b = Basis::full(2, 0.5);
  for (int seed = 0; seed < 4; ++seed) {
    const QuantumState r1 = random_state(b, 2, 900 + seed);
    const QuantumState r2 = random_state(b, 3, 950 + seed);
    const QuantumState prod = tensor_product(r1, r2);
    const double lhs = qfi(prod, collective_operator(Axis::Z, prod.basis()));
    const double rhs = qfi(r1, collective_operator(Axis::Z, b)) + qfi(r2, collective_operator(Axis::Z, b));
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("invariant under shifts diagonal in the eigenbasis") {
  const Basis b = Basis::full(3, 0.5);
  const QuantumState s = random_state(b, 4, 77);
  const EigenDecomposition e = EigenDecomposition::of(s);
  const Operator a = random_hermitian(b, 78);
  RVec d(b.dim());
  for (Index k = 0; k < d.size(); ++k) d(k) = 0.3 * k - 1.0;
  const CMat shift = e.vectors * d.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  CHECK(std::abs(qfi(s, a) - qfi(s, Operator(a.matrix + shift, b))) < 1e-8);
}

TEST_CASE("two-operator generalization") {
  const Basis b = Basis::full(3, 0.5);
  const QuantumState s = random_state(b, 3, 31);
  const Operator jz = collective_operator(Axis::Z, b);
  CHECK(std::abs(qfi_cross(s, jz, jz) - qfi(s, jz)) < 1e-10);

  const Operator a = single_particle_operator(0, Axis::Z, b);
  const Operator b1 = single_particle_operator(1, Axis::Z, b);
  const Operator b2 = single_particle_operator(2, Axis::Z, b);
  CHECK(std::abs(qfi_cross(s, a, b1 + b2) - qfi_cross(s, a, b1) - qfi_cross(s, a, b2)) < 1e-10);

  for (double j : {0.5, 1.0}) {
    const QuantumState p = polarized_state(3, j, Axis::Y, Basis::Kind::Full);
    for (int n = 0; n < 3; ++n) {
      for (int m = 0; m < 3; ++m) {
        const double v = qfi_cross(p, single_particle_operator(n, Axis::Z, p.basis()),
                                   single_particle_operator(m, Axis::Z, p.basis()));
        CHECK(std::abs(v - (n == m ? 2.0 * j : 0.0)) < 1e-10);
      }
    }
  }

  const QuantumState pure = QuantumState::from_vector(oracle::random_vector(8, 5), b);
  const double expected = 4.0 * (pure.expect(a * b1) - pure.expect(a) * pure.expect(b1));
  CHECK(std::abs(qfi_cross(pure, a, b1) - expected) < 1e-10);

  const Operator other = collective_operator(Axis::Z, Basis::full(2, 0.5));
  CHECK_THROWS_AS(qfi_cross(s, a, other), Error);
}

TEST_CASE("direction-averaged QFI") {
  const QuantumState g = ghz_state(4, Basis::Kind::Symmetric);
  CHECK(avg_qfi(g) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(std::abs(avg_qfi(maximally_mixed(Basis::symmetric(4, 0.5)))) < 1e-12);
  for (int seed = 0; seed < 4; ++seed) {
    QuantumState prod = QuantumState::from_density(oracle::random_density(2, 1 + seed % 2, 40 + seed),
                                                   Basis::full(1, 0.5));
    for (int n = 1; n < 4; ++n) {
      prod = tensor_product(prod, QuantumState::from_density(oracle::random_density(2, 2, 70 + seed * 5 + n),
                                                             Basis::full(1, 0.5)));
    }
    CHECK(avg_qfi(prod) <= 2.0 * 4 / 3.0 + 1e-10);
  }
}

TEST_CASE("classical Fisher information") {
  const QuantumState d4 = dicke_state(4, 2, Axis::X, Basis::Kind::Symmetric);
  const Operator jz = collective_operator(Axis::Z, d4.basis());
  const Operator jx = collective_operator(Axis::X, d4.basis());
  const auto px = eigen_projectors(jx);
  CHECK(px.size() == 5);
  const double fc = classical_fisher(d4, jz, 0.01, px);
  CHECK(std::abs(fc - 12.0) < 0.02 * 12.0);

  const QuantumState up = polarized_state(4, 0.5, Axis::Z, Basis::Kind::Symmetric);
  CHECK(std::abs(classical_fisher(up, jz, 0.3, px)) < 1e-8);

  const Basis b = Basis::full(3, 0.5);
  const Operator g = collective_operator(Axis::Y, b);
  const auto pz = eigen_projectors(collective_operator(Axis::Z, b));
  for (int seed = 0; seed < 5; ++seed) {
    const QuantumState s = random_state(b, 1 + seed % 3, 1000 + seed);
    for (double th : {0.0, 0.4, 1.1}) CHECK(classical_fisher(s, g, th, pz) <= qfi(s, g) + 1e-6);
  }

  std::vector<CMat> bad = px;
  bad.pop_back();
  CHECK_THROWS_AS(classical_fisher(d4, jz, 0.1, bad), Error);
}

TEST_CASE("thresholds") {
  CHECK(pezze_smerzi_bound(2.0, 1.0) == doctest::Approx(4.0));
  const int N = 12;
  CHECK(pezze_smerzi_bound(N / 2.0, N / 4.0) == doctest::Approx(double(N)));
  CHECK(pezze_smerzi_bound(0.0, 0.3) == 0.0);
  CHECK_THROWS_AS(pezze_smerzi_bound(1.0, 0.0), Error);
  const double n2300 = 2300;
  const double xi2 = 0.1514;
  const double jy = 0.85 * n2300 / 2;
  const double var = xi2 * n2300 / 4 * (0.85 * 0.85);
  CHECK(pezze_smerzi_bound(jy, var) / n2300 == doctest::Approx(1.0 / xi2).epsilon(1e-12));
  CHECK(1.0 / xi2 == doctest::Approx(6.605).epsilon(1e-3));

  CHECK(polarized_precision_cap(50.0, 100) == doctest::Approx(200.0));
  CHECK(polarized_precision_cap(0.0, 100) == doctest::Approx(10200.0));
  CHECK(polarized_precision_cap(40.0, 100) == doctest::Approx(3800.0));

  CHECK(shot_noise_limit(10) == doctest::Approx(10.0));
  CHECK(heisenberg_limit(10) == doctest::Approx(100.0));
  CHECK(shot_noise_limit(3, 1.0) == doctest::Approx(12.0));
}

TEST_CASE("entanglement depth") {
  for (int N : {1, 4, 10, 7900}) CHECK(entanglement_depth(N, N) == 1);
  CHECK(entanglement_depth(3.7 * 7900, 7900) == 4);
  CHECK(entanglement_depth(64.0, 8) == 8);
  CHECK(entanglement_depth(0.5, 8) == 1);
  CHECK_THROWS_AS(entanglement_depth(65.0, 8), Error);
  CHECK(k_producible_limit(1, 8) == doctest::Approx(8.0));
  CHECK(k_producible_limit(8, 8) == doctest::Approx(64.0));
  CHECK(k_producible_limit(3, 8) == doctest::Approx(2 * 9 + 4.0));
  for (int k = 1; k < 20; ++k) CHECK(k_producible_limit(k, 20) <= k_producible_limit(k + 1, 20));
  for (int k = 1; k <= 8; ++k) CHECK(entanglement_depth(k_producible_limit(k, 8), 8) <= k);
}

TEST_CASE("basis mismatch is rejected") {
  const QuantumState s = ghz_state(3, Basis::Kind::Full);
  CHECK_THROWS_AS(qfi(s, collective_operator(Axis::Z, Basis::symmetric(3, 0.5))), Error);
}

}  // TEST_SUITE
