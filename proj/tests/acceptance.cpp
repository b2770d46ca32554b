#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrobound/dicke_bounds.hpp"
#include "metrobound/error.hpp"
#include "metrobound/gradient.hpp"
#include "metrobound/legendre.hpp"
#include "metrobound/manifest.hpp"
#include "metrobound/qfi.hpp"
#include "metrobound/spin_algebra.hpp"
#include "oracles.hpp"

using namespace metrobound;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double max_diff(const CMat& a, const CMat& b) { return (a - b).cwiseAbs().maxCoeff(); }

void criterion1(const json& c, Outcome& o) {
  const double tol = c["abs_tol"];
  double worst = 0.0;
  for (int N = c["n_min"]; N <= c["n_max"].get<int>(); N += c["n_step"].get<int>()) {
    const QuantumState d = dicke_state(N, N / 2, Axis::X, Basis::Kind::Symmetric);
    const double err = std::abs(qfi(d, collective_operator(Axis::Z, d.basis())) - 0.5 * N * (N + 2.0));
    worst = std::max(worst, err);
  }
  o.detail << "max |qfi - N(N+2)/2| = " << worst;
  o.require(worst < tol, "error above tolerance");
}

void criterion2(const json& c, const json& inputs, Outcome& o) {
  const json& d = inputs["dicke"];
  DickeMoments m;
  m.N = d["N"];
  m.jx2 = d["jx2"];
  m.jx4 = d["jx4"];
  m.jy2 = d["jy2"];
  m.jy4 = d["jy4"];
  m = with_bounded_fourth_moment(m);
  const double tol = c["abs_tol"];
  const OptimalPrecision op = optimal_precision(m);
  const double a = op.precision / m.N;
  const double b = second_moment_bound(m.jx2, m.jy2, m.N) / m.N;
  o.detail << "optimal/N = " << a << " (theta_opt " << op.theta_opt << "), second-moment/N = " << b;
  o.require(std::abs(a - c["optimal_precision_per_n"].get<double>()) <= tol, "optimal precision");
  o.require(std::abs(b - c["second_moment_per_n"].get<double>()) <= tol, "second-moment bound");
}

void criterion3(const json& c, Outcome& o) {
  auto f = [](double x) { return x * x - 1.9 * x - 0.3; };
  double worst = 0.0;
  for (double r : c["r_values"]) {
    worst = std::max(worst, std::abs(legendre_1d(f, r, -100.0, 100.0) - (r * r / 4.0 + 0.95 * r + 1.2025)));
  }
  o.detail << "max error = " << worst;
  o.require(worst < c["abs_tol"].get<double>(), "error above tolerance");
}

void criterion4(const json& c, Outcome& o) {
  const double agree = c["agree_tol"];
  const double endpoint = c["endpoint_tol"];
  double worst = 0.0;
  for (int N : c["n_values"]) {
    for (double F : c["fidelities"]) {
      const double numeric = ghz_fidelity_bound_numeric(F, N).bound;
      const double closed = ghz_fidelity_bound(F, N);
      worst = std::max(worst, std::abs(numeric - closed));
      if (F == 0.5) o.require(std::abs(numeric) < endpoint, "endpoint 0");
      if (F == 1.0) o.require(std::abs(numeric - double(N) * N) < endpoint, "endpoint N^2");
    }
  }
  o.detail << "max |numeric - closed form| = " << worst;
  o.require(worst < agree, "numeric and closed form disagree");
}

void criterion5(const json& table, Outcome& o) {
  int checked = 0, passed = 0;
  std::ostringstream misses;
  for (const json& row : table) {
    const int n = row["n"];
    const double F = row["fidelity"];
    const std::string state = row["state"];
    const double value = state == "ghz" ? ghz_fidelity_bound_numeric(F, n).bound / n
                                        : dicke_fidelity_bound(F, n).bound / n;
    if (row["pm"].is_null()) continue;
    ++checked;
    const double central = row["bound_per_n"];
    const double pm = row["pm"];
    if (std::abs(value - central) <= pm) {
      ++passed;
    } else {
      misses << " " << state << n << "@" << F << "=" << value << " vs " << central << "+-" << pm << ";";
    }
  }
  o.detail << passed << "/" << checked << " rows within the stated interval";
  if (passed != checked) o.detail << "; outside:" << misses.str();
  o.require(passed == checked, "rows outside interval");
}

void criterion6(const json& c, const json& inputs, Outcome& o) {
  const double alpha = inputs["spin_squeezing"]["alpha"];
  const double xi2 = inputs["spin_squeezing"]["xi2"];
  const double target = c["target"];
  const double rel = c["rel_tol"];
  for (int np : c["n_primes"]) {
    const BoundResult r = spin_squeezing_bound(alpha * np / 2.0, xi2 * np * alpha * alpha / 4.0, np);
    const double v = r.bound / np;
    o.detail << "N'=" << np << ": " << v << "; ";
    o.require(std::abs(v - target) <= rel * target, "scaling value at N'=" + std::to_string(np));
  }
  double worst = 0.0;
  for (int N : c["edge_n"]) {
    for (double lpn : c["edge_lambda_per_n"]) {
      const GroundState g = squeezing_ground_state(N, lpn * N, 1);
      const SpinTriple j = collective_operators(g.state.basis());
      const double my = g.state.expect(j.y);
      const double vx = g.state.variance(j.x);
      const double b = spin_squeezing_bound(my, vx, N).bound;
      const double ps = pezze_smerzi_bound(my, vx);
      o.require(b <= qfi(g.state, j.z) + 1e-6, "bound above true QFI");
      worst = std::max(worst, (b - ps) / b);
    }
  }
  o.detail << "worst edge gap " << 100.0 * worst << "%";
  o.require(worst <= c["edge_gap_max"].get<double>(), "edge gap");
}

void criterion7(const json& c, Outcome& o) {
  const std::vector<int> nps = c["n_primes"].get<std::vector<int>>();
  const DickeExperimentResult r =
      dicke_experiment_bound(c["jy2"].get<double>(), c["jx2_eq_jz2"].get<double>(), c["N"].get<int>(), nps);
  o.detail << "gamma = " << r.gamma << "; bound/N:";
  bool monotone = true;
  for (std::size_t i = 0; i < r.sweep.size(); ++i) {
    o.detail << " " << r.sweep[i].n_prime << "->" << r.sweep[i].bound_per_n;
    if (i > 0 && r.sweep[i].bound_per_n < r.sweep[i - 1].bound_per_n) monotone = false;
  }
  o.require(std::abs(r.gamma - c["gamma"].get<double>()) <= c["gamma_tol"].get<double>(), "gamma");
  o.require(std::abs(r.bound_per_n - c["target"].get<double>()) <= c["abs_tol"].get<double>(), "bound/N");
  o.require(monotone, "monotone in N'");
}

void criterion8(const json& c, Outcome& o) {
  const double tol = c["abs_tol"];
  double worst = 0.0;
  int rows = 0;
  const MomentModel m{0.5, 1.0, 0.3};
  for (int N : c["n_values"]) {
    for (double j : c["j_values"]) {
      for (const TableRow& r : state_table(m, N, j)) {
        if (!r.applicable) continue;
        worst = std::max(worst, std::abs(*r.numeric - r.closed_form));
        ++rows;
      }
      for (const TableRow& r : two_ensemble_table(N, j, c["two_ensemble_a"].get<double>())) {
        if (!r.applicable) continue;
        worst = std::max(worst, std::abs(*r.numeric - r.closed_form));
        ++rows;
      }
      const double a = c["chain_a"];
      const double chain_value = gradient_bound(polarized_state(N, j, Axis::Y, Basis::Kind::Full), chain(N, a)).value;
      const double chain_closed = a * a * (N * N - 1.0) / 12.0 * 2.0 * j * N;
      o.require(std::abs(chain_value - chain_closed) <= 1e-12 * chain_closed, "chain closed form");
      const double ta = c["two_ensemble_a"];
      const double hl = gradient_bound(two_ensemble_best_state(N, j), double_well(N, ta)).value;
      o.require(std::abs(hl - 4.0 * ta * ta * N * N * j * j) <= 1e-12 * hl, "two-ensemble Heisenberg value");
    }
  }
  o.detail << rows << " table rows, max |numeric - closed form| = " << worst;
  o.require(worst < tol, "table rows");
}

void criterion9(const json& c, Outcome& o) {
  const double comm_tol = c["commutator_tol"];
  const double qfi_tol = c["qfi_tol"];
  const cplx i(0.0, 1.0);

  double comm = 0.0;
  std::vector<Basis> bases;
  for (int N = 1; N <= 8; ++N) bases.push_back(Basis::full(N, 0.5));
  for (int N : {1, 2, 10, 50, 200}) bases.push_back(Basis::symmetric(N, 0.5));
  for (const Basis& b : bases) {
    const SpinTriple s = collective_operators(b);
    const double scale = std::max(1.0, b.max_total_spin() * b.max_total_spin());
    comm = std::max(comm, max_diff(s.x.matrix * s.y.matrix - s.y.matrix * s.x.matrix, i * s.z.matrix) / scale);
    comm = std::max(comm, max_diff(s.y.matrix * s.z.matrix - s.z.matrix * s.y.matrix, i * s.x.matrix) / scale);
  }
  o.require(comm < comm_tol, "commutators");

  const Basis b3 = Basis::full(3, 0.5);
  const Operator jz3 = collective_operator(Axis::Z, b3);
  double conv = 0.0, cov = 0.0, add = 0.0;
  for (int s = 0; s < 5; ++s) {
    const QuantumState r1 = QuantumState::from_density(oracle::random_density(8, 2, 10 + s), b3);
    const QuantumState r2 = QuantumState::from_density(oracle::random_density(8, 3, 20 + s), b3);
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double lhs = qfi(mixture({{p, r1}, {1.0 - p, r2}}), jz3);
      conv = std::max(conv, lhs - p * qfi(r1, jz3) - (1.0 - p) * qfi(r2, jz3));
    }
    const CMat u = linalg::unitary_exp(collective_operator(Axis::X, b3).matrix + 0.3 * jz3.matrix * jz3.matrix, 0.9);
    const QuantumState rot = QuantumState::from_density(u * r1.density() * u.adjoint(), b3);
    cov = std::max(cov, std::abs(qfi(rot, jz3) - qfi(r1, Operator(u.adjoint() * jz3.matrix * u, b3))));
    const Basis b2 = Basis::full(2, 0.5);
    const QuantumState a = QuantumState::from_density(oracle::random_density(4, 2, 30 + s), b2);
    const QuantumState c2 = QuantumState::from_density(oracle::random_density(4, 3, 40 + s), b2);
    const QuantumState prod = tensor_product(a, c2);
    add = std::max(add, std::abs(qfi(prod, collective_operator(Axis::Z, prod.basis())) -
                                 qfi(a, collective_operator(Axis::Z, b2)) - qfi(c2, collective_operator(Axis::Z, b2))));
  }
  o.require(conv <= qfi_tol, "convexity");
  o.require(cov <= qfi_tol, "covariance");
  o.require(add <= qfi_tol, "additivity");

  const int cases = c["soundness_cases"];
  const double sound_tol = c["soundness_tol"];
  double excess = -1e300;
  for (int k = 0; k < cases; ++k) {
    const int N = 3 + k % 6;
    const Basis b = Basis::symmetric(N, 0.5);
    const SpinTriple j = collective_operators(b);
    const QuantumState s =
        k % 2 ? QuantumState::from_density(oracle::random_density(N + 1, 1 + k % 3, 500 + k), b)
              : squeezing_ground_state(N, 0.2 + 0.3 * k, k % 4 ? 1 : -1).state;
    ConstraintSet cs(b);
    const Operator x2 = j.x * j.x;
    cs.add(j.y, s.expect(j.y));
    cs.add(x2, s.expect(x2));
    if (k % 3 == 0) cs.add(j.x, s.expect(j.x));
    if (k % 5 == 0) {
      const CVec g = ghz_state(N, Basis::Kind::Symmetric).vector();
      const Operator w(g * g.adjoint(), b);
      cs.add(w, s.expect(w));
    }
    excess = std::max(excess, qfi_lower_bound(cs, j.z).bound - qfi(s, j.z));
  }
  o.require(excess <= sound_tol, "soundness");

  double trans = 0.0;
  oracle::Lcg g{77};
  for (int t = 0; t < 20; ++t) {
    const int N = 2 + t % 3;
    const Basis b = Basis::full(N, 0.5);
    const QuantumState s = QuantumState::from_density(oracle::random_density(1 << N, 1 + t % 3, 900 + t), b);
    Deterministic pos;
    for (int n = 0; n < N; ++n) pos.positions.push_back(4.0 * (g.uniform() - 0.5));
    trans = std::max(trans, translation_check(s, pos, 20.0 * (g.uniform() - 0.5)));
  }
  o.require(trans < c["translation_tol"].get<double>(), "translation invariance");

  double hus = 0.0;
  for (int N : {4, 9, 20}) {
    const Basis b = Basis::symmetric(N, 0.5);
    for (const QuantumState& s : {maximally_mixed(b), ghz_state(N, Basis::Kind::Symmetric),
                                  QuantumState::from_density(oracle::random_density(N + 1, 2, 1200 + N), b)}) {
      hus = std::max(hus, std::abs(husimi_integral(s) - 1.0));
    }
  }
  o.require(hus < c["husimi_tol"].get<double>(), "Husimi normalization");

  double ov = 0.0;
  for (int N : {4, 6, 8}) {
    const CVec dx = oracle::hadamard_all(oracle::dicke_tensor(N, N / 2), N);
    for (int m = 0; m <= N; ++m) {
      ov = std::max(ov, std::abs(dicke_overlap(N, m) - std::norm(oracle::dicke_tensor(N, m).dot(dx))));
    }
  }
  o.require(ov < c["overlap_tol"].get<double>(), "Dicke overlap");

  o.detail << "commutator " << comm << ", convexity slack " << conv << ", covariance " << cov << ", additivity "
           << add << ", soundness excess " << excess << ", translation " << trans << ", Husimi " << hus
           << ", overlap " << ov;
}

}  // namespace

int main(int argc, char** argv) {
  const json manifest = json::parse(tolerance_manifest);
  const json& criteria = manifest["criteria"];
  const json& inputs = manifest["experiment_inputs"];

  std::map<int, std::function<void(Outcome&)>> run = {
      {1, [&](Outcome& o) { criterion1(criteria["1"], o); }},
      {2, [&](Outcome& o) { criterion2(criteria["2"], inputs, o); }},
      {3, [&](Outcome& o) { criterion3(criteria["3"], o); }},
      {4, [&](Outcome& o) { criterion4(criteria["4"], o); }},
      {5, [&](Outcome& o) { criterion5(manifest["fidelity_table"], o); }},
      {6, [&](Outcome& o) { criterion6(criteria["6"], inputs, o); }},
      {7, [&](Outcome& o) { criterion7(criteria["7"], o); }},
      {8, [&](Outcome& o) { criterion8(criteria["8"], o); }},
      {9, [&](Outcome& o) { criterion9(criteria["9"], o); }},
  };

  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty()) {
    for (const auto& [k, f] : run) selected.push_back(k);
  }

  int failures = 0;
  for (int k : selected) {
    const auto it = run.find(k);
    if (it == run.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const json& c = criteria[std::to_string(k)];
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      it->second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream timing;
    timing.precision(3);
    timing << secs << " s";
    if (c.contains("seconds")) {
      timing << " (limit " << c["seconds"].get<double>() << " s)";
      o.require(secs <= c["seconds"].get<double>(), "time limit");
    }
    std::printf("criterion %d: %s %s | %s | %s\n", k, o.pass ? "PASS" : "FAIL", c["name"].get<std::string>().c_str(),
                o.detail.str().c_str(), timing.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
