#include "metrobound/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "metrobound/error.hpp"
#include "metrobound/parallel.hpp"

namespace metrobound {

namespace {

constexpr double golden = 0.6180339887498949;

template <class F>
std::pair<double, double> golden_max(const F& f, double a, double b, double tol, int max_iter = 200) {
  double x1 = b - golden * (b - a);
  double x2 = a + golden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && b - a > tol; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = f(x2);
    }
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

struct Search {
  std::vector<double> x;
  double fx = -std::numeric_limits<double>::infinity();
  int evals = 0;
  bool converged = false;
};

// Rosenbrock ascent: each direction expands by 3 on success and reverses with half the
// step on failure; the frame is rotated toward the accumulated progress.
template <class Phi>
Search rosenbrock(const Phi& phi, std::vector<double> x, double fx, double s0, double box,
                  int max_evals, double step_tol) {
  const std::size_t k = x.size();
  std::vector<RVec> dirs(k, RVec::Zero(static_cast<Index>(k)));
  for (std::size_t i = 0; i < k; ++i) dirs[i](static_cast<Index>(i)) = 1.0;
  std::vector<double> steps(k, s0), moved(k, 0.0);
  std::vector<char> won(k, 0), lost(k, 0);
  Search s;
  s.fx = fx;
  std::vector<double> y(k);
  auto rotate = [&] {
    std::vector<RVec> a(k, RVec::Zero(static_cast<Index>(k)));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) a[i] += moved[j] * dirs[j];
    }
    std::vector<RVec> q;
    for (std::size_t i = 0; i < k; ++i) {
      for (const RVec& cand : {a[i], dirs[i]}) {
        RVec v = cand;
        for (const RVec& u : q) v -= u.dot(v) * u;
        if (v.norm() > 1e-10 * std::max(cand.norm(), 1e-300)) {
          q.push_back(v.normalized());
          break;
        }
      }
    }
    for (std::size_t i = 0; q.size() < k && i < k; ++i) {
      RVec v = RVec::Unit(static_cast<Index>(k), static_cast<Index>(i));
      for (const RVec& u : q) v -= u.dot(v) * u;
      if (v.norm() > 1e-8) q.push_back(v.normalized());
    }
    dirs = std::move(q);
    std::fill(moved.begin(), moved.end(), 0.0);
    std::fill(won.begin(), won.end(), 0);
    std::fill(lost.begin(), lost.end(), 0);
  };
  while (s.evals < max_evals) {
    for (std::size_t d = 0; d < k && s.evals < max_evals; ++d) {
      for (std::size_t i = 0; i < k; ++i) {
        y[i] = std::clamp(x[i] + steps[d] * dirs[d](static_cast<Index>(i)), -box, box);
      }
      const double fy = phi(y);
      ++s.evals;
      if (fy > s.fx) {
        x = y;
        s.fx = fy;
        moved[d] += steps[d];
        steps[d] = std::clamp(3.0 * steps[d], -box, box);
        won[d] = 1;
      } else {
        steps[d] *= -0.5;
        lost[d] = 1;
      }
    }
    double xmax = 0.0, smax = 0.0;
    for (double v : x) xmax = std::max(xmax, std::abs(v));
    for (double v : steps) smax = std::max(smax, std::abs(v));
    if (smax < step_tol * (1.0 + xmax)) {
      s.converged = true;
      break;
    }
    bool cycle = true;
    for (std::size_t d = 0; d < k; ++d) cycle = cycle && won[d] && lost[d];
    if (cycle && k > 1) rotate();
  }
  s.x = std::move(x);
  return s;
}

// Rosenbrock runs separated by polls along random directions at decreasing step sizes,
// which lets the search leave kinks of the nonsmooth objective.
template <class Phi>
Search ascend(const Phi& phi, std::vector<double> x, double s0, double box, int max_evals,
              double step_tol, std::uint64_t seed) {
  const std::size_t k = x.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Search s;
  s.x = x;
  s.fx = phi(x);
  s.evals = 1;
  double step = s0;
  std::vector<double> y(k);
  while (s.evals < max_evals) {
    Search r = rosenbrock(phi, s.x, s.fx, step, box, max_evals - s.evals, step_tol);
    s.evals += r.evals;
    s.x = std::move(r.x);
    s.fx = r.fx;
    s.converged = r.converged;
    if (!r.converged) break;
    double xmax = 0.0;
    for (double v : s.x) xmax = std::max(xmax, std::abs(v));
    const double floor = step_tol * (1.0 + xmax);
    bool improved = false;
    for (double t = 0.01 * s0; t > floor && !improved && s.evals < max_evals; t *= 0.1) {
      for (std::size_t d = 0; d < 4 * k + 4 && s.evals < max_evals; ++d) {
        double norm = 0.0;
        for (double& v : y) {
          v = gauss(rng);
          norm += v * v;
        }
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < k; ++i) y[i] = std::clamp(s.x[i] + t * y[i] / norm, -box, box);
        const double fy = phi(y);
        ++s.evals;
        if (fy > s.fx) {
          s.x = y;
          s.fx = fy;
          step = t;
          improved = true;
          break;
        }
      }
    }
    if (!improved) break;
    s.converged = false;
  }
  return s;
}

double radius_of(const CMat& m) {
  const RVec ev = linalg::eigenvalues(m);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

std::vector<CMat> family_terms(const ConstraintSet& cs, const Operator& g) {
  std::vector<CMat> t;
  for (const auto& op : cs.operators) t.push_back(op.matrix);
  t.push_back(g.matrix * g.matrix);
  t.push_back(g.matrix);
  return t;
}

double shell(int n) { return 0.25 * n * (n + 2.0); }

// A value at a nondegenerate end of its operator's spectrum fixes the state.
std::optional<CVec> pinned_state(const ConstraintSet& cs) {
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const linalg::Eigh e = linalg::eigh(cs.operators[k].matrix);
    const Index n = e.values.size();
    if (n < 2) continue;
    const double scale = std::max(1.0, std::max(std::abs(e.values(0)), std::abs(e.values(n - 1))));
    const double w = cs.values[k];
    if (std::abs(w - e.values(n - 1)) <= 1e-12 * scale && e.values(n - 1) - e.values(n - 2) > 1e-8 * scale) {
      return CVec(e.vectors.col(n - 1));
    }
    if (std::abs(w - e.values(0)) <= 1e-12 * scale && e.values(1) - e.values(0) > 1e-8 * scale) {
      return CVec(e.vectors.col(0));
    }
  }
  return std::nullopt;
}

}  // namespace

ConstraintSet& ConstraintSet::add(Operator op, double value, std::string name) {
  if (op.basis != basis) fail(ErrorKind::BasisMismatch, "constraint operator basis differs");
  operators.push_back(std::move(op));
  values.push_back(value);
  names.push_back(std::move(name));
  return *this;
}

void ConstraintSet::validate() const {
  if (operators.size() != values.size()) fail(ErrorKind::InvalidInput, "constraint count mismatch");
  if (operators.empty()) fail(ErrorKind::InvalidInput, "empty constraint set");
  for (std::size_t k = 0; k < operators.size(); ++k) {
    if (operators[k].basis != basis) fail(ErrorKind::BasisMismatch, "constraint operator basis differs");
    if (!std::isfinite(values[k])) fail(ErrorKind::InvalidInput, "constraint value is not finite");
    const RVec ev = linalg::eigenvalues(operators[k].matrix);
    const double lo = ev(0);
    const double hi = ev(ev.size() - 1);
    const double tol = 1e-10 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (values[k] < lo - tol || values[k] > hi + tol) {
      fail(ErrorKind::Infeasible, "constraint value " + std::to_string(values[k]) +
                                      " outside the spectrum [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
    }
  }
}

LegendreProblem::LegendreProblem(const ConstraintSet& cs, const Operator& generator)
    : n_(cs.size()), family_(family_terms(cs, generator)) {
  if (generator.basis != cs.basis) fail(ErrorKind::BasisMismatch, "generator basis differs");
  const RVec ev = linalg::eigenvalues(generator.matrix);
  g_min_ = ev(0);
  g_max_ = ev(ev.size() - 1);
  for (const auto& op : cs.operators) {
    const double r = radius_of(op.matrix);
    radius_.push_back(r > 0.0 ? r : 1.0);
  }
}

double LegendreProblem::lambda_at(std::span<const double> r, double mu) const {
  std::vector<double> c(n_ + 2);
  std::copy(r.begin(), r.end(), c.begin());
  c[n_] = -4.0;
  c[n_ + 1] = 8.0 * mu;
  return family_.lambda_max(c) - 4.0 * mu * mu;
}

HatValue LegendreProblem::hat(std::span<const double> r, int mu_grid, double mu_tol) const {
  if (r.size() != n_) fail(ErrorKind::InvalidInput, "multiplier count mismatch");
  HatValue out;
  out.grid = mu_grid;
  const double width = g_max_ - g_min_;
  if (width < 1e-14 || mu_grid < 2) {
    out.mu_star = g_min_;
    out.value = lambda_at(r, g_min_);
    return out;
  }
  const int n = mu_grid;
  std::vector<double> mu(static_cast<std::size_t>(n)), f(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    mu[static_cast<std::size_t>(i)] = g_min_ + width * i / (n - 1);
    f[static_cast<std::size_t>(i)] = lambda_at(r, mu[static_cast<std::size_t>(i)]);
  }
  std::vector<int> peaks;
  for (int i = 0; i < n; ++i) {
    const double v = f[static_cast<std::size_t>(i)];
    const bool left = i == 0 || v >= f[static_cast<std::size_t>(i - 1)];
    const bool right = i == n - 1 || v >= f[static_cast<std::size_t>(i + 1)];
    if (left && right) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    return f[static_cast<std::size_t>(a)] > f[static_cast<std::size_t>(b)];
  });
  if (peaks.size() > 3) peaks.resize(3);
  const int best = static_cast<int>(std::max_element(f.begin(), f.end()) - f.begin());
  out.value = f[static_cast<std::size_t>(best)];
  out.mu_star = mu[static_cast<std::size_t>(best)];
  auto lam = [&](double m) { return lambda_at(r, m); };
  for (int i : peaks) {
    const double a = mu[static_cast<std::size_t>(std::max(i - 1, 0))];
    const double b = mu[static_cast<std::size_t>(std::min(i + 1, n - 1))];
    const auto [m, v] = golden_max(lam, a, b, mu_tol);
    if (v > out.value) {
      out.value = v;
      out.mu_star = m;
    }
  }
  return out;
}

HatValue LegendreProblem::hat_certified(std::span<const double> r, const LegendreOptions& opts) const {
  int grid = std::max(opts.mu_grid, 3);
  HatValue best = hat(r, grid, opts.mu_tol);
  for (int d = 0; d < opts.max_grid_doublings; ++d) {
    grid = 2 * (grid - 1) + 1;
    HatValue next = hat(r, grid, opts.mu_tol);
    const bool stable =
        std::abs(next.value - best.value) <= opts.grid_stability * std::max(1.0, std::abs(next.value));
    if (next.value > best.value) {
      best.value = next.value;
      best.mu_star = next.mu_star;
    }
    best.grid = grid;
    if (stable) break;
  }
  return best;
}

HatValue legendre_hat(std::span<const double> r, const ConstraintSet& cs, const Operator& generator,
                      int mu_grid) {
  const LegendreProblem p(cs, generator);
  return p.hat(r, mu_grid);
}

BoundResult qfi_lower_bound(const ConstraintSet& cs, const Operator& generator,
                            const LegendreOptions& opts) {
  cs.validate();
  if (generator.basis != cs.basis) fail(ErrorKind::BasisMismatch, "generator basis differs");
  const std::size_t k = cs.size();
  if (const auto psi = pinned_state(cs)) {
    for (std::size_t i = 0; i < k; ++i) {
      const double v = psi->dot(cs.operators[i].matrix * *psi).real();
      if (std::abs(v - cs.values[i]) > 1e-8 * std::max(1.0, radius_of(cs.operators[i].matrix))) {
        fail(ErrorKind::Infeasible, "constraint values are not jointly reachable by any state");
      }
    }
    const CVec gpsi = generator.matrix * *psi;
    const double m1 = psi->dot(gpsi).real();
    BoundResult out;
    out.bound = std::max(0.0, 4.0 * (gpsi.squaredNorm() - m1 * m1));
    out.objective = out.bound;
    out.r_star.assign(k, 0.0);
    out.mu_star = m1;
    out.converged = true;
    return out;
  }
  const LegendreProblem p(cs, generator);
  const double width = p.g_max() - p.g_min();
  const double cap = width * width;
  const double scale = std::max(cap, 1e-12);
  const double s0 = 0.1 * scale;
  const double box = 1e6 * scale;

  std::vector<double> wn(k);
  for (std::size_t i = 0; i < k; ++i) wn[i] = cs.values[i] / p.spectral_radius(i);

  auto to_original = [&](const std::vector<double>& rn) {
    std::vector<double> r(k);
    for (std::size_t i = 0; i < k; ++i) r[i] = rn[i] / p.spectral_radius(i);
    return r;
  };
  auto objective = [&](const std::vector<double>& rn, int grid, double tol) {
    double lin = 0.0;
    for (std::size_t i = 0; i < k; ++i) lin += rn[i] * wn[i];
    const std::vector<double> r = to_original(rn);
    const double v = lin - p.hat(r, grid, tol).value;
    if (v > cap * (1.0 + 1e-6) + 1e-9) {
      fail(ErrorKind::Infeasible, "constraint values are not jointly reachable by any state");
    }
    return v;
  };
  const double search_tol = opts.search_mu_tol * std::max(1.0, width);
  auto coarse = [&](const std::vector<double>& rn) { return objective(rn, opts.search_mu_grid, search_tol); };
  auto fine = [&](const std::vector<double>& rn) { return objective(rn, opts.search_mu_grid, opts.mu_tol); };

  std::vector<std::vector<double>> starts;
  if (opts.warm_start) {
    if (opts.warm_start->size() != k) fail(ErrorKind::InvalidInput, "warm start size mismatch");
    std::vector<double> w(k);
    for (std::size_t i = 0; i < k; ++i) w[i] = (*opts.warm_start)[i] * p.spectral_radius(i);
    starts.push_back(std::move(w));
  }
  starts.emplace_back(k, 0.0);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-2.0 * scale, 2.0 * scale);
  while (static_cast<int>(starts.size()) < std::max(opts.n_starts, 1)) {
    std::vector<double> s(k);
    for (double& v : s) v = uni(rng);
    starts.push_back(std::move(s));
  }
  if (static_cast<int>(starts.size()) > std::max(opts.n_starts, 1)) starts.resize(std::max(opts.n_starts, 1));

  std::vector<Search> found(starts.size());
  parallel_for(
      starts.size(),
      [&](std::size_t i) {
        found[i] = ascend(coarse, starts[i], s0, box, opts.max_evals, opts.search_step_tol, opts.seed + 1 + i);
      },
      opts.threads);

  std::size_t best = 0;
  int evals = 0;
  for (std::size_t i = 0; i < found.size(); ++i) {
    evals += found[i].evals;
    if (found[i].fx > found[best].fx) best = i;
  }
  double xmax = 0.0;
  for (double v : found[best].x) xmax = std::max(xmax, std::abs(v));
  const double s1 = std::max(1e-3 * scale, 10.0 * opts.search_step_tol * (1.0 + xmax));
  const Search polished = ascend(fine, found[best].x, s1, box, opts.polish_evals, opts.step_tol, opts.seed);
  evals += polished.evals;
  BoundResult out;
  out.r_star = to_original(polished.x);
  const HatValue h = p.hat_certified(out.r_star, opts);
  double lin = 0.0;
  for (std::size_t i = 0; i < k; ++i) lin += out.r_star[i] * cs.values[i];
  out.objective = lin - h.value;
  if (out.objective > cap * (1.0 + 1e-6) + 1e-9) {
    fail(ErrorKind::Infeasible, "constraint values are not jointly reachable by any state");
  }
  out.bound = std::clamp(out.objective, 0.0, cap);
  out.mu_star = h.mu_star;
  out.mu_grid_size = h.grid;
  out.iterations = evals;
  out.converged = found[best].converged && polished.converged;
  return out;
}

double ghz_fidelity_bound(double F, int N) {
  if (!(F >= 0.0 && F <= 1.0)) fail(ErrorKind::InvalidInput, "fidelity must lie in [0, 1]");
  if (N < 1) fail(ErrorKind::InvalidInput, "particle number must be positive");
  if (F <= 0.5) return 0.0;
  const double d = F - 0.5;
  return 4.0 * N * N * d * d;
}

BoundResult ghz_fidelity_bound_numeric(double F, int N, const LegendreOptions& opts) {
  if (!(F >= 0.0 && F <= 1.0)) fail(ErrorKind::InvalidInput, "fidelity must lie in [0, 1]");
  const Basis b = Basis::symmetric(N, 0.5);
  const CVec g = ghz_state(N, Basis::Kind::Symmetric).vector();
  ConstraintSet cs(b);
  cs.add(Operator(g * g.adjoint(), b), F, "ghz_fidelity");
  return qfi_lower_bound(cs, collective_operator(Axis::Z, b), opts);
}

double dicke_fidelity_floor(int N) {
  if (N < 2 || N % 2 != 0) fail(ErrorKind::InvalidInput, "N must be even");
  return std::exp(std::lgamma(N + 1.0) - 2.0 * std::lgamma(0.5 * N + 1.0) - N * std::log(2.0));
}

BoundResult dicke_fidelity_bound(double F, int N, const LegendreOptions& opts) {
  if (!(F >= 0.0 && F <= 1.0)) fail(ErrorKind::InvalidInput, "fidelity must lie in [0, 1]");
  if (F <= dicke_fidelity_floor(N)) {
    BoundResult zero;
    zero.r_star = {0.0};
    zero.converged = true;
    return zero;
  }
  // Rotated frame: the z-Dicke projector with generator J_x is unitarily equivalent to the
  // x-Dicke projector with generator J_z, and keeps every term banded.
  const Basis b = Basis::symmetric(N, 0.5);
  CMat w = CMat::Zero(b.dim(), b.dim());
  w(N / 2, N / 2) = 1.0;
  ConstraintSet cs(b);
  cs.add(Operator(w, b), F, "dicke_fidelity");
  return qfi_lower_bound(cs, collective_operator(Axis::X, b), opts);
}

BoundResult spin_squeezing_bound(double mean_jy, double var_jx, int N, bool constrain_jx_zero,
                                 std::optional<double> jx4, const LegendreOptions& opts) {
  if (!(var_jx >= 0.0)) fail(ErrorKind::InvalidInput, "Var(J_x) must be non-negative");
  const Basis b = Basis::symmetric(N, 0.5);
  const SpinTriple j = collective_operators(b);
  ConstraintSet cs(b);
  cs.add(j.y, mean_jy, "Jy");
  cs.add(j.x * j.x, var_jx, "Jx2");
  if (constrain_jx_zero) cs.add(j.x, 0.0, "Jx");
  if (jx4) {
    const Operator x2 = j.x * j.x;
    cs.add(x2 * x2, *jx4, "Jx4");
  }
  return qfi_lower_bound(cs, j.z, opts);
}

double dicke_gamma(double jx2, double jy2, double jz2, int N) {
  const double total = jx2 + jy2 + jz2;
  if (!(total > 0.0)) fail(ErrorKind::InvalidInput, "second moments must be positive");
  const double g = shell(N) / total;
  if (g < 1.0 - 1e-12) fail(ErrorKind::Infeasible, "second moments exceed the symmetric shell");
  return g;
}

DickeExperimentResult dicke_experiment_bound(double jy2, double jx2_eq_jz2, int N,
                                             const std::vector<int>& n_primes,
                                             const LegendreOptions& opts) {
  if (n_primes.empty()) fail(ErrorKind::InvalidInput, "no N' values given");
  DickeExperimentResult out;
  out.gamma = dicke_gamma(jx2_eq_jz2, jy2, jx2_eq_jz2, N);
  out.jy2_sym = out.gamma * jy2;
  const double total = jy2 + 2.0 * jx2_eq_jz2;
  std::vector<int> sorted = n_primes;
  std::sort(sorted.begin(), sorted.end());
  std::optional<std::vector<double>> warm = opts.warm_start;
  for (int np : sorted) {
    ScalingPoint pt;
    pt.n_prime = np;
    pt.jy2_sym = out.jy2_sym;
    pt.jx2_sym = 0.5 * (shell(np) - out.jy2_sym);
    if (pt.jx2_sym < 0.0) {
      fail(ErrorKind::Infeasible, "<J_y^2> exceeds the symmetric shell for N' = " + std::to_string(np));
    }
    const Basis b = Basis::symmetric(np, 0.5);
    const SpinTriple j = collective_operators(b);
    ConstraintSet cs(b);
    cs.add(j.y * j.y, pt.jy2_sym, "Jy2");
    cs.add(j.x * j.x, pt.jx2_sym, "Jx2");
    LegendreOptions o = opts;
    o.warm_start = warm;
    pt.result = qfi_lower_bound(cs, j.z, o);
    warm = pt.result.r_star;
    pt.bound_per_n = total / shell(np) * pt.result.bound / N;
    out.sweep.push_back(std::move(pt));
  }
  out.bound_per_n = out.sweep.back().bound_per_n;
  return out;
}

bool is_permutation_invariant(const Operator& op, double tol) {
  const Basis& b = op.basis;
  if (b.kind == Basis::Kind::Symmetric) return true;
  const Index d = b.local_dim();
  const Index dim = b.dim();
  const int n = b.n_particles;
  const double scale = std::max(1.0, linalg::max_abs(op.matrix));
  std::vector<Index> perm(static_cast<std::size_t>(dim));
  for (int p = 0; p + 1 < n; ++p) {
    Index st = 1;
    for (int q = n - 1; q > p + 1; --q) st *= d;
    const Index st_hi = st * d;
    for (Index i = 0; i < dim; ++i) {
      const Index lo = (i / st) % d;
      const Index hi = (i / st_hi) % d;
      perm[static_cast<std::size_t>(i)] = i + (hi - lo) * st + (lo - hi) * st_hi;
    }
    for (Index c = 0; c < dim; ++c) {
      for (Index r = 0; r < dim; ++r) {
        const cplx v = op.matrix(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]);
        if (std::abs(v - op.matrix(r, c)) > tol * scale) return false;
      }
    }
  }
  return true;
}

SymmetricValidity symmetric_validity_check(const std::vector<Operator>& operators,
                                           const Operator& generator,
                                           std::span<const double> r, double mu) {
  if (r.size() != operators.size()) fail(ErrorKind::InvalidInput, "multiplier count mismatch");
  SymmetricValidity out;
  out.permutation_invariant = is_permutation_invariant(generator);
  for (const auto& op : operators) {
    if (op.basis != generator.basis) fail(ErrorKind::BasisMismatch, "operator basis differs");
    out.permutation_invariant = out.permutation_invariant && is_permutation_invariant(op);
  }
  const Index dim = generator.matrix.rows();
  CMat g = generator.matrix;
  g.diagonal().array() -= mu;
  CMat m = -4.0 * g * g;
  for (std::size_t k = 0; k < operators.size(); ++k) m += r[k] * operators[k].matrix;
  const RVec ev = linalg::eigenvalues(0.5 * (m + m.adjoint()));
  out.gap = dim > 1 ? ev(dim - 1) - ev(dim - 2) : std::numeric_limits<double>::infinity();
  out.nondegenerate = out.gap > 1e-8 * std::max(1.0, std::abs(ev(dim - 1)));
  return out;
}

double legendre_1d(const std::function<double(double)>& f, double r, double lo, double hi) {
  if (!(hi > lo)) fail(ErrorKind::InvalidInput, "empty search interval");
  auto g = [&](double x) { return r * x - f(x); };
  const double tol = 1e-12 * std::max(1.0, std::abs(lo) + std::abs(hi));
  const auto [x, v] = golden_max(g, lo, hi, tol, 400);
  if (!std::isfinite(v)) fail(ErrorKind::InvalidInput, "objective is not finite");
  const double edge = 1e-7 * (hi - lo);
  if (x - lo < edge || hi - x < edge) {
    fail(ErrorKind::InvalidInput, "supremum is not attained inside the search interval");
  }
  return v;
}

}  // namespace metrobound
