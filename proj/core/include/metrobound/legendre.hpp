#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metrobound/linalg.hpp"
#include "metrobound/spin_algebra.hpp"

namespace metrobound {

// Measured expectation values <W_k> = w_k.
struct ConstraintSet {
  Basis basis;
  std::vector<Operator> operators;
  std::vector<double> values;
  std::vector<std::string> names;

  explicit ConstraintSet(Basis b) : basis(b) {}
  ConstraintSet& add(Operator op, double value, std::string name = {});
  std::size_t size() const { return operators.size(); }
  // Throws InvalidInput on shape problems and Infeasible when a value lies outside its spectrum.
  void validate() const;
};

struct LegendreOptions {
  int mu_grid = 201;
  double mu_tol = 1e-10;
  // Coarser mu grid used while searching r; the returned bound is evaluated on mu_grid.
  int search_mu_grid = 41;
  double search_mu_tol = 1e-7;
  double search_step_tol = 1e-6;
  int polish_evals = 400;
  // Grid doublings allowed when certifying the final point.
  int max_grid_doublings = 4;
  double grid_stability = 1e-8;
  int n_starts = 5;
  std::uint64_t seed = 0;
  int max_evals = 10000;
  double step_tol = 1e-8;
  // Starting point in the original operator units.
  std::optional<std::vector<double>> warm_start;
  int threads = 1;
};

struct BoundResult {
  double bound = 0.0;
  std::vector<double> r_star;
  double mu_star = 0.0;
  int iterations = 0;
  int mu_grid_size = 0;
  bool converged = false;
  // r* . w - hat(r*) before flooring at zero.
  double objective = 0.0;
};

struct HatValue {
  double value = 0.0;
  double mu_star = 0.0;
  int grid = 0;
};

// Precomputed structure for hat(r) = sup_mu lambda_max(sum_k r_k W_k - 4 (G - mu)^2).
class LegendreProblem {
 public:
  LegendreProblem(const ConstraintSet& cs, const Operator& generator);

  std::size_t size() const { return n_; }
  double g_min() const { return g_min_; }
  double g_max() const { return g_max_; }
  double spectral_radius(std::size_t k) const { return radius_[k]; }
  const linalg::HermitianFamily& family() const { return family_; }

  double lambda_at(std::span<const double> r, double mu) const;
  HatValue hat(std::span<const double> r, int mu_grid = 201, double mu_tol = 1e-10) const;
  // Repeats hat with doubled grids until two successive values agree to `stability`.
  HatValue hat_certified(std::span<const double> r, const LegendreOptions& opts) const;

 private:
  std::size_t n_;
  double g_min_;
  double g_max_;
  std::vector<double> radius_;
  linalg::HermitianFamily family_;
};

HatValue legendre_hat(std::span<const double> r, const ConstraintSet& cs, const Operator& generator,
                      int mu_grid = 201);

BoundResult qfi_lower_bound(const ConstraintSet& cs, const Operator& generator,
                            const LegendreOptions& opts = {});

// 4 N^2 (F - 1/2)^2 above F = 1/2, zero below.
double ghz_fidelity_bound(double F, int N);
BoundResult ghz_fidelity_bound_numeric(double F, int N, const LegendreOptions& opts = {});

// binom(N, N/2) / 2^N, the fidelity of a polarized state with the unpolarized Dicke state.
double dicke_fidelity_floor(int N);
BoundResult dicke_fidelity_bound(double F, int N, const LegendreOptions& opts = {});

BoundResult spin_squeezing_bound(double mean_jy, double var_jx, int N, bool constrain_jx_zero = false,
                                 std::optional<double> jx4 = std::nullopt,
                                 const LegendreOptions& opts = {});

struct ScalingPoint {
  int n_prime = 0;
  double jy2_sym = 0.0;
  double jx2_sym = 0.0;
  BoundResult result;
  double bound_per_n = 0.0;  // bound_N / N extrapolated from this N'
};

struct DickeExperimentResult {
  double gamma = 0.0;
  double jy2_sym = 0.0;
  std::vector<ScalingPoint> sweep;
  double bound_per_n = 0.0;  // value at the largest N'
};

// Second moments of a near-Dicke state of N particles, <J_x^2> = <J_z^2> large.
DickeExperimentResult dicke_experiment_bound(double jy2, double jx2_eq_jz2, int N,
                                             const std::vector<int>& n_primes,
                                             const LegendreOptions& opts = {});
double dicke_gamma(double jx2, double jy2, double jz2, int N);

struct SymmetricValidity {
  bool permutation_invariant = false;
  bool nondegenerate = false;
  double gap = 0.0;
  bool certified() const { return permutation_invariant && nondegenerate; }
};

// Full-basis check that a symmetric-subspace bound also holds for general states.
SymmetricValidity symmetric_validity_check(const std::vector<Operator>& operators,
                                           const Operator& generator,
                                           std::span<const double> r, double mu);
bool is_permutation_invariant(const Operator& op, double tol = 1e-10);

// sup_x { r x - f(x) } over [lo, hi] for convex f.
double legendre_1d(const std::function<double(double)>& f, double r, double lo, double hi);

}  // namespace metrobound
