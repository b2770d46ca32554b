#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "metrobound/spin_algebra.hpp"

namespace metrobound {

// Collective moments of a state near the x-polarized unpolarized Dicke state.
struct DickeMoments {
  int N = 0;
  double jx2 = 0.0;
  double jx4 = 0.0;
  double jy2 = 0.0;
  double jy4 = 0.0;
  double jxjy2jx = 0.0;
  // <J_z^2>; taken equal to <J_y^2> when unset.
  std::optional<double> jz2;
  bool jxjy2jx_is_bounded = false;

  double jz2_value() const { return jz2.value_or(jy2); }
  double var_jx2() const;
  double var_jy2() const;
  void validate() const;
};

struct ParityReport {
  double anti_xy = 0.0;     // <{J_x, J_y}>
  double anti_x2_xy = 0.0;  // <{J_x^2, {J_x, J_y}}>
  double anti_y2_xy = 0.0;  // <{J_y^2, {J_x, J_y}}>
  bool even = true;
};

struct StateMoments {
  DickeMoments moments;
  ParityReport parity;
};

StateMoments moments_from_state(const QuantumState& state, Index cap = default_dimension_cap);

// Replaces <J_x J_y^2 J_x> by its upper bound N(N+2)/8 <J_x^2> - <J_x^4>/2.
double fourth_moment_bound(double jx2, double jx4, int N);
DickeMoments with_bounded_fourth_moment(DickeMoments m);

// Overrides for the variances and the theta-independent numerator term.
struct PrecisionExtras {
  std::optional<double> var_jx2;
  std::optional<double> var_jy2;
  std::optional<double> cross_term;
};

// <{J_x^2,J_y^2} + {J_x,J_y}^2> - 2<J_x^2><J_y^2> expressed through DickeMoments.
double cross_term(const DickeMoments& m);

// (Delta theta)^-2 for an estimate of theta from <J_x^2> after exp(-i theta J_z).
double precision_vs_theta(const DickeMoments& m, double theta, const PrecisionExtras& extras = {});

struct OptimalPrecision {
  double precision = 0.0;  // (Delta theta)^-2 at the optimum
  double theta_opt = 0.0;
};
OptimalPrecision optimal_precision(const DickeMoments& m, const PrecisionExtras& extras = {});

// Bound from <J_x^2> and <J_y^2> only, with <J_y^4> <= N^2/4 <J_y^2> and <J_x^4> = beta <J_x^2>^2.
double second_moment_bound(double jx2, double jy2, int N, double beta = 3.0);

// Error-propagation precision of <J_x^2> evaluated on the evolved state.
double simulated_precision(const QuantumState& state, double theta, Index cap = default_dimension_cap);
// <J_x^m> after exp(-i theta J_z).
double evolved_jx_moment(const QuantumState& state, int power, double theta,
                         Index cap = default_dimension_cap);

struct ResampleSummary {
  int draws = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double p05 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  int failures = 0;
};

// Re-evaluates f on Gaussian draws around `mean` with per-input `sigma`. Draws where f
// throws are counted as failures and skipped.
ResampleSummary gaussian_resample(const std::function<double(std::span<const double>)>& f,
                                  std::span<const double> mean, std::span<const double> sigma,
                                  int draws = 10000, std::uint64_t seed = 0);

}  // namespace metrobound
