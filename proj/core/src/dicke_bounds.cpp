#include "metrobound/dicke_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "metrobound/error.hpp"

namespace metrobound {

namespace {

// Round-off in <J^4> - <J^2>^2 grows like the square of the shell N(N+2)/4.
double clip_variance(double v, int N) {
  const double shell = 0.25 * N * (N + 2.0);
  const double tol = std::max(1e-10, 1e-14 * shell * shell);
  if (std::abs(v) <= tol) return 0.0;
  return v;
}

double gap_squared(const DickeMoments& m) {
  const double d = m.jy2 - m.jx2;
  return 4.0 * d * d;
}

}  // namespace

double DickeMoments::var_jx2() const { return clip_variance(jx4 - jx2 * jx2, N); }
double DickeMoments::var_jy2() const { return clip_variance(jy4 - jy2 * jy2, N); }

void DickeMoments::validate() const {
  if (N < 1) fail(ErrorKind::InvalidInput, "particle number must be positive");
  if (jx2 < 0.0 || jx4 < 0.0 || jy2 < 0.0 || jy4 < 0.0 || jz2_value() < 0.0) {
    fail(ErrorKind::InvalidInput, "moments must be non-negative");
  }
  const double tol = 1e-9 * std::max(1.0, jx4 + jy4);
  if (jx4 < jx2 * jx2 - tol || jy4 < jy2 * jy2 - tol) {
    fail(ErrorKind::InvalidInput, "fourth moments violate <J^4> >= <J^2>^2");
  }
  const double shell = 0.25 * N * (N + 2.0);
  if (jx2 + jy2 + jz2_value() > shell * (1.0 + 1e-9) + 1e-9) {
    fail(ErrorKind::InvalidInput, "second moments exceed N(N+2)/4");
  }
}

StateMoments moments_from_state(const QuantumState& state, Index cap) {
  const SpinTriple j = collective_operators(state.basis(), cap);
  const CMat& x = j.x.matrix;
  const CMat& y = j.y.matrix;
  const CMat& z = j.z.matrix;
  const CMat x2 = x * x;
  const CMat y2 = y * y;
  const CMat axy = x * y + y * x;
  auto ev = [&](const CMat& m) { return state.expect_complex(m).real(); };
  StateMoments out;
  DickeMoments& m = out.moments;
  m.N = state.basis().n_particles;
  m.jx2 = ev(x2);
  m.jx4 = ev(x2 * x2);
  m.jy2 = ev(y2);
  m.jy4 = ev(y2 * y2);
  m.jz2 = ev(z * z);
  m.jxjy2jx = ev(x * y2 * x);
  ParityReport& p = out.parity;
  p.anti_xy = ev(axy);
  p.anti_x2_xy = ev(x2 * axy + axy * x2);
  p.anti_y2_xy = ev(y2 * axy + axy * y2);
  p.even = std::abs(p.anti_xy) < 1e-10 && std::abs(p.anti_x2_xy) < 1e-10 &&
           std::abs(p.anti_y2_xy) < 1e-10;
  return out;
}

double fourth_moment_bound(double jx2, double jx4, int N) {
  return 0.125 * N * (N + 2.0) * jx2 - 0.5 * jx4;
}

DickeMoments with_bounded_fourth_moment(DickeMoments m) {
  m.jxjy2jx = fourth_moment_bound(m.jx2, m.jx4, m.N);
  m.jxjy2jx_is_bounded = true;
  return m;
}

double cross_term(const DickeMoments& m) {
  return 4.0 * m.jy2 - 3.0 * m.jz2_value() - 2.0 * m.jx2 * (1.0 + m.jy2) + 6.0 * m.jxjy2jx;
}

double precision_vs_theta(const DickeMoments& m, double theta, const PrecisionExtras& extras) {
  const double vx = extras.var_jx2.value_or(m.var_jx2());
  const double vy = extras.var_jy2.value_or(m.var_jy2());
  const double c0 = extras.cross_term.value_or(cross_term(m));
  const double den = gap_squared(m);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double c2 = c * c;
  const double s2 = s * s;
  // Numerator and denominator both carry c^2 s^2; keep the limits at c = 0 or s = 0 finite.
  double num;
  if (s2 < 1e-300 || c2 < 1e-300) {
    const bool at_zero = s2 < 1e-300;
    const double v = at_zero ? vx : vy;
    if (v > 0.0) return 0.0;
    num = c0;
  } else {
    const double t2 = s2 / c2;
    num = vx / t2 + vy * t2 + c0;
  }
  if (!(num > 0.0)) fail(ErrorKind::InvalidInput, "non-positive variance in precision formula");
  return den / num;
}

OptimalPrecision optimal_precision(const DickeMoments& m, const PrecisionExtras& extras) {
  const double vx = extras.var_jx2.value_or(m.var_jx2());
  const double vy = extras.var_jy2.value_or(m.var_jy2());
  const double c0 = extras.cross_term.value_or(cross_term(m));
  OptimalPrecision out;
  if (vx <= 0.0) {
    out.theta_opt = 0.0;
  } else if (vy <= 0.0) {
    out.theta_opt = 0.5 * std::numbers::pi;
  } else {
    out.theta_opt = std::atan(std::sqrt(std::sqrt(vx / vy)));
  }
  const double num = 2.0 * std::sqrt(std::max(0.0, vx) * std::max(0.0, vy)) + c0;
  if (!(num > 0.0)) fail(ErrorKind::InvalidInput, "non-positive variance in precision formula");
  out.precision = gap_squared(m) / num;
  return out;
}

double second_moment_bound(double jx2, double jy2, int N, double beta) {
  if (N < 1) fail(ErrorKind::InvalidInput, "particle number must be positive");
  if (jx2 < 0.0 || jy2 <= 0.0) fail(ErrorKind::InvalidInput, "moments must be positive");
  if (jy2 <= jx2) fail(ErrorKind::InvalidInput, "need <J_y^2> > <J_x^2>");
  if (beta < 1.0) fail(ErrorKind::InvalidInput, "beta must be at least 1");
  const double n = N;
  const double vx = (beta - 1.0) * jx2 * jx2;
  const double vy = std::max(0.0, 0.25 * n * n * jy2 - jy2 * jy2);
  const double num = jy2 + (3.0 * n * (n + 2.0) - 8.0) / 4.0 * jx2 - 2.0 * jx2 * jy2 -
                     3.0 * beta * jx2 * jx2 + 2.0 * std::sqrt(vx * vy);
  if (!(num > 0.0)) fail(ErrorKind::InvalidInput, "non-positive variance in precision formula");
  const double d = jy2 - jx2;
  return 4.0 * d * d / num;
}

double evolved_jx_moment(const QuantumState& state, int power, double theta, Index cap) {
  const SpinTriple j = collective_operators(state.basis(), cap);
  const CMat xt = std::cos(theta) * j.x.matrix - std::sin(theta) * j.y.matrix;
  CMat p = CMat::Identity(state.dim(), state.dim());
  for (int k = 0; k < power; ++k) p = (p * xt).eval();
  return state.expect_complex(p).real();
}

double simulated_precision(const QuantumState& state, double theta, Index cap) {
  const SpinTriple j = collective_operators(state.basis(), cap);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const CMat xt = c * j.x.matrix - s * j.y.matrix;
  const CMat dxt = -s * j.x.matrix - c * j.y.matrix;
  const CMat x2 = xt * xt;
  const CMat dx2 = dxt * xt + xt * dxt;
  const double m2 = state.expect_complex(x2).real();
  const double m4 = state.expect_complex(x2 * x2).real();
  const double d = state.expect_complex(dx2).real();
  const double var = m4 - m2 * m2;
  if (var <= 0.0) return d * d > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return d * d / var;
}

ResampleSummary gaussian_resample(const std::function<double(std::span<const double>)>& f,
                                  std::span<const double> mean, std::span<const double> sigma,
                                  int draws, std::uint64_t seed) {
  if (mean.size() != sigma.size()) fail(ErrorKind::InvalidInput, "mean and sigma sizes differ");
  if (draws < 1) fail(ErrorKind::InvalidInput, "need at least one draw");
  for (double s : sigma) {
    if (s < 0.0) fail(ErrorKind::InvalidInput, "negative standard deviation");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(mean.size());
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(draws));
  ResampleSummary out;
  out.draws = draws;
  for (int d = 0; d < draws; ++d) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mean[i] + sigma[i] * normal(rng);
    try {
      values.push_back(f(x));
    } catch (const Error&) {
      ++out.failures;
    }
  }
  if (values.empty()) fail(ErrorKind::InvalidInput, "every resampled draw failed");
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.stddev = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
  std::sort(values.begin(), values.end());
  if (values.front() == values.back()) {
    out.mean = values.front();
    out.stddev = 0.0;
  }
  auto pct = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  out.p05 = pct(0.05);
  out.p50 = pct(0.5);
  out.p95 = pct(0.95);
  return out;
}

}  // namespace metrobound
