#include "metrobound/qfi.hpp"

#include <cmath>
#include <string>

#include "metrobound/error.hpp"

namespace metrobound {

namespace {

constexpr double pair_cutoff = 1e-12;

void check_basis(const QuantumState& s, const Operator& op) {
  if (s.basis() != op.basis) fail(ErrorKind::BasisMismatch, "state and operator bases differ");
}

double pure_cov(const CVec& psi, const CMat& a, const CMat& b) {
  const CVec ap = a * psi;
  const CVec bp = b * psi;
  const cplx ab = ap.dot(bp);
  const double ea = psi.dot(ap).real();
  const double eb = psi.dot(bp).real();
  return ab.real() - ea * eb;
}

}  // namespace

EigenDecomposition EigenDecomposition::of(const QuantumState& state) {
  EigenDecomposition e;
  if (state.is_pure()) {
    e.values = RVec::Zero(1);
    e.values(0) = 1.0;
    e.vectors = state.vector();
    return e;
  }
  const linalg::Eigh h = linalg::eigh(state.density());
  const Index n = h.values.size();
  e.values = h.values.reverse();
  e.vectors = h.vectors.rowwise().reverse();
  for (Index i = 0; i < n; ++i) {
    if (e.values(i) < 0.0 && e.values(i) > -e.tolerance) e.values(i) = 0.0;
  }
  return e;
}

double EigenDecomposition::reconstruction_error(const CMat& rho) const {
  const CMat r = vectors * values.cast<cplx>().asDiagonal() * vectors.adjoint();
  return linalg::max_abs(r - rho);
}

Eigen::Matrix2d QfiMatrix::matrix() const {
  Eigen::Matrix2d m;
  m << f00, f01, f01, f11;
  return m;
}

bool QfiMatrix::is_psd(double tol) const {
  return f00 >= -tol && f11 >= -tol && f00 * f11 - f01 * f01 >= -tol * (1.0 + std::abs(f00 * f11));
}

double qfi_cross(const EigenDecomposition& eig, const CMat& a, const CMat& b) {
  const Index n = eig.values.size();
  if (n == 1) return 4.0 * pure_cov(eig.vectors.col(0), a, b);
  const CMat av = eig.vectors.adjoint() * a * eig.vectors;
  const CMat bv = &a == &b ? av : CMat(eig.vectors.adjoint() * b * eig.vectors);
  cplx total = 0.0;
  for (Index l = 0; l < n; ++l) {
    const double pl = eig.values(l);
    for (Index v = 0; v < n; ++v) {
      const double pv = eig.values(v);
      const double s = pl + pv;
      if (s < pair_cutoff) continue;
      const double d = pl - pv;
      if (d == 0.0) continue;
      total += (d * d / s) * av(l, v) * bv(v, l);
    }
  }
  if (std::abs(total.imag()) > 1e-8 * std::max(1.0, std::abs(total.real()))) {
    fail(ErrorKind::InvalidInput, "cross QFI has a non-zero imaginary part; operators must commute");
  }
  return 2.0 * total.real();
}

double qfi(const EigenDecomposition& eig, const CMat& g) { return qfi_cross(eig, g, g); }

double qfi(const QuantumState& state, const Operator& generator) {
  check_basis(state, generator);
  if (state.is_pure()) return 4.0 * pure_cov(state.vector(), generator.matrix, generator.matrix);
  return qfi(EigenDecomposition::of(state), generator.matrix);
}

double qfi_cross(const QuantumState& state, const Operator& a, const Operator& b) {
  check_basis(state, a);
  check_basis(state, b);
  if (state.is_pure()) return 4.0 * pure_cov(state.vector(), a.matrix, b.matrix);
  return qfi_cross(EigenDecomposition::of(state), a.matrix, b.matrix);
}

double avg_qfi(const QuantumState& state, Index cap) {
  const SpinTriple j = collective_operators(state.basis(), cap);
  if (state.is_pure()) return (qfi(state, j.x) + qfi(state, j.y) + qfi(state, j.z)) / 3.0;
  const EigenDecomposition e = EigenDecomposition::of(state);
  return (qfi(e, j.x.matrix) + qfi(e, j.y.matrix) + qfi(e, j.z.matrix)) / 3.0;
}

std::vector<CMat> eigen_projectors(const Operator& op, double tol) {
  const linalg::Eigh e = linalg::eigh(op.matrix);
  std::vector<CMat> out;
  Index start = 0;
  const Index n = e.values.size();
  while (start < n) {
    Index end = start + 1;
    while (end < n && e.values(end) - e.values(start) < tol) ++end;
    const CMat v = e.vectors.middleCols(start, end - start);
    out.push_back(v * v.adjoint());
    start = end;
  }
  return out;
}

double classical_fisher(const QuantumState& state, const Operator& generator, double theta,
                        const std::vector<CMat>& povm) {
  check_basis(state, generator);
  const Index d = state.dim();
  if (povm.empty()) fail(ErrorKind::InvalidInput, "empty POVM");
  CMat sum = CMat::Zero(d, d);
  for (const CMat& p : povm) {
    if (p.rows() != d || p.cols() != d) fail(ErrorKind::InvalidInput, "POVM element size mismatch");
    if (!linalg::is_hermitian(p, 1e-10) || linalg::eigenvalues(p).minCoeff() < -1e-10) {
      fail(ErrorKind::InvalidInput, "POVM element is not positive");
    }
    sum += p;
  }
  if (linalg::max_abs(sum - CMat::Identity(d, d)) > 1e-10) {
    fail(ErrorKind::InvalidInput, "POVM elements do not sum to identity");
  }
  const linalg::Eigh g = linalg::eigh(generator.matrix);
  const CMat rho_g = g.vectors.adjoint() * state.density() * g.vectors;
  std::vector<CMat> povm_g;
  povm_g.reserve(povm.size());
  for (const CMat& p : povm) povm_g.push_back(g.vectors.adjoint() * p * g.vectors);

  auto probs = [&](double t) {
    CVec ph(d);
    for (Index i = 0; i < d; ++i) ph(i) = std::polar(1.0, -t * g.values(i));
    const CMat r = ph.asDiagonal() * rho_g * ph.conjugate().asDiagonal();
    std::vector<double> p(povm_g.size());
    for (std::size_t m = 0; m < povm_g.size(); ++m) {
      p[m] = (povm_g[m].cwiseProduct(r.transpose())).sum().real();
    }
    return p;
  };
  constexpr double h = 1e-5;
  const std::vector<double> p0 = probs(theta);
  const std::vector<double> a1 = probs(theta + h), b1 = probs(theta - h);
  const std::vector<double> a2 = probs(theta + 0.5 * h), b2 = probs(theta - 0.5 * h);
  double f = 0.0;
  for (std::size_t m = 0; m < p0.size(); ++m) {
    if (p0[m] < 1e-12) continue;
    const double d1 = (a1[m] - b1[m]) / (2.0 * h);
    const double d2 = (a2[m] - b2[m]) / h;
    const double dp = (4.0 * d2 - d1) / 3.0;
    f += dp * dp / p0[m];
  }
  return f;
}

double pezze_smerzi_bound(double mean_jy, double var_jx) {
  if (!(var_jx > 0.0)) fail(ErrorKind::InvalidInput, "Var(J_x) must be positive");
  return mean_jy * mean_jy / var_jx;
}

double k_producible_limit(int k, int N) {
  if (k < 1 || N < 1 || k > N) fail(ErrorKind::InvalidInput, "need 1 <= k <= N");
  const double s = std::floor(static_cast<double>(N) / k);
  const double rest = N - s * k;
  return s * k * k + rest * rest;
}

int entanglement_depth(double qfi_value, int N) {
  if (N < 1) fail(ErrorKind::InvalidInput, "particle number must be positive");
  const double n2 = static_cast<double>(N) * N;
  if (qfi_value > n2 * (1.0 + 1e-12)) {
    fail(ErrorKind::InvalidInput, "QFI value " + std::to_string(qfi_value) + " exceeds N^2");
  }
  for (int k = 1; k < N; ++k) {
    if (qfi_value <= k_producible_limit(k, N)) return k;
  }
  return N;
}

double polarized_precision_cap(double mean_jy, int N) {
  if (N < 1) fail(ErrorKind::InvalidInput, "particle number must be positive");
  const double jmax = 0.5 * N;
  if (std::abs(mean_jy) > jmax * (1.0 + 1e-12)) fail(ErrorKind::InvalidInput, "|<J_y>| exceeds N/2");
  const double r = mean_jy / jmax;
  return 2.0 * N + static_cast<double>(N) * N * (1.0 - r * r);
}

}  // namespace metrobound
