#include "metrobound/spin_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "metrobound/error.hpp"

namespace metrobound {

namespace {

int checked_two_j(double j) {
  const double tj = 2.0 * j;
  const int r = static_cast<int>(std::lround(tj));
  if (!(j > 0.0) || std::abs(tj - r) > 1e-12 || r < 1) {
    fail(ErrorKind::InvalidInput, "spin must be a positive half-integer, got " + std::to_string(j));
  }
  return r;
}

void check_cap(const Basis& b, Index cap) {
  if (b.kind == Basis::Kind::Full && b.nominal_dim() > static_cast<double>(cap)) {
    fail(ErrorKind::DimensionCap, "full basis dimension " + std::to_string(b.nominal_dim()) +
                                      " exceeds cap " + std::to_string(cap));
  }
}

void check_basis(const Basis& a, const Basis& b) {
  if (a != b) fail(ErrorKind::BasisMismatch, "operands live in different bases");
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Single-particle matrix in ascending order m = -j ... +j.
CMat ascending(const CMat& m) { return m.colwise().reverse().rowwise().reverse(); }

CMat local_sum(const CMat& single, const Basis& b) {
  const Index d = b.local_dim();
  const Index dim = b.dim();
  const int n = b.n_particles;
  CMat out = CMat::Zero(dim, dim);
  std::vector<Index> stride(static_cast<std::size_t>(n));
  Index s = 1;
  for (int p = n - 1; p >= 0; --p) {
    stride[static_cast<std::size_t>(p)] = s;
    s *= d;
  }
  for (Index col = 0; col < dim; ++col) {
    for (int p = 0; p < n; ++p) {
      const Index st = stride[static_cast<std::size_t>(p)];
      const Index digit = (col / st) % d;
      for (Index k = 0; k < d; ++k) {
        const cplx v = single(k, digit);
        if (v != cplx(0.0)) out(col + (k - digit) * st, col) += v;
      }
    }
  }
  return out;
}

CMat single_particle_full(const CMat& single, int particle, const Basis& b) {
  const Index d = b.local_dim();
  const Index dim = b.dim();
  Index st = 1;
  for (int p = b.n_particles - 1; p > particle; --p) st *= d;
  CMat out = CMat::Zero(dim, dim);
  for (Index col = 0; col < dim; ++col) {
    const Index digit = (col / st) % d;
    for (Index k = 0; k < d; ++k) {
      const cplx v = single(k, digit);
      if (v != cplx(0.0)) out(col + (k - digit) * st, col) += v;
    }
  }
  return out;
}

CMat spin_matrix(double j, Axis axis) {
  const SpinTriple t = single_spin_matrices(j);
  switch (axis) {
    case Axis::X:
      return t.x.matrix;
    case Axis::Y:
      return t.y.matrix;
    case Axis::Z:
      return t.z.matrix;
  }
  return t.z.matrix;
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Qubit map |1>_z, |0>_z -> |1>_l, |0>_l in the (+1/2, -1/2) ordering, with
// <0|_z|0>_x = -1/sqrt(2), <0|_z|0>_y = -i/sqrt(2), <0|_z|1>_y = +i/sqrt(2).
struct AxisMap {
  cplx s;
  Eigen::Vector3d n;
  double phi;
};

AxisMap axis_map(Axis axis) {
  const double h = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd u;
  switch (axis) {
    case Axis::X:
      u << h, h, h, -h;
      break;
    case Axis::Y:
      u << h, h, cplx(0, h), cplx(0, -h);
      break;
    case Axis::Z:
      u = Eigen::Matrix2cd::Identity();
      break;
  }
  const cplx s = std::sqrt(u.determinant());
  const Eigen::Matrix2cd v = u / s;
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  const double c = 0.5 * v.trace().real();
  Eigen::Vector3d w(std::real(cplx(0, 1) * (v * sx).trace() * 0.5),
                    std::real(cplx(0, 1) * (v * sy).trace() * 0.5),
                    std::real(cplx(0, 1) * (v * sz).trace() * 0.5));
  const double sn = w.norm();
  AxisMap m;
  m.s = s;
  m.phi = 2.0 * std::atan2(sn, c);
  m.n = sn > 0.0 ? Eigen::Vector3d(w / sn) : Eigen::Vector3d(0, 0, 1);
  return m;
}

CMat axis_unitary(Axis axis, const Basis& b) {
  if (axis == Axis::Z) return CMat::Identity(b.dim(), b.dim());
  const AxisMap m = axis_map(axis);
  const Operator gen = collective_operator(m.n, b, std::numeric_limits<Index>::max());
  const cplx global = std::pow(m.s, static_cast<double>(b.two_j) * b.n_particles);
  return global * linalg::unitary_exp(gen.matrix, m.phi);
}

Basis make_basis(int N, double j, Basis::Kind kind) {
  return kind == Basis::Kind::Full ? Basis::full(N, j) : Basis::symmetric(N, j);
}

void require_qubits_even(int N, const char* what) {
  if (N < 2 || N % 2 != 0) {
    fail(ErrorKind::InvalidInput, std::string(what) + " requires an even particle number");
  }
}

}  // namespace

Basis Basis::full(int n, double j) {
  if (n < 1) fail(ErrorKind::InvalidInput, "particle number must be positive");
  return Basis{Kind::Full, n, checked_two_j(j)};
}

Basis Basis::symmetric(int n, double j) {
  if (n < 1) fail(ErrorKind::InvalidInput, "particle number must be positive");
  return Basis{Kind::Symmetric, n, checked_two_j(j)};
}

double Basis::nominal_dim() const {
  if (kind == Kind::Symmetric) return static_cast<double>(two_j) * n_particles + 1.0;
  return std::pow(static_cast<double>(two_j + 1), n_particles);
}

Index Basis::dim() const {
  if (kind == Kind::Symmetric) return static_cast<Index>(two_j) * n_particles + 1;
  Index d = 1;
  for (int p = 0; p < n_particles; ++p) d *= (two_j + 1);
  return d;
}

Operator::Operator(CMat m, Basis b) : matrix(std::move(m)), basis(b) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != basis.dim()) {
    fail(ErrorKind::BasisMismatch, "operator matrix does not match basis dimension");
  }
  if (!linalg::is_hermitian(matrix, 1e-12)) {
    fail(ErrorKind::InvalidInput, "operator is not Hermitian");
  }
}

Operator Operator::operator+(const Operator& o) const {
  check_basis(basis, o.basis);
  return Operator(matrix + o.matrix, basis);
}

Operator Operator::operator-(const Operator& o) const {
  check_basis(basis, o.basis);
  return Operator(matrix - o.matrix, basis);
}

Operator Operator::operator*(const Operator& o) const {
  check_basis(basis, o.basis);
  CMat p = matrix * o.matrix;
  p = 0.5 * (p + p.adjoint()).eval();
  return Operator(std::move(p), basis);
}

Operator Operator::scaled(double s) const { return Operator(s * matrix, basis); }

Operator Operator::shifted(double s) const {
  CMat m = matrix;
  m.diagonal().array() += s;
  return Operator(std::move(m), basis);
}

QuantumState::QuantumState(Basis b, CMat rho, std::optional<CVec> psi)
    : basis_(b), rho_(std::move(rho)), psi_(std::move(psi)) {}

QuantumState QuantumState::from_vector(CVec psi, Basis basis) {
  if (psi.size() != basis.dim()) fail(ErrorKind::BasisMismatch, "state vector size mismatch");
  const double nrm = psi.norm();
  if (std::abs(nrm - 1.0) > 1e-8) fail(ErrorKind::InvalidInput, "state vector is not normalized");
  psi /= nrm;
  CMat rho = psi * psi.adjoint();
  return QuantumState(basis, std::move(rho), std::move(psi));
}

QuantumState QuantumState::from_density(CMat rho, Basis basis) {
  if (rho.rows() != basis.dim() || rho.cols() != basis.dim()) {
    fail(ErrorKind::BasisMismatch, "density matrix size mismatch");
  }
  if (!linalg::is_hermitian(rho, 1e-10)) fail(ErrorKind::InvalidInput, "density matrix is not Hermitian");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-8) fail(ErrorKind::InvalidInput, "density matrix trace is not one");
  rho = 0.5 * (rho + rho.adjoint()).eval() / tr;
  if (rho.rows() <= 1024 && linalg::eigenvalues(rho).minCoeff() < -1e-10) {
    fail(ErrorKind::InvalidInput, "density matrix has a negative eigenvalue");
  }
  return QuantumState(basis, std::move(rho), std::nullopt);
}

const CVec& QuantumState::vector() const {
  if (!psi_) fail(ErrorKind::InvalidInput, "state is not pure");
  return *psi_;
}

double QuantumState::expect(const Operator& op) const {
  check_basis(basis_, op.basis);
  return expect_complex(op.matrix).real();
}

cplx QuantumState::expect_complex(const CMat& op) const {
  if (psi_) return psi_->dot(op * *psi_);
  return (rho_.cwiseProduct(op.transpose())).sum();
}

double QuantumState::variance(const Operator& op) const {
  const double m = expect(op);
  return expect(op * op) - m * m;
}

double QuantumState::fidelity(const QuantumState& target) const {
  check_basis(basis_, target.basis_);
  const CVec& t = target.vector();
  return t.dot(rho_ * t).real();
}

SpinTriple single_spin_matrices(double j) {
  const int tj = checked_two_j(j);
  const Index d = tj + 1;
  CMat jp = CMat::Zero(d, d);
  CMat jz = CMat::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    const double m = j - static_cast<double>(k);
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const CMat jm = jp.adjoint();
  const Basis b{Basis::Kind::Full, 1, tj};
  return {Operator(0.5 * (jp + jm), b), Operator(cplx(0.0, -0.5) * (jp - jm), b),
          Operator(jz, b)};
}

Operator collective_operator(Axis axis, const Basis& basis, Index cap) {
  check_cap(basis, cap);
  if (basis.kind == Basis::Kind::Symmetric) {
    return Operator(spin_matrix(basis.max_total_spin(), axis), basis);
  }
  return Operator(local_sum(ascending(spin_matrix(basis.spin(), axis)), basis), basis);
}

Operator collective_operator(const Eigen::Vector3d& direction, const Basis& basis, Index cap) {
  const double nrm = direction.norm();
  if (!(nrm > 0.0)) fail(ErrorKind::InvalidInput, "direction must be non-zero");
  const Eigen::Vector3d n = direction / nrm;
  const Operator x = collective_operator(Axis::X, basis, cap);
  const Operator y = collective_operator(Axis::Y, basis, cap);
  const Operator z = collective_operator(Axis::Z, basis, cap);
  return Operator(n.x() * x.matrix + n.y() * y.matrix + n.z() * z.matrix, basis);
}

SpinTriple collective_operators(const Basis& basis, Index cap) {
  return {collective_operator(Axis::X, basis, cap), collective_operator(Axis::Y, basis, cap),
          collective_operator(Axis::Z, basis, cap)};
}

Operator total_spin_squared(const Basis& basis, Index cap) {
  const SpinTriple t = collective_operators(basis, cap);
  return t.x * t.x + t.y * t.y + t.z * t.z;
}

Operator single_particle_operator(int particle, Axis axis, const Basis& basis, Index cap) {
  if (basis.kind != Basis::Kind::Full) {
    fail(ErrorKind::InvalidInput, "single-particle operators need the full basis");
  }
  if (particle < 0 || particle >= basis.n_particles) {
    fail(ErrorKind::InvalidInput, "particle index out of range");
  }
  check_cap(basis, cap);
  return Operator(single_particle_full(ascending(spin_matrix(basis.spin(), axis)), particle, basis),
                  basis);
}

Operator identity(const Basis& basis) {
  return Operator(CMat::Identity(basis.dim(), basis.dim()), basis);
}

QuantumState mixture(const std::vector<std::pair<double, QuantumState>>& parts) {
  if (parts.empty()) fail(ErrorKind::InvalidInput, "empty mixture");
  const Basis b = parts.front().second.basis();
  CMat rho = CMat::Zero(b.dim(), b.dim());
  double total = 0.0;
  for (const auto& [p, s] : parts) {
    check_basis(b, s.basis());
    if (p < 0.0) fail(ErrorKind::InvalidInput, "negative mixture weight");
    rho += p * s.density();
    total += p;
  }
  if (!(total > 0.0)) fail(ErrorKind::InvalidInput, "mixture weights sum to zero");
  return QuantumState::from_density(rho / total, b);
}

QuantumState maximally_mixed(const Basis& basis, Index cap) {
  check_cap(basis, cap);
  const Index d = basis.dim();
  return QuantumState::from_density(CMat::Identity(d, d) / static_cast<double>(d), basis);
}

QuantumState tensor_product(const QuantumState& a, const QuantumState& b) {
  if (a.basis().kind != Basis::Kind::Full || b.basis().kind != Basis::Kind::Full ||
      a.basis().two_j != b.basis().two_j) {
    fail(ErrorKind::BasisMismatch, "tensor products need full bases with equal spin");
  }
  const Basis out{Basis::Kind::Full, a.basis().n_particles + b.basis().n_particles,
                  a.basis().two_j};
  if (a.is_pure() && b.is_pure()) {
    const CMat v = kron(a.vector(), b.vector());
    return QuantumState::from_vector(v.col(0), out);
  }
  return QuantumState::from_density(kron(a.density(), b.density()), out);
}

QuantumState rotate(const QuantumState& s, const Operator& generator, double angle) {
  check_basis(s.basis(), generator.basis);
  const CMat u = linalg::unitary_exp(generator.matrix, angle);
  if (s.is_pure()) return QuantumState::from_vector(u * s.vector(), s.basis());
  return QuantumState::from_density(u * s.density() * u.adjoint(), s.basis());
}

QuantumState dicke_state(int N, int n, Axis axis, Basis::Kind kind, Index cap) {
  if (n < 0 || n > N) fail(ErrorKind::InvalidInput, "Dicke excitation number out of range");
  const Basis b = make_basis(N, 0.5, kind);
  check_cap(b, cap);
  CVec v = CVec::Zero(b.dim());
  if (kind == Basis::Kind::Symmetric) {
    v(n) = 1.0;
  } else {
    Index count = 0;
    for (Index i = 0; i < b.dim(); ++i) {
      const int ones = std::popcount(static_cast<unsigned long long>(i));
      if (N - ones == n) {
        v(i) = 1.0;
        ++count;
      }
    }
    v /= std::sqrt(static_cast<double>(count));
  }
  return QuantumState::from_vector(axis_unitary(axis, b) * v, b);
}

QuantumState ghz_state(int N, Basis::Kind kind, Index cap) {
  const Basis b = make_basis(N, 0.5, kind);
  check_cap(b, cap);
  CVec v = CVec::Zero(b.dim());
  v(0) = v(b.dim() - 1) = 1.0 / std::numbers::sqrt2;
  return QuantumState::from_vector(v, b);
}

QuantumState polarized_state(int N, double j, Axis axis, Basis::Kind kind, Index cap) {
  const Basis b = make_basis(N, j, kind);
  check_cap(b, cap);
  CVec v = CVec::Zero(b.dim());
  v(kind == Basis::Kind::Symmetric ? 0 : b.dim() - 1) = 1.0;
  return QuantumState::from_vector(axis_unitary(axis, b) * v, b);
}

QuantumState cat_product_state(int N, double j, Basis::Kind kind, Index cap) {
  const Basis b = make_basis(N, j, kind);
  check_cap(b, cap);
  if (kind == Basis::Kind::Symmetric) {
    if (b.two_j != 1) fail(ErrorKind::InvalidInput, "symmetric product states need spin 1/2");
    CVec v(b.dim());
    for (Index k = 0; k <= N; ++k) {
      v(k) = std::exp(0.5 * log_binomial(N, static_cast<double>(k)) - 0.5 * N * std::log(2.0));
    }
    return QuantumState::from_vector(v, b);
  }
  CVec single = CVec::Zero(b.local_dim());
  single(0) = single(b.local_dim() - 1) = 1.0 / std::numbers::sqrt2;
  CMat v = single;
  for (int p = 1; p < N; ++p) v = kron(v, single);
  return QuantumState::from_vector(v.col(0), b);
}

QuantumState pi_singlet(int N, double j, Index cap) {
  const Basis b = Basis::full(N, j);
  if ((b.two_j * N) % 2 != 0) fail(ErrorKind::InvalidInput, "no J = 0 subspace for this N and j");
  check_cap(b, cap);
  const linalg::Eigh e = linalg::eigh(total_spin_squared(b, cap).matrix);
  Index count = 0;
  while (count < e.values.size() && e.values(count) < 1e-8) ++count;
  if (count == 0) fail(ErrorKind::InvalidInput, "no J = 0 subspace for this N and j");
  const CMat v = e.vectors.leftCols(count);
  return QuantumState::from_density(v * v.adjoint() / static_cast<double>(count), b);
}

QuantumState thermal_dicke(int N, double temperature, Basis::Kind kind, Index cap) {
  require_qubits_even(N, "thermal Dicke mixture");
  if (temperature < 0.0) fail(ErrorKind::InvalidInput, "temperature must be non-negative");
  if (temperature == 0.0) return dicke_state(N, N / 2, Axis::X, kind, cap);
  std::vector<std::pair<double, QuantumState>> parts;
  for (int n = 0; n <= N; ++n) {
    const double dn = n - 0.5 * N;
    const double w = std::exp(-dn * dn / temperature);
    if (w < 1e-300) continue;
    parts.emplace_back(w, dicke_state(N, n, Axis::X, kind, cap));
  }
  return mixture(parts);
}

GroundState squeezing_ground_state(int N, double lambda, int sign, Basis::Kind kind, Index cap) {
  if (lambda < 0.0) fail(ErrorKind::InvalidInput, "lambda must be non-negative");
  if (sign != 1 && sign != -1) fail(ErrorKind::InvalidInput, "sign must be +1 or -1");
  const Basis b = make_basis(N, 0.5, kind);
  const Operator jx = collective_operator(Axis::X, b, cap);
  const Operator jy = collective_operator(Axis::Y, b, cap);
  const CMat h = static_cast<double>(sign) * (jx.matrix * jx.matrix) - lambda * jy.matrix;
  const linalg::Eigh e = linalg::eigh(0.5 * (h + h.adjoint()));
  const double width = e.values(e.values.size() - 1) - e.values(0);
  const double gap = e.values.size() > 1 ? e.values(1) - e.values(0) : width;
  CVec g = e.vectors.col(0);
  Index lead = 0;
  g.cwiseAbs().maxCoeff(&lead);
  g *= std::polar(1.0, -std::arg(g(lead)));
  return {QuantumState::from_vector(g, b), e.values(0), gap, gap < 1e-8 * std::max(width, 1e-300)};
}

double dicke_overlap(int N, int m) {
  require_qubits_even(N, "Dicke overlap");
  if (m < 0 || m > N) fail(ErrorKind::InvalidInput, "m out of range");
  if (m % 2 != 0) return 0.0;
  const int mm = std::min(m, N - m);
  const double h = 0.5 * N;
  const double lg = 2.0 * log_binomial(h, 0.5 * mm) + log_binomial(N, h) -
                    N * std::log(2.0) - log_binomial(N, mm);
  return std::exp(lg);
}

CVec coherent_state(int N, double phi, double theta) {
  if (N < 1) fail(ErrorKind::InvalidInput, "particle number must be positive");
  const double J = 0.5 * N;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  CVec v(N + 1);
  for (int k = 0; k <= N; ++k) {
    const double M = J - k;
    const double mag = std::sqrt(std::exp(log_binomial(N, N - k))) * std::pow(c, N - k) * std::pow(s, k);
    v(k) = std::polar(mag, -phi * M);
  }
  return v;
}

double husimi_q(const QuantumState& state, double phi, double theta) {
  const Basis& b = state.basis();
  if (b.kind != Basis::Kind::Symmetric || b.two_j != 1) {
    fail(ErrorKind::BasisMismatch, "Husimi Q needs a spin-1/2 symmetric basis state");
  }
  const int N = b.n_particles;
  const CVec w = coherent_state(N, phi, theta);
  const double c = (N + 1.0) / (4.0 * std::numbers::pi);
  return c * w.dot(state.density() * w).real();
}

double husimi_integral(const QuantumState& state, int n_theta, int n_phi) {
  const int N = state.basis().n_particles;
  if (n_theta <= 0) n_theta = N / 2 + 4;
  if (n_phi <= 0) n_phi = N + 4;
  RMat jac = RMat::Zero(n_theta, n_theta);
  for (int k = 1; k < n_theta; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jac(k, k - 1) = jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(jac);
  double total = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double x = es.eigenvalues()(i);
    const double w = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    const double theta = std::acos(std::clamp(x, -1.0, 1.0));
    double ring = 0.0;
    for (int p = 0; p < n_phi; ++p) {
      ring += husimi_q(state, 2.0 * std::numbers::pi * p / n_phi, theta);
    }
    total += w * ring * 2.0 * std::numbers::pi / n_phi;
  }
  return total;
}

}  // namespace metrobound
