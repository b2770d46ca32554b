#include "metrobound/gradient.hpp"

#include <cmath>
#include <string>

#include "metrobound/error.hpp"

namespace metrobound {

namespace {

void require_full(const QuantumState& s) {
  if (s.basis().kind != Basis::Kind::Full) {
    fail(ErrorKind::BasisMismatch, "gradient bounds need a full-basis spin state");
  }
}

// Diagonal of sum_n w_n j_z^(n) in the full basis.
RVec weighted_jz(const Basis& b, const std::vector<double>& w) {
  const Index d = b.local_dim();
  const Index dim = b.dim();
  const int n = b.n_particles;
  RVec out = RVec::Zero(dim);
  for (Index i = 0; i < dim; ++i) {
    Index rest = i;
    double v = 0.0;
    for (int p = n - 1; p >= 0; --p) {
      const Index digit = rest % d;
      rest /= d;
      v += w[static_cast<std::size_t>(p)] * (static_cast<double>(digit) - b.spin());
    }
    out(i) = v;
  }
  return out;
}

CMat diag(const RVec& v) { return v.cast<cplx>().asDiagonal(); }

RVec unit_weight(const Basis& b, int particle) {
  std::vector<double> w(static_cast<std::size_t>(b.n_particles), 0.0);
  w[static_cast<std::size_t>(particle)] = 1.0;
  return weighted_jz(b, w);
}

}  // namespace

void validate_spatial(const SpatialModel& s, int N) {
  if (const auto* d = std::get_if<Deterministic>(&s)) {
    if (static_cast<int>(d->positions.size()) != N) {
      fail(ErrorKind::InvalidInput, "expected " + std::to_string(N) + " positions");
    }
    for (double x : d->positions) {
      if (!std::isfinite(x)) fail(ErrorKind::InvalidInput, "positions must be finite");
    }
    return;
  }
  const auto& m = std::get<MomentModel>(s);
  if (!(m.sigma2 >= 0.0) || !std::isfinite(m.mu) || !std::isfinite(m.eta)) {
    fail(ErrorKind::InvalidInput, "invalid moment model");
  }
  const double tol = 1e-12 * std::max(1.0, m.sigma2);
  if (m.eta > m.sigma2 + tol) fail(ErrorKind::InvalidInput, "eta exceeds sigma2");
  if (N > 1 && m.eta < -m.sigma2 / (N - 1) - tol) {
    fail(ErrorKind::InvalidInput, "eta below -sigma2/(N-1)");
  }
}

SpatialModel shifted(const SpatialModel& s, double d) {
  if (const auto* det = std::get_if<Deterministic>(&s)) {
    Deterministic out = *det;
    for (double& x : out.positions) x += d;
    return out;
  }
  MomentModel m = std::get<MomentModel>(s);
  m.mu += d;
  return m;
}

PiQfiElements pi_qfi_elements(const QuantumState& s, Index cap) {
  require_full(s);
  const Basis& b = s.basis();
  const int n = b.n_particles;
  if (b.nominal_dim() > static_cast<double>(cap)) fail(ErrorKind::DimensionCap, "state exceeds dimension cap");
  const EigenDecomposition e = EigenDecomposition::of(s);
  const CMat jz = collective_operator(Axis::Z, b, cap).matrix;
  const CMat z0 = diag(unit_weight(b, 0));
  const CMat zl = diag(unit_weight(b, n - 1));
  PiQfiElements out;
  out.f_total = qfi(e, jz);
  out.f_single = qfi(e, z0);
  const double single_other = qfi(e, zl);
  const double tol = 1e-8 * std::max(1.0, std::abs(out.f_single));
  if (std::abs(single_other - out.f_single) > tol) {
    fail(ErrorKind::InvalidInput, "spin state is not permutationally invariant");
  }
  if (n > 1) {
    const CMat z1 = diag(unit_weight(b, 1));
    out.f_pair = qfi_cross(e, z0, z1);
    const CMat zm = diag(unit_weight(b, n - 2));
    const double pair_other = qfi_cross(e, zm, zl);
    if (std::abs(pair_other - out.f_pair) > tol) {
      fail(ErrorKind::InvalidInput, "spin state is not permutationally invariant");
    }
  }
  return out;
}

QfiMatrix qfi_matrix(const QuantumState& s, const SpatialModel& spatial, Index cap) {
  require_full(s);
  const Basis& b = s.basis();
  const int n = b.n_particles;
  validate_spatial(spatial, n);
  QfiMatrix f;
  if (const auto* det = std::get_if<Deterministic>(&spatial)) {
    if (b.nominal_dim() > static_cast<double>(cap)) fail(ErrorKind::DimensionCap, "state exceeds dimension cap");
    const EigenDecomposition e = EigenDecomposition::of(s);
    const CMat jz = collective_operator(Axis::Z, b, cap).matrix;
    const CMat h1 = diag(weighted_jz(b, det->positions));
    f.f00 = qfi(e, jz);
    f.f01 = qfi_cross(e, h1, jz);
    f.f11 = qfi(e, h1);
    return f;
  }
  const auto& m = std::get<MomentModel>(spatial);
  const PiQfiElements p = pi_qfi_elements(s, cap);
  const double mu2 = m.mu * m.mu;
  f.f00 = p.f_total;
  f.f01 = m.mu * p.f_total;
  f.f11 = (m.sigma2 + mu2) * n * p.f_single + (m.eta + mu2) * n * (n - 1.0) * p.f_pair;
  return f;
}

GradientBound gradient_bound(const QfiMatrix& f) {
  GradientBound g;
  g.qfi_matrix = f;
  if (f.f00 < 1e-10) {
    g.value = f.f11;
    g.saturable = true;
  } else {
    g.value = f.f11 - f.f01 * f.f01 / f.f00;
    g.saturable = false;
  }
  if (g.value < 0.0 && g.value > -1e-10) g.value = 0.0;
  return g;
}

GradientBound gradient_bound(const QuantumState& s, const SpatialModel& spatial, Index cap) {
  return gradient_bound(qfi_matrix(s, spatial, cap));
}

double two_ensemble_bound(const QuantumState& left, double a, bool entangled_best) {
  const Basis& b = left.basis();
  if (entangled_best) {
    const double n = 2.0 * b.n_particles;
    const double j = b.spin();
    return 4.0 * a * a * n * n * j * j;
  }
  return 2.0 * a * a * qfi(left, collective_operator(Axis::Z, b));
}

QuantumState two_ensemble_best_state(int N, double j, Index cap) {
  if (N < 2 || N % 2 != 0) fail(ErrorKind::InvalidInput, "two ensembles need an even N");
  const Basis b = Basis::full(N, j);
  if (b.nominal_dim() > static_cast<double>(cap)) fail(ErrorKind::DimensionCap, "state exceeds dimension cap");
  const Index d = b.local_dim();
  Index up_down = 0;
  Index down_up = 0;
  for (int p = 0; p < N; ++p) {
    const bool left = p < N / 2;
    up_down = up_down * d + (left ? d - 1 : 0);
    down_up = down_up * d + (left ? 0 : d - 1);
  }
  CVec v = CVec::Zero(b.dim());
  v(up_down) = v(down_up) = 1.0 / std::sqrt(2.0);
  return QuantumState::from_vector(v, b);
}

Deterministic double_well(int N, double a) {
  if (N < 2 || N % 2 != 0) fail(ErrorKind::InvalidInput, "two ensembles need an even N");
  Deterministic d;
  for (int n = 0; n < N; ++n) d.positions.push_back(n < N / 2 ? -a : a);
  return d;
}

Deterministic chain(int N, double a) {
  Deterministic d;
  for (int n = 1; n <= N; ++n) d.positions.push_back(n * a);
  return d;
}

std::vector<TableRow> state_table(const MomentModel& m, int N, double j, bool numeric) {
  validate_spatial(m, N);
  const double s2 = m.sigma2;
  const double eta = m.eta;
  const double n = N;
  const bool qubits = std::abs(j - 0.5) < 1e-12;
  std::vector<TableRow> rows;
  auto add = [&](std::string name, double value, bool applicable, auto make) {
    TableRow row;
    row.state = std::move(name);
    row.closed_form = value;
    row.applicable = applicable;
    if (!applicable) row.note = "defined for spin-1/2 only";
    if (applicable && numeric) row.numeric = gradient_bound(make(), m).value;
    rows.push_back(std::move(row));
  };
  const bool singlet_ok = (static_cast<int>(std::lround(2.0 * j)) * N) % 2 == 0;
  add("singlet", (s2 - eta) * 4.0 * n * j * (j + 1.0) / 3.0, singlet_ok, [&] { return pi_singlet(N, j); });
  add("polarized", s2 * 2.0 * n * j, true,
      [&] { return polarized_state(N, j, Axis::Y, Basis::Kind::Full); });
  add("best_separable", s2 * 4.0 * n * j * j, true,
      [&] { return cat_product_state(N, j, Basis::Kind::Full); });
  const bool dicke_ok = qubits && N % 2 == 0;
  add("dicke_z", (s2 - eta) * n, dicke_ok,
      [&] { return dicke_state(N, N / 2, Axis::Z, Basis::Kind::Full); });
  add("dicke_x", (s2 - eta) * n + eta * n * (n + 2.0) / 2.0, dicke_ok,
      [&] { return dicke_state(N, N / 2, Axis::X, Basis::Kind::Full); });
  add("ghz", (s2 - eta) * n + eta * n * n, qubits, [&] { return ghz_state(N, Basis::Kind::Full); });
  return rows;
}

std::vector<TableRow> two_ensemble_table(int N, double j, double a, bool numeric) {
  if (N < 2 || N % 2 != 0) fail(ErrorKind::InvalidInput, "two ensembles need an even N");
  const int h = N / 2;
  const double n = N;
  const bool qubits = std::abs(j - 0.5) < 1e-12;
  const Deterministic wells = double_well(N, a);
  std::vector<TableRow> rows;
  auto add = [&](std::string name, double value, bool applicable, std::string note, auto make_half) {
    TableRow row;
    row.state = std::move(name);
    row.closed_form = value;
    row.applicable = applicable;
    if (!applicable) row.note = std::move(note);
    if (applicable && numeric) {
      const QuantumState half = make_half();
      row.numeric = gradient_bound(tensor_product(half, half), wells).value;
    }
    rows.push_back(std::move(row));
  };
  add("polarized_product", 2.0 * a * a * n * j, true, "",
      [&] { return polarized_state(h, j, Axis::Y, Basis::Kind::Full); });
  add("ghz_ghz", a * a * n * n / 2.0, qubits, "defined for spin-1/2 only",
      [&] { return ghz_state(h, Basis::Kind::Full); });
  add("dicke_dicke", a * a * n * (n + 4.0) / 4.0, qubits && h % 2 == 0,
      qubits ? "needs an even number of particles per ensemble" : "defined for spin-1/2 only",
      [&] { return dicke_state(h, h / 2, Axis::X, Basis::Kind::Full); });
  add("best_separable", 4.0 * a * a * n * j * j, true, "",
      [&] { return cat_product_state(h, j, Basis::Kind::Full); });
  TableRow best;
  best.state = "best_entangled";
  best.closed_form = 4.0 * a * a * n * n * j * j;
  if (numeric) best.numeric = gradient_bound(two_ensemble_best_state(N, j), wells).value;
  rows.push_back(std::move(best));
  return rows;
}

double translation_check(const QuantumState& s, const SpatialModel& spatial, double d, Index cap) {
  const double base = gradient_bound(s, spatial, cap).value;
  const double moved = gradient_bound(s, shifted(spatial, d), cap).value;
  return std::abs(moved - base);
}

std::vector<JxSquaredPoint> singlet_jx2_estimation(int N, const Deterministic& spatial,
                                                   const std::vector<double>& b1_grid, double j,
                                                   double step) {
  const QuantumState s = pi_singlet(N, j);
  const Basis& b = s.basis();
  validate_spatial(spatial, N);
  const RVec h1 = weighted_jz(b, spatial.positions);
  const CMat jx = collective_operator(Axis::X, b).matrix;
  const CMat jx2 = jx * jx;
  const CMat jx4 = jx2 * jx2;
  auto evolved = [&](double b1) {
    CVec ph(h1.size());
    for (Index i = 0; i < h1.size(); ++i) ph(i) = std::polar(1.0, -b1 * h1(i));
    return CMat(ph.asDiagonal() * s.density() * ph.conjugate().asDiagonal());
  };
  auto ev = [](const CMat& rho, const CMat& op) { return (rho.cwiseProduct(op.transpose())).sum().real(); };
  std::vector<JxSquaredPoint> out;
  for (double b1 : b1_grid) {
    const CMat r0 = evolved(b1);
    const double m2 = ev(r0, jx2);
    const double var = ev(r0, jx4) - m2 * m2;
    const double d = (ev(evolved(b1 + step), jx2) - ev(evolved(b1 - step), jx2)) / (2.0 * step);
    JxSquaredPoint p;
    p.b1 = b1;
    p.precision = var > 1e-14 ? d * d / var : 0.0;
    out.push_back(p);
  }
  return out;
}

}  // namespace metrobound
