#include "metrobound/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "metrobound/error.hpp"

namespace metrobound::linalg {

double max_abs(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(max_abs(m), 1e-300);
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

RVec eigenvalues(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigh eigh(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  return {es.eigenvalues(), es.eigenvectors()};
}

double lambda_max(const RMat& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  if (n == 0) return -std::numeric_limits<double>::infinity();
  if (n == 1) return m(0, 0);
  RMat a = m;
  lapack_int found = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  double z[1];
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, a.data(), n, 0.0, 0.0, n, n,
                     0.0, &found, w.data(), z, 1, isuppz.data());
  if (info != 0 || found != 1) return eigenvalues(m.cast<cplx>()).maxCoeff();
  return w[0];
}

double lambda_max(const CMat& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  if (n == 0) return -std::numeric_limits<double>::infinity();
  if (n == 1) return m(0, 0).real();
  CMat a = m;
  lapack_int found = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  lapack_complex_double z[1];
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'N', 'I', 'L', n, reinterpret_cast<lapack_complex_double*>(a.data()),
      n, 0.0, 0.0, n, n, 0.0, &found, w.data(), z, 1, isuppz.data());
  if (info != 0 || found != 1) return eigenvalues(m).maxCoeff();
  return w[0];
}

double lambda_max_tridiagonal(const RVec& diag, const RVec& off) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  if (n == 0) return -std::numeric_limits<double>::infinity();
  if (n == 1) return diag(0);
  RVec d = diag;
  RVec e = off;
  lapack_int m = 0;
  lapack_int nsplit = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> iblock(static_cast<std::size_t>(n));
  std::vector<lapack_int> isplit(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, n, n, 0.0, d.data(), e.data(),
                                         &m, &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0 || m < 1) {
    RMat t = RMat::Zero(n, n);
    t.diagonal() = diag;
    for (lapack_int i = 0; i + 1 < n; ++i) t(i + 1, i) = t(i, i + 1) = off(i);
    return lambda_max(t);
  }
  return w[static_cast<std::size_t>(m) - 1];
}

double lambda_max_banded(RMat band, int kd) {
  const lapack_int n = static_cast<lapack_int>(band.cols());
  if (n == 0) return -std::numeric_limits<double>::infinity();
  if (n == 1) return band(0, 0);
  lapack_int found = 0;
  std::vector<double> w(static_cast<std::size_t>(n));
  double q[1];
  double z[1];
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, kd, band.data(), kd + 1, q, 1, 0.0,
                     0.0, n, n, 0.0, &found, w.data(), z, 1, ifail.data());
  if (info != 0 || found != 1) {
    fail(ErrorKind::InvalidInput, "banded eigensolver failed");
  }
  return w[0];
}

CMat unitary_exp(const CMat& h, double t) {
  const Eigh e = eigh(h);
  CVec phases(e.values.size());
  for (Index i = 0; i < e.values.size(); ++i) phases(i) = std::exp(cplx(0.0, -t * e.values(i)));
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

namespace {

constexpr Index dense_cutoff = 24;

}  // namespace

HermitianFamily::HermitianFamily(std::vector<CMat> terms, double rel_tol)
    : terms_(std::move(terms)) {
  if (terms_.empty()) fail(ErrorKind::InvalidInput, "empty operator family");
  n_terms_ = terms_.size();
  dim_ = terms_.front().rows();
  double scale = 0.0;
  for (const auto& t : terms_) {
    if (t.rows() != dim_ || t.cols() != dim_) {
      fail(ErrorKind::InvalidInput, "operator family members differ in dimension");
    }
    scale = std::max(scale, max_abs(t));
  }
  const double tol = rel_tol * std::max(scale, 1e-300);

  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(dim_));
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> pattern =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(dim_, dim_, false);
  for (const auto& t : terms_) {
    for (Index j = 0; j < dim_; ++j) {
      for (Index i = 0; i < dim_; ++i) {
        if (i != j && std::abs(t(i, j)) > tol && !pattern(i, j)) {
          pattern(i, j) = pattern(j, i) = true;
          adj[static_cast<std::size_t>(i)].push_back(j);
          adj[static_cast<std::size_t>(j)].push_back(i);
        }
      }
    }
  }

  // Phase propagation along a spanning forest; accepted only if every term turns real.
  std::vector<double> phase(static_cast<std::size_t>(dim_), 0.0);
  std::vector<int> comp(static_cast<std::size_t>(dim_), -1);
  int n_comp = 0;
  for (Index s = 0; s < dim_; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<Index> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = n_comp;
    while (!q.empty()) {
      const Index i = q.front();
      q.pop();
      for (Index j : adj[static_cast<std::size_t>(i)]) {
        if (comp[static_cast<std::size_t>(j)] >= 0) continue;
        comp[static_cast<std::size_t>(j)] = n_comp;
        cplx entry = 0.0;
        for (const auto& t : terms_) {
          if (std::abs(t(i, j)) > tol) {
            entry = t(i, j);
            break;
          }
        }
        phase[static_cast<std::size_t>(j)] = phase[static_cast<std::size_t>(i)] - std::arg(entry);
        q.push(j);
      }
    }
    ++n_comp;
  }
  CVec d(dim_);
  for (Index i = 0; i < dim_; ++i) d(i) = std::polar(1.0, phase[static_cast<std::size_t>(i)]);
  std::vector<CMat> rotated;
  rotated.reserve(n_terms_);
  real_ = true;
  for (const auto& t : terms_) {
    CMat r = d.conjugate().asDiagonal() * t * d.asDiagonal();
    if (r.imag().cwiseAbs().maxCoeff() > 1e3 * tol) real_ = false;
    rotated.push_back(std::move(r));
  }
  if (real_) {
    for (auto& r : rotated) r = r.real().cast<cplx>();
  } else {
    rotated = terms_;
  }

  std::vector<std::vector<Index>> members(static_cast<std::size_t>(n_comp));
  for (Index i = 0; i < dim_; ++i) members[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])].push_back(i);

  for (auto& idx : members) {
    Block b;
    b.idx = std::move(idx);
    const Index n = static_cast<Index>(b.idx.size());
    int kd = 0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (pattern(b.idx[static_cast<std::size_t>(p)], b.idx[static_cast<std::size_t>(q)])) {
          kd = std::max(kd, static_cast<int>(q - p));
        }
      }
    }
    b.kd = kd;
    if (n == 1) {
      b.kind = BlockKind::Scalar;
    } else if (!real_) {
      b.kind = BlockKind::Dense;
    } else if (kd == 0) {
      b.kind = BlockKind::Diagonal;
    } else if (kd == 1) {
      b.kind = BlockKind::Tridiagonal;
    } else if (n > dense_cutoff && 4 * kd <= n) {
      b.kind = BlockKind::Banded;
    } else {
      b.kind = BlockKind::Dense;
    }
    for (const auto& r : rotated) {
      auto at = [&](Index p, Index q) {
        return r(b.idx[static_cast<std::size_t>(p)], b.idx[static_cast<std::size_t>(q)]);
      };
      switch (b.kind) {
        case BlockKind::Scalar:
        case BlockKind::Diagonal:
        case BlockKind::Tridiagonal: {
          RVec dg(n);
          RVec of(std::max<Index>(n - 1, 0));
          for (Index p = 0; p < n; ++p) dg(p) = at(p, p).real();
          for (Index p = 0; p + 1 < n; ++p) of(p) = at(p + 1, p).real();
          b.diag.push_back(std::move(dg));
          b.off.push_back(std::move(of));
          break;
        }
        case BlockKind::Banded: {
          RMat band = RMat::Zero(kd + 1, n);
          for (Index q = 0; q < n; ++q) {
            for (Index k = 0; k <= kd && q + k < n; ++k) band(k, q) = at(q + k, q).real();
          }
          b.band.push_back(std::move(band));
          break;
        }
        case BlockKind::Dense: {
          CMat sub(n, n);
          for (Index q = 0; q < n; ++q) {
            for (Index p = 0; p < n; ++p) sub(p, q) = at(p, q);
          }
          if (real_) {
            b.rdense.push_back(sub.real());
          } else {
            b.cdense.push_back(std::move(sub));
          }
          break;
        }
      }
    }
    blocks_.push_back(std::move(b));
  }
}

double HermitianFamily::block_max(const Block& b, std::span<const double> c) const {
  switch (b.kind) {
    case BlockKind::Scalar: {
      double v = 0.0;
      for (std::size_t k = 0; k < n_terms_; ++k) v += c[k] * b.diag[k](0);
      return v;
    }
    case BlockKind::Diagonal: {
      RVec v = RVec::Zero(b.diag.front().size());
      for (std::size_t k = 0; k < n_terms_; ++k) v += c[k] * b.diag[k];
      return v.maxCoeff();
    }
    case BlockKind::Tridiagonal: {
      RVec dg = RVec::Zero(b.diag.front().size());
      RVec of = RVec::Zero(b.off.front().size());
      for (std::size_t k = 0; k < n_terms_; ++k) {
        if (c[k] == 0.0) continue;
        dg += c[k] * b.diag[k];
        of += c[k] * b.off[k];
      }
      return lambda_max_tridiagonal(dg, of);
    }
    case BlockKind::Banded: {
      RMat band = RMat::Zero(b.band.front().rows(), b.band.front().cols());
      for (std::size_t k = 0; k < n_terms_; ++k) {
        if (c[k] != 0.0) band += c[k] * b.band[k];
      }
      return lambda_max_banded(std::move(band), b.kd);
    }
    case BlockKind::Dense: {
      if (real_) {
        RMat m = RMat::Zero(b.rdense.front().rows(), b.rdense.front().cols());
        for (std::size_t k = 0; k < n_terms_; ++k) {
          if (c[k] != 0.0) m += c[k] * b.rdense[k];
        }
        return linalg::lambda_max(m);
      }
      CMat m = CMat::Zero(b.cdense.front().rows(), b.cdense.front().cols());
      for (std::size_t k = 0; k < n_terms_; ++k) {
        if (c[k] != 0.0) m += c[k] * b.cdense[k];
      }
      return linalg::lambda_max(m);
    }
  }
  return -std::numeric_limits<double>::infinity();
}

double HermitianFamily::lambda_max(std::span<const double> coeffs) const {
  if (coeffs.size() != n_terms_) fail(ErrorKind::InvalidInput, "coefficient count mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& b : blocks_) best = std::max(best, block_max(b, coeffs));
  return best;
}

CMat HermitianFamily::assemble(std::span<const double> coeffs) const {
  CMat m = CMat::Zero(dim_, dim_);
  for (std::size_t k = 0; k < n_terms_; ++k) m += coeffs[k] * terms_[k];
  return m;
}

}  // namespace metrobound::linalg
