#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace metrobound {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

namespace linalg {

double max_abs(const CMat& m);

// Hermitian within rel_tol relative to the largest absolute entry.
bool is_hermitian(const CMat& m, double rel_tol = 1e-12);

// Ascending eigenvalues of a Hermitian matrix.
RVec eigenvalues(const CMat& m);

struct Eigh {
  RVec values;  // ascending
  CMat vectors;
};
Eigh eigh(const CMat& m);

double lambda_max(const CMat& m);
double lambda_max(const RMat& m);
double lambda_max_tridiagonal(const RVec& diag, const RVec& off);
// band holds the lower triangle in LAPACK band storage, (kd + 1) x n column-major.
double lambda_max_banded(RMat band, int kd);

// exp(-i t H) for Hermitian H.
CMat unitary_exp(const CMat& h, double t);

// Linear family A(c) = sum_k c_k T_k of Hermitian matrices with a fixed sparsity
// pattern. The pattern is split into connected blocks, a diagonal phase change is
// applied when it makes every term real, and each block is routed to a diagonal,
// tridiagonal, banded or dense eigensolver for its largest eigenvalue.
class HermitianFamily {
 public:
  enum class BlockKind { Scalar, Diagonal, Tridiagonal, Banded, Dense };

  explicit HermitianFamily(std::vector<CMat> terms, double rel_tol = 1e-13);

  Index dim() const { return dim_; }
  std::size_t n_terms() const { return n_terms_; }
  bool is_real() const { return real_; }
  std::size_t n_blocks() const { return blocks_.size(); }
  BlockKind block_kind(std::size_t b) const { return blocks_[b].kind; }
  Index block_size(std::size_t b) const { return static_cast<Index>(blocks_[b].idx.size()); }

  double lambda_max(std::span<const double> coeffs) const;

  // Dense assembly in the original basis, for diagnostics.
  CMat assemble(std::span<const double> coeffs) const;

 private:
  struct Block {
    std::vector<Index> idx;
    BlockKind kind = BlockKind::Dense;
    int kd = 0;
    std::vector<RVec> diag;
    std::vector<RVec> off;
    std::vector<RMat> band;
    std::vector<RMat> rdense;
    std::vector<CMat> cdense;
  };

  double block_max(const Block& b, std::span<const double> c) const;

  Index dim_ = 0;
  std::size_t n_terms_ = 0;
  bool real_ = false;
  std::vector<CMat> terms_;
  std::vector<Block> blocks_;
};

}  // namespace linalg
}  // namespace metrobound
