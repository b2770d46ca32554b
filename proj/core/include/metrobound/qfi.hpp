#pragma once

#include <vector>

#include "metrobound/spin_algebra.hpp"

namespace metrobound {

// Spectral decomposition of a density matrix, eigenvalues descending.
struct EigenDecomposition {
  RVec values;
  CMat vectors;
  double tolerance = 1e-10;

  static EigenDecomposition of(const QuantumState& state);
  double reconstruction_error(const CMat& rho) const;
};

struct QfiMatrix {
  double f00 = 0.0;
  double f01 = 0.0;
  double f11 = 0.0;

  Eigen::Matrix2d matrix() const;
  bool is_psd(double tol = 1e-10) const;
};

double qfi(const QuantumState& state, const Operator& generator);
double qfi(const EigenDecomposition& eig, const CMat& generator);

double qfi_cross(const QuantumState& state, const Operator& a, const Operator& b);
double qfi_cross(const EigenDecomposition& eig, const CMat& a, const CMat& b);

// Mean of qfi over J_x, J_y, J_z.
double avg_qfi(const QuantumState& state, Index cap = default_dimension_cap);

// Fisher information of the outcome distribution of `povm` after exp(-i theta G).
double classical_fisher(const QuantumState& state, const Operator& generator, double theta,
                        const std::vector<CMat>& povm);

// Projectors onto the eigenspaces of a Hermitian operator.
std::vector<CMat> eigen_projectors(const Operator& op, double tol = 1e-9);

double pezze_smerzi_bound(double mean_jy, double var_jx);

// Smallest k such that k-producible states can reach `qfi_value`.
int entanglement_depth(double qfi_value, int N);
// Largest qfi of k-producible states of N qubits.
double k_producible_limit(int k, int N);

double polarized_precision_cap(double mean_jy, int N);

inline double shot_noise_limit(int N, double j = 0.5) { return 4.0 * N * j * j; }
inline double heisenberg_limit(int N, double j = 0.5) { return 4.0 * N * N * j * j; }

}  // namespace metrobound
