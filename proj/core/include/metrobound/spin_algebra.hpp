#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "metrobound/linalg.hpp"

namespace metrobound {

inline constexpr Index default_dimension_cap = 4096;

// Full: tensor basis of N spin-j particles, each particle ordered m = -j ... +j,
// last particle fastest. Symmetric: the J = Nj multiplet, ordered M = +Nj ... -Nj.
struct Basis {
  enum class Kind { Full, Symmetric };

  Kind kind = Kind::Symmetric;
  int n_particles = 1;
  int two_j = 1;

  static Basis full(int n, double j);
  static Basis symmetric(int n, double j);

  double spin() const { return 0.5 * two_j; }
  double max_total_spin() const { return 0.5 * two_j * n_particles; }
  int local_dim() const { return two_j + 1; }
  // Dimension as a double, so oversized full bases can be rejected without overflow.
  double nominal_dim() const;
  Index dim() const;

  bool operator==(const Basis& o) const {
    return kind == o.kind && n_particles == o.n_particles && two_j == o.two_j;
  }
  bool operator!=(const Basis& o) const { return !(*this == o); }
};

struct Operator {
  CMat matrix;
  Basis basis;

  Operator() = default;
  Operator(CMat m, Basis b);

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(const Operator& o) const;
  Operator scaled(double s) const;
  Operator shifted(double s) const;  // matrix + s * identity
};

class QuantumState {
 public:
  static QuantumState from_vector(CVec psi, Basis basis);
  static QuantumState from_density(CMat rho, Basis basis);

  const Basis& basis() const { return basis_; }
  const CMat& density() const { return rho_; }
  bool is_pure() const { return psi_.has_value(); }
  const CVec& vector() const;
  Index dim() const { return rho_.rows(); }

  double expect(const Operator& op) const;
  cplx expect_complex(const CMat& op) const;
  double variance(const Operator& op) const;
  double fidelity(const QuantumState& pure_target) const;

 private:
  QuantumState(Basis b, CMat rho, std::optional<CVec> psi);
  Basis basis_;
  CMat rho_;
  std::optional<CVec> psi_;
};

enum class Axis { X, Y, Z };

struct SpinTriple {
  Operator x;
  Operator y;
  Operator z;
};

// Single-particle matrices in the |m> basis ordered m = +j ... -j.
SpinTriple single_spin_matrices(double j);

Operator collective_operator(Axis axis, const Basis& basis, Index cap = default_dimension_cap);
Operator collective_operator(const Eigen::Vector3d& direction, const Basis& basis,
                             Index cap = default_dimension_cap);
SpinTriple collective_operators(const Basis& basis, Index cap = default_dimension_cap);
Operator total_spin_squared(const Basis& basis, Index cap = default_dimension_cap);
// j_axis acting on one particle (0-based) of a full basis.
Operator single_particle_operator(int particle, Axis axis, const Basis& basis,
                                  Index cap = default_dimension_cap);
Operator identity(const Basis& basis);

QuantumState mixture(const std::vector<std::pair<double, QuantumState>>& parts);
QuantumState maximally_mixed(const Basis& basis, Index cap = default_dimension_cap);
QuantumState tensor_product(const QuantumState& a, const QuantumState& b);
QuantumState rotate(const QuantumState& s, const Operator& generator, double angle);

// Spin 1/2. n counts particles in |0>, M = N/2 - n.
QuantumState dicke_state(int N, int n, Axis axis, Basis::Kind kind,
                         Index cap = default_dimension_cap);
QuantumState ghz_state(int N, Basis::Kind kind, Index cap = default_dimension_cap);
QuantumState polarized_state(int N, double j, Axis axis, Basis::Kind kind,
                             Index cap = default_dimension_cap);
// Product of (|+j> + |-j>)/sqrt(2) along z, the best separable state for J_z.
QuantumState cat_product_state(int N, double j, Basis::Kind kind,
                               Index cap = default_dimension_cap);
QuantumState pi_singlet(int N, double j, Index cap = default_dimension_cap);
// Gaussian mixture of x-Dicke states around the unpolarized one; T = 0 is the pure state.
QuantumState thermal_dicke(int N, double temperature, Basis::Kind kind = Basis::Kind::Symmetric,
                           Index cap = default_dimension_cap);

struct GroundState {
  QuantumState state;
  double energy;
  double gap;
  bool degenerate;
};
// Ground state of sign * J_x^2 - lambda * J_y for N qubits.
GroundState squeezing_ground_state(int N, double lambda, int sign,
                                   Basis::Kind kind = Basis::Kind::Symmetric,
                                   Index cap = default_dimension_cap);

// |<D_{N,m}|_z |D_{N,N/2}>_x|^2.
double dicke_overlap(int N, int m);

// Spin-coherent state exp(-i phi J_z) exp(-i theta J_y)|1...1> in the symmetric basis.
CVec coherent_state(int N, double phi, double theta);
double husimi_q(const QuantumState& state, double phi, double theta);
// Integral of Q over the sphere with a Gauss-Legendre x uniform product rule.
double husimi_integral(const QuantumState& state, int n_theta = 0, int n_phi = 0);

}  // namespace metrobound
