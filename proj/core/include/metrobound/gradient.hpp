#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metrobound/qfi.hpp"

namespace metrobound {

// Known particle positions x_n.
struct Deterministic {
  std::vector<double> positions;
};

// Permutationally invariant ensemble described by <x_n> = mu, <x_n^2> - mu^2 = sigma2 and
// <x_n x_m> - mu^2 = eta for n != m.
struct MomentModel {
  double mu = 0.0;
  double sigma2 = 1.0;
  double eta = 0.0;
};

using SpatialModel = std::variant<Deterministic, MomentModel>;

void validate_spatial(const SpatialModel& s, int N);
SpatialModel shifted(const SpatialModel& s, double d);

struct GradientBound {
  double value = 0.0;
  bool saturable = false;
  QfiMatrix qfi_matrix;
};

QfiMatrix qfi_matrix(const QuantumState& spin_state, const SpatialModel& spatial,
                     Index cap = default_dimension_cap);
GradientBound gradient_bound(const QuantumState& spin_state, const SpatialModel& spatial,
                             Index cap = default_dimension_cap);
GradientBound gradient_bound(const QfiMatrix& f);

// Single-particle QFI sum over particles and the pair cross term, for permutationally
// invariant states; both spot-checked on two particle pairs.
struct PiQfiElements {
  double f_total = 0.0;  // qfi(rho, J_z)
  double f_single = 0.0; // qfi(rho, j_z^(n))
  double f_pair = 0.0;   // qfi_cross(rho, j_z^(n), j_z^(m)), n != m
};
PiQfiElements pi_qfi_elements(const QuantumState& spin_state, Index cap = default_dimension_cap);

// Product states |psi>_L |psi>_R with the halves at -a and +a, or the best entangled state.
double two_ensemble_bound(const QuantumState& left_state, double a, bool entangled_best);
// Best state (|+j..+j>_L |-j..-j>_R + |-j..-j>_L |+j..+j>_R) / sqrt(2) on N particles.
QuantumState two_ensemble_best_state(int N, double j, Index cap = default_dimension_cap);
// Positions -a for the first half, +a for the second half.
Deterministic double_well(int N, double a);
// Positions a, 2a, ..., N a.
Deterministic chain(int N, double a);

struct TableRow {
  std::string state;
  double closed_form = 0.0;
  std::optional<double> numeric;
  bool applicable = true;
  std::string note;
};

// Rows: singlet, polarized, best separable, Dicke_z, Dicke_x, GHZ.
std::vector<TableRow> state_table(const MomentModel& spatial, int N, double j, bool numeric = true);
// Rows: polarized product, GHZ x GHZ, Dicke x Dicke, best separable, best entangled.
std::vector<TableRow> two_ensemble_table(int N, double j, double a, bool numeric = true);

// |bound(shifted by d) - bound|.
double translation_check(const QuantumState& spin_state, const SpatialModel& spatial, double d,
                         Index cap = default_dimension_cap);

struct JxSquaredPoint {
  double b1 = 0.0;
  double precision = 0.0;
};
// Error-propagation precision of <J_x^2> for the singlet evolved by exp(-i b1 H1).
std::vector<JxSquaredPoint> singlet_jx2_estimation(int N, const Deterministic& spatial,
                                                   const std::vector<double>& b1_grid,
                                                   double j = 0.5, double step = 1e-4);

}  // namespace metrobound
