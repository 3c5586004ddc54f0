#pragma once

#include "reqsim/linalg.hpp"

namespace reqsim {

// 2^N x 2^N Hermitian, positive semidefinite, unit-trace operator. The class
// does not revalidate on every mutation; simulators can opt into per-step
// checks (see SimOptions::validate_steps).
struct DensityMatrix {
  ComplexMatrix mat;
  int num_qubits = 0;

  DensityMatrix() = default;
  DensityMatrix(ComplexMatrix m, int n) : mat(std::move(m)), num_qubits(n) {}

  static DensityMatrix zero_state(int num_qubits);
  // Product of independent single-qubit mixtures (1-p)|0><0| + p|1><1|.
  static DensityMatrix product_mixture(int num_qubits, double p_one);
  static DensityMatrix from_statevector(const ComplexVector& psi);
  // Validates and adopts an arbitrary matrix.
  static DensityMatrix from_matrix(ComplexMatrix m);

  Eigen::Index dim() const { return mat.rows(); }
  double trace_real() const { return mat.trace().real(); }

  // Throws std::runtime_error when trace, Hermiticity or positivity deviate
  // beyond the project tolerances.
  void check_valid(const char* context = "density matrix") const;
};

}  // namespace reqsim
