#include "reqsim/density_matrix.hpp"

#include <stdexcept>
#include <string>

namespace reqsim {

DensityMatrix DensityMatrix::zero_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxDensityQubits) {
    throw std::invalid_argument("unsupported density-matrix qubit count");
  }
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m), num_qubits);
}

DensityMatrix DensityMatrix::product_mixture(int num_qubits, double p_one) {
  if (p_one < 0.0 || p_one > 1.0) throw std::invalid_argument("mixture weight out of range");
  DensityMatrix out = zero_state(num_qubits);
  const Eigen::Index d = out.dim();
  out.mat.setZero();
  for (Eigen::Index i = 0; i < d; ++i) {
    double w = 1.0;
    for (int q = 0; q < num_qubits; ++q) {
      w *= ((i >> (num_qubits - 1 - q)) & 1) ? p_one : 1.0 - p_one;
    }
    out.mat(i, i) = w;
  }
  return out;
}

DensityMatrix DensityMatrix::from_statevector(const ComplexVector& psi) {
  const int n = qubit_count_for_dim(psi.size(), kMaxDensityQubits);
  return DensityMatrix(psi * psi.adjoint(), n);
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
  const int n = qubit_count_for_dim(m.rows(), kMaxDensityQubits);
  DensityMatrix out(std::move(m), n);
  out.check_valid("from_matrix input");
  return out;
}

void DensityMatrix::check_valid(const char* context) const {
  if (mat.rows() != mat.cols() || mat.rows() != (Eigen::Index{1} << num_qubits)) {
    throw std::runtime_error(std::string(context) + ": shape/qubit-count mismatch");
  }
  const double tr = trace_real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::runtime_error(std::string(context) + ": trace deviates from 1 by " +
                             std::to_string(tr - 1.0));
  }
  if (hermiticity_deviation(mat) > kHermitianTol) {
    throw std::runtime_error(std::string(context) + ": not Hermitian");
  }
  if (min_eigenvalue(mat) < -kPsdTol) {
    throw std::runtime_error(std::string(context) + ": negative eigenvalue");
  }
}

}  // namespace reqsim
