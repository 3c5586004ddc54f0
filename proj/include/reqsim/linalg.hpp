#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace reqsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Dense density matrices are capped at this register size; statevectors may go
// further since they only need 2^N amplitudes.
inline constexpr int kMaxDensityQubits = 13;
inline constexpr int kMaxStateQubits = 24;

// Numerical tolerances used by validation throughout the project.
inline constexpr double kTraceTol = 1e-8;
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kDegeneracyTol = 1e-12;

// Convention, fixed project-wide: qubit 0 is the most significant bit of a
// computational-basis index, i.e. the leftmost Kronecker factor.

// Number of qubits for a 2^n dimension; throws std::invalid_argument if the
// dimension is not a power of two or exceeds the supported range.
int qubit_count_for_dim(Eigen::Index dim, int max_qubits = kMaxStateQubits);

// Kronecker product with qubit 0 as the leftmost factor.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Partial trace keeping the listed qubits (ascending original order).
ComplexMatrix partial_trace(const ComplexMatrix& rho, int num_qubits,
                            const std::vector<int>& keep);

// M-fold matrix product by binary exponentiation; rejects m < 1. The result is
// re-symmetrized so Hermitian inputs stay Hermitian to machine precision.
ComplexMatrix matrix_power(const ComplexMatrix& rho, int m);

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // sorted descending
  ComplexMatrix eigenvectors;       // orthonormal columns, same order
  // Set when the two largest eigenvalues differ by at most kDegeneracyTol.
  // Consumers that single out the dominant eigenvector must surface this
  // instead of silently picking one of the degenerate vectors.
  bool degenerate_leading = false;

  ComplexMatrix reconstruct() const;
};

// Eigendecomposition of a Hermitian matrix (deviation above kHermitianTol is
// rejected), eigenvalues in descending order.
SpectralDecomposition spectral_decompose(const ComplexMatrix& rho);

// Tensor product of single-qubit Pauli operators, one letter per qubit.
class PauliProduct {
 public:
  PauliProduct() = default;
  explicit PauliProduct(std::string letters);
  // Single non-identity letter on `qubit` of an n-qubit register.
  static PauliProduct single(char letter, int qubit, int num_qubits);
  static PauliProduct identity(int num_qubits);

  int num_qubits() const { return static_cast<int>(letters_.size()); }
  char letter(int qubit) const { return letters_.at(qubit); }
  const std::string& letters() const { return letters_; }
  bool is_identity() const;

  // Action on a basis index: P|index> = phase * |image(index)>.
  struct BasisAction {
    Eigen::Index image;
    Complex phase;
  };
  BasisAction apply_to_basis(Eigen::Index index) const;

  ComplexMatrix matrix() const;

 private:
  std::string letters_;
};

// Tr[X rho], checked real within kHermitianTol and clamped to [-1, 1].
double pauli_expectation(const PauliProduct& x, const ComplexMatrix& rho);

// <psi|X|psi> for a unit vector.
double pauli_expectation(const PauliProduct& x, const ComplexVector& psi);

// Validation helpers for density-matrix invariants.
double hermiticity_deviation(const ComplexMatrix& m);
double min_eigenvalue(const ComplexMatrix& m);

}  // namespace reqsim
