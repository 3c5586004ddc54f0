#include "reqsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace reqsim {

int qubit_count_for_dim(Eigen::Index dim, int max_qubits) {
  if (dim < 1) throw std::invalid_argument("matrix dimension must be positive");
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d % 2 != 0) throw std::invalid_argument("dimension is not a power of two");
    d /= 2;
    ++n;
  }
  if (n > max_qubits) {
    throw std::invalid_argument("register of " + std::to_string(n) +
                                " qubits exceeds the supported maximum of " +
                                std::to_string(max_qubits));
  }
  return n;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw std::invalid_argument("tensor_product expects square factors");
  }
  qubit_count_for_dim(a.rows() * b.rows());
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int num_qubits,
                            const std::vector<int>& keep) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("partial_trace expects a square matrix");
  if (rho.rows() != (Eigen::Index{1} << num_qubits)) {
    throw std::invalid_argument("partial_trace dimension/qubit-count mismatch");
  }
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("partial_trace keep set has repeated indices");
  }
  for (int q : kept) {
    if (q < 0 || q >= num_qubits) throw std::out_of_range("partial_trace index out of range");
  }
  std::vector<int> traced;
  for (int q = 0; q < num_qubits; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());
  const Eigen::Index dk = Eigen::Index{1} << nk;
  const Eigen::Index dt = Eigen::Index{1} << nt;

  // Bit position of qubit q in an index: num_qubits - 1 - q (qubit 0 = MSB).
  auto expand = [&](Eigen::Index compact, const std::vector<int>& qubits) {
    Eigen::Index full = 0;
    for (size_t i = 0; i < qubits.size(); ++i) {
      const int bit = num_qubits - 1 - qubits[i];
      const Eigen::Index v = (compact >> (qubits.size() - 1 - i)) & 1;
      full |= v << bit;
    }
    return full;
  };

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index x = 0; x < dk; ++x) {
    const Eigen::Index xf = expand(x, kept);
    for (Eigen::Index y = 0; y < dk; ++y) {
      const Eigen::Index yf = expand(y, kept);
      Complex sum = 0.0;
      for (Eigen::Index z = 0; z < dt; ++z) {
        const Eigen::Index zf = expand(z, traced);
        sum += rho(xf | zf, yf | zf);
      }
      out(x, y) = sum;
    }
  }
  return out;
}

ComplexMatrix matrix_power(const ComplexMatrix& rho, int m) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("matrix_power expects a square matrix");
  if (m < 1) throw std::invalid_argument("matrix_power rejects M < 1");
  ComplexMatrix result = ComplexMatrix::Identity(rho.rows(), rho.cols());
  ComplexMatrix base = rho;
  int e = m;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  result = 0.5 * (result + result.adjoint().eval());
  return result;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  const Eigen::Index d = eigenvectors.rows();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(eigenvalues.size()); ++i) {
    out += eigenvalues[i] * (eigenvectors.col(i) * eigenvectors.col(i).adjoint());
  }
  return out;
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("spectral_decompose expects a square matrix");
  if (hermiticity_deviation(rho) > kHermitianTol) {
    throw std::invalid_argument("spectral_decompose expects a Hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint().eval()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed to converge");
  }
  const Eigen::Index d = rho.rows();
  SpectralDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(d, d);
  // Eigen returns ascending order; flip to descending.
  for (Eigen::Index i = 0; i < d; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()(d - 1 - i);
    out.eigenvectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  out.degenerate_leading =
      d >= 2 && (out.eigenvalues[0] - out.eigenvalues[1]) <= kDegeneracyTol;
  return out;
}

PauliProduct::PauliProduct(std::string letters) : letters_(std::move(letters)) {
  for (char c : letters_) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument("PauliProduct letters must be in {I,X,Y,Z}");
    }
  }
  if (letters_.empty()) throw std::invalid_argument("PauliProduct needs at least one qubit");
}

PauliProduct PauliProduct::single(char letter, int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) throw std::out_of_range("PauliProduct qubit out of range");
  std::string s(num_qubits, 'I');
  s[qubit] = letter;
  return PauliProduct(s);
}

PauliProduct PauliProduct::identity(int num_qubits) {
  return PauliProduct(std::string(num_qubits, 'I'));
}

bool PauliProduct::is_identity() const {
  return letters_.find_first_not_of('I') == std::string::npos;
}

PauliProduct::BasisAction PauliProduct::apply_to_basis(Eigen::Index index) const {
  const int n = num_qubits();
  Eigen::Index image = index;
  Complex phase = 1.0;
  for (int q = 0; q < n; ++q) {
    const int bit = n - 1 - q;
    const int v = static_cast<int>((index >> bit) & 1);
    switch (letters_[q]) {
      case 'I':
        break;
      case 'X':
        image ^= Eigen::Index{1} << bit;
        break;
      case 'Y':
        image ^= Eigen::Index{1} << bit;
        phase *= v ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
        break;
      case 'Z':
        if (v) phase = -phase;
        break;
    }
  }
  return {image, phase};
}

ComplexMatrix PauliProduct::matrix() const {
  const Eigen::Index d = Eigen::Index{1} << num_qubits();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const BasisAction a = apply_to_basis(j);
    m(a.image, j) = a.phase;
  }
  return m;
}

double pauli_expectation(const PauliProduct& x, const ComplexMatrix& rho) {
  const Eigen::Index d = Eigen::Index{1} << x.num_qubits();
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("pauli_expectation dimension mismatch");
  }
  Complex value = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const PauliProduct::BasisAction a = x.apply_to_basis(j);
    value += a.phase * rho(j, a.image);
  }
  if (std::abs(value.imag()) > 1e-9) {
    throw std::runtime_error("pauli_expectation produced a non-real value");
  }
  return std::clamp(value.real(), -1.0, 1.0);
}

double pauli_expectation(const PauliProduct& x, const ComplexVector& psi) {
  const Eigen::Index d = Eigen::Index{1} << x.num_qubits();
  if (psi.size() != d) throw std::invalid_argument("pauli_expectation dimension mismatch");
  Complex value = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const PauliProduct::BasisAction a = x.apply_to_basis(j);
    value += a.phase * std::conj(psi(a.image)) * psi(j);
  }
  if (std::abs(value.imag()) > 1e-9) {
    throw std::runtime_error("pauli_expectation produced a non-real value");
  }
  return std::clamp(value.real(), -1.0, 1.0);
}

double hermiticity_deviation(const ComplexMatrix& m) {
  return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint().eval()),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace reqsim
