#pragma once

#include "reqsim/circuit.hpp"
#include "reqsim/linalg.hpp"

namespace reqsim {

// In-place update routines on dense density matrices and statevectors. These
// are the hot path of the simulator: every routine is a small number of passes
// over the 4^N (or 2^N) array with explicit bit arithmetic.
//
// Qubit q of an n-qubit register occupies bit (n - 1 - q) of a basis index.

// rho <- U rho U^dag for a single-qubit unitary on qubit q.
void apply_unitary_1q(ComplexMatrix& rho, int num_qubits, int q,
                      const Eigen::Matrix2cd& u);

// rho <- U rho U^dag for a two-qubit unitary; q0 is the most significant bit
// of the local index.
void apply_unitary_2q(ComplexMatrix& rho, int num_qubits, int q0, int q1,
                      const Eigen::Matrix4cd& u);

// General k-qubit conjugation (k <= 4); slower, used for uncommon gates.
void apply_unitary_dense(ComplexMatrix& rho, int num_qubits,
                         const std::vector<int>& qubits, const ComplexMatrix& u);

// Conjugation by a monomial unitary (one nonzero entry per column), e.g.
// permutation gates: a single cheap pass. perm/phase describe U|x> =
// phase[x] |perm[x]> in the local basis.
void apply_monomial(ComplexMatrix& rho, int num_qubits, const std::vector<int>& qubits,
                    const std::vector<Eigen::Index>& perm, const std::vector<Complex>& phase);

// rho <- K rho K^dag accumulation helper for general Kraus channels.
void accumulate_conjugation(const ComplexMatrix& rho, ComplexMatrix& out, int num_qubits,
                            const std::vector<int>& qubits, const ComplexMatrix& k);

// Depolarizing with probability p in the replacement convention: the targets
// are swapped for the maximally mixed state,
// rho <- (1-p) rho + p (I/2^k (x) Tr_targets rho).
void apply_depolarizing_1q(ComplexMatrix& rho, int num_qubits, int q, double p);
void apply_depolarizing_2q(ComplexMatrix& rho, int num_qubits, int q0, int q1, double p);

// Phase damping with probability p on every qubit in the set, fused into one
// pass: off-diagonal elements pick up a factor (1-2p) per differing qubit.
void apply_dephasing_set(ComplexMatrix& rho, int num_qubits,
                         const std::vector<int>& qubits, double p);

// rho <- (1-delta) rho + delta I / 2^N.
void apply_global_depolarizing_inplace(ComplexMatrix& rho, double delta);

// Replaces the listed qubits by the product mixture (1-r)|0><0| + r|1><1|,
// leaving the reduced state of the rest untouched.
void apply_reset_inplace(ComplexMatrix& rho, int num_qubits,
                         const std::vector<int>& qubits, double r);

// Probability that the given qubit reads 0 (sum of diagonal terms).
double measure_zero_probability(const ComplexMatrix& rho, int num_qubits, int q);

// Statevector versions.
void sv_apply_unitary(ComplexVector& psi, int num_qubits,
                      const std::vector<int>& qubits, const ComplexMatrix& u);
void sv_apply_monomial(ComplexVector& psi, int num_qubits, const std::vector<int>& qubits,
                       const std::vector<Eigen::Index>& perm, const std::vector<Complex>& phase);

// Derives the monomial form of a gate matrix; returns false when the matrix
// has more than one nonzero per column.
bool monomial_form(const ComplexMatrix& u, std::vector<Eigen::Index>& perm,
                   std::vector<Complex>& phase);

}  // namespace reqsim
