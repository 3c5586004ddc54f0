#pragma once

#include "reqsim/circuit.hpp"
#include "reqsim/linalg.hpp"

namespace reqsim {

// Unitary of a gate on its own operands, dimension 2^arity. The first operand
// is the most significant bit of the local basis index.
ComplexMatrix gate_matrix(const Gate& g);

// Controlled-SWAP as two CNOTs around a Toffoli; the composite equals the
// 8x8 Fredkin permutation exactly.
std::vector<Gate> decompose_cswap(int control, int a, int b);

// Rewrites a gate as a sequence of native RZ/RY/XX gates whose composite
// equals the gate up to a global phase. Native gates pass through unchanged.
std::vector<Gate> decompose_to_native(const Gate& g);

// Expands every non-native gate of the circuit in place, one native gate per
// layer inside each composite so depth stays realistic. Layer role/noise
// attributes are inherited from the original layer.
Circuit decompose_circuit_to_native(const Circuit& c);

// Clifford test: RZ/RY angles at multiples of pi/2, XX angles at multiples of
// pi/4 (mod 2*pi, tolerance 1e-9); H, X, Z, CNOT and controlled Paulis are
// Clifford; TOFFOLI and CSWAP are not.
bool is_clifford(const Gate& g);

// True when U and V agree up to a global phase: |tr(U^dag V)| = dim within tol.
bool equal_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v, double tol);

// Composite unitary of a gate sequence over `width` qubits (for tests and the
// decomposition contracts; exponential in width).
ComplexMatrix sequence_unitary(const std::vector<Gate>& gates, int width);

}  // namespace reqsim
