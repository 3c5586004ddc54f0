#pragma once

#include <cstdint>

#include "reqsim/circuit.hpp"

namespace reqsim {

// Random quantum circuit from the trapped-ion hardware-efficient ansatz. Each
// ansatz layer consists of a sub-layer of XX gates on nearest-neighbor pairs
// (0,1), (2,3), ... followed by one on (1,2), (3,4), ... (open chain). Every
// XX is preceded on both wires by a general single-qubit block
// v(alpha, beta, gamma) = RZ(alpha) RY(beta) RZ(gamma). All angles are drawn
// uniformly from [0, 2*pi); output is deterministic per seed.
Circuit generate_rqc(int num_qubits, int layers, std::uint64_t seed);

}  // namespace reqsim
