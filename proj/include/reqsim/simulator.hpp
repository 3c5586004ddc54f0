#pragma once

#include <cstdint>

#include "reqsim/circuit.hpp"
#include "reqsim/density_matrix.hpp"
#include "reqsim/noise.hpp"

namespace reqsim {

struct SimOptions {
  // Check trace/Hermiticity/positivity after every instruction (slow; meant
  // for tests and debugging).
  bool validate_steps = false;
};

// Executes the circuit on a density matrix, interleaving noise according to
// the model: LOCAL applies a depolarizing channel after each gate of a noisy
// layer plus idling channels on untouched qubits at the end of the layer;
// GLOBAL_DEPOLARIZING applies one global depolarizing channel per noisy layer.
// Layers with noisy=false are always executed perfectly. In LOCAL mode,
// three-qubit gates inside noisy layers are rejected: per-gate error channels
// are only defined for the native one- and two-qubit classes, so composites
// must be decomposed first.
DensityMatrix simulate_density(const Circuit& c, const NoiseModel& noise,
                               DensityMatrix initial, const SimOptions& opts = {});
DensityMatrix simulate_density(const Circuit& c, const NoiseModel& noise,
                               const SimOptions& opts = {});

// Noiseless pure-state execution; rejects circuits containing resets.
ComplexVector simulate_statevector(const Circuit& c);

// Applies one gate to a density matrix / statevector (no noise).
void apply_gate_density(ComplexMatrix& rho, int num_qubits, const Gate& g);
void apply_gate_statevector(ComplexVector& psi, int num_qubits, const Gate& g);

struct ShotEstimate {
  double estimate = 0.0;
  long shots = 0;
  std::uint64_t seed = 0;
};

// Frequency of successes over `shots` Bernoulli(p) draws; deterministic per
// seed and unbiased.
ShotEstimate sample_binomial_estimate(double p, long shots, std::uint64_t seed);

// Probability of reading 0 on the qubit after an optional classical bit flip.
double readout_zero_probability(const DensityMatrix& rho, int qubit, double flip_probability);

}  // namespace reqsim
