#pragma once

#include <cstdint>
#include <string>

#include "reqsim/circuit.hpp"
#include "reqsim/density_matrix.hpp"
#include "reqsim/noise.hpp"

namespace reqsim {

enum class MitigationMethod { VD, REQUEST, ORACLE };
const char* mitigation_method_name(MitigationMethod m);

// FULL: every layer is noisy. STATE_PREP_ONLY: noise acts only on the copy
// registers while their preparation circuit runs; ancilla, controlled blocks
// and resets are perfect. The latter isolates the purification effect from
// gate noise in the mitigation machinery.
enum class NoiseScope { FULL, STATE_PREP_ONLY };

enum class ControlledSigma { OBSERVABLE, IDENTITY };

struct MitigationPlan {
  Circuit prep;               // N-qubit state preparation circuit
  PauliProduct observable;    // width N
  int copies = 2;             // M
  MitigationMethod method = MitigationMethod::REQUEST;
  NoiseModel noise;
  NoiseScope noise_scope = NoiseScope::FULL;
  // Copy that receives the controlled observable; 0 means the last copy,
  // which minimizes the error under realistic noise.
  int measured_copy = 0;

  int num_state_qubits() const { return prep.width; }
  int measured() const { return measured_copy == 0 ? copies : measured_copy; }
  void validate() const;
};

// Tr[X rho^M] / Tr[rho^M]; throws when the denominator falls below 1e-300.
double trace_ratio_oracle(const DensityMatrix& rho, const PauliProduct& x, int m);

// (2 prob0 - 1) / (2 prob0_id - 1); throws on a singular denominator.
double estimate_mitigated(double prob0, double prob0_id);

struct NoiseFloor {
  double value = 0.0;
  // Leading eigenvalue degenerate: the dominant eigenvector, and with it the
  // floor, is not well defined.
  bool degenerate_leading = false;
};

// | <psi1|X|psi1> - <ideal|X|ideal> |, the irreducible mitigation error.
NoiseFloor noise_floor(const DensityMatrix& rho, const PauliProduct& x,
                       const ComplexVector& ideal);

// Many-register distillation circuit: width M*N+1, ancilla at index 0, copy i
// in qubits (i-1)*N+1 .. i*N. Hadamard test around a controlled cyclic
// derangement built from CSWAP chains between neighboring registers.
Circuit build_vd_circuit(const MitigationPlan& plan, ControlledSigma sigma);

// Two-register variant: width 2N+1 for any M. Copies 1 and 2 are prepared in
// parallel; each later copy is prepared on register B after an active reset,
// with the ancilla and register A idling through the preparation.
Circuit build_request_circuit(const MitigationPlan& plan, ControlledSigma sigma);

// Simulates the M*N+1 distillation on 2N+1 qubits by running the two-register
// circuit with idling noise suppressed on the ancilla and register A wherever
// the extra depth is an artifact of register recycling (later-copy
// preparations and resets). Requires LOCAL or NOISELESS noise.
DensityMatrix simulate_vd_equivalent(const MitigationPlan& plan, ControlledSigma sigma);

struct MitigationResult {
  std::uint64_t seed = 0;  // filled by the caller (instance seed)
  int num_qubits = 0;
  int ansatz_layers = 0;   // filled by the caller
  int copies = 1;
  MitigationMethod method = MitigationMethod::REQUEST;
  double mitigated = 0.0;
  double exact = 0.0;       // <phi|X|phi> of the ideal preparation
  double psi1_value = 0.0;  // <psi1|X|psi1> of the noisy single copy
  double oracle = 0.0;      // trace-ratio on the noisy single copy
  double prob0 = 0.0;
  double prob0_id = 0.0;
  double abs_err_exact = 0.0;
  double abs_err_psi1 = 0.0;
  bool degenerate_spectrum = false;

  static std::string csv_header();
  std::string csv_row(const std::string& method_label) const;
};

struct ShotPolicy {
  long shots = 0;  // 0 = exact ancilla probabilities
  std::uint64_t seed = 0;
};

// Runs both controlled-sigma variants, reads or samples the ancilla
// probabilities, and fills every comparison field. M=1 bypasses the circuits:
// the mitigated value is the plain noisy expectation.
MitigationResult run_mitigation(const MitigationPlan& plan, const ShotPolicy& shots = {});

// Ancilla 0-outcome probabilities (observable, identity) for the plan,
// exact up to the model's classical readout flip.
std::pair<double, double> mitigation_probabilities(const MitigationPlan& plan);

// Same quantities evaluated through the explicit circuit builders and the
// generic density simulator; slower, used to cross-check the staged executor.
std::pair<double, double> mitigation_probabilities_via_circuits(const MitigationPlan& plan);

}  // namespace reqsim
