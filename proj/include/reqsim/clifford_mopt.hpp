#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "reqsim/circuit.hpp"
#include "reqsim/distillation.hpp"

namespace reqsim {

struct SubstitutionParams {
  double sigma_width = 0.5;     // Gaussian width of the replacement weights
  int n_nonclifford = 28;       // non-Clifford RZ gates kept in each proxy
  int samples_per_circuit = 10; // proxies generated per input circuit
};

// Replacement weights of one non-Clifford rotation against its four Clifford
// candidates (angles k*pi/2 for RZ/RY, k*pi/4 for XX, k = 0..3). The distance
// is the Frobenius norm of the phase-aligned difference, normalized by the
// norm of the gate; the weight is exp(-d^2 / sigma^2).
struct WeightRow {
  double distance[4] = {0, 0, 0, 0};
  double weight[4] = {0, 0, 0, 0};

  double weight_sum() const { return weight[0] + weight[1] + weight[2] + weight[3]; }
  // Normalized selection probabilities; they sum to 1.
  std::array<double, 4> probabilities() const;
};

// Throws for Clifford gates and for kinds outside {RZ, RY, XX}.
WeightRow substitution_weights(const Gate& g, const SubstitutionParams& params);

// Clifford angle of candidate k for the gate kind (k*pi/2, or k*pi/4 for XX).
double clifford_angle(GateKind kind, int k);

// Projects a native-gate circuit onto a near-Clifford one: every non-Clifford
// RY and XX is replaced by a Clifford angle drawn from its weight row; then
// non-Clifford RZ gates are replaced one at a time, drawn jointly across all
// remaining candidates, until min(n_nonclifford, initial count) remain. Gate
// count, kinds, operands and layering are untouched; deterministic per seed.
Circuit project_to_near_clifford(const Circuit& c, const SubstitutionParams& params,
                                 std::uint64_t seed);

int count_nonclifford(const Circuit& c, GateKind kind);

struct MoptEstimate {
  int m_opt = 1;
  std::vector<int> m_values;
  // Sum over proxies of |mitigated - exact| at each M.
  std::vector<double> proxy_total_error;
  int proxies_used = 0;
  // Every proxy failed to produce an estimate (degenerate denominators).
  bool degenerate = false;
};

// Chooses the copy count by mitigating classically tractable near-Clifford
// stand-ins of `prep` under the same noise and comparing against their exact
// statevector expectations; ties resolve to the smallest M.
MoptEstimate estimate_m_opt(const Circuit& prep, const PauliProduct& observable,
                            const NoiseModel& noise, const std::vector<int>& m_range,
                            const SubstitutionParams& params, std::uint64_t seed,
                            NoiseScope scope = NoiseScope::FULL, int workers = 1);

}  // namespace reqsim
