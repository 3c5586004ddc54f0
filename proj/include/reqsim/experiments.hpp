#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "reqsim/clifford_mopt.hpp"
#include "reqsim/distillation.hpp"
#include "reqsim/noise.hpp"
#include "reqsim/shot_scaling.hpp"

namespace reqsim {

struct ExperimentConfig {
  std::string kind;  // suppress | compare | mopt | scaling | rqc-gen
  std::vector<int> n_values{4};
  std::vector<int> p_values{5, 15, 25, 35};
  std::vector<int> m_values{1, 2, 3, 4, 5, 6, 7, 8};
  int instances = 44;
  std::uint64_t seed = 1;
  NoiseModel noise = NoiseModel::local_default();
  char observable_pauli = 'Z';
  int observable_qubit = 1;
  NoiseScope scope = NoiseScope::FULL;  // suppress forces STATE_PREP_ONLY
  long shots = 0;                       // 0 = exact ancilla probabilities
  std::string out;
  int workers = 0;  // 0 = hardware concurrency
  SubstitutionParams substitution;
  SweepSpec sweep;

  // Parses the JSON document; unknown keys are rejected.
  static ExperimentConfig from_json_text(const std::string& text, const std::string& kind);
  void validate() const;

  PauliProduct observable(int n) const;
  // Deterministic per-instance stream.
  std::uint64_t instance_seed(int n, int p, int instance) const;
  int effective_workers() const;
};

struct ExperimentOutcome {
  // One message per failed instance (prefixed with its seed); empty on success.
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

ExperimentOutcome run_suppression(const ExperimentConfig& cfg, std::ostream& csv);
ExperimentOutcome run_compare(const ExperimentConfig& cfg, std::ostream& csv);
ExperimentOutcome run_mopt(const ExperimentConfig& cfg, std::ostream& csv);
ExperimentOutcome run_scaling(const ExperimentConfig& cfg, std::ostream& csv);
// Writes one circuit text file per (N, p, instance) into the directory `out`.
ExperimentOutcome run_rqc_gen(const ExperimentConfig& cfg);

// Runs fn(0..count-1) on the requested number of threads; results keep index
// order so downstream output is deterministic. Exceptions are captured and
// returned as messages.
std::vector<std::string> parallel_run(int count, int workers,
                                      const std::function<std::string(int)>& fn);

}  // namespace reqsim
