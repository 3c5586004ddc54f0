#pragma once

#include "reqsim/circuit.hpp"
#include "reqsim/density_matrix.hpp"

namespace reqsim {

// General quantum channel in Kraus form.
struct KrausChannel {
  std::vector<ComplexMatrix> ops;
  int arity = 1;

  // Largest entry of |sum K^dag K - I|.
  double completeness_deviation() const;
  void validate() const;  // throws when completeness is violated beyond 1e-9

  static KrausChannel identity(int arity);
  static KrausChannel bit_flip(double p);
  static KrausChannel dephasing(double p);
  static KrausChannel depolarizing_1q(double p);
  static KrausChannel depolarizing_2q(double p);
  static KrausChannel amplitude_damping(double gamma);
};

enum class NoiseMode { NOISELESS, LOCAL, GLOBAL_DEPOLARIZING };

const char* noise_mode_name(NoiseMode mode);
NoiseMode noise_mode_from_name(const std::string& name);

// Parameterized noise model. LOCAL applies a depolarizing channel after each
// gate (eps1 for one-qubit gates, eps2 for two-qubit ones) plus per-layer
// idling channels on untouched qubits; GLOBAL_DEPOLARIZING applies one global
// depolarizing channel per layer.
struct NoiseModel {
  NoiseMode mode = NoiseMode::NOISELESS;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double idle_dephasing = 0.0;
  double idle_depolarizing = 0.0;
  double reset_error = 0.0;
  double readout_flip = 0.0;
  double layer_depolarizing = 0.0;  // GLOBAL_DEPOLARIZING only

  static NoiseModel noiseless();
  // Trapped-ion-like defaults: two-qubit depolarizing rate in the 1e-3 range,
  // one-qubit rate a fifth of that, weak idle dephasing.
  static NoiseModel local_default();
  static NoiseModel global_depolarizing(double delta);

  bool is_noiseless() const { return mode == NoiseMode::NOISELESS; }
  void validate() const;
};

// rho -> (1-delta) rho + delta I / 2^N.
DensityMatrix apply_global_depolarizing(const DensityMatrix& rho, double delta);

// Sum_k K rho K^dag on the target qubits.
DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& channel,
                          const std::vector<int>& targets);

// Trace out the targets and replace each with (1-r)|0><0| + r|1><1|.
DensityMatrix apply_reset(const DensityMatrix& rho, const std::vector<int>& qubits, double r);

// Idling channel assignment for one layer: each listed qubit receives the
// model's idle channel(s) because no instruction of the layer touches it and
// it is not exempted by the layer's suppression mask.
struct IdleChannelAssignment {
  int qubit;
  double dephasing;
  double depolarizing;
};
std::vector<IdleChannelAssignment> idling_channels_for_layer(const Layer& layer, int width,
                                                             const NoiseModel& noise);

}  // namespace reqsim
