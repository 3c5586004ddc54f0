#include "reqsim/simulator.hpp"

#include <stdexcept>

#include "reqsim/gates.hpp"
#include "reqsim/kernels.hpp"
#include "reqsim/rng.hpp"

namespace reqsim {

namespace {

bool is_monomial_kind(GateKind kind) {
  switch (kind) {
    case GateKind::X:
    case GateKind::Z:
    case GateKind::CNOT:
    case GateKind::TOFFOLI:
    case GateKind::CSWAP:
    case GateKind::CTRL_PAULI:
      return true;
    default:
      return false;
  }
}

void apply_gate_noise(ComplexMatrix& rho, int num_qubits, const Gate& g,
                      const NoiseModel& noise) {
  const int arity = gate_arity(g.kind);
  if (arity == 1) {
    apply_depolarizing_1q(rho, num_qubits, g.qubits[0], noise.eps1);
  } else if (arity == 2) {
    apply_depolarizing_2q(rho, num_qubits, g.qubits[0], g.qubits[1], noise.eps2);
  } else {
    throw std::invalid_argument(
        "per-gate noise is undefined for 3-qubit gates; decompose to native gates first");
  }
}

void apply_layer_idling(ComplexMatrix& rho, int num_qubits, const Layer& layer,
                        const NoiseModel& noise) {
  if (noise.idle_dephasing == 0.0 && noise.idle_depolarizing == 0.0) return;
  const std::vector<IdleChannelAssignment> idle =
      idling_channels_for_layer(layer, num_qubits, noise);
  if (idle.empty()) return;
  if (noise.idle_dephasing > 0.0) {
    std::vector<int> qubits;
    qubits.reserve(idle.size());
    for (const IdleChannelAssignment& a : idle) qubits.push_back(a.qubit);
    apply_dephasing_set(rho, num_qubits, qubits, noise.idle_dephasing);
  }
  if (noise.idle_depolarizing > 0.0) {
    for (const IdleChannelAssignment& a : idle) {
      apply_depolarizing_1q(rho, num_qubits, a.qubit, a.depolarizing);
    }
  }
}

}  // namespace

void apply_gate_density(ComplexMatrix& rho, int num_qubits, const Gate& g) {
  const ComplexMatrix u = gate_matrix(g);
  if (is_monomial_kind(g.kind)) {
    std::vector<Eigen::Index> perm;
    std::vector<Complex> phase;
    if (monomial_form(u, perm, phase)) {
      apply_monomial(rho, num_qubits, g.qubits, perm, phase);
      return;
    }
  }
  apply_unitary_dense(rho, num_qubits, g.qubits, u);
}

void apply_gate_statevector(ComplexVector& psi, int num_qubits, const Gate& g) {
  const ComplexMatrix u = gate_matrix(g);
  if (is_monomial_kind(g.kind)) {
    std::vector<Eigen::Index> perm;
    std::vector<Complex> phase;
    if (monomial_form(u, perm, phase)) {
      sv_apply_monomial(psi, num_qubits, g.qubits, perm, phase);
      return;
    }
  }
  sv_apply_unitary(psi, num_qubits, g.qubits, u);
}

DensityMatrix simulate_density(const Circuit& c, const NoiseModel& noise,
                               DensityMatrix initial, const SimOptions& opts) {
  c.validate();
  noise.validate();
  if (initial.num_qubits != c.width) {
    throw std::invalid_argument("simulate_density initial state width mismatch");
  }
  DensityMatrix state = std::move(initial);
  for (const Layer& layer : c.layers) {
    const bool noisy = layer.noisy && noise.mode != NoiseMode::NOISELESS;
    for (const Instruction& op : layer.ops) {
      if (const Gate* g = std::get_if<Gate>(&op)) {
        if (noisy && noise.mode == NoiseMode::LOCAL && gate_arity(g->kind) > 2) {
          throw std::invalid_argument(
              "3-qubit gate inside a noisy LOCAL-mode layer; decompose to native gates first");
        }
        apply_gate_density(state.mat, state.num_qubits, *g);
        if (noisy && noise.mode == NoiseMode::LOCAL) {
          apply_gate_noise(state.mat, state.num_qubits, *g, noise);
        }
      } else {
        const Reset& r = std::get<Reset>(op);
        apply_reset_inplace(state.mat, state.num_qubits, r.qubits,
                            noisy ? noise.reset_error : 0.0);
      }
      if (opts.validate_steps) state.check_valid("simulate_density step");
    }
    if (noisy) {
      if (noise.mode == NoiseMode::LOCAL) {
        apply_layer_idling(state.mat, state.num_qubits, layer, noise);
      } else if (noise.mode == NoiseMode::GLOBAL_DEPOLARIZING) {
        apply_global_depolarizing_inplace(state.mat, noise.layer_depolarizing);
      }
      if (opts.validate_steps) state.check_valid("simulate_density layer noise");
    }
  }
  return state;
}

DensityMatrix simulate_density(const Circuit& c, const NoiseModel& noise,
                               const SimOptions& opts) {
  return simulate_density(c, noise, DensityMatrix::zero_state(c.width), opts);
}

ComplexVector simulate_statevector(const Circuit& c) {
  c.validate();
  if (c.width > kMaxStateQubits) {
    throw std::invalid_argument("statevector width exceeds the supported maximum");
  }
  const Eigen::Index d = Eigen::Index{1} << c.width;
  ComplexVector psi = ComplexVector::Zero(d);
  psi(0) = 1.0;
  for (const Layer& layer : c.layers) {
    for (const Instruction& op : layer.ops) {
      if (std::holds_alternative<Reset>(op)) {
        throw std::invalid_argument("statevector simulation cannot execute resets");
      }
      apply_gate_statevector(psi, c.width, std::get<Gate>(op));
    }
  }
  return psi;
}

ShotEstimate sample_binomial_estimate(double p, long shots, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability out of range");
  if (shots < 1) throw std::invalid_argument("shot count must be positive");
  Rng rng(seed);
  long count = 0;
  for (long i = 0; i < shots; ++i) {
    if (rng.bernoulli(p)) ++count;
  }
  return {static_cast<double>(count) / static_cast<double>(shots), shots, seed};
}

double readout_zero_probability(const DensityMatrix& rho, int qubit, double flip_probability) {
  const double p0 = measure_zero_probability(rho.mat, rho.num_qubits, qubit);
  return (1.0 - flip_probability) * p0 + flip_probability * (1.0 - p0);
}

}  // namespace reqsim
