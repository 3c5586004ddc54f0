#include "reqsim/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reqsim/kernels.hpp"

namespace reqsim {

namespace {

ComplexMatrix pauli_matrix_1q(char letter) {
  ComplexMatrix m(2, 2);
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad Pauli letter");
  }
  return m;
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

double KrausChannel::completeness_deviation() const {
  if (ops.empty()) return 1.0;
  const Eigen::Index d = ops.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& k : ops) sum += k.adjoint() * k;
  return (sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

void KrausChannel::validate() const {
  if (ops.empty()) throw std::invalid_argument("Kraus channel needs at least one operator");
  const Eigen::Index d = Eigen::Index{1} << arity;
  for (const ComplexMatrix& k : ops) {
    if (k.rows() != d || k.cols() != d) {
      throw std::invalid_argument("Kraus operator dimension does not match arity");
    }
  }
  if (completeness_deviation() > 1e-9) {
    throw std::invalid_argument("Kraus channel violates completeness");
  }
}

KrausChannel KrausChannel::identity(int arity) {
  const Eigen::Index d = Eigen::Index{1} << arity;
  return {{ComplexMatrix::Identity(d, d)}, arity};
}

KrausChannel KrausChannel::bit_flip(double p) {
  check_probability(p, "bit-flip probability");
  return {{std::sqrt(1.0 - p) * pauli_matrix_1q('I'), std::sqrt(p) * pauli_matrix_1q('X')}, 1};
}

KrausChannel KrausChannel::dephasing(double p) {
  check_probability(p, "dephasing probability");
  return {{std::sqrt(1.0 - p) * pauli_matrix_1q('I'), std::sqrt(p) * pauli_matrix_1q('Z')}, 1};
}

// Replacement convention: with probability p the targets become maximally
// mixed, i.e. the Pauli-twirl weights are (1 - (4^k-1)/4^k p, p/4^k, ...).
KrausChannel KrausChannel::depolarizing_1q(double p) {
  check_probability(p, "depolarizing probability");
  KrausChannel ch;
  ch.arity = 1;
  ch.ops.push_back(std::sqrt(1.0 - 0.75 * p) * pauli_matrix_1q('I'));
  for (char letter : {'X', 'Y', 'Z'}) {
    ch.ops.push_back(std::sqrt(0.25 * p) * pauli_matrix_1q(letter));
  }
  return ch;
}

KrausChannel KrausChannel::depolarizing_2q(double p) {
  check_probability(p, "depolarizing probability");
  KrausChannel ch;
  ch.arity = 2;
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  for (char a : letters) {
    for (char b : letters) {
      const double w = (a == 'I' && b == 'I') ? 1.0 - 15.0 * p / 16.0 : p / 16.0;
      ch.ops.push_back(std::sqrt(w) *
                       tensor_product(pauli_matrix_1q(a), pauli_matrix_1q(b)));
    }
  }
  return ch;
}

KrausChannel KrausChannel::amplitude_damping(double gamma) {
  check_probability(gamma, "damping probability");
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return {{k0, k1}, 1};
}

const char* noise_mode_name(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::NOISELESS: return "NOISELESS";
    case NoiseMode::LOCAL: return "LOCAL";
    case NoiseMode::GLOBAL_DEPOLARIZING: return "GLOBAL_DEPOLARIZING";
  }
  throw std::invalid_argument("unknown noise mode");
}

NoiseMode noise_mode_from_name(const std::string& name) {
  if (name == "NOISELESS") return NoiseMode::NOISELESS;
  if (name == "LOCAL") return NoiseMode::LOCAL;
  if (name == "GLOBAL_DEPOLARIZING") return NoiseMode::GLOBAL_DEPOLARIZING;
  throw std::invalid_argument("unknown noise mode: " + name);
}

NoiseModel NoiseModel::noiseless() { return NoiseModel{}; }

NoiseModel NoiseModel::local_default() {
  NoiseModel n;
  n.mode = NoiseMode::LOCAL;
  n.eps2 = 1.5e-3;
  n.eps1 = n.eps2 / 5.0;
  n.idle_dephasing = 3e-5;
  return n;
}

NoiseModel NoiseModel::global_depolarizing(double delta) {
  NoiseModel n;
  n.mode = NoiseMode::GLOBAL_DEPOLARIZING;
  n.layer_depolarizing = delta;
  n.validate();
  return n;
}

void NoiseModel::validate() const {
  check_probability(eps1, "eps1");
  check_probability(eps2, "eps2");
  check_probability(idle_dephasing, "idle dephasing rate");
  check_probability(idle_depolarizing, "idle depolarizing rate");
  check_probability(reset_error, "reset error");
  check_probability(readout_flip, "readout flip probability");
  check_probability(layer_depolarizing, "layer depolarizing rate");
}

DensityMatrix apply_global_depolarizing(const DensityMatrix& rho, double delta) {
  DensityMatrix out = rho;
  apply_global_depolarizing_inplace(out.mat, delta);
  return out;
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& channel,
                          const std::vector<int>& targets) {
  channel.validate();
  if (static_cast<int>(targets.size()) != channel.arity) {
    throw std::invalid_argument("apply_kraus target count does not match channel arity");
  }
  DensityMatrix out = rho;
  out.mat.setZero();
  for (const ComplexMatrix& k : channel.ops) {
    accumulate_conjugation(rho.mat, out.mat, rho.num_qubits, targets, k);
  }
  return out;
}

DensityMatrix apply_reset(const DensityMatrix& rho, const std::vector<int>& qubits, double r) {
  DensityMatrix out = rho;
  apply_reset_inplace(out.mat, out.num_qubits, qubits, r);
  return out;
}

std::vector<IdleChannelAssignment> idling_channels_for_layer(const Layer& layer, int width,
                                                             const NoiseModel& noise) {
  std::vector<bool> busy(width, false);
  for (int q : layer.acted_qubits()) busy[q] = true;
  for (int q : layer.idle_suppressed) busy[q] = true;
  std::vector<IdleChannelAssignment> out;
  for (int q = 0; q < width; ++q) {
    if (!busy[q]) out.push_back({q, noise.idle_dephasing, noise.idle_depolarizing});
  }
  return out;
}

}  // namespace reqsim
