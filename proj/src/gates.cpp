#include "reqsim/gates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reqsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCliffordAngleTol = 1e-9;

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix rz_matrix(double angle) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -angle / 2.0);
  m(1, 1) = std::polar(1.0, angle / 2.0);
  return m;
}

ComplexMatrix ry_matrix(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  ComplexMatrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

ComplexMatrix xx_matrix(double angle) {
  // exp(-i * angle * X(x)X) = cos(angle) I - i sin(angle) X(x)X
  ComplexMatrix xx = tensor_product(pauli_x(), pauli_x());
  return std::cos(angle) * ComplexMatrix::Identity(4, 4) -
         Complex(0.0, std::sin(angle)) * xx;
}

ComplexMatrix h_matrix() {
  ComplexMatrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

ComplexMatrix single_pauli(char letter) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (letter) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("controlled-Pauli letter must be X, Y or Z");
  }
  return m;
}

// Block-diagonal controlled gate: identity on control=0, u on control=1.
ComplexMatrix controlled(const ComplexMatrix& u) {
  const Eigen::Index d = u.rows();
  ComplexMatrix m = ComplexMatrix::Identity(2 * d, 2 * d);
  m.block(d, d, d, d) = u;
  return m;
}

bool angle_is_multiple_of(double angle, double unit) {
  return std::abs(std::remainder(angle, unit)) <= kCliffordAngleTol;
}

}  // namespace

ComplexMatrix gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::RZ: return rz_matrix(g.angle);
    case GateKind::RY: return ry_matrix(g.angle);
    case GateKind::XX: return xx_matrix(g.angle);
    case GateKind::H: return h_matrix();
    case GateKind::X: return single_pauli('X');
    case GateKind::Z: return single_pauli('Z');
    case GateKind::CNOT: return controlled(single_pauli('X'));
    case GateKind::TOFFOLI: return controlled(controlled(single_pauli('X')));
    case GateKind::CSWAP: {
      ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
      swap(0, 0) = swap(3, 3) = 1.0;
      swap(1, 2) = swap(2, 1) = 1.0;
      return controlled(swap);
    }
    case GateKind::CTRL_PAULI: return controlled(single_pauli(g.pauli));
  }
  throw std::invalid_argument("unknown gate kind");
}

std::vector<Gate> decompose_cswap(int control, int a, int b) {
  if (control == a || control == b || a == b) {
    throw std::invalid_argument("decompose_cswap needs distinct indices");
  }
  return {make_cnot(b, a), make_toffoli(control, a, b), make_cnot(b, a)};
}

namespace {

// exp(-i phi Z(x)X) realized by conjugating the native XX with RY on the
// control wire: RY(pi/2) X RY(-pi/2) = -Z.
void emit_zx(std::vector<Gate>& out, int c, int t, double phi) {
  out.push_back(make_ry(c, -kPi / 2.0));
  out.push_back(make_xx(c, t, -phi));
  out.push_back(make_ry(c, kPi / 2.0));
}

// RX(theta) = RZ(-pi/2) RY(theta) RZ(pi/2) as an operator product.
void emit_rx(std::vector<Gate>& out, int q, double theta) {
  out.push_back(make_rz(q, kPi / 2.0));
  out.push_back(make_ry(q, theta));
  out.push_back(make_rz(q, -kPi / 2.0));
}

// Controlled RX(theta) up to the missing control phase:
// exp(-i theta/2 |1><1| (x) X) = [I (x) RX(theta/2)] . exp(+i theta/4 Z(x)X).
void emit_ctrl_rx(std::vector<Gate>& out, int c, int t, double theta) {
  emit_zx(out, c, t, -theta / 4.0);
  emit_rx(out, t, theta / 2.0);
}

// Exact controlled-RX(theta) with the control phase diag(1, e^{i theta/4})
// restored, i.e. |0><0| (x) I + |1><1| (x) [e^{i theta/4} RX(theta)]. With
// theta = pi this is CNOT up to a global phase; theta = pi/2 gives the
// controlled square root of X used by the Toffoli construction.
void emit_ctrl_v(std::vector<Gate>& out, int c, int t, double theta) {
  emit_ctrl_rx(out, c, t, theta);
  out.push_back(make_rz(c, theta / 2.0));
}

void emit_cnot(std::vector<Gate>& out, int c, int t) { emit_ctrl_v(out, c, t, kPi); }

void emit_h(std::vector<Gate>& out, int q) {
  out.push_back(make_rz(q, kPi));
  out.push_back(make_ry(q, kPi / 2.0));
}

void emit_cz(std::vector<Gate>& out, int c, int t) {
  // CZ = [RZ(pi/2) on both] . exp(+i pi/4 Z(x)Z) up to phase; the ZZ rotation
  // comes from conjugating XX(-pi/4) with RY(pi/2) on both wires.
  out.push_back(make_ry(c, -kPi / 2.0));
  out.push_back(make_ry(t, -kPi / 2.0));
  out.push_back(make_xx(c, t, -kPi / 4.0));
  out.push_back(make_ry(c, kPi / 2.0));
  out.push_back(make_ry(t, kPi / 2.0));
  out.push_back(make_rz(c, kPi / 2.0));
  out.push_back(make_rz(t, kPi / 2.0));
}

void emit_toffoli(std::vector<Gate>& out, int c0, int c1, int t) {
  // Controlled-V construction with V = sqrt(X): CV(c1,t), CNOT(c0,c1),
  // CV^dag(c1,t), CNOT(c0,c1), CV(c0,t).
  emit_ctrl_v(out, c1, t, kPi / 2.0);
  emit_cnot(out, c0, c1);
  emit_ctrl_v(out, c1, t, -kPi / 2.0);
  emit_cnot(out, c0, c1);
  emit_ctrl_v(out, c0, t, kPi / 2.0);
}

}  // namespace

std::vector<Gate> decompose_to_native(const Gate& g) {
  g.validate(1 + *std::max_element(g.qubits.begin(), g.qubits.end()));
  std::vector<Gate> out;
  switch (g.kind) {
    case GateKind::RZ:
    case GateKind::RY:
    case GateKind::XX:
      out.push_back(g);
      break;
    case GateKind::H:
      emit_h(out, g.qubits[0]);
      break;
    case GateKind::X:
      out.push_back(make_rz(g.qubits[0], kPi));
      out.push_back(make_ry(g.qubits[0], kPi));
      break;
    case GateKind::Z:
      out.push_back(make_rz(g.qubits[0], kPi));
      break;
    case GateKind::CNOT:
      emit_cnot(out, g.qubits[0], g.qubits[1]);
      break;
    case GateKind::CTRL_PAULI:
      switch (g.pauli) {
        case 'X':
          emit_cnot(out, g.qubits[0], g.qubits[1]);
          break;
        case 'Y':
          // CY = (I (x) S) CNOT (I (x) S^dag); the S phases cancel globally.
          out.push_back(make_rz(g.qubits[1], -kPi / 2.0));
          emit_cnot(out, g.qubits[0], g.qubits[1]);
          out.push_back(make_rz(g.qubits[1], kPi / 2.0));
          break;
        case 'Z':
          emit_cz(out, g.qubits[0], g.qubits[1]);
          break;
        default:
          throw std::invalid_argument("controlled-Pauli letter must be X, Y or Z");
      }
      break;
    case GateKind::TOFFOLI:
      emit_toffoli(out, g.qubits[0], g.qubits[1], g.qubits[2]);
      break;
    case GateKind::CSWAP:
      for (const Gate& piece : decompose_cswap(g.qubits[0], g.qubits[1], g.qubits[2])) {
        for (const Gate& native : decompose_to_native(piece)) out.push_back(native);
      }
      break;
  }
  return out;
}

Circuit decompose_circuit_to_native(const Circuit& c) {
  Circuit out;
  out.width = c.width;
  out.seed = c.seed;
  out.label = c.label;
  for (const Layer& layer : c.layers) {
    bool layer_is_native = true;
    for (const Instruction& op : layer.ops) {
      if (const Gate* g = std::get_if<Gate>(&op)) {
        if (g->kind != GateKind::RZ && g->kind != GateKind::RY && g->kind != GateKind::XX) {
          layer_is_native = false;
        }
      }
    }
    if (layer_is_native) {
      out.layers.push_back(layer);
      continue;
    }
    for (const Instruction& op : layer.ops) {
      if (const Gate* g = std::get_if<Gate>(&op)) {
        for (const Gate& native : decompose_to_native(*g)) {
          Layer& nl = out.append_layer();
          nl.role = layer.role;
          nl.noisy = layer.noisy;
          nl.idle_suppressed = layer.idle_suppressed;
          nl.ops.push_back(native);
        }
      } else {
        Layer& nl = out.append_layer();
        nl.role = layer.role;
        nl.noisy = layer.noisy;
        nl.idle_suppressed = layer.idle_suppressed;
        nl.ops.push_back(op);
      }
    }
  }
  return out;
}

bool is_clifford(const Gate& g) {
  switch (g.kind) {
    case GateKind::RZ:
    case GateKind::RY:
      return angle_is_multiple_of(g.angle, kPi / 2.0);
    case GateKind::XX:
      return angle_is_multiple_of(g.angle, kPi / 4.0);
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
    case GateKind::CNOT:
    case GateKind::CTRL_PAULI:
      return true;
    case GateKind::TOFFOLI:
    case GateKind::CSWAP:
      return false;
  }
  throw std::invalid_argument("unknown gate kind");
}

bool equal_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v, double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) return false;
  const Complex overlap = (u.adjoint() * v).trace();
  return std::abs(std::abs(overlap) - static_cast<double>(u.rows())) <= tol;
}

ComplexMatrix sequence_unitary(const std::vector<Gate>& gates, int width) {
  const Eigen::Index d = Eigen::Index{1} << width;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  for (const Gate& g : gates) {
    g.validate(width);
    const ComplexMatrix local = gate_matrix(g);
    // Embed: for every pair of local basis states, scatter the local entry
    // over all assignments of the untouched qubits.
    ComplexMatrix embedded = ComplexMatrix::Zero(d, d);
    const int arity = gate_arity(g.kind);
    std::vector<Eigen::Index> bit(arity);
    for (int i = 0; i < arity; ++i) bit[i] = Eigen::Index{1} << (width - 1 - g.qubits[i]);
    Eigen::Index untouched_mask = d - 1;
    for (int i = 0; i < arity; ++i) untouched_mask &= ~bit[i];
    // Enumerate base indices with all operand bits clear.
    for (Eigen::Index base = 0; base < d; ++base) {
      if ((base & untouched_mask) != base) continue;
      for (Eigen::Index r = 0; r < (Eigen::Index{1} << arity); ++r) {
        Eigen::Index row = base;
        for (int i = 0; i < arity; ++i) {
          if ((r >> (arity - 1 - i)) & 1) row |= bit[i];
        }
        for (Eigen::Index cidx = 0; cidx < (Eigen::Index{1} << arity); ++cidx) {
          Eigen::Index col = base;
          for (int i = 0; i < arity; ++i) {
            if ((cidx >> (arity - 1 - i)) & 1) col |= bit[i];
          }
          embedded(row, col) = local(r, cidx);
        }
      }
    }
    u = embedded * u;
  }
  return u;
}

}  // namespace reqsim
