#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace reqsim {

// Gate set. RZ, RY and XX are the native gates of the targeted trapped-ion
// architecture; the remaining kinds exist as composites that decompose to the
// native set (see gates.hpp).
enum class GateKind { RZ, RY, XX, H, X, Z, CNOT, TOFFOLI, CSWAP, CTRL_PAULI };

const char* gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

// Number of qubit operands for a kind.
int gate_arity(GateKind kind);
bool gate_has_angle(GateKind kind);

struct Gate {
  GateKind kind = GateKind::RZ;
  // Operand order is significant: controls come first (CNOT: control, target;
  // TOFFOLI: control, control, target; CSWAP: control, a, b; CTRL_PAULI:
  // control, target). The first operand is the most significant bit of the
  // gate's local basis index.
  std::vector<int> qubits;
  double angle = 0.0;  // RZ, RY, XX only
  char pauli = 'Z';    // CTRL_PAULI only

  void validate(int width) const;
};

Gate make_rz(int q, double angle);
Gate make_ry(int q, double angle);
Gate make_xx(int a, int b, double angle);
Gate make_h(int q);
Gate make_x(int q);
Gate make_z(int q);
Gate make_cnot(int control, int target);
Gate make_toffoli(int c0, int c1, int target);
Gate make_cswap(int control, int a, int b);
Gate make_ctrl_pauli(int control, int target, char pauli);

struct Reset {
  std::vector<int> qubits;
};

using Instruction = std::variant<Gate, Reset>;

// Whether a layer belongs to state preparation or to the mitigation machinery
// wrapped around it (ancilla Hadamards, controlled blocks, resets).
enum class LayerRole { PREP, MITIGATION };

// One layer of instructions acting on pairwise-disjoint qubits. Layers are the
// unit of idling noise: every qubit in the circuit is either acted on by some
// instruction of the layer or idles through it.
struct Layer {
  std::vector<Instruction> ops;
  LayerRole role = LayerRole::PREP;
  // When false the simulator applies no noise of any kind to this layer.
  bool noisy = true;
  // Qubits exempt from idling noise in this layer (used by the width-2N+1
  // simulation of the many-register distillation circuit).
  std::vector<int> idle_suppressed;

  std::vector<int> acted_qubits() const;
};

struct Circuit {
  int width = 0;
  std::vector<Layer> layers;
  std::uint64_t seed = 0;
  std::string label;

  Layer& append_layer();
  // Appends a single-instruction layer.
  void append(Instruction op, LayerRole role = LayerRole::PREP, bool noisy = true);

  int gate_count() const;
  int gate_count(GateKind kind) const;
  int reset_count() const;

  // Checks operand ranges, arity consistency and per-layer disjointness;
  // throws std::invalid_argument on violation.
  void validate() const;

  // Appends all layers of `other` (widths must match).
  void extend(const Circuit& other);
};

// Line-oriented text format. First non-comment line is `QUBITS <n>`, then one
// instruction per line (`GATE <kind> <operands...> [angle|pauli]`,
// `RESET <q...>`), with `BARRIER` between consecutive layers. Angles are
// printed with 17 significant digits so serialization round-trips exactly.
std::string serialize_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text);

}  // namespace reqsim
