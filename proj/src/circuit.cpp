#include "reqsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace reqsim {

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::RZ: return "RZ";
    case GateKind::RY: return "RY";
    case GateKind::XX: return "XX";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::CNOT: return "CNOT";
    case GateKind::TOFFOLI: return "TOFFOLI";
    case GateKind::CSWAP: return "CSWAP";
    case GateKind::CTRL_PAULI: return "CTRL_PAULI";
  }
  throw std::invalid_argument("unknown gate kind");
}

GateKind gate_kind_from_name(const std::string& name) {
  if (name == "RZ") return GateKind::RZ;
  if (name == "RY") return GateKind::RY;
  if (name == "XX") return GateKind::XX;
  if (name == "H") return GateKind::H;
  if (name == "X") return GateKind::X;
  if (name == "Z") return GateKind::Z;
  if (name == "CNOT") return GateKind::CNOT;
  if (name == "TOFFOLI") return GateKind::TOFFOLI;
  if (name == "CSWAP") return GateKind::CSWAP;
  if (name == "CTRL_PAULI") return GateKind::CTRL_PAULI;
  throw std::invalid_argument("unknown gate kind: " + name);
}

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::RZ:
    case GateKind::RY:
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
      return 1;
    case GateKind::XX:
    case GateKind::CNOT:
    case GateKind::CTRL_PAULI:
      return 2;
    case GateKind::TOFFOLI:
    case GateKind::CSWAP:
      return 3;
  }
  throw std::invalid_argument("unknown gate kind");
}

bool gate_has_angle(GateKind kind) {
  return kind == GateKind::RZ || kind == GateKind::RY || kind == GateKind::XX;
}

void Gate::validate(int width) const {
  if (static_cast<int>(qubits.size()) != gate_arity(kind)) {
    throw std::invalid_argument(std::string("gate ") + gate_kind_name(kind) +
                                " has wrong operand count");
  }
  std::set<int> seen;
  for (int q : qubits) {
    if (q < 0 || q >= width) throw std::invalid_argument("gate operand out of range");
    if (!seen.insert(q).second) throw std::invalid_argument("gate operands must be distinct");
  }
  if (gate_has_angle(kind) && !std::isfinite(angle)) {
    throw std::invalid_argument("gate angle must be finite");
  }
  if (kind == GateKind::CTRL_PAULI && pauli != 'X' && pauli != 'Y' && pauli != 'Z') {
    throw std::invalid_argument("CTRL_PAULI letter must be X, Y or Z");
  }
}

Gate make_rz(int q, double angle) { return Gate{GateKind::RZ, {q}, angle, 'Z'}; }
Gate make_ry(int q, double angle) { return Gate{GateKind::RY, {q}, angle, 'Z'}; }
Gate make_xx(int a, int b, double angle) { return Gate{GateKind::XX, {a, b}, angle, 'Z'}; }
Gate make_h(int q) { return Gate{GateKind::H, {q}, 0.0, 'Z'}; }
Gate make_x(int q) { return Gate{GateKind::X, {q}, 0.0, 'Z'}; }
Gate make_z(int q) { return Gate{GateKind::Z, {q}, 0.0, 'Z'}; }
Gate make_cnot(int control, int target) { return Gate{GateKind::CNOT, {control, target}, 0.0, 'Z'}; }
Gate make_toffoli(int c0, int c1, int target) {
  return Gate{GateKind::TOFFOLI, {c0, c1, target}, 0.0, 'Z'};
}
Gate make_cswap(int control, int a, int b) {
  return Gate{GateKind::CSWAP, {control, a, b}, 0.0, 'Z'};
}
Gate make_ctrl_pauli(int control, int target, char pauli) {
  return Gate{GateKind::CTRL_PAULI, {control, target}, 0.0, pauli};
}

std::vector<int> Layer::acted_qubits() const {
  std::vector<int> acted;
  for (const Instruction& op : ops) {
    if (const Gate* g = std::get_if<Gate>(&op)) {
      acted.insert(acted.end(), g->qubits.begin(), g->qubits.end());
    } else {
      const Reset& r = std::get<Reset>(op);
      acted.insert(acted.end(), r.qubits.begin(), r.qubits.end());
    }
  }
  std::sort(acted.begin(), acted.end());
  return acted;
}

Layer& Circuit::append_layer() {
  layers.emplace_back();
  return layers.back();
}

void Circuit::append(Instruction op, LayerRole role, bool noisy) {
  Layer& layer = append_layer();
  layer.role = role;
  layer.noisy = noisy;
  layer.ops.push_back(std::move(op));
}

int Circuit::gate_count() const {
  int count = 0;
  for (const Layer& layer : layers) {
    for (const Instruction& op : layer.ops) {
      if (std::holds_alternative<Gate>(op)) ++count;
    }
  }
  return count;
}

int Circuit::gate_count(GateKind kind) const {
  int count = 0;
  for (const Layer& layer : layers) {
    for (const Instruction& op : layer.ops) {
      if (const Gate* g = std::get_if<Gate>(&op)) {
        if (g->kind == kind) ++count;
      }
    }
  }
  return count;
}

int Circuit::reset_count() const {
  int count = 0;
  for (const Layer& layer : layers) {
    for (const Instruction& op : layer.ops) {
      if (const Reset* r = std::get_if<Reset>(&op)) {
        count += static_cast<int>(r->qubits.size());
      }
    }
  }
  return count;
}

void Circuit::validate() const {
  if (width < 1) throw std::invalid_argument("circuit width must be positive");
  for (const Layer& layer : layers) {
    std::set<int> acted;
    for (const Instruction& op : layer.ops) {
      if (const Gate* g = std::get_if<Gate>(&op)) {
        g->validate(width);
        for (int q : g->qubits) {
          if (!acted.insert(q).second) {
            throw std::invalid_argument("layer gates must act on disjoint qubits");
          }
        }
      } else {
        const Reset& r = std::get<Reset>(op);
        if (r.qubits.empty()) throw std::invalid_argument("reset needs at least one target");
        for (int q : r.qubits) {
          if (q < 0 || q >= width) throw std::invalid_argument("reset target out of range");
          if (!acted.insert(q).second) {
            throw std::invalid_argument("layer instructions must act on disjoint qubits");
          }
        }
      }
    }
    for (int q : layer.idle_suppressed) {
      if (q < 0 || q >= width) throw std::invalid_argument("idle-suppressed qubit out of range");
    }
  }
}

void Circuit::extend(const Circuit& other) {
  if (other.width != width) throw std::invalid_argument("extend expects matching widths");
  layers.insert(layers.end(), other.layers.begin(), other.layers.end());
}

namespace {

std::string format_angle(double angle) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", angle);
  return buf;
}

}  // namespace

std::string serialize_circuit(const Circuit& c) {
  std::ostringstream out;
  out << "QUBITS " << c.width << "\n";
  for (size_t li = 0; li < c.layers.size(); ++li) {
    if (li > 0) out << "BARRIER\n";
    for (const Instruction& op : c.layers[li].ops) {
      if (const Gate* g = std::get_if<Gate>(&op)) {
        out << "GATE " << gate_kind_name(g->kind);
        for (int q : g->qubits) out << ' ' << q;
        if (gate_has_angle(g->kind)) out << ' ' << format_angle(g->angle);
        if (g->kind == GateKind::CTRL_PAULI) out << ' ' << g->pauli;
        out << "\n";
      } else {
        const Reset& r = std::get<Reset>(op);
        out << "RESET";
        for (int q : r.qubits) out << ' ' << q;
        out << "\n";
      }
    }
  }
  return out.str();
}

Circuit parse_circuit(const std::string& text) {
  Circuit c;
  bool saw_width = false;
  bool layer_open = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("circuit parse error at line " + std::to_string(line_no) +
                                  ": " + why);
    };
    if (tok == "QUBITS") {
      if (saw_width) fail("duplicate QUBITS line");
      if (!(ls >> c.width) || c.width < 1) fail("invalid qubit count");
      saw_width = true;
      continue;
    }
    if (!saw_width) fail("QUBITS line must come first");
    if (tok == "BARRIER") {
      // A barrier closes the current layer; an empty layer is preserved so
      // serialization round-trips.
      if (!layer_open) c.append_layer();
      layer_open = false;
      continue;
    }
    if (!layer_open) {
      c.append_layer();
      layer_open = true;
    }
    if (tok == "GATE") {
      std::string name;
      if (!(ls >> name)) fail("missing gate kind");
      Gate g;
      g.kind = gate_kind_from_name(name);
      g.qubits.resize(gate_arity(g.kind));
      for (int& q : g.qubits) {
        if (!(ls >> q)) fail("missing gate operand");
      }
      if (gate_has_angle(g.kind)) {
        if (!(ls >> g.angle)) fail("missing gate angle");
      }
      if (g.kind == GateKind::CTRL_PAULI) {
        std::string p;
        if (!(ls >> p) || p.size() != 1) fail("missing controlled-Pauli letter");
        g.pauli = p[0];
      }
      std::string extra;
      if (ls >> extra) fail("trailing tokens after gate");
      c.layers.back().ops.push_back(g);
    } else if (tok == "RESET") {
      Reset r;
      int q;
      while (ls >> q) r.qubits.push_back(q);
      if (r.qubits.empty()) fail("reset needs at least one target");
      c.layers.back().ops.push_back(r);
    } else {
      fail("unknown directive: " + tok);
    }
  }
  if (!saw_width) throw std::invalid_argument("circuit text has no QUBITS line");
  c.validate();
  return c;
}

}  // namespace reqsim
