#include <doctest.h>

#include <cmath>

#include "reqsim/gates.hpp"
#include "reqsim/rqc.hpp"
#include "reqsim/rng.hpp"
#include "test_util.hpp"

using namespace reqsim;
using testutil::max_abs_diff;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gate_matrix RZ basics") {
  CHECK(max_abs_diff(gate_matrix(make_rz(0, 0.0)), ComplexMatrix::Identity(2, 2)) < 1e-15);
  const ComplexMatrix rz = gate_matrix(make_rz(0, kPi / 2.0));
  CHECK(std::abs(rz(0, 0) - std::polar(1.0, -kPi / 4.0)) < 1e-15);
  CHECK(std::abs(rz(1, 1) - std::polar(1.0, kPi / 4.0)) < 1e-15);
  CHECK(std::abs(rz(0, 1)) == 0.0);
}

TEST_CASE("gate_matrix XX(pi/2) equals -i X(x)X") {
  const ComplexMatrix xx = gate_matrix(make_xx(0, 1, kPi / 2.0));
  const ComplexMatrix expected =
      Complex(0.0, -1.0) * PauliProduct("XX").matrix();
  CHECK(max_abs_diff(xx, expected) < 1e-12);
}

TEST_CASE("gate matrices are unitary") {
  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const double angle = rng.uniform(0.0, 2.0 * kPi);
    for (const Gate& g : {make_rz(0, angle), make_ry(0, angle), make_xx(0, 1, angle),
                          make_h(0), make_cnot(0, 1), make_toffoli(0, 1, 2),
                          make_cswap(0, 1, 2), make_ctrl_pauli(0, 1, 'Y')}) {
      const ComplexMatrix u = gate_matrix(g);
      CHECK(max_abs_diff(u * u.adjoint(), ComplexMatrix::Identity(u.rows(), u.cols())) < 1e-10);
    }
  }
}

TEST_CASE("decompose_cswap control clear acts as identity") {
  const std::vector<Gate> seq = decompose_cswap(0, 1, 2);
  REQUIRE(seq.size() == 3);
  const ComplexMatrix u = sequence_unitary(seq, 3);
  // Control |0> block (upper-left 4x4) must be the identity.
  CHECK(max_abs_diff(u.block(0, 0, 4, 4), ComplexMatrix::Identity(4, 4)) < 1e-12);
}

TEST_CASE("decompose_cswap swaps the targets when the control is set") {
  const ComplexMatrix u = sequence_unitary(decompose_cswap(0, 1, 2), 3);
  // |c a b> = |1 0 1> (index 5) -> |1 1 0> (index 6).
  CHECK(std::abs(u(6, 5) - 1.0) < 1e-12);
  CHECK(std::abs(u(5, 6) - 1.0) < 1e-12);
}

TEST_CASE("decompose_cswap composite equals the Fredkin matrix exactly") {
  const ComplexMatrix u = sequence_unitary(decompose_cswap(0, 1, 2), 3);
  CHECK(max_abs_diff(u, gate_matrix(make_cswap(0, 1, 2))) < 1e-10);
}

TEST_CASE("decompose_cswap rejects repeated indices") {
  CHECK_THROWS_AS(decompose_cswap(0, 0, 1), std::invalid_argument);
}

TEST_CASE("decompose_to_native matches every composite gate up to global phase") {
  const std::vector<Gate> targets = {
      make_h(0),          make_x(0),
      make_z(0),          make_cnot(0, 1),
      make_cnot(1, 0),    make_ctrl_pauli(0, 1, 'X'),
      make_ctrl_pauli(0, 1, 'Y'), make_ctrl_pauli(0, 1, 'Z'),
      make_toffoli(0, 1, 2),      make_toffoli(2, 0, 1),
      make_cswap(0, 1, 2),        make_cswap(1, 2, 0),
  };
  for (const Gate& g : targets) {
    const int width = 1 + *std::max_element(g.qubits.begin(), g.qubits.end());
    const std::vector<Gate> native = decompose_to_native(g);
    for (const Gate& n : native) {
      const bool native_kind =
          n.kind == GateKind::RZ || n.kind == GateKind::RY || n.kind == GateKind::XX;
      CHECK(native_kind);
    }
    const ComplexMatrix composite = sequence_unitary(native, width);
    const ComplexMatrix target = sequence_unitary({g}, width);
    CHECK(equal_up_to_phase(composite, target, 1e-8));
  }
}

TEST_CASE("decompose_to_native passes native gates through") {
  const Gate rz = make_rz(3, 0.7);
  const std::vector<Gate> out = decompose_to_native(rz);
  REQUIRE(out.size() == 1);
  CHECK(out[0].kind == GateKind::RZ);
  CHECK(out[0].angle == 0.7);
  CHECK(out[0].qubits == std::vector<int>{3});
}

TEST_CASE("is_clifford on rotation angles") {
  CHECK(is_clifford(make_rz(0, kPi / 2.0)));
  CHECK_FALSE(is_clifford(make_rz(0, kPi / 4.0)));
  CHECK(is_clifford(make_xx(0, 1, kPi / 4.0)));
  CHECK_FALSE(is_clifford(make_xx(0, 1, kPi / 3.0)));
  CHECK(is_clifford(make_ry(0, -kPi)));
  CHECK(is_clifford(make_h(0)));
  CHECK(is_clifford(make_cnot(0, 1)));
  CHECK(is_clifford(make_ctrl_pauli(0, 1, 'Z')));
  CHECK_FALSE(is_clifford(make_toffoli(0, 1, 2)));
  CHECK_FALSE(is_clifford(make_cswap(0, 1, 2)));
}

TEST_CASE("is_clifford is invariant under 2*pi shifts") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const double angle = rng.uniform(-10.0, 10.0);
    const int wraps = static_cast<int>(rng.uniform_below(5)) - 2;
    CHECK(is_clifford(make_rz(0, angle)) ==
          is_clifford(make_rz(0, angle + wraps * 2.0 * kPi)));
    CHECK(is_clifford(make_xx(0, 1, angle)) ==
          is_clifford(make_xx(0, 1, angle + wraps * 2.0 * kPi)));
  }
}

TEST_CASE("generate_rqc gate counts follow the ansatz") {
  const Circuit c1 = generate_rqc(4, 1, 99);
  CHECK(c1.gate_count(GateKind::XX) == 3);
  CHECK(c1.gate_count(GateKind::RZ) + c1.gate_count(GateKind::RY) == 18);
  CHECK(c1.gate_count() == 21);

  const Circuit c5 = generate_rqc(4, 5, 99);
  CHECK(c5.gate_count(GateKind::XX) == 15);
  CHECK(c5.gate_count(GateKind::RZ) + c5.gate_count(GateKind::RY) == 90);
}

TEST_CASE("generate_rqc is deterministic per seed") {
  const Circuit a = generate_rqc(4, 3, 1234);
  const Circuit b = generate_rqc(4, 3, 1234);
  const Circuit c = generate_rqc(4, 3, 1235);
  CHECK(serialize_circuit(a) == serialize_circuit(b));
  CHECK(serialize_circuit(a) != serialize_circuit(c));
}

TEST_CASE("generate_rqc output is native and well-layered") {
  const Circuit c = generate_rqc(5, 4, 7);
  c.validate();
  for (const Layer& layer : c.layers) {
    for (const Instruction& op : layer.ops) {
      const Gate& g = std::get<Gate>(op);
      const bool native =
          g.kind == GateKind::RZ || g.kind == GateKind::RY || g.kind == GateKind::XX;
      CHECK(native);
      CHECK(g.angle >= 0.0);
      CHECK(g.angle < 2.0 * kPi);
    }
  }
}

TEST_CASE("generate_rqc rejects degenerate sizes") {
  CHECK_THROWS_AS(generate_rqc(1, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_rqc(4, 0, 0), std::invalid_argument);
}

TEST_CASE("circuit serialization round-trips exactly") {
  const Circuit c = generate_rqc(4, 3, 2024);
  const std::string text = serialize_circuit(c);
  const Circuit parsed = parse_circuit(text);
  CHECK(serialize_circuit(parsed) == text);
  CHECK(parsed.width == c.width);
  CHECK(parsed.layers.size() == c.layers.size());
}

TEST_CASE("circuit serialization covers every instruction form") {
  Circuit c;
  c.width = 3;
  Layer& l0 = c.append_layer();
  l0.ops.push_back(make_rz(0, 0.25));
  l0.ops.push_back(make_xx(1, 2, -1.5));
  Layer& l1 = c.append_layer();
  l1.ops.push_back(Reset{{1, 2}});
  Layer& l2 = c.append_layer();
  l2.ops.push_back(make_cswap(0, 1, 2));
  Layer& l3 = c.append_layer();
  l3.ops.push_back(make_ctrl_pauli(0, 2, 'Y'));
  const std::string text = serialize_circuit(c);
  const Circuit parsed = parse_circuit(text);
  CHECK(serialize_circuit(parsed) == text);
  CHECK(parsed.reset_count() == 2);
  CHECK(parsed.gate_count(GateKind::CSWAP) == 1);
  CHECK(std::get<Gate>(parsed.layers[3].ops[0]).pauli == 'Y');
}

TEST_CASE("parse_circuit rejects malformed input") {
  CHECK_THROWS_AS(parse_circuit("GATE RZ 0 1.0\n"), std::invalid_argument);  // no QUBITS
  CHECK_THROWS_AS(parse_circuit("QUBITS 2\nGATE RZ 5 1.0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_circuit("QUBITS 2\nGATE WAT 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_circuit("QUBITS 2\nGATE XX 0 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_circuit("QUBITS 2\nRESET\n"), std::invalid_argument);
}

TEST_CASE("layer disjointness is enforced") {
  Circuit c;
  c.width = 2;
  Layer& l = c.append_layer();
  l.ops.push_back(make_rz(0, 0.1));
  l.ops.push_back(make_ry(0, 0.2));
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
