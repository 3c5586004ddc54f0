#include <doctest.h>

#include <cmath>

#include "reqsim/clifford_mopt.hpp"
#include "reqsim/gates.hpp"
#include "reqsim/rqc.hpp"
#include "reqsim/simulator.hpp"
#include "test_util.hpp"

using namespace reqsim;

namespace {
constexpr double kPi = 3.14159265358979323846;

SubstitutionParams default_params() {
  SubstitutionParams p;
  p.sigma_width = 0.5;
  return p;
}
}  // namespace

TEST_CASE("substitution weights: near-Clifford candidate has near-zero distance") {
  // RZ(pi/2 + small) is non-Clifford; its k=1 candidate sits at distance ~0.
  const Gate g = make_rz(0, kPi / 2.0 + 1e-4);
  const WeightRow row = substitution_weights(g, default_params());
  CHECK(row.distance[1] < 1e-3);
  CHECK(row.weight[1] > 0.9999);
}

TEST_CASE("substitution weights: RZ(pi/4) is equidistant from k=0 and k=1") {
  const WeightRow row = substitution_weights(make_rz(0, kPi / 4.0), default_params());
  CHECK(row.distance[0] == doctest::Approx(row.distance[1]).epsilon(1e-12));
  CHECK(row.weight[0] == doctest::Approx(row.weight[1]).epsilon(1e-12));
}

TEST_CASE("substitution weights: frozen hand value for RZ(pi/4) against k=0") {
  const WeightRow row = substitution_weights(make_rz(0, kPi / 4.0), default_params());
  // Closed form: d = sqrt(2) |sin((alpha - k pi/2) / 2)|.
  CHECK(row.distance[0] == doctest::Approx(std::sqrt(2.0) * std::sin(kPi / 8.0)).epsilon(1e-10));
  CHECK(row.distance[0] == doctest::Approx(0.54120).epsilon(1e-4));
  CHECK(row.weight[0] == doctest::Approx(0.30985).epsilon(1e-4));
}

TEST_CASE("substitution weights match the closed forms for all native kinds") {
  Rng rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    const double angle = rng.uniform(0.0, 2.0 * kPi);
    const Gate rz = make_rz(0, angle);
    const Gate ry = make_ry(0, angle);
    const Gate xx = make_xx(0, 1, angle);
    if (!is_clifford(rz)) {
      const WeightRow row = substitution_weights(rz, default_params());
      for (int k = 0; k < 4; ++k) {
        const double d = std::sqrt(2.0) * std::abs(std::sin((angle - k * kPi / 2.0) / 2.0));
        CHECK(row.distance[k] == doctest::Approx(d).epsilon(1e-9));
      }
    }
    if (!is_clifford(ry)) {
      const WeightRow row = substitution_weights(ry, default_params());
      for (int k = 0; k < 4; ++k) {
        const double d = std::sqrt(2.0) * std::abs(std::sin((angle - k * kPi / 2.0) / 2.0));
        CHECK(row.distance[k] == doctest::Approx(d).epsilon(1e-9));
      }
    }
    if (!is_clifford(xx)) {
      const WeightRow row = substitution_weights(xx, default_params());
      for (int k = 0; k < 4; ++k) {
        const double d = std::sqrt(2.0) * std::abs(std::sin(angle - k * kPi / 4.0));
        CHECK(row.distance[k] == doctest::Approx(d).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("substitution probabilities are normalized") {
  const WeightRow row = substitution_weights(make_ry(0, 1.234), default_params());
  const auto probs = row.probabilities();
  CHECK(probs[0] + probs[1] + probs[2] + probs[3] == doctest::Approx(1.0).epsilon(1e-12));
  for (double p : probs) CHECK(p > 0.0);
}

TEST_CASE("substitution weights reject Clifford and unsupported gates") {
  CHECK_THROWS_AS(substitution_weights(make_rz(0, kPi / 2.0), default_params()),
                  std::invalid_argument);
  CHECK_THROWS_AS(substitution_weights(make_h(0), default_params()), std::invalid_argument);
}

TEST_CASE("project_to_near_clifford leaves all-Clifford circuits unchanged") {
  Circuit c;
  c.width = 2;
  Layer& l = c.append_layer();
  l.ops.push_back(make_rz(0, kPi / 2.0));
  l.ops.push_back(make_ry(1, kPi));
  Layer& l2 = c.append_layer();
  l2.ops.push_back(make_xx(0, 1, kPi / 4.0));
  const Circuit out = project_to_near_clifford(c, default_params(), 5);
  CHECK(serialize_circuit(out) == serialize_circuit(c));
}

TEST_CASE("project_to_near_clifford with a zero budget is fully Clifford") {
  SubstitutionParams params = default_params();
  params.n_nonclifford = 0;
  const Circuit rqc = generate_rqc(4, 3, 314);
  const Circuit out = project_to_near_clifford(rqc, params, 1);
  for (const Layer& layer : out.layers) {
    for (const Instruction& op : layer.ops) {
      CHECK(is_clifford(std::get<Gate>(op)));
    }
  }
}

TEST_CASE("project_to_near_clifford hits the requested non-Clifford RZ count") {
  SubstitutionParams params = default_params();
  params.n_nonclifford = 4;
  const Circuit rqc = generate_rqc(4, 5, 2718);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Circuit out = project_to_near_clifford(rqc, params, seed);
    CHECK(count_nonclifford(out, GateKind::RZ) == 4);
    CHECK(count_nonclifford(out, GateKind::RY) == 0);
    CHECK(count_nonclifford(out, GateKind::XX) == 0);
  }
}

TEST_CASE("project_to_near_clifford keeps structure and is deterministic") {
  const Circuit rqc = generate_rqc(4, 4, 99);
  SubstitutionParams params = default_params();
  params.n_nonclifford = 6;
  const Circuit a = project_to_near_clifford(rqc, params, 11);
  const Circuit b = project_to_near_clifford(rqc, params, 11);
  CHECK(serialize_circuit(a) == serialize_circuit(b));

  REQUIRE(a.layers.size() == rqc.layers.size());
  for (size_t li = 0; li < a.layers.size(); ++li) {
    REQUIRE(a.layers[li].ops.size() == rqc.layers[li].ops.size());
    for (size_t oi = 0; oi < a.layers[li].ops.size(); ++oi) {
      const Gate& ga = std::get<Gate>(a.layers[li].ops[oi]);
      const Gate& gr = std::get<Gate>(rqc.layers[li].ops[oi]);
      CHECK(ga.kind == gr.kind);
      CHECK(ga.qubits == gr.qubits);
    }
  }

  // A budget above the available count changes no RZ gate.
  params.n_nonclifford = 10000;
  const Circuit c = project_to_near_clifford(rqc, params, 11);
  CHECK(count_nonclifford(c, GateKind::RZ) == count_nonclifford(rqc, GateKind::RZ));
  CHECK(count_nonclifford(c, GateKind::RY) == 0);
  CHECK(count_nonclifford(c, GateKind::XX) == 0);
}

TEST_CASE("project_to_near_clifford rejects non-native circuits") {
  Circuit c;
  c.width = 2;
  c.append(make_cnot(0, 1));
  CHECK_THROWS_AS(project_to_near_clifford(c, default_params(), 0), std::invalid_argument);
}

TEST_CASE("estimate_m_opt returns the smallest M under noiseless ties") {
  const Circuit prep = generate_rqc(2, 1, 5);
  SubstitutionParams params = default_params();
  params.samples_per_circuit = 3;
  const MoptEstimate est =
      estimate_m_opt(prep, PauliProduct::single('Z', 1, 2), NoiseModel::noiseless(),
                     {1, 2, 3, 4}, params, 17);
  CHECK_FALSE(est.degenerate);
  CHECK(est.m_opt == 1);
  for (double e : est.proxy_total_error) CHECK(e < 1e-9);
}

TEST_CASE("estimate_m_opt picks the largest M under pure state-prep noise") {
  const Circuit prep = generate_rqc(2, 2, 1);
  SubstitutionParams params = default_params();
  params.samples_per_circuit = 4;
  NoiseModel noise = NoiseModel::global_depolarizing(0.05);
  const MoptEstimate est =
      estimate_m_opt(prep, PauliProduct::single('Z', 1, 2), noise, {1, 2, 3, 4}, params, 1,
                     NoiseScope::STATE_PREP_ONLY);
  CHECK_FALSE(est.degenerate);
  // Guard against the degenerate case where every proxy has an exactly-zero
  // expectation (all M would tie); this instance has a sizable signal.
  CHECK(est.proxy_total_error[0] > 0.05);
  CHECK(est.m_opt == 4);
  for (size_t i = 1; i < est.proxy_total_error.size(); ++i) {
    CHECK(est.proxy_total_error[i] <= est.proxy_total_error[i - 1] + 1e-12);
  }
}

TEST_CASE("estimate_m_opt is deterministic and parallel-stable") {
  const Circuit prep = generate_rqc(3, 2, 404);
  SubstitutionParams params = default_params();
  params.samples_per_circuit = 4;
  NoiseModel noise = NoiseModel::local_default();
  const auto serial = estimate_m_opt(prep, PauliProduct::single('Z', 1, 3), noise, {1, 2, 3},
                                     params, 7, NoiseScope::FULL, 1);
  const auto parallel = estimate_m_opt(prep, PauliProduct::single('Z', 1, 3), noise, {1, 2, 3},
                                       params, 7, NoiseScope::FULL, 2);
  CHECK(serial.m_opt == parallel.m_opt);
  for (size_t i = 0; i < serial.proxy_total_error.size(); ++i) {
    CHECK(serial.proxy_total_error[i] == parallel.proxy_total_error[i]);
  }
}

TEST_CASE("estimate_m_opt validates its inputs") {
  const Circuit prep = generate_rqc(2, 1, 1);
  CHECK_THROWS_AS(estimate_m_opt(prep, PauliProduct::single('Z', 1, 2),
                                 NoiseModel::noiseless(), {}, default_params(), 0),
                  std::invalid_argument);
}
