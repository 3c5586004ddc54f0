#include <doctest.h>

#include <cmath>

#include "reqsim/distillation.hpp"
#include "reqsim/gates.hpp"
#include "reqsim/rqc.hpp"
#include "reqsim/simulator.hpp"
#include "test_util.hpp"

using namespace reqsim;
using testutil::max_abs_diff;

namespace {

MitigationPlan make_plan(int n, int p, std::uint64_t seed, int copies,
                         MitigationMethod method, NoiseModel noise,
                         NoiseScope scope = NoiseScope::FULL) {
  MitigationPlan plan;
  plan.prep = generate_rqc(n, p, seed);
  plan.observable = PauliProduct::single('Z', 1, n);
  plan.copies = copies;
  plan.method = method;
  plan.noise = noise;
  plan.noise_scope = scope;
  return plan;
}

double vd_statevector_prob0(const Circuit& vd) {
  const ComplexVector psi = simulate_statevector(vd);
  double p0 = 0.0;
  const Eigen::Index half = psi.size() / 2;
  for (Eigen::Index i = 0; i < half; ++i) p0 += std::norm(psi(i));
  return p0;
}

}  // namespace

TEST_CASE("trace_ratio_oracle basics") {
  Rng rng(2);
  const DensityMatrix rho = testutil::random_density(2, rng);
  const PauliProduct x = PauliProduct::single('Z', 0, 2);
  CHECK(trace_ratio_oracle(rho, x, 1) ==
        doctest::Approx(pauli_expectation(x, rho.mat)).epsilon(1e-12));

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 0.75;
  diag(1, 1) = 0.25;
  const DensityMatrix simple(diag, 1);
  CHECK(trace_ratio_oracle(simple, PauliProduct("Z"), 2) == doctest::Approx(0.8));
  CHECK(trace_ratio_oracle(simple, PauliProduct("Z"), 64) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("estimate_mitigated arithmetic and the singular case") {
  CHECK(estimate_mitigated(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(estimate_mitigated(0.75, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(estimate_mitigated(0.3, 0.5), std::runtime_error);
}

TEST_CASE("noise_floor vanishes without noise and is positive under damping") {
  // Noiseless: rho is exactly the ideal projector.
  const Circuit prep = generate_rqc(2, 2, 6);
  const ComplexVector ideal = simulate_statevector(prep);
  const DensityMatrix pure = DensityMatrix::from_statevector(ideal);
  const NoiseFloor clean = noise_floor(pure, PauliProduct::single('Z', 1, 2), ideal);
  CHECK(clean.value < 1e-9);

  // Amplitude damping (gamma = 0.2) on |+>, observable Z. Frozen expectation
  // from the 2x2 closed form: rho = [[0.6, 0.5*sqrt(0.8)], [0.5*sqrt(0.8), 0.4]],
  // leading eigenvector expectation (tr=1, det=0.04):
  //   lambda1 = (1 + sqrt(1 - 0.16)) / 2, <psi1|Z|psi1> = (2*lambda1 - 1 = ...)
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  DensityMatrix damped = DensityMatrix::from_statevector(plus);
  damped = apply_kraus(damped, KrausChannel::amplitude_damping(0.2), {0});
  const NoiseFloor floor = noise_floor(damped, PauliProduct("Z"), plus);
  CHECK_FALSE(floor.degenerate_leading);
  // Independent 2x2 eigenvector route: for [[a, b], [b, c]] the leading
  // eigenvector satisfies tan(theta) = (lambda1 - a) / b with <Z> = cos(2 theta').
  const double a = 0.6, b = 0.5 * std::sqrt(0.8), cdiag = 0.4;
  const double lambda1 = 0.5 * (1.0 + std::sqrt((a - cdiag) * (a - cdiag) + 4 * b * b));
  const double t = (lambda1 - a) / b;
  const double expected = (1.0 - t * t) / (1.0 + t * t);
  CHECK(floor.value == doctest::Approx(std::abs(expected)).epsilon(1e-10));
  CHECK(floor.value > 0.2);
}

TEST_CASE("noise_floor flags degenerate spectra") {
  const DensityMatrix mixed(0.5 * ComplexMatrix::Identity(2, 2), 1);
  ComplexVector zero(2);
  zero << 1.0, 0.0;
  CHECK(noise_floor(mixed, PauliProduct("Z"), zero).degenerate_leading);
}

TEST_CASE("build_vd_circuit structure") {
  const MitigationPlan plan = make_plan(2, 1, 1, 2, MitigationMethod::VD,
                                        NoiseModel::noiseless());
  const Circuit c = build_vd_circuit(plan, ControlledSigma::OBSERVABLE);
  CHECK(c.width == 5);
  CHECK(c.gate_count(GateKind::CSWAP) == 2);
  CHECK(c.gate_count(GateKind::H) == 2);
  CHECK(c.reset_count() == 0);

  const MitigationPlan plan34 = make_plan(3, 1, 1, 4, MitigationMethod::VD,
                                          NoiseModel::noiseless());
  const Circuit c34 = build_vd_circuit(plan34, ControlledSigma::OBSERVABLE);
  CHECK(c34.width == 13);
  CHECK(c34.gate_count(GateKind::CSWAP) == 9);

  const Circuit identity_variant = build_vd_circuit(plan34, ControlledSigma::IDENTITY);
  CHECK(identity_variant.gate_count(GateKind::CSWAP) == 9);
  CHECK(c34.gate_count(GateKind::CTRL_PAULI) == 1);
  CHECK(identity_variant.gate_count(GateKind::CTRL_PAULI) == 0);

  MitigationPlan bad = plan;
  bad.copies = 1;
  CHECK_THROWS_AS(build_vd_circuit(bad, ControlledSigma::OBSERVABLE), std::invalid_argument);
}

TEST_CASE("build_request_circuit structure") {
  const MitigationPlan plan = make_plan(4, 1, 2, 5, MitigationMethod::REQUEST,
                                        NoiseModel::noiseless());
  const Circuit c = build_request_circuit(plan, ControlledSigma::OBSERVABLE);
  CHECK(c.width == 9);
  CHECK(c.reset_count() == (5 - 2) * 4);
  CHECK(c.gate_count(GateKind::CSWAP) == (5 - 1) * 4);

  const MitigationPlan plan2 = make_plan(4, 1, 2, 2, MitigationMethod::REQUEST,
                                         NoiseModel::noiseless());
  const Circuit c2 = build_request_circuit(plan2, ControlledSigma::OBSERVABLE);
  CHECK(c2.reset_count() == 0);

  MitigationPlan bad = plan;
  bad.copies = 1;
  CHECK_THROWS_AS(build_request_circuit(bad, ControlledSigma::OBSERVABLE),
                  std::invalid_argument);
}

TEST_CASE("noiseless three-route agreement on small random instances") {
  Rng seeds(12);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + static_cast<int>(seeds.uniform_below(2));   // 2..3
    const int p = 1 + static_cast<int>(seeds.uniform_below(3));   // 1..3
    const int m = 2 + static_cast<int>(seeds.uniform_below(3));   // 2..4
    const std::uint64_t seed = seeds.next_u64();
    const MitigationPlan vd_plan =
        make_plan(n, p, seed, m, MitigationMethod::VD, NoiseModel::noiseless());
    MitigationPlan rq_plan = vd_plan;
    rq_plan.method = MitigationMethod::REQUEST;

    const DensityMatrix rho =
        simulate_density(vd_plan.prep, NoiseModel::noiseless());
    const double oracle = trace_ratio_oracle(rho, vd_plan.observable, m);

    // Many-register circuit through the statevector.
    const double p0_obs = vd_statevector_prob0(build_vd_circuit(vd_plan, ControlledSigma::OBSERVABLE));
    const double p0_id = vd_statevector_prob0(build_vd_circuit(vd_plan, ControlledSigma::IDENTITY));
    const double vd_value = estimate_mitigated(p0_obs, p0_id);

    // Two-register circuit through the density simulator.
    const auto [q0_obs, q0_id] = mitigation_probabilities_via_circuits(rq_plan);
    const double rq_value = estimate_mitigated(q0_obs, q0_id);

    CHECK(std::abs(vd_value - oracle) < 1e-9);
    CHECK(std::abs(rq_value - oracle) < 1e-9);
    CHECK(std::abs(vd_value - rq_value) < 1e-9);
  }
}

TEST_CASE("prep-only noise reduces the circuit estimate to the trace ratio") {
  NoiseModel noise = NoiseModel::local_default();
  noise.reset_error = 0.05;    // ignored outside FULL scope
  noise.readout_flip = 0.01;   // ignored outside FULL scope
  for (int m : {2, 3, 4}) {
    const MitigationPlan plan = make_plan(2, 2, 91, m, MitigationMethod::REQUEST, noise,
                                          NoiseScope::STATE_PREP_ONLY);
    const DensityMatrix rho = simulate_density(plan.prep, noise);
    const double oracle = trace_ratio_oracle(rho, plan.observable, m);
    const auto [p0, p0_id] = mitigation_probabilities(plan);
    CHECK(std::abs(estimate_mitigated(p0, p0_id) - oracle) < 1e-9);
    // The identity variant reads back the purity.
    const ComplexMatrix powered = matrix_power(rho.mat, m);
    CHECK(std::abs((2.0 * p0_id - 1.0) - powered.trace().real()) < 1e-9);
  }
}

TEST_CASE("staged executor matches the generic circuit simulation") {
  NoiseModel noise = NoiseModel::local_default();
  noise.eps1 = 2e-3;
  noise.eps2 = 8e-3;
  noise.idle_dephasing = 4e-3;
  noise.idle_depolarizing = 1.5e-3;
  noise.reset_error = 0.03;
  noise.readout_flip = 0.02;
  for (MitigationMethod method : {MitigationMethod::REQUEST, MitigationMethod::VD}) {
    for (int m : {2, 3, 4}) {
      const MitigationPlan plan = make_plan(2, 2, 1001, m, method, noise);
      const auto staged = mitigation_probabilities(plan);
      const auto generic = mitigation_probabilities_via_circuits(plan);
      CHECK(std::abs(staged.first - generic.first) < 1e-12);
      CHECK(std::abs(staged.second - generic.second) < 1e-12);
    }
  }
}

TEST_CASE("request and vd-equivalent coincide at M=2 under full noise") {
  NoiseModel noise = NoiseModel::local_default();
  noise.idle_dephasing = 2e-3;
  const MitigationPlan rq = make_plan(3, 2, 404, 2, MitigationMethod::REQUEST, noise);
  MitigationPlan vd = rq;
  vd.method = MitigationMethod::VD;
  const auto a = mitigation_probabilities(rq);
  const auto b = mitigation_probabilities(vd);
  CHECK(a.first == doctest::Approx(b.first).epsilon(1e-12));
  CHECK(a.second == doctest::Approx(b.second).epsilon(1e-12));
}

TEST_CASE("simulate_vd_equivalent noiseless agrees with the oracle") {
  const MitigationPlan plan = make_plan(2, 2, 55, 3, MitigationMethod::VD,
                                        NoiseModel::noiseless());
  const DensityMatrix obs = simulate_vd_equivalent(plan, ControlledSigma::OBSERVABLE);
  const DensityMatrix id = simulate_vd_equivalent(plan, ControlledSigma::IDENTITY);
  const double value = estimate_mitigated(readout_zero_probability(obs, 0, 0.0),
                                          readout_zero_probability(id, 0, 0.0));
  const DensityMatrix rho = simulate_density(plan.prep, NoiseModel::noiseless());
  CHECK(std::abs(value - trace_ratio_oracle(rho, plan.observable, 3)) < 1e-9);
}

TEST_CASE("vd-equivalent differs from request once later copies idle") {
  NoiseModel noise = NoiseModel::local_default();
  noise.idle_dephasing = 5e-3;
  const MitigationPlan rq = make_plan(2, 2, 777, 4, MitigationMethod::REQUEST, noise);
  MitigationPlan vd = rq;
  vd.method = MitigationMethod::VD;
  const auto a = mitigation_probabilities(rq);
  const auto b = mitigation_probabilities(vd);
  CHECK(std::abs(a.first - b.first) > 1e-9);
}

TEST_CASE("run_mitigation M=1 returns the plain noisy expectation") {
  NoiseModel noise = NoiseModel::local_default();
  const MitigationPlan plan = make_plan(3, 2, 31, 1, MitigationMethod::REQUEST, noise);
  const MitigationResult r = run_mitigation(plan);
  const DensityMatrix rho = simulate_density(plan.prep, noise);
  CHECK(r.mitigated == doctest::Approx(pauli_expectation(plan.observable, rho.mat)));
  CHECK(r.oracle == doctest::Approx(r.mitigated));
  CHECK(r.prob0_id == 1.0);
}

TEST_CASE("run_mitigation noiseless plans have vanishing error at any M") {
  for (int m : {1, 2, 4}) {
    const MitigationPlan plan = make_plan(2, 2, 8, m, MitigationMethod::REQUEST,
                                          NoiseModel::noiseless());
    const MitigationResult r = run_mitigation(plan);
    CHECK(r.abs_err_exact < 1e-9);
    CHECK(r.abs_err_psi1 < 1e-9);
  }
}

TEST_CASE("run_mitigation prep-only error vs psi1 decays with M") {
  NoiseModel noise = NoiseModel::local_default();
  std::vector<double> errs;
  for (int m = 1; m <= 4; ++m) {
    const MitigationPlan plan = make_plan(3, 3, 121, m, MitigationMethod::REQUEST, noise,
                                          NoiseScope::STATE_PREP_ONLY);
    errs.push_back(run_mitigation(plan).abs_err_psi1);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  CHECK(errs[3] < errs[2]);
}

TEST_CASE("run_mitigation with shots is deterministic and near the exact value") {
  NoiseModel noise = NoiseModel::local_default();
  const MitigationPlan plan = make_plan(2, 1, 66, 2, MitigationMethod::REQUEST, noise);
  const MitigationResult exact = run_mitigation(plan);
  const MitigationResult sampled1 = run_mitigation(plan, ShotPolicy{200000, 5});
  const MitigationResult sampled2 = run_mitigation(plan, ShotPolicy{200000, 5});
  CHECK(sampled1.mitigated == sampled2.mitigated);
  CHECK(std::abs(sampled1.mitigated - exact.mitigated) < 0.02);
}

TEST_CASE("measured copy selection keeps the noiseless identity") {
  for (int measured : {1, 2, 3}) {
    MitigationPlan plan = make_plan(2, 2, 14, 3, MitigationMethod::REQUEST,
                                    NoiseModel::noiseless());
    plan.measured_copy = measured;
    const DensityMatrix rho = simulate_density(plan.prep, NoiseModel::noiseless());
    const auto [p0, p0_id] = mitigation_probabilities(plan);
    CHECK(std::abs(estimate_mitigated(p0, p0_id) -
                   trace_ratio_oracle(rho, plan.observable, 3)) < 1e-9);
  }
}

TEST_CASE("mitigation result CSV row carries the distillation schema") {
  CHECK(MitigationResult::csv_header() ==
        "seed,N,p,M,method,mitigated,exact,psi1_value,oracle,abs_err_exact,abs_err_psi1");
  MitigationResult r;
  r.seed = 9;
  r.num_qubits = 4;
  r.ansatz_layers = 15;
  r.copies = 3;
  r.mitigated = 0.5;
  const std::string row = r.csv_row("REQUEST");
  CHECK(row.substr(0, 12) == "9,4,15,3,REQ");
}
