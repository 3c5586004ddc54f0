#include "reqsim/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "reqsim/gates.hpp"
#include "reqsim/kernels.hpp"
#include "reqsim/rng.hpp"
#include "reqsim/simulator.hpp"

namespace reqsim {

const char* mitigation_method_name(MitigationMethod m) {
  switch (m) {
    case MitigationMethod::VD: return "VD";
    case MitigationMethod::REQUEST: return "REQUEST";
    case MitigationMethod::ORACLE: return "ORACLE";
  }
  throw std::invalid_argument("unknown mitigation method");
}

void MitigationPlan::validate() const {
  prep.validate();
  noise.validate();
  if (observable.num_qubits() != prep.width) {
    throw std::invalid_argument("observable width must match the preparation circuit");
  }
  if (copies < 1) throw std::invalid_argument("copy count must be at least 1");
  if (measured_copy < 0 || measured_copy > copies) {
    throw std::invalid_argument("measured copy index out of range");
  }
  if (prep.reset_count() > 0) {
    throw std::invalid_argument("preparation circuits must not contain resets");
  }
}

namespace {

// Tr[X m] without the unit-trace assumptions of pauli_expectation.
Complex pauli_trace(const PauliProduct& x, const ComplexMatrix& m) {
  Complex value = 0.0;
  const Eigen::Index d = m.rows();
  for (Eigen::Index j = 0; j < d; ++j) {
    const PauliProduct::BasisAction a = x.apply_to_basis(j);
    value += a.phase * m(j, a.image);
  }
  return value;
}

}  // namespace

double trace_ratio_oracle(const DensityMatrix& rho, const PauliProduct& x, int m) {
  if (m < 1) throw std::invalid_argument("trace_ratio_oracle needs M >= 1");
  if (x.num_qubits() != rho.num_qubits) {
    throw std::invalid_argument("trace_ratio_oracle dimension mismatch");
  }
  const ComplexMatrix powered = m == 1 ? rho.mat : matrix_power(rho.mat, m);
  const double denom = powered.trace().real();
  if (denom < 1e-300) {
    throw std::runtime_error("trace_ratio_oracle denominator vanished");
  }
  const Complex num = pauli_trace(x, powered);
  if (std::abs(num.imag()) > 1e-9) {
    throw std::runtime_error("trace_ratio_oracle produced a non-real numerator");
  }
  return num.real() / denom;
}

double estimate_mitigated(double prob0, double prob0_id) {
  // Tolerate a few ulp of round-off outside [0, 1] from exact readouts.
  if (!(prob0 >= -1e-9 && prob0 <= 1.0 + 1e-9) ||
      !(prob0_id >= -1e-9 && prob0_id <= 1.0 + 1e-9)) {
    throw std::invalid_argument("estimate_mitigated expects probabilities in [0, 1]");
  }
  prob0 = std::clamp(prob0, 0.0, 1.0);
  prob0_id = std::clamp(prob0_id, 0.0, 1.0);
  const double denom = 2.0 * prob0_id - 1.0;
  if (std::abs(denom) < 1e-12) {
    throw std::runtime_error("estimate_mitigated: singular denominator (2*prob0' - 1 ~ 0)");
  }
  return (2.0 * prob0 - 1.0) / denom;
}

NoiseFloor noise_floor(const DensityMatrix& rho, const PauliProduct& x,
                       const ComplexVector& ideal) {
  if (x.num_qubits() != rho.num_qubits || ideal.size() != rho.dim()) {
    throw std::invalid_argument("noise_floor dimension mismatch");
  }
  const SpectralDecomposition sd = spectral_decompose(rho.mat);
  const ComplexVector psi1 = sd.eigenvectors.col(0);
  NoiseFloor out;
  out.degenerate_leading = sd.degenerate_leading;
  out.value = std::abs(pauli_expectation(x, psi1) - pauli_expectation(x, ideal));
  return out;
}

namespace {

Gate remap_gate(const Gate& g, const std::vector<int>& map) {
  Gate out = g;
  for (int& q : out.qubits) q = map[q];
  return out;
}

std::vector<int> register_map(int n, int first_qubit) {
  std::vector<int> map(n);
  for (int q = 0; q < n; ++q) map[q] = first_qubit + q;
  return map;
}

std::vector<int> range_qubits(int first, int count) {
  std::vector<int> out(count);
  for (int i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

struct BuilderContext {
  const MitigationPlan& plan;
  bool vd_masks = false;

  int n() const { return plan.prep.width; }
  bool blocks_noisy() const {
    return plan.noise_scope == NoiseScope::FULL && !plan.noise.is_noiseless();
  }
  bool decompose_blocks() const {
    return blocks_noisy() && plan.noise.mode == NoiseMode::LOCAL;
  }
  bool prep_only() const { return plan.noise_scope == NoiseScope::STATE_PREP_ONLY; }
};

// Emits one composite gate of the mitigation machinery, one native gate per
// layer when the blocks are noisy under LOCAL noise.
void emit_block_gate(Circuit& c, const BuilderContext& ctx, const Gate& g) {
  if (ctx.decompose_blocks()) {
    for (const Gate& native : decompose_to_native(g)) {
      Layer& layer = c.append_layer();
      layer.role = LayerRole::MITIGATION;
      layer.noisy = ctx.blocks_noisy();
      layer.ops.push_back(native);
    }
  } else {
    Layer& layer = c.append_layer();
    layer.role = LayerRole::MITIGATION;
    layer.noisy = ctx.blocks_noisy();
    layer.ops.push_back(g);
  }
}

void emit_swap_block(Circuit& c, const BuilderContext& ctx, int reg_a_first, int reg_b_first) {
  for (int q = 0; q < ctx.n(); ++q) {
    emit_block_gate(c, ctx, make_cswap(0, reg_a_first + q, reg_b_first + q));
  }
}

void emit_ctrl_sigma(Circuit& c, const BuilderContext& ctx, int reg_first) {
  for (int q = 0; q < ctx.n(); ++q) {
    const char letter = ctx.plan.observable.letter(q);
    if (letter == 'I') continue;
    emit_block_gate(c, ctx, make_ctrl_pauli(0, reg_first + q, letter));
  }
}

// Copies the preparation circuit onto one or more registers, layer by layer
// (registers advance in lockstep so their preparations share layers).
void emit_parallel_preps(Circuit& c, const BuilderContext& ctx,
                         const std::vector<int>& register_firsts,
                         const std::vector<int>& suppressed) {
  for (const Layer& layer : ctx.plan.prep.layers) {
    Layer& out = c.append_layer();
    out.role = LayerRole::PREP;
    out.noisy = layer.noisy;
    out.idle_suppressed = suppressed;
    for (int first : register_firsts) {
      const std::vector<int> map = register_map(ctx.n(), first);
      for (const Instruction& op : layer.ops) {
        out.ops.push_back(remap_gate(std::get<Gate>(op), map));
      }
      for (int q : layer.idle_suppressed) out.idle_suppressed.push_back(map[q]);
    }
  }
}

Circuit build_two_register_circuit(const MitigationPlan& plan, ControlledSigma sigma,
                                   bool vd_masks) {
  plan.validate();
  if (plan.copies < 2) {
    throw std::invalid_argument("the two-register circuit needs at least 2 copies");
  }
  BuilderContext ctx{plan, vd_masks};
  const int n = ctx.n();
  const int m = plan.copies;
  const int measured = plan.measured();
  const int a_first = 1;
  const int b_first = 1 + n;

  Circuit c;
  c.width = 2 * n + 1;
  c.label = "two-register distillation";

  // Qubits whose idling is an artifact of register recycling: the ancilla and
  // register A park while later copies are prepared on B.
  const std::vector<int> parked = range_qubits(0, n + 1);
  const std::vector<int> anc_only = {0};
  const bool suppress_parked = vd_masks || ctx.prep_only();

  emit_block_gate(c, ctx, make_h(0));

  // Copies 1 and 2 are prepared in parallel on registers A and B.
  emit_parallel_preps(c, ctx, {a_first, b_first},
                      ctx.prep_only() ? anc_only : std::vector<int>{});
  if (measured == 1 && sigma == ControlledSigma::OBSERVABLE) emit_ctrl_sigma(c, ctx, a_first);
  if (measured == 2 && m > 2 && sigma == ControlledSigma::OBSERVABLE) {
    emit_ctrl_sigma(c, ctx, b_first);
  }
  emit_swap_block(c, ctx, a_first, b_first);

  for (int i = 3; i <= m; ++i) {
    Layer& reset_layer = c.append_layer();
    reset_layer.role = LayerRole::MITIGATION;
    reset_layer.noisy = ctx.blocks_noisy();
    reset_layer.ops.push_back(Reset{range_qubits(b_first, n)});
    if (suppress_parked) reset_layer.idle_suppressed = parked;

    emit_parallel_preps(c, ctx, {b_first}, suppress_parked ? parked : std::vector<int>{});
    if (measured == i && i < m && sigma == ControlledSigma::OBSERVABLE) {
      emit_ctrl_sigma(c, ctx, b_first);
    }
    emit_swap_block(c, ctx, a_first, b_first);
  }

  if (measured == m && sigma == ControlledSigma::OBSERVABLE) {
    // Default position: the controlled observable acts on register B right
    // after the last swap block. (For m == 2 this is also the measured == 2
    // case, handled here rather than before the block.)
    emit_ctrl_sigma(c, ctx, b_first);
  }

  emit_block_gate(c, ctx, make_h(0));
  c.validate();
  return c;
}

}  // namespace

Circuit build_request_circuit(const MitigationPlan& plan, ControlledSigma sigma) {
  if (plan.method != MitigationMethod::REQUEST) {
    throw std::invalid_argument("build_request_circuit expects a REQUEST plan");
  }
  return build_two_register_circuit(plan, sigma, /*vd_masks=*/false);
}

Circuit build_vd_circuit(const MitigationPlan& plan, ControlledSigma sigma) {
  plan.validate();
  if (plan.method != MitigationMethod::VD) {
    throw std::invalid_argument("build_vd_circuit expects a VD plan");
  }
  if (plan.copies < 2) throw std::invalid_argument("distillation needs at least 2 copies");
  BuilderContext ctx{plan, false};
  const int n = ctx.n();
  const int m = plan.copies;
  Circuit c;
  c.width = m * n + 1;
  c.label = "many-register distillation";
  auto reg_first = [&](int copy) { return (copy - 1) * n + 1; };

  emit_block_gate(c, ctx, make_h(0));
  std::vector<int> firsts;
  for (int i = 1; i <= m; ++i) firsts.push_back(reg_first(i));
  emit_parallel_preps(c, ctx, firsts,
                      ctx.prep_only() ? std::vector<int>{0} : std::vector<int>{});
  for (int i = 1; i < m; ++i) {
    emit_swap_block(c, ctx, reg_first(i), reg_first(i + 1));
  }
  if (sigma == ControlledSigma::OBSERVABLE) emit_ctrl_sigma(c, ctx, reg_first(plan.measured()));
  emit_block_gate(c, ctx, make_h(0));
  c.validate();
  return c;
}

namespace {

// ---------------------------------------------------------------------------
// Staged execution of the two-register circuit.
//
// The prepared copies factor out: whenever register B is refreshed, the joint
// state is (ancilla+A block) (x) (B block), so each preparation segment can be
// simulated once on N qubits and tensored in while the parked qubits receive
// their idling channels. This reproduces the generic layer-by-layer simulation
// exactly (see the cross-check against mitigation_probabilities_via_circuits
// in the tests) at a fraction of the cost, which is what makes the instance
// sweeps tractable.
// ---------------------------------------------------------------------------

struct StagedContext {
  const MitigationPlan& plan;
  bool vd_masks = false;

  int n = 0;
  int width = 0;
  bool blocks_noisy = false;
  bool local_full = false;   // FULL scope under LOCAL noise
  double reset_error = 0.0;
  DensityMatrix prep_fresh;  // copies 1 and 2
  DensityMatrix prep_later;  // copies 3..M (input state after a reset)
  int prep_layer_count = 0;
};

bool staged_supported(const MitigationPlan& plan) {
  switch (plan.noise.mode) {
    case NoiseMode::NOISELESS:
    case NoiseMode::LOCAL:
      return true;
    case NoiseMode::GLOBAL_DEPOLARIZING:
      return plan.noise_scope == NoiseScope::STATE_PREP_ONLY;
  }
  return false;
}

// One layer of idling noise on the listed qubits of a state.
void apply_idle_layer(ComplexMatrix& mat, int num_qubits, const std::vector<int>& qubits,
                      const NoiseModel& noise) {
  if (qubits.empty()) return;
  if (noise.idle_dephasing > 0.0) {
    apply_dephasing_set(mat, num_qubits, qubits, noise.idle_dephasing);
  }
  if (noise.idle_depolarizing > 0.0) {
    for (int q : qubits) apply_depolarizing_1q(mat, num_qubits, q, noise.idle_depolarizing);
  }
}

// The ancilla Hadamards count as mitigation machinery: under full LOCAL noise
// they are decomposed to native gates like every block gate, so they occupy
// two layers instead of one.
int hadamard_layer_count(const StagedContext& ctx) {
  return ctx.local_full ? static_cast<int>(decompose_to_native(make_h(0)).size()) : 1;
}

StagedContext make_staged_context(const MitigationPlan& plan, bool vd_masks) {
  plan.validate();
  StagedContext ctx{plan, vd_masks};
  ctx.n = plan.prep.width;
  ctx.width = 2 * ctx.n + 1;
  ctx.blocks_noisy = plan.noise_scope == NoiseScope::FULL && !plan.noise.is_noiseless();
  ctx.local_full = ctx.blocks_noisy && plan.noise.mode == NoiseMode::LOCAL;
  ctx.reset_error = ctx.local_full ? plan.noise.reset_error : 0.0;
  ctx.prep_layer_count = static_cast<int>(plan.prep.layers.size());

  DensityMatrix init = DensityMatrix::zero_state(ctx.n);
  if (ctx.local_full) {
    // Copies 1 and 2 idle through the opening ancilla-Hadamard layers.
    for (int l = 0; l < hadamard_layer_count(ctx); ++l) {
      apply_idle_layer(init.mat, ctx.n, range_qubits(0, ctx.n), plan.noise);
    }
  }
  ctx.prep_fresh = simulate_density(plan.prep, plan.noise, std::move(init));
  if (plan.copies >= 3) {
    DensityMatrix later_init = DensityMatrix::product_mixture(ctx.n, ctx.reset_error);
    ctx.prep_later = simulate_density(plan.prep, plan.noise, std::move(later_init));
  }
  return ctx;
}

// Applies a mitigation-block gate with its noise and per-layer idling.
void staged_block_gate(StagedContext& ctx, DensityMatrix& big, const Gate& g) {
  if (ctx.local_full) {
    for (const Gate& native : decompose_to_native(g)) {
      apply_gate_density(big.mat, big.num_qubits, native);
      if (gate_arity(native.kind) == 1) {
        apply_depolarizing_1q(big.mat, big.num_qubits, native.qubits[0], ctx.plan.noise.eps1);
      } else {
        apply_depolarizing_2q(big.mat, big.num_qubits, native.qubits[0], native.qubits[1],
                              ctx.plan.noise.eps2);
      }
      std::vector<int> idle;
      for (int q = 0; q < ctx.width; ++q) {
        if (std::find(native.qubits.begin(), native.qubits.end(), q) == native.qubits.end()) {
          idle.push_back(q);
        }
      }
      apply_idle_layer(big.mat, big.num_qubits, idle, ctx.plan.noise);
    }
  } else {
    apply_gate_density(big.mat, big.num_qubits, g);
  }
}

void staged_swap_block(StagedContext& ctx, DensityMatrix& big) {
  for (int q = 0; q < ctx.n; ++q) {
    staged_block_gate(ctx, big, make_cswap(0, 1 + q, 1 + ctx.n + q));
  }
}

void staged_ctrl_sigma(StagedContext& ctx, DensityMatrix& big, int reg_first) {
  for (int q = 0; q < ctx.n; ++q) {
    const char letter = ctx.plan.observable.letter(q);
    if (letter == 'I') continue;
    staged_block_gate(ctx, big, make_ctrl_pauli(0, reg_first + q, letter));
  }
}

void staged_final_h(StagedContext& ctx, DensityMatrix& big) {
  staged_block_gate(ctx, big, make_h(0));
}

// Advances `big` to just before the final controlled-sigma/Hadamard section,
// inserting the controlled observable early when an interior copy is measured.
DensityMatrix staged_prefix(StagedContext& ctx, ControlledSigma sigma) {
  const MitigationPlan& plan = ctx.plan;
  const int m = plan.copies;
  const int measured = plan.measured();
  const bool suppress_parked = ctx.vd_masks;  // prep-only scope never reaches the idles below

  // Ancilla: Hadamard (decomposed with per-gate noise under full LOCAL
  // noise), then idling through the parallel preparation of copies 1 and 2.
  ComplexMatrix anc = ComplexMatrix::Zero(2, 2);
  anc(0, 0) = 1.0;
  if (ctx.local_full) {
    for (const Gate& native : decompose_to_native(make_h(0))) {
      apply_gate_density(anc, 1, native);
      apply_depolarizing_1q(anc, 1, 0, plan.noise.eps1);
    }
    for (int l = 0; l < ctx.prep_layer_count; ++l) {
      apply_idle_layer(anc, 1, {0}, plan.noise);
    }
  } else {
    apply_gate_density(anc, 1, make_h(0));
  }

  DensityMatrix big(tensor_product(tensor_product(anc, ctx.prep_fresh.mat), ctx.prep_fresh.mat),
                    ctx.width);

  if (measured == 1 && sigma == ControlledSigma::OBSERVABLE) staged_ctrl_sigma(ctx, big, 1);
  if (measured == 2 && m > 2 && sigma == ControlledSigma::OBSERVABLE) {
    staged_ctrl_sigma(ctx, big, 1 + ctx.n);
  }
  staged_swap_block(ctx, big);

  const std::vector<int> parked = range_qubits(0, ctx.n + 1);
  for (int i = 3; i <= m; ++i) {
    // Reset layer.
    apply_reset_inplace(big.mat, big.num_qubits, range_qubits(1 + ctx.n, ctx.n),
                        ctx.reset_error);
    if (ctx.local_full && !suppress_parked) {
      apply_idle_layer(big.mat, big.num_qubits, parked, plan.noise);
    }
    // Preparation of copy i on register B: the joint state factors across the
    // (ancilla+A) | B split, so park the front block and tensor the fresh copy.
    ComplexMatrix parked_block = partial_trace(big.mat, ctx.width, parked);
    if (ctx.local_full && !suppress_parked) {
      for (int l = 0; l < ctx.prep_layer_count; ++l) {
        apply_idle_layer(parked_block, ctx.n + 1, parked, plan.noise);
      }
    }
    big.mat = tensor_product(parked_block, ctx.prep_later.mat);
    if (measured == i && i < m && sigma == ControlledSigma::OBSERVABLE) {
      staged_ctrl_sigma(ctx, big, 1 + ctx.n);
    }
    staged_swap_block(ctx, big);
  }
  return big;
}

double staged_readout(const StagedContext& ctx, const DensityMatrix& big) {
  (void)ctx;
  return measure_zero_probability(big.mat, big.num_qubits, 0);
}

DensityMatrix staged_final_state(StagedContext& ctx, ControlledSigma sigma) {
  DensityMatrix big = staged_prefix(ctx, sigma);
  if (ctx.plan.measured() == ctx.plan.copies && sigma == ControlledSigma::OBSERVABLE) {
    staged_ctrl_sigma(ctx, big, 1 + ctx.n);
  }
  staged_final_h(ctx, big);
  return big;
}

std::pair<double, double> staged_probability_pair(const MitigationPlan& plan, bool vd_masks) {
  StagedContext ctx = make_staged_context(plan, vd_masks);
  if (plan.measured() == plan.copies) {
    // The two controlled-sigma variants share everything up to the final
    // block; branch there instead of simulating twice.
    DensityMatrix shared = staged_prefix(ctx, ControlledSigma::OBSERVABLE);
    DensityMatrix id_branch = shared;
    staged_ctrl_sigma(ctx, shared, 1 + ctx.n);
    staged_final_h(ctx, shared);
    staged_final_h(ctx, id_branch);
    return {staged_readout(ctx, shared), staged_readout(ctx, id_branch)};
  }
  DensityMatrix obs = staged_final_state(ctx, ControlledSigma::OBSERVABLE);
  StagedContext ctx_id = make_staged_context(plan, vd_masks);
  DensityMatrix id = staged_final_state(ctx_id, ControlledSigma::IDENTITY);
  return {staged_readout(ctx, obs), staged_readout(ctx_id, id)};
}

}  // namespace

DensityMatrix simulate_vd_equivalent(const MitigationPlan& plan, ControlledSigma sigma) {
  if (plan.method != MitigationMethod::VD) {
    throw std::invalid_argument("simulate_vd_equivalent expects a VD plan");
  }
  if (plan.noise.mode == NoiseMode::GLOBAL_DEPOLARIZING &&
      plan.noise_scope == NoiseScope::FULL) {
    throw std::invalid_argument(
        "simulate_vd_equivalent supports LOCAL or NOISELESS noise");
  }
  StagedContext ctx = make_staged_context(plan, /*vd_masks=*/true);
  return staged_final_state(ctx, sigma);
}

std::pair<double, double> mitigation_probabilities(const MitigationPlan& plan) {
  plan.validate();
  if (plan.copies < 2) {
    throw std::invalid_argument("mitigation circuits need at least 2 copies");
  }
  const bool vd = plan.method == MitigationMethod::VD;
  std::pair<double, double> probs;
  if (staged_supported(plan)) {
    probs = staged_probability_pair(plan, vd);
  } else {
    probs = mitigation_probabilities_via_circuits(plan);
    return probs;  // readout flip applied inside
  }
  const double flip = plan.noise_scope == NoiseScope::FULL ? plan.noise.readout_flip : 0.0;
  probs.first = (1.0 - flip) * probs.first + flip * (1.0 - probs.first);
  probs.second = (1.0 - flip) * probs.second + flip * (1.0 - probs.second);
  return probs;
}

std::pair<double, double> mitigation_probabilities_via_circuits(const MitigationPlan& plan) {
  plan.validate();
  if (plan.copies < 2) {
    throw std::invalid_argument("mitigation circuits need at least 2 copies");
  }
  const bool vd = plan.method == MitigationMethod::VD;
  const Circuit obs = build_two_register_circuit(plan, ControlledSigma::OBSERVABLE, vd);
  const Circuit id = build_two_register_circuit(plan, ControlledSigma::IDENTITY, vd);
  const DensityMatrix rho_obs = simulate_density(obs, plan.noise);
  const DensityMatrix rho_id = simulate_density(id, plan.noise);
  const double flip = plan.noise_scope == NoiseScope::FULL ? plan.noise.readout_flip : 0.0;
  return {readout_zero_probability(rho_obs, 0, flip), readout_zero_probability(rho_id, 0, flip)};
}

std::string MitigationResult::csv_header() {
  return "seed,N,p,M,method,mitigated,exact,psi1_value,oracle,abs_err_exact,abs_err_psi1";
}

namespace {
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string MitigationResult::csv_row(const std::string& method_label) const {
  std::string row;
  row += std::to_string(seed);
  row += ',' + std::to_string(num_qubits);
  row += ',' + std::to_string(ansatz_layers);
  row += ',' + std::to_string(copies);
  row += ',' + method_label;
  row += ',' + fmt(mitigated);
  row += ',' + fmt(exact);
  row += ',' + fmt(psi1_value);
  row += ',' + fmt(oracle);
  row += ',' + fmt(abs_err_exact);
  row += ',' + fmt(abs_err_psi1);
  return row;
}

MitigationResult run_mitigation(const MitigationPlan& plan, const ShotPolicy& shots) {
  plan.validate();
  const PauliProduct& x = plan.observable;

  MitigationResult result;
  result.num_qubits = plan.prep.width;
  result.copies = plan.copies;
  result.method = plan.method;

  const DensityMatrix rho_noisy = simulate_density(plan.prep, plan.noise);
  const ComplexVector psi_ideal = simulate_statevector(plan.prep);
  result.exact = pauli_expectation(x, psi_ideal);

  const SpectralDecomposition sd = spectral_decompose(rho_noisy.mat);
  result.degenerate_spectrum = sd.degenerate_leading;
  const ComplexVector psi1 = sd.eigenvectors.col(0);
  result.psi1_value = pauli_expectation(x, psi1);
  result.oracle = trace_ratio_oracle(rho_noisy, x, plan.copies);

  if (plan.method == MitigationMethod::ORACLE) {
    result.mitigated = result.oracle;
    const ComplexMatrix powered =
        plan.copies == 1 ? rho_noisy.mat : matrix_power(rho_noisy.mat, plan.copies);
    result.prob0 = 0.5 * (1.0 + pauli_trace(x, powered).real());
    result.prob0_id = 0.5 * (1.0 + powered.trace().real());
  } else if (plan.copies == 1) {
    // Single copy: the plain noisy expectation, measured directly.
    const double flip =
        plan.noise_scope == NoiseScope::FULL ? plan.noise.readout_flip : 0.0;
    const double value = pauli_expectation(x, rho_noisy.mat);
    double prob0 = 0.5 * (1.0 + value);
    prob0 = (1.0 - flip) * prob0 + flip * (1.0 - prob0);
    if (shots.shots > 0) {
      prob0 = sample_binomial_estimate(prob0, shots.shots, Rng::derive(shots.seed, 1)).estimate;
    }
    result.prob0 = prob0;
    result.prob0_id = 1.0;
    result.mitigated = estimate_mitigated(prob0, 1.0);
  } else {
    auto [prob0, prob0_id] = mitigation_probabilities(plan);
    if (shots.shots > 0) {
      prob0 = sample_binomial_estimate(prob0, shots.shots, Rng::derive(shots.seed, 1)).estimate;
      prob0_id =
          sample_binomial_estimate(prob0_id, shots.shots, Rng::derive(shots.seed, 2)).estimate;
    }
    result.prob0 = prob0;
    result.prob0_id = prob0_id;
    result.mitigated = estimate_mitigated(prob0, prob0_id);
  }

  result.abs_err_exact = std::abs(result.mitigated - result.exact);
  result.abs_err_psi1 = std::abs(result.mitigated - result.psi1_value);
  return result;
}

}  // namespace reqsim
