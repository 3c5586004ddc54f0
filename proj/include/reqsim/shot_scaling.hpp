#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace reqsim {

// Closed-form shot-budget analysis for the distillation estimator. Everything
// here is plain real arithmetic; quantities that overflow double range at
// large N are carried in log10 space.

// First-order variance of (2p0-1)/(2p0'-1) with independent binomial counts of
// ns and ns_id shots.
double variance_of_ratio(double prob0, double prob0_id, double ns, double ns_id);

// Shots needed (same count for both estimators) so the ratio variance reaches
// epsilon^2.
double shots_required(double prob0, double prob0_id, double epsilon);

// Same budget expressed through tr_x = Tr[X rho^M] and tr = Tr[rho^M] under a
// noiseless ancilla.
double shots_required_trace(double tr_x, double tr, double epsilon);

// Upper bound 2 / (tr^2 epsilon^2) valid for any Pauli-product observable.
// The bound is tight within a factor of 2: for tr <= 1/sqrt(2) the worst case
// is |Tr[X rho^M]| = tr, above that it is Tr[X rho^M] = 0.
double shots_upper_bound(double tr, double epsilon);

// Variant with a noisy ancilla under per-layer global depolarizing noise:
// the measured traces shrink by (1-delta)^p, so the budget grows by
// (1-delta)^{-2p}.
double shots_upper_bound(double tr, double epsilon, double delta, int p);

// Lower bound on Tr[rho^M] over all spectra with largest eigenvalue p1:
// p1^M + (1-p1)^M / (2^N-1)^{M-1}, attained when the residual eigenvalues are
// all equal (a globally depolarized state).
double trace_lower_bound(double p1, int n, int m);

// Spectrum of that extremal state: p1 followed by 2^N - 1 equal eigenvalues.
std::vector<double> gd_spectrum(double p1, int n);

// Tr[rho_p^M] for a state prepared through p layers, each followed by a
// global depolarizing channel of rate delta.
double gd_trace(int n, int p, int m, double delta);
double gd_trace_log10(int n, int p, long long m, double delta);

// Minimal copy count so the mitigation bias is of order epsilon, from the
// leading/subleading eigenvalues p1, p2.
long long copies_required_from_spectrum(double p1, double p2, double epsilon);

// Same quantity in closed form for the layered global depolarizing state.
long long gd_copies_required(int n, int p, double delta, double epsilon);

// Saturating per-layer error rate 1 - exp(-N * delta_q).
double layer_error_rate(int n, double delta_q);
// Per-gate regime with order-one gates per layer: delta = delta_g.
double per_gate_layer_error_rate(double delta_g);

enum class SweepMode { CONSTANT_DELTA, SATURATING_DELTA_Q };

struct SweepSpec {
  SweepMode mode = SweepMode::CONSTANT_DELTA;
  std::vector<int> n_values;
  // Per-layer rates delta (CONSTANT_DELTA) or per-qubit rates delta_q
  // (SATURATING_DELTA_Q).
  std::vector<double> rates;
  double epsilon = 1e-3;
  // 0 means depth tracks the register: p = N.
  int fixed_p = 0;
  // 0 resolves the copy count per grid point via gd_copies_required.
  long long fixed_m = 0;
  bool ancilla_correction = false;
};

struct ScalingRow {
  int n = 0;
  int p = 0;
  double delta = 0.0;
  long long m = 0;
  double trace = 1.0;  // flushes to 0 when the value underflows double range
  double log10_trace = 0.0;
  double log10_ns_max = 0.0;
};

std::vector<ScalingRow> scaling_sweep(const SweepSpec& spec);

std::string scaling_csv_header();
std::string scaling_csv_row(const ScalingRow& row);

}  // namespace reqsim
