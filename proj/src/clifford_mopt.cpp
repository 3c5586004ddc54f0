#include "reqsim/clifford_mopt.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "reqsim/gates.hpp"
#include "reqsim/rng.hpp"
#include "reqsim/simulator.hpp"

namespace reqsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Phase alignment removes the arbitrary global phase before measuring the
// distance: exp(i*angle/2) for the half-angle rotations, exp(i*angle) for XX,
// and exp(i*k*pi/4) for the Clifford candidates.
Complex gate_phase_alignment(GateKind kind, double angle) {
  switch (kind) {
    case GateKind::RZ:
    case GateKind::RY:
      return std::polar(1.0, angle / 2.0);
    case GateKind::XX:
      return std::polar(1.0, angle);
    default:
      throw std::invalid_argument("substitution supports RZ, RY and XX gates only");
  }
}

}  // namespace

double clifford_angle(GateKind kind, int k) {
  switch (kind) {
    case GateKind::RZ:
    case GateKind::RY:
      return k * kPi / 2.0;
    case GateKind::XX:
      return k * kPi / 4.0;
    default:
      throw std::invalid_argument("substitution supports RZ, RY and XX gates only");
  }
}

std::array<double, 4> WeightRow::probabilities() const {
  const double sum = weight_sum();
  return {weight[0] / sum, weight[1] / sum, weight[2] / sum, weight[3] / sum};
}

WeightRow substitution_weights(const Gate& g, const SubstitutionParams& params) {
  if (g.kind != GateKind::RZ && g.kind != GateKind::RY && g.kind != GateKind::XX) {
    throw std::invalid_argument("substitution supports RZ, RY and XX gates only");
  }
  if (is_clifford(g)) {
    throw std::invalid_argument("substitution_weights expects a non-Clifford gate");
  }
  if (params.sigma_width <= 0.0) {
    throw std::invalid_argument("sigma_width must be positive");
  }
  const ComplexMatrix u = gate_phase_alignment(g.kind, g.angle) * gate_matrix(g);
  const double norm = std::sqrt(static_cast<double>(u.rows()));
  const double s2 = params.sigma_width * params.sigma_width;
  WeightRow row;
  for (int k = 0; k < 4; ++k) {
    Gate candidate = g;
    candidate.angle = clifford_angle(g.kind, k);
    const ComplexMatrix v =
        std::polar(1.0, k * kPi / 4.0) * gate_matrix(candidate);
    row.distance[k] = (u - v).norm() / norm;
    row.weight[k] = std::exp(-row.distance[k] * row.distance[k] / s2);
  }
  return row;
}

int count_nonclifford(const Circuit& c, GateKind kind) {
  int count = 0;
  for (const Layer& layer : c.layers) {
    for (const Instruction& op : layer.ops) {
      if (const Gate* g = std::get_if<Gate>(&op)) {
        if (g->kind == kind && !is_clifford(*g)) ++count;
      }
    }
  }
  return count;
}

Circuit project_to_near_clifford(const Circuit& c, const SubstitutionParams& params,
                                 std::uint64_t seed) {
  c.validate();
  if (params.n_nonclifford < 0) throw std::invalid_argument("n_nonclifford must be >= 0");
  Circuit out = c;
  out.seed = seed;
  Rng rng(seed);

  // Pointers to every gate, in circuit order.
  std::vector<Gate*> gates;
  for (Layer& layer : out.layers) {
    for (Instruction& op : layer.ops) {
      if (Gate* g = std::get_if<Gate>(&op)) {
        if (g->kind != GateKind::RZ && g->kind != GateKind::RY && g->kind != GateKind::XX) {
          throw std::invalid_argument(
              "project_to_near_clifford expects a native-gate circuit");
        }
        gates.push_back(g);
      }
    }
  }

  auto draw_from = [&rng](const double* weights, int count, double total) {
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (int k = 0; k < count; ++k) {
      acc += weights[k];
      if (u < acc) return k;
    }
    return count - 1;
  };

  // Every non-Clifford RY and XX is replaced outright.
  for (Gate* g : gates) {
    if ((g->kind == GateKind::RY || g->kind == GateKind::XX) && !is_clifford(*g)) {
      const WeightRow row = substitution_weights(*g, params);
      const int k = draw_from(row.weight, 4, row.weight_sum());
      g->angle = clifford_angle(g->kind, k);
    }
  }

  // Non-Clifford RZ gates are thinned one at a time with probabilities joint
  // over all remaining (gate, candidate) pairs.
  struct RzEntry {
    Gate* gate;
    WeightRow row;
  };
  std::vector<RzEntry> pool;
  for (Gate* g : gates) {
    if (g->kind == GateKind::RZ && !is_clifford(*g)) {
      pool.push_back({g, substitution_weights(*g, params)});
    }
  }
  const int target = std::min<int>(params.n_nonclifford, static_cast<int>(pool.size()));
  while (static_cast<int>(pool.size()) > target) {
    double total = 0.0;
    for (const RzEntry& e : pool) total += e.row.weight_sum();
    const double u = rng.uniform() * total;
    double acc = 0.0;
    size_t chosen = pool.size() - 1;
    int chosen_k = 3;
    bool found = false;
    for (size_t j = 0; j < pool.size() && !found; ++j) {
      for (int k = 0; k < 4; ++k) {
        acc += pool[j].row.weight[k];
        if (u < acc) {
          chosen = j;
          chosen_k = k;
          found = true;
          break;
        }
      }
    }
    pool[chosen].gate->angle = clifford_angle(GateKind::RZ, chosen_k);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(chosen));
  }
  return out;
}

MoptEstimate estimate_m_opt(const Circuit& prep, const PauliProduct& observable,
                            const NoiseModel& noise, const std::vector<int>& m_range,
                            const SubstitutionParams& params, std::uint64_t seed,
                            NoiseScope scope, int workers) {
  if (m_range.empty()) throw std::invalid_argument("estimate_m_opt needs a nonempty M range");
  if (params.samples_per_circuit < 1) {
    throw std::invalid_argument("estimate_m_opt needs at least one proxy circuit");
  }

  struct ProxyErrors {
    std::vector<double> per_m;
    bool ok = false;
  };
  const int samples = params.samples_per_circuit;
  std::vector<ProxyErrors> proxies(samples);

  auto evaluate_proxy = [&](int i) {
    ProxyErrors out;
    out.per_m.assign(m_range.size(), 0.0);
    const Circuit proxy = project_to_near_clifford(prep, params, Rng::derive(seed, i));
    const double exact = pauli_expectation(observable, simulate_statevector(proxy));
    try {
      for (size_t mi = 0; mi < m_range.size(); ++mi) {
        MitigationPlan plan;
        plan.prep = proxy;
        plan.observable = observable;
        plan.copies = m_range[mi];
        plan.method = MitigationMethod::REQUEST;
        plan.noise = noise;
        plan.noise_scope = scope;
        const MitigationResult r = run_mitigation(plan);
        out.per_m[mi] = std::abs(r.mitigated - exact);
      }
      out.ok = true;
    } catch (const std::runtime_error&) {
      out.ok = false;  // degenerate proxy (vanishing denominator); drop it
    }
    return out;
  };

  if (workers > 1) {
    std::vector<std::future<ProxyErrors>> futures;
    futures.reserve(samples);
    for (int i = 0; i < samples; ++i) {
      futures.push_back(std::async(std::launch::async, evaluate_proxy, i));
    }
    for (int i = 0; i < samples; ++i) proxies[i] = futures[i].get();
  } else {
    for (int i = 0; i < samples; ++i) proxies[i] = evaluate_proxy(i);
  }

  MoptEstimate est;
  est.m_values = m_range;
  est.proxy_total_error.assign(m_range.size(), 0.0);
  for (const ProxyErrors& p : proxies) {
    if (!p.ok) continue;
    ++est.proxies_used;
    for (size_t mi = 0; mi < m_range.size(); ++mi) est.proxy_total_error[mi] += p.per_m[mi];
  }
  if (est.proxies_used == 0) {
    est.degenerate = true;
    return est;
  }
  size_t best = 0;
  for (size_t mi = 1; mi < m_range.size(); ++mi) {
    const bool better = est.proxy_total_error[mi] < est.proxy_total_error[best] ||
                        (est.proxy_total_error[mi] == est.proxy_total_error[best] &&
                         m_range[mi] < m_range[best]);
    if (better) best = mi;
  }
  est.m_opt = m_range[best];
  return est;
}

}  // namespace reqsim
