#include "reqsim/rqc.hpp"

#include <cmath>
#include <stdexcept>

#include "reqsim/rng.hpp"

namespace reqsim {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

struct VBlock {
  int wire;
  double alpha, beta, gamma;
};

// Emits the v blocks (three parallel single-qubit layers, gamma first in time)
// followed by the XX layer for one sub-layer of pairs.
void emit_sublayer(Circuit& c, const std::vector<std::pair<int, int>>& pairs, Rng& rng) {
  if (pairs.empty()) return;
  std::vector<VBlock> blocks;
  for (const auto& [a, b] : pairs) {
    for (int wire : {a, b}) {
      VBlock v;
      v.wire = wire;
      v.alpha = rng.uniform(0.0, kTwoPi);
      v.beta = rng.uniform(0.0, kTwoPi);
      v.gamma = rng.uniform(0.0, kTwoPi);
      blocks.push_back(v);
    }
  }
  Layer& lg = c.append_layer();
  for (const VBlock& v : blocks) lg.ops.push_back(make_rz(v.wire, v.gamma));
  Layer& lb = c.append_layer();
  for (const VBlock& v : blocks) lb.ops.push_back(make_ry(v.wire, v.beta));
  Layer& la = c.append_layer();
  for (const VBlock& v : blocks) la.ops.push_back(make_rz(v.wire, v.alpha));
  Layer& lx = c.append_layer();
  for (const auto& [a, b] : pairs) {
    lx.ops.push_back(make_xx(a, b, rng.uniform(0.0, kTwoPi)));
  }
}

}  // namespace

Circuit generate_rqc(int num_qubits, int layers, std::uint64_t seed) {
  if (num_qubits < 2) throw std::invalid_argument("generate_rqc needs at least 2 qubits");
  if (layers < 1) throw std::invalid_argument("generate_rqc needs at least 1 layer");
  Circuit c;
  c.width = num_qubits;
  c.seed = seed;
  c.label = "rqc";
  Rng rng(seed);
  std::vector<std::pair<int, int>> even_pairs, odd_pairs;
  for (int q = 0; q + 1 < num_qubits; q += 2) even_pairs.emplace_back(q, q + 1);
  for (int q = 1; q + 1 < num_qubits; q += 2) odd_pairs.emplace_back(q, q + 1);
  for (int layer = 0; layer < layers; ++layer) {
    emit_sublayer(c, even_pairs, rng);
    emit_sublayer(c, odd_pairs, rng);
  }
  c.validate();
  return c;
}

}  // namespace reqsim
