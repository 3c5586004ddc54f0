#include "reqsim/kernels.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace reqsim {

namespace {

inline Eigen::Index bit_of(int num_qubits, int q) {
  return Eigen::Index{1} << (num_qubits - 1 - q);
}

void check_qubits(int num_qubits, const std::vector<int>& qubits) {
  for (size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= num_qubits) {
      throw std::out_of_range("kernel qubit index out of range");
    }
    for (size_t j = i + 1; j < qubits.size(); ++j) {
      if (qubits[i] == qubits[j]) throw std::invalid_argument("kernel qubits must be distinct");
    }
  }
}

// Basis offsets of all local patterns of the operand qubits; operand 0 is the
// most significant local bit.
std::vector<Eigen::Index> local_offsets(int num_qubits, const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  std::vector<Eigen::Index> offs(Eigen::Index{1} << k, 0);
  for (Eigen::Index l = 0; l < static_cast<Eigen::Index>(offs.size()); ++l) {
    Eigen::Index o = 0;
    for (int i = 0; i < k; ++i) {
      if ((l >> (k - 1 - i)) & 1) o |= bit_of(num_qubits, qubits[i]);
    }
    offs[l] = o;
  }
  return offs;
}

// Enumerates every index of [0, 2^n) whose operand bits are all clear.
template <typename F>
void for_each_base(Eigen::Index dim, const std::vector<Eigen::Index>& bits, F&& f) {
  Eigen::Index mask = 0;
  for (Eigen::Index b : bits) mask |= b;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if ((i & mask) == 0) f(i);
  }
}

thread_local ComplexMatrix g_scratch;

}  // namespace

void apply_unitary_1q(ComplexMatrix& rho, int num_qubits, int q, const Eigen::Matrix2cd& u) {
  const Eigen::Index d = rho.rows();
  const Eigen::Index s = bit_of(num_qubits, q);
  Complex* data = rho.data();
  const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  // Left factor: combine row pairs inside each (contiguous) column.
  for (Eigen::Index c = 0; c < d; ++c) {
    Complex* col = data + c * d;
    for (Eigen::Index base = 0; base < d; base += 2 * s) {
      for (Eigen::Index r = base; r < base + s; ++r) {
        const Complex a0 = col[r];
        const Complex a1 = col[r + s];
        col[r] = u00 * a0 + u01 * a1;
        col[r + s] = u10 * a0 + u11 * a1;
      }
    }
  }
  // Right factor U^dag: combine column pairs elementwise.
  const Complex c00 = std::conj(u00), c01 = std::conj(u01);
  const Complex c10 = std::conj(u10), c11 = std::conj(u11);
  for (Eigen::Index cb = 0; cb < d; cb += 2 * s) {
    for (Eigen::Index c = cb; c < cb + s; ++c) {
      Complex* p0 = data + c * d;
      Complex* p1 = data + (c + s) * d;
      for (Eigen::Index r = 0; r < d; ++r) {
        const Complex a0 = p0[r];
        const Complex a1 = p1[r];
        p0[r] = a0 * c00 + a1 * c01;
        p1[r] = a0 * c10 + a1 * c11;
      }
    }
  }
}

void apply_unitary_2q(ComplexMatrix& rho, int num_qubits, int q0, int q1,
                      const Eigen::Matrix4cd& u) {
  const Eigen::Index d = rho.rows();
  const Eigen::Index s0 = bit_of(num_qubits, q0);
  const Eigen::Index s1 = bit_of(num_qubits, q1);
  const Eigen::Index hi = std::max(s0, s1);
  const Eigen::Index lo = std::min(s0, s1);
  Complex* data = rho.data();
  Complex m[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = u(i, j);

  for (Eigen::Index c = 0; c < d; ++c) {
    Complex* col = data + c * d;
    for (Eigen::Index g1 = 0; g1 < d; g1 += 2 * hi) {
      for (Eigen::Index g2 = g1; g2 < g1 + hi; g2 += 2 * lo) {
        for (Eigen::Index base = g2; base < g2 + lo; ++base) {
          const Complex a0 = col[base];
          const Complex a1 = col[base + s1];
          const Complex a2 = col[base + s0];
          const Complex a3 = col[base + s0 + s1];
          col[base] = m[0][0] * a0 + m[0][1] * a1 + m[0][2] * a2 + m[0][3] * a3;
          col[base + s1] = m[1][0] * a0 + m[1][1] * a1 + m[1][2] * a2 + m[1][3] * a3;
          col[base + s0] = m[2][0] * a0 + m[2][1] * a1 + m[2][2] * a2 + m[2][3] * a3;
          col[base + s0 + s1] = m[3][0] * a0 + m[3][1] * a1 + m[3][2] * a2 + m[3][3] * a3;
        }
      }
    }
  }

  Complex mc[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) mc[i][j] = std::conj(m[i][j]);
  for (Eigen::Index g1 = 0; g1 < d; g1 += 2 * hi) {
    for (Eigen::Index g2 = g1; g2 < g1 + hi; g2 += 2 * lo) {
      for (Eigen::Index cb = g2; cb < g2 + lo; ++cb) {
        Complex* p0 = data + cb * d;
        Complex* p1 = data + (cb + s1) * d;
        Complex* p2 = data + (cb + s0) * d;
        Complex* p3 = data + (cb + s0 + s1) * d;
        for (Eigen::Index r = 0; r < d; ++r) {
          const Complex a0 = p0[r];
          const Complex a1 = p1[r];
          const Complex a2 = p2[r];
          const Complex a3 = p3[r];
          p0[r] = a0 * mc[0][0] + a1 * mc[0][1] + a2 * mc[0][2] + a3 * mc[0][3];
          p1[r] = a0 * mc[1][0] + a1 * mc[1][1] + a2 * mc[1][2] + a3 * mc[1][3];
          p2[r] = a0 * mc[2][0] + a1 * mc[2][1] + a2 * mc[2][2] + a3 * mc[2][3];
          p3[r] = a0 * mc[3][0] + a1 * mc[3][1] + a2 * mc[3][2] + a3 * mc[3][3];
        }
      }
    }
  }
}

void apply_unitary_dense(ComplexMatrix& rho, int num_qubits, const std::vector<int>& qubits,
                         const ComplexMatrix& u) {
  check_qubits(num_qubits, qubits);
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index L = Eigen::Index{1} << k;
  if (u.rows() != L || u.cols() != L) throw std::invalid_argument("gate dimension mismatch");
  if (k == 1) {
    apply_unitary_1q(rho, num_qubits, qubits[0], u);
    return;
  }
  if (k == 2) {
    apply_unitary_2q(rho, num_qubits, qubits[0], qubits[1], u);
    return;
  }
  if (k > 4) throw std::invalid_argument("dense gates support at most 4 qubits");
  const Eigen::Index d = rho.rows();
  const std::vector<Eigen::Index> offs = local_offsets(num_qubits, qubits);
  Complex* data = rho.data();
  std::vector<Complex> amp(L), res(L);
  // Left factor.
  for (Eigen::Index c = 0; c < d; ++c) {
    Complex* col = data + c * d;
    for_each_base(d, offs, [&](Eigen::Index base) {
      for (Eigen::Index l = 0; l < L; ++l) amp[l] = col[base + offs[l]];
      for (Eigen::Index i = 0; i < L; ++i) {
        Complex acc = 0.0;
        for (Eigen::Index j = 0; j < L; ++j) acc += u(i, j) * amp[j];
        res[i] = acc;
      }
      for (Eigen::Index l = 0; l < L; ++l) col[base + offs[l]] = res[l];
    });
  }
  // Right factor.
  const ComplexMatrix uc = u.conjugate();
  for_each_base(d, offs, [&](Eigen::Index cb) {
    std::vector<Complex*> cols(L);
    for (Eigen::Index l = 0; l < L; ++l) cols[l] = data + (cb + offs[l]) * d;
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index l = 0; l < L; ++l) amp[l] = cols[l][r];
      for (Eigen::Index i = 0; i < L; ++i) {
        Complex acc = 0.0;
        for (Eigen::Index j = 0; j < L; ++j) acc += uc(i, j) * amp[j];
        res[i] = acc;
      }
      for (Eigen::Index l = 0; l < L; ++l) cols[l][r] = res[l];
    }
  });
}

void apply_monomial(ComplexMatrix& rho, int num_qubits, const std::vector<int>& qubits,
                    const std::vector<Eigen::Index>& perm, const std::vector<Complex>& phase) {
  check_qubits(num_qubits, qubits);
  const Eigen::Index d = rho.rows();
  const std::vector<Eigen::Index> offs = local_offsets(num_qubits, qubits);
  const Eigen::Index L = static_cast<Eigen::Index>(offs.size());
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= bit_of(num_qubits, q);

  // Remap table over local patterns: source pattern -> (target offset, phase).
  std::vector<Eigen::Index> tgt(L);
  for (Eigen::Index l = 0; l < L; ++l) tgt[l] = offs[perm[l]];

  // Local pattern of a full index, computed by gathering operand bits.
  const int k = static_cast<int>(qubits.size());
  std::vector<Eigen::Index> bits(k);
  for (int i = 0; i < k; ++i) bits[i] = bit_of(num_qubits, qubits[i]);
  auto local_of = [&](Eigen::Index x) {
    Eigen::Index l = 0;
    for (int i = 0; i < k; ++i) {
      l = (l << 1) | ((x & bits[i]) != 0 ? 1 : 0);
    }
    return l;
  };

  g_scratch.resize(d, d);
  const Complex* src = rho.data();
  Complex* dst = g_scratch.data();
  for (Eigen::Index c = 0; c < d; ++c) {
    const Eigen::Index cl = local_of(c);
    const Eigen::Index cdst = (c & ~mask) | tgt[cl];
    const Complex cph = std::conj(phase[cl]);
    const Complex* scol = src + c * d;
    Complex* dcol = dst + cdst * d;
    for (Eigen::Index r = 0; r < d; ++r) {
      const Eigen::Index rl = local_of(r);
      dcol[(r & ~mask) | tgt[rl]] = phase[rl] * cph * scol[r];
    }
  }
  rho.swap(g_scratch);
}

void accumulate_conjugation(const ComplexMatrix& rho, ComplexMatrix& out, int num_qubits,
                            const std::vector<int>& qubits, const ComplexMatrix& kraus) {
  // The dense kernel arithmetic never requires unitarity, so it also serves
  // for K rho K^dag terms of general channels.
  ComplexMatrix work = rho;
  apply_unitary_dense(work, num_qubits, qubits, kraus);
  out += work;
}

void apply_depolarizing_1q(ComplexMatrix& rho, int num_qubits, int q, double p) {
  if (p == 0.0) return;
  const Eigen::Index d = rho.rows();
  const Eigen::Index s = bit_of(num_qubits, q);
  const double a = 1.0 - p;
  const double b = 0.5 * p;
  Complex* data = rho.data();
  for (Eigen::Index cb = 0; cb < d; cb += 2 * s) {
    for (Eigen::Index c = cb; c < cb + s; ++c) {
      Complex* p0 = data + c * d;        // column with qubit bit 0
      Complex* p1 = data + (c + s) * d;  // column with qubit bit 1
      for (Eigen::Index rb = 0; rb < d; rb += 2 * s) {
        for (Eigen::Index r = rb; r < rb + s; ++r) {
          const Complex d0 = p0[r];
          const Complex d1 = p1[r + s];
          const Complex sum = d0 + d1;
          p0[r] = a * d0 + b * sum;
          p1[r + s] = a * d1 + b * sum;
          p0[r + s] *= a;
          p1[r] *= a;
        }
      }
    }
  }
}

void apply_depolarizing_2q(ComplexMatrix& rho, int num_qubits, int q0, int q1, double p) {
  if (p == 0.0) return;
  const Eigen::Index d = rho.rows();
  const std::vector<Eigen::Index> offs = local_offsets(num_qubits, {q0, q1});
  const double a = 1.0 - p;
  const double b = 0.25 * p;
  Complex* data = rho.data();
  Eigen::Index mask = offs[1] | offs[2];
  for (Eigen::Index cb = 0; cb < d; ++cb) {
    if ((cb & mask) != 0) continue;
    Complex* cols[4];
    for (int l = 0; l < 4; ++l) cols[l] = data + (cb + offs[l]) * d;
    for (Eigen::Index rb = 0; rb < d; ++rb) {
      if ((rb & mask) != 0) continue;
      Complex diag_sum = 0.0;
      for (int l = 0; l < 4; ++l) diag_sum += cols[l][rb + offs[l]];
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          Complex& e = cols[j][rb + offs[i]];
          e = (i == j) ? a * e + b * diag_sum : a * e;
        }
      }
    }
  }
}

void apply_dephasing_set(ComplexMatrix& rho, int num_qubits, const std::vector<int>& qubits,
                         double p) {
  if (p == 0.0 || qubits.empty()) return;
  check_qubits(num_qubits, qubits);
  const Eigen::Index d = rho.rows();
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= bit_of(num_qubits, q);
  double factor_by_count[64];
  factor_by_count[0] = 1.0;
  const double f = 1.0 - 2.0 * p;
  for (size_t k = 1; k <= qubits.size(); ++k) {
    factor_by_count[k] = factor_by_count[k - 1] * f;
  }
  Complex* data = rho.data();
  for (Eigen::Index c = 0; c < d; ++c) {
    Complex* col = data + c * d;
    for (Eigen::Index r = 0; r < d; ++r) {
      const int k = std::popcount(static_cast<std::uint64_t>((r ^ c) & mask));
      if (k != 0) col[r] *= factor_by_count[k];
    }
  }
}

void apply_global_depolarizing_inplace(ComplexMatrix& rho, double delta) {
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("depolarizing rate out of range");
  if (delta == 0.0) return;
  const Eigen::Index d = rho.rows();
  rho *= (1.0 - delta);
  rho.diagonal().array() += delta / static_cast<double>(d);
}

void apply_reset_inplace(ComplexMatrix& rho, int num_qubits, const std::vector<int>& qubits,
                         double r) {
  if (qubits.empty()) return;
  check_qubits(num_qubits, qubits);
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("reset error out of range");
  const Eigen::Index d = rho.rows();
  const int k = static_cast<int>(qubits.size());
  const std::vector<Eigen::Index> offs = local_offsets(num_qubits, qubits);
  const Eigen::Index L = Eigen::Index{1} << k;
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= bit_of(num_qubits, q);

  std::vector<double> weight(L);
  for (Eigen::Index a = 0; a < L; ++a) {
    double w = 1.0;
    for (int i = 0; i < k; ++i) {
      w *= ((a >> (k - 1 - i)) & 1) ? r : 1.0 - r;
    }
    weight[a] = w;
  }

  g_scratch.resize(d, d);
  g_scratch.setZero();
  const Complex* src = rho.data();
  Complex* dst = g_scratch.data();
  // dst[(x|off_a),(y|off_a)] = w_a * sum_z src[(x|off_z),(y|off_z)] over the
  // traced-out patterns z, for every kept pattern pair (x, y).
  for (Eigen::Index y = 0; y < d; ++y) {
    if ((y & mask) != 0) continue;
    for (Eigen::Index x = 0; x < d; ++x) {
      if ((x & mask) != 0) continue;
      Complex sum = 0.0;
      for (Eigen::Index z = 0; z < L; ++z) {
        sum += src[(y + offs[z]) * d + (x + offs[z])];
      }
      for (Eigen::Index a = 0; a < L; ++a) {
        dst[(y + offs[a]) * d + (x + offs[a])] = weight[a] * sum;
      }
    }
  }
  rho.swap(g_scratch);
}

double measure_zero_probability(const ComplexMatrix& rho, int num_qubits, int q) {
  const Eigen::Index d = rho.rows();
  const Eigen::Index s = bit_of(num_qubits, q);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if ((i & s) == 0) sum += rho(i, i).real();
  }
  // Round-off can push the sum a few ulp outside [0, 1]; clamp that dust but
  // refuse anything that signals an invalid state.
  if (sum < -1e-9 || sum > 1.0 + 1e-9) {
    throw std::runtime_error("measured probability far outside [0, 1]");
  }
  return std::clamp(sum, 0.0, 1.0);
}

void sv_apply_unitary(ComplexVector& psi, int num_qubits, const std::vector<int>& qubits,
                      const ComplexMatrix& u) {
  check_qubits(num_qubits, qubits);
  const Eigen::Index dim = psi.size();
  const std::vector<Eigen::Index> offs = local_offsets(num_qubits, qubits);
  const Eigen::Index L = static_cast<Eigen::Index>(offs.size());
  if (u.rows() != L) throw std::invalid_argument("gate dimension mismatch");
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= bit_of(num_qubits, q);
  std::vector<Complex> amp(L), res(L);
  Complex* data = psi.data();
  for (Eigen::Index base = 0; base < dim; ++base) {
    if ((base & mask) != 0) continue;
    for (Eigen::Index l = 0; l < L; ++l) amp[l] = data[base + offs[l]];
    for (Eigen::Index i = 0; i < L; ++i) {
      Complex acc = 0.0;
      for (Eigen::Index j = 0; j < L; ++j) acc += u(i, j) * amp[j];
      res[i] = acc;
    }
    for (Eigen::Index l = 0; l < L; ++l) data[base + offs[l]] = res[l];
  }
}

void sv_apply_monomial(ComplexVector& psi, int num_qubits, const std::vector<int>& qubits,
                       const std::vector<Eigen::Index>& perm, const std::vector<Complex>& phase) {
  check_qubits(num_qubits, qubits);
  const Eigen::Index dim = psi.size();
  const std::vector<Eigen::Index> offs = local_offsets(num_qubits, qubits);
  const Eigen::Index L = static_cast<Eigen::Index>(offs.size());
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= bit_of(num_qubits, q);
  ComplexVector out(dim);
  const int k = static_cast<int>(qubits.size());
  std::vector<Eigen::Index> bits(k);
  for (int i = 0; i < k; ++i) bits[i] = bit_of(num_qubits, qubits[i]);
  for (Eigen::Index x = 0; x < dim; ++x) {
    Eigen::Index l = 0;
    for (int i = 0; i < k; ++i) l = (l << 1) | ((x & bits[i]) != 0 ? 1 : 0);
    out[(x & ~mask) | offs[perm[l]]] = phase[l] * psi[x];
  }
  psi.swap(out);
}

bool monomial_form(const ComplexMatrix& u, std::vector<Eigen::Index>& perm,
                   std::vector<Complex>& phase) {
  const Eigen::Index L = u.rows();
  perm.assign(L, -1);
  phase.assign(L, 0.0);
  std::vector<bool> row_used(L, false);
  for (Eigen::Index c = 0; c < L; ++c) {
    int nonzero = 0;
    for (Eigen::Index r = 0; r < L; ++r) {
      if (std::abs(u(r, c)) > 1e-12) {
        ++nonzero;
        perm[c] = r;
        phase[c] = u(r, c);
      }
    }
    if (nonzero != 1 || row_used[perm[c]]) return false;
    row_used[perm[c]] = true;
  }
  return true;
}

}  // namespace reqsim
