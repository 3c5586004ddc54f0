#include "reqsim/shot_scaling.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace reqsim {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

// ln(2^n - 1) without forming 2^n.
double log_2n_minus_1(int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  return n * kLn2 + std::log1p(-std::exp2(static_cast<double>(-n)));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double variance_of_ratio(double prob0, double prob0_id, double ns, double ns_id) {
  check_prob(prob0, "prob0");
  check_prob(prob0_id, "prob0_id");
  if (ns < 1.0 || ns_id < 1.0) throw std::invalid_argument("shot counts must be >= 1");
  const double denom = 2.0 * prob0_id - 1.0;
  if (denom == 0.0) throw std::invalid_argument("variance_of_ratio: singular denominator");
  const double var0 = prob0 * (1.0 - prob0) / ns;
  const double var0_id = prob0_id * (1.0 - prob0_id) / ns_id;
  const double d2 = denom * denom;
  const double num = 2.0 * prob0 - 1.0;
  return var0 * 4.0 / d2 + var0_id * 4.0 * num * num / (d2 * d2);
}

double shots_required(double prob0, double prob0_id, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  // variance_of_ratio at one shot per estimator scales inversely with shots.
  return variance_of_ratio(prob0, prob0_id, 1.0, 1.0) / (epsilon * epsilon);
}

double shots_required_trace(double tr_x, double tr, double epsilon) {
  if (tr <= 0.0) throw std::invalid_argument("trace must be positive");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const double x2 = tr_x * tr_x;
  const double t2 = tr * tr;
  return (x2 + t2 - 2.0 * x2 * t2) / (t2 * t2 * epsilon * epsilon);
}

double shots_upper_bound(double tr, double epsilon) {
  if (!(tr > 0.0 && tr <= 1.0)) throw std::invalid_argument("trace must lie in (0, 1]");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  return 2.0 / (tr * tr * epsilon * epsilon);
}

double shots_upper_bound(double tr, double epsilon, double delta, int p) {
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0, 1)");
  if (p < 0) throw std::invalid_argument("layer count must be nonnegative");
  return shots_upper_bound(tr, epsilon) * std::pow(1.0 - delta, -2.0 * p);
}

double trace_lower_bound(double p1, int n, int m) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  if (m < 1) throw std::invalid_argument("copy count must be positive");
  const double floor_p1 = std::exp2(static_cast<double>(-n));
  if (!(p1 >= floor_p1 && p1 <= 1.0)) {
    throw std::invalid_argument("p1 must lie in [2^-N, 1]");
  }
  const double head = std::pow(p1, m);
  if (p1 >= 1.0) return head;
  const double log_tail = m * std::log1p(-p1) - (m - 1) * log_2n_minus_1(n);
  return head + std::exp(log_tail);
}

std::vector<double> gd_spectrum(double p1, int n) {
  if (n < 1 || n > 24) throw std::invalid_argument("gd_spectrum supports 1..24 qubits");
  const double floor_p1 = std::exp2(static_cast<double>(-n));
  if (!(p1 >= floor_p1 && p1 <= 1.0)) {
    throw std::invalid_argument("p1 must lie in [2^-N, 1]");
  }
  const long long d = 1LL << n;
  std::vector<double> spec(static_cast<size_t>(d), (1.0 - p1) / static_cast<double>(d - 1));
  spec[0] = p1;
  return spec;
}

namespace {

void check_gd_args(int n, int p, double delta) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  if (p < 1) throw std::invalid_argument("layer count must be positive");
  check_prob(delta, "delta");
}

}  // namespace

double gd_trace(int n, int p, int m, double delta) {
  check_gd_args(n, p, delta);
  if (m < 1) throw std::invalid_argument("copy count must be positive");
  const double q = std::pow(1.0 - delta, p);
  if (q == 1.0) return 1.0;
  const double inv2n = std::exp2(static_cast<double>(-n));
  const double a = q + (1.0 - q) * inv2n;
  const double head = std::pow(a, m);
  const double b = (1.0 - q) * inv2n;
  // Direct evaluation when the tail stays in double range; log space otherwise
  // (the prefactor 2^N - 1 can rescue an underflowing power).
  if (n <= 900 && m * std::log(b) > -690.0) {
    return head + (std::exp2(static_cast<double>(n)) - 1.0) * std::pow(b, m);
  }
  const double log_tail = log_2n_minus_1(n) + m * (std::log1p(-q) - n * kLn2);
  return head + std::exp(log_tail);
}

double gd_trace_log10(int n, int p, long long m, double delta) {
  check_gd_args(n, p, delta);
  if (m < 1) throw std::invalid_argument("copy count must be positive");
  const double q = std::pow(1.0 - delta, p);
  if (q == 1.0) return 0.0;
  const double inv2n = std::exp2(static_cast<double>(-n));
  const double a = q + (1.0 - q) * inv2n;
  const double l1 = m * std::log(a);
  const double l2 = log_2n_minus_1(n) + m * (std::log1p(-q) - n * kLn2);
  const double hi = std::max(l1, l2);
  const double lo = std::min(l1, l2);
  return (hi + std::log1p(std::exp(lo - hi))) / std::log(10.0);
}

long long copies_required_from_spectrum(double p1, double p2, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  if (!(p2 > 0.0 && p2 < p1 && p1 <= 1.0)) {
    throw std::invalid_argument("need 0 < p2 < p1 <= 1");
  }
  if (p1 >= 1.0) return 1;
  const double numerator = kLn2 + std::log((1.0 - p1) / p2) - std::log(epsilon);
  const double denominator = std::log(p1 / p2);
  const long long m = static_cast<long long>(std::ceil(numerator / denominator));
  return std::max(1LL, m);
}

long long gd_copies_required(int n, int p, double delta, double epsilon) {
  check_gd_args(n, p, delta);
  if (delta == 0.0 || delta == 1.0) {
    throw std::invalid_argument("gd_copies_required is undefined at delta = 0 or 1");
  }
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const double q = std::pow(1.0 - delta, p);
  // ln(2^{N+1} - 2) = ln 2 + ln(2^N - 1).
  const double numerator = kLn2 + log_2n_minus_1(n) - std::log(epsilon);
  // ln(2^N q / (1-q) + 1), evaluated in log space when the argument is large.
  const double lx = n * kLn2 + std::log(q) - std::log1p(-q);
  const double denominator = lx > 36.0 ? lx : std::log1p(std::exp(lx));
  const long long m = static_cast<long long>(std::ceil(numerator / denominator));
  return std::max(1LL, m);
}

double layer_error_rate(int n, double delta_q) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  if (delta_q < 0.0) throw std::invalid_argument("delta_q must be nonnegative");
  return -std::expm1(-static_cast<double>(n) * delta_q);
}

double per_gate_layer_error_rate(double delta_g) {
  check_prob(delta_g, "delta_g");
  return delta_g;
}

std::vector<ScalingRow> scaling_sweep(const SweepSpec& spec) {
  if (spec.n_values.empty() || spec.rates.empty()) {
    throw std::invalid_argument("scaling sweep needs nonempty grids");
  }
  if (spec.epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  std::vector<ScalingRow> rows;
  for (int n : spec.n_values) {
    const int p = spec.fixed_p > 0 ? spec.fixed_p : n;
    for (double rate : spec.rates) {
      ScalingRow row;
      row.n = n;
      row.p = p;
      row.delta = spec.mode == SweepMode::CONSTANT_DELTA ? rate : layer_error_rate(n, rate);
      if (row.delta == 0.0) {
        row.m = spec.fixed_m > 0 ? spec.fixed_m : 1;
        row.trace = 1.0;
        row.log10_trace = 0.0;
      } else {
        row.m = spec.fixed_m > 0 ? spec.fixed_m
                                 : gd_copies_required(n, p, row.delta, spec.epsilon);
        row.log10_trace = gd_trace_log10(n, p, row.m, row.delta);
        row.trace = row.m <= static_cast<long long>(INT32_MAX)
                        ? gd_trace(n, p, static_cast<int>(row.m), row.delta)
                        : std::pow(10.0, row.log10_trace);
      }
      row.log10_ns_max =
          std::log10(2.0) - 2.0 * row.log10_trace - 2.0 * std::log10(spec.epsilon);
      if (spec.ancilla_correction) {
        row.log10_ns_max -= 2.0 * p * std::log10(1.0 - row.delta);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string scaling_csv_header() { return "N,p,delta,M,trace,log10_NS_max"; }

std::string scaling_csv_row(const ScalingRow& row) {
  std::string out;
  out += std::to_string(row.n);
  out += ',' + std::to_string(row.p);
  out += ',' + fmt(row.delta);
  out += ',' + std::to_string(row.m);
  out += ',' + fmt(row.trace);
  out += ',' + fmt(row.log10_ns_max);
  return out;
}

}  // namespace reqsim
