#include "reqsim/experiments.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "reqsim/rng.hpp"
#include "reqsim/rqc.hpp"
#include "reqsim/simulator.hpp"

namespace reqsim {

namespace {

using nlohmann::json;

std::vector<int> parse_int_list(const json& j, const char* what) {
  std::vector<int> out;
  if (j.is_number_integer()) {
    out.push_back(j.get<int>());
  } else if (j.is_array()) {
    for (const json& v : j) out.push_back(v.get<int>());
  } else if (j.is_object() && j.contains("min") && j.contains("max")) {
    const int lo = j.at("min").get<int>();
    const int hi = j.at("max").get<int>();
    if (hi < lo) throw std::invalid_argument(std::string(what) + ": max below min");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  } else {
    throw std::invalid_argument(std::string(what) +
                                " must be an integer, an array, or {min, max}");
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + " must be nonempty");
  return out;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw std::invalid_argument("unknown config key '" + it.key() + "' in " + where);
    }
  }
}

NoiseModel parse_noise(const json& j) {
  reject_unknown_keys(j,
                      {"mode", "eps1", "eps2", "idle_dephasing", "idle_depolarizing",
                       "reset_error", "readout_flip", "layer_depolarizing"},
                      "noise");
  NoiseModel n = NoiseModel::local_default();
  if (j.contains("mode")) n.mode = noise_mode_from_name(j.at("mode").get<std::string>());
  if (j.contains("eps1")) n.eps1 = j.at("eps1").get<double>();
  if (j.contains("eps2")) n.eps2 = j.at("eps2").get<double>();
  if (j.contains("idle_dephasing")) n.idle_dephasing = j.at("idle_dephasing").get<double>();
  if (j.contains("idle_depolarizing")) {
    n.idle_depolarizing = j.at("idle_depolarizing").get<double>();
  }
  if (j.contains("reset_error")) n.reset_error = j.at("reset_error").get<double>();
  if (j.contains("readout_flip")) n.readout_flip = j.at("readout_flip").get<double>();
  if (j.contains("layer_depolarizing")) {
    n.layer_depolarizing = j.at("layer_depolarizing").get<double>();
  }
  n.validate();
  return n;
}

SweepSpec parse_sweep(const json& j, const std::vector<int>& fallback_n) {
  reject_unknown_keys(j, {"mode", "N", "rates", "epsilon", "p", "M", "ancilla_correction"},
                      "scaling");
  SweepSpec s;
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "constant_delta") {
      s.mode = SweepMode::CONSTANT_DELTA;
    } else if (mode == "saturating_delta_q") {
      s.mode = SweepMode::SATURATING_DELTA_Q;
    } else {
      throw std::invalid_argument("scaling mode must be constant_delta or saturating_delta_q");
    }
  }
  s.n_values = j.contains("N") ? parse_int_list(j.at("N"), "scaling.N") : fallback_n;
  if (j.contains("rates")) {
    for (const json& v : j.at("rates")) s.rates.push_back(v.get<double>());
  }
  if (j.contains("epsilon")) s.epsilon = j.at("epsilon").get<double>();
  if (j.contains("p")) s.fixed_p = j.at("p").get<int>();
  if (j.contains("M")) s.fixed_m = j.at("M").get<long long>();
  if (j.contains("ancilla_correction")) {
    s.ancilla_correction = j.at("ancilla_correction").get<bool>();
  }
  return s;
}

SubstitutionParams parse_substitution(const json& j) {
  reject_unknown_keys(j, {"sigma_width", "n_nonclifford", "samples_per_circuit"},
                      "substitution");
  SubstitutionParams p;
  if (j.contains("sigma_width")) p.sigma_width = j.at("sigma_width").get<double>();
  if (j.contains("n_nonclifford")) p.n_nonclifford = j.at("n_nonclifford").get<int>();
  if (j.contains("samples_per_circuit")) {
    p.samples_per_circuit = j.at("samples_per_circuit").get<int>();
  }
  return p;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::string& kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  reject_unknown_keys(j,
                      {"experiment", "N", "p", "M", "instances", "seed", "noise", "observable",
                       "scope", "shots", "out", "workers", "substitution", "scaling"},
                      "config");
  ExperimentConfig cfg;
  cfg.kind = kind;
  if (j.contains("experiment")) {
    const std::string declared = j.at("experiment").get<std::string>();
    if (declared != kind) {
      throw std::invalid_argument("config is for experiment '" + declared +
                                  "' but the subcommand is '" + kind + "'");
    }
  }
  if (j.contains("N")) cfg.n_values = parse_int_list(j.at("N"), "N");
  if (j.contains("p")) cfg.p_values = parse_int_list(j.at("p"), "p");
  if (j.contains("M")) cfg.m_values = parse_int_list(j.at("M"), "M");
  if (j.contains("instances")) cfg.instances = j.at("instances").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("noise")) cfg.noise = parse_noise(j.at("noise"));
  if (j.contains("observable")) {
    const json& o = j.at("observable");
    reject_unknown_keys(o, {"pauli", "qubit"}, "observable");
    if (o.contains("pauli")) {
      const std::string p = o.at("pauli").get<std::string>();
      if (p.size() != 1) throw std::invalid_argument("observable.pauli must be one letter");
      cfg.observable_pauli = p[0];
    }
    if (o.contains("qubit")) cfg.observable_qubit = o.at("qubit").get<int>();
  }
  if (j.contains("scope")) {
    const std::string s = j.at("scope").get<std::string>();
    if (s == "full") {
      cfg.scope = NoiseScope::FULL;
    } else if (s == "prep_only") {
      cfg.scope = NoiseScope::STATE_PREP_ONLY;
    } else {
      throw std::invalid_argument("scope must be 'full' or 'prep_only'");
    }
  }
  if (j.contains("shots")) cfg.shots = j.at("shots").get<long>();
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  if (j.contains("substitution")) cfg.substitution = parse_substitution(j.at("substitution"));
  cfg.sweep = parse_sweep(j.contains("scaling") ? j.at("scaling") : json::object(),
                          cfg.n_values);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (kind != "suppress" && kind != "compare" && kind != "mopt" && kind != "scaling" &&
      kind != "rqc-gen") {
    throw std::invalid_argument("unknown experiment kind: " + kind);
  }
  if (kind == "scaling") {
    if (sweep.n_values.empty() || sweep.rates.empty()) {
      throw std::invalid_argument("scaling needs nonempty N and rates grids");
    }
    for (int n : sweep.n_values) {
      if (n < 1) throw std::invalid_argument("scaling N values must be positive");
    }
    return;
  }
  if (instances < 1) throw std::invalid_argument("instance count must be positive");
  for (int n : n_values) {
    if (n < 2) throw std::invalid_argument("circuit sizes need N >= 2");
    if (observable_qubit < 0 || observable_qubit >= n) {
      throw std::invalid_argument("observable qubit out of range for configured N");
    }
  }
  for (int p : p_values) {
    if (p < 1) throw std::invalid_argument("layer counts must be positive");
  }
  if (kind != "rqc-gen") {
    for (int m : m_values) {
      if (m < 1) throw std::invalid_argument("copy counts must be >= 1");
    }
  }
  if (shots < 0) throw std::invalid_argument("shots must be nonnegative");
  const char P = observable_pauli;
  if (P != 'X' && P != 'Y' && P != 'Z') {
    throw std::invalid_argument("observable must be a Pauli letter X, Y or Z");
  }
  noise.validate();
}

PauliProduct ExperimentConfig::observable(int n) const {
  return PauliProduct::single(observable_pauli, observable_qubit, n);
}

std::uint64_t ExperimentConfig::instance_seed(int n, int p, int instance) const {
  return Rng::derive(Rng::derive(Rng::derive(seed, static_cast<std::uint64_t>(n)),
                                 static_cast<std::uint64_t>(p)),
                     static_cast<std::uint64_t>(instance));
}

int ExperimentConfig::effective_workers() const {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<std::string> parallel_run(int count, int workers,
                                      const std::function<std::string(int)>& fn) {
  std::vector<std::string> errors(count);
  if (count == 0) return {};
  const int nthreads = std::max(1, std::min(workers, count));
  if (nthreads == 1) {
    for (int i = 0; i < count; ++i) {
      try {
        errors[i] = fn(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  } else {
    std::atomic<int> next{0};
    auto work = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          errors[i] = fn(i);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  std::vector<std::string> failures;
  for (const std::string& e : errors) {
    if (!e.empty()) failures.push_back(e);
  }
  return failures;
}

namespace {

struct GridPoint {
  int n, p, instance;
  std::uint64_t seed;
};

std::vector<GridPoint> make_grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> grid;
  for (int n : cfg.n_values) {
    for (int p : cfg.p_values) {
      for (int i = 0; i < cfg.instances; ++i) {
        grid.push_back({n, p, i, cfg.instance_seed(n, p, i)});
      }
    }
  }
  return grid;
}

MitigationResult aggregate(const std::vector<const MitigationResult*>& rows, bool maximum) {
  MitigationResult out;
  out.seed = 0;
  out.num_qubits = rows.front()->num_qubits;
  out.ansatz_layers = rows.front()->ansatz_layers;
  out.copies = rows.front()->copies;
  out.method = rows.front()->method;
  auto fold = [&](auto getter) {
    double acc = maximum ? -1e300 : 0.0;
    for (const MitigationResult* r : rows) {
      const double v = getter(*r);
      acc = maximum ? std::max(acc, v) : acc + v;
    }
    return maximum ? acc : acc / static_cast<double>(rows.size());
  };
  out.mitigated = fold([](const MitigationResult& r) { return r.mitigated; });
  out.exact = fold([](const MitigationResult& r) { return r.exact; });
  out.psi1_value = fold([](const MitigationResult& r) { return r.psi1_value; });
  out.oracle = fold([](const MitigationResult& r) { return r.oracle; });
  out.prob0 = fold([](const MitigationResult& r) { return r.prob0; });
  out.prob0_id = fold([](const MitigationResult& r) { return r.prob0_id; });
  out.abs_err_exact = fold([](const MitigationResult& r) { return r.abs_err_exact; });
  out.abs_err_psi1 = fold([](const MitigationResult& r) { return r.abs_err_psi1; });
  return out;
}

// Emits per-instance rows followed by per-(N, p, M[, method]) aggregate rows.
void write_mitigation_csv(std::ostream& csv, const ExperimentConfig& cfg,
                          const std::vector<GridPoint>& grid,
                          const std::vector<std::vector<MitigationResult>>& rows,
                          const std::vector<std::string>& method_labels, bool with_max) {
  csv << "stat," << MitigationResult::csv_header() << "\n";
  for (size_t g = 0; g < grid.size(); ++g) {
    for (size_t k = 0; k < rows[g].size(); ++k) {
      csv << "row," << rows[g][k].csv_row(method_labels[k % method_labels.size()]) << "\n";
    }
  }
  for (int n : cfg.n_values) {
    for (int p : cfg.p_values) {
      for (size_t li = 0; li < method_labels.size(); ++li) {
        for (size_t mi = 0; mi < cfg.m_values.size(); ++mi) {
          std::vector<const MitigationResult*> group;
          for (size_t g = 0; g < grid.size(); ++g) {
            if (grid[g].n != n || grid[g].p != p || rows[g].empty()) continue;
            group.push_back(&rows[g][mi * method_labels.size() + li]);
          }
          if (group.empty()) continue;
          csv << "mean," << aggregate(group, false).csv_row(method_labels[li]) << "\n";
          if (with_max) {
            csv << "max," << aggregate(group, true).csv_row(method_labels[li]) << "\n";
          }
        }
      }
    }
  }
}

}  // namespace

ExperimentOutcome run_suppression(const ExperimentConfig& cfg, std::ostream& csv) {
  const std::vector<GridPoint> grid = make_grid(cfg);
  std::vector<std::vector<MitigationResult>> rows(grid.size());
  auto task = [&](int i) -> std::string {
    const GridPoint& g = grid[i];
    try {
      const Circuit prep = generate_rqc(g.n, g.p, g.seed);
      for (int m : cfg.m_values) {
        MitigationPlan plan;
        plan.prep = prep;
        plan.observable = cfg.observable(g.n);
        plan.copies = m;
        plan.method = MitigationMethod::REQUEST;
        plan.noise = cfg.noise;
        plan.noise_scope = NoiseScope::STATE_PREP_ONLY;
        MitigationResult r = run_mitigation(plan, ShotPolicy{cfg.shots, g.seed});
        r.seed = g.seed;
        r.ansatz_layers = g.p;
        rows[i].push_back(r);
      }
      return "";
    } catch (const std::exception& e) {
      rows[i].clear();
      return "seed " + std::to_string(g.seed) + ": " + e.what();
    }
  };
  ExperimentOutcome outcome;
  outcome.failures = parallel_run(static_cast<int>(grid.size()), cfg.effective_workers(), task);
  csv << "# request-sim suppress csv v1\n";
  write_mitigation_csv(csv, cfg, grid, rows, {"REQUEST"}, /*with_max=*/false);
  return outcome;
}

ExperimentOutcome run_compare(const ExperimentConfig& cfg, std::ostream& csv) {
  const std::vector<GridPoint> grid = make_grid(cfg);
  std::vector<std::vector<MitigationResult>> rows(grid.size());
  const std::vector<std::string> labels = {"REQUEST", "VD"};
  auto task = [&](int i) -> std::string {
    const GridPoint& g = grid[i];
    try {
      const Circuit prep = generate_rqc(g.n, g.p, g.seed);
      for (int m : cfg.m_values) {
        for (MitigationMethod method : {MitigationMethod::REQUEST, MitigationMethod::VD}) {
          MitigationPlan plan;
          plan.prep = prep;
          plan.observable = cfg.observable(g.n);
          plan.copies = m;
          plan.method = method;
          plan.noise = cfg.noise;
          plan.noise_scope = cfg.scope;
          MitigationResult r = run_mitigation(plan, ShotPolicy{cfg.shots, g.seed});
          r.seed = g.seed;
          r.ansatz_layers = g.p;
          rows[i].push_back(r);
        }
      }
      return "";
    } catch (const std::exception& e) {
      rows[i].clear();
      return "seed " + std::to_string(g.seed) + ": " + e.what();
    }
  };
  ExperimentOutcome outcome;
  outcome.failures = parallel_run(static_cast<int>(grid.size()), cfg.effective_workers(), task);
  csv << "# request-sim compare csv v1\n";
  write_mitigation_csv(csv, cfg, grid, rows, labels, /*with_max=*/true);
  return outcome;
}

ExperimentOutcome run_mopt(const ExperimentConfig& cfg, std::ostream& csv) {
  const std::vector<GridPoint> grid = make_grid(cfg);
  std::vector<MoptEstimate> estimates(grid.size());
  auto task = [&](int i) -> std::string {
    const GridPoint& g = grid[i];
    try {
      const Circuit prep = generate_rqc(g.n, g.p, g.seed);
      estimates[i] = estimate_m_opt(prep, cfg.observable(g.n), cfg.noise, cfg.m_values,
                                    cfg.substitution, g.seed, cfg.scope);
      if (estimates[i].degenerate) {
        return "seed " + std::to_string(g.seed) + ": all proxies degenerate";
      }
      return "";
    } catch (const std::exception& e) {
      return "seed " + std::to_string(g.seed) + ": " + e.what();
    }
  };
  ExperimentOutcome outcome;
  outcome.failures = parallel_run(static_cast<int>(grid.size()), cfg.effective_workers(), task);
  csv << "# request-sim mopt csv v1\n";
  csv << "N,p,seed,M,proxy_total_error,proxies_used,m_opt\n";
  for (size_t g = 0; g < grid.size(); ++g) {
    const MoptEstimate& est = estimates[g];
    if (est.m_values.empty()) continue;
    for (size_t mi = 0; mi < est.m_values.size(); ++mi) {
      csv << grid[g].n << ',' << grid[g].p << ',' << grid[g].seed << ',' << est.m_values[mi]
          << ',' << fmt(est.proxy_total_error[mi]) << ',' << est.proxies_used << ','
          << est.m_opt << "\n";
    }
  }
  return outcome;
}

ExperimentOutcome run_scaling(const ExperimentConfig& cfg, std::ostream& csv) {
  const std::vector<ScalingRow> rows = scaling_sweep(cfg.sweep);
  csv << "# request-sim scaling csv v1\n";
  csv << scaling_csv_header() << "\n";
  for (const ScalingRow& row : rows) csv << scaling_csv_row(row) << "\n";
  return {};
}

ExperimentOutcome run_rqc_gen(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path dir = cfg.out.empty() ? fs::path("rqc_circuits") : fs::path(cfg.out);
  fs::create_directories(dir);
  ExperimentOutcome outcome;
  for (int n : cfg.n_values) {
    for (int p : cfg.p_values) {
      for (int i = 0; i < cfg.instances; ++i) {
        const std::uint64_t seed = cfg.instance_seed(n, p, i);
        try {
          const Circuit c = generate_rqc(n, p, seed);
          const fs::path file = dir / ("rqc_n" + std::to_string(n) + "_p" + std::to_string(p) +
                                       "_i" + std::to_string(i) + ".txt");
          std::ofstream out(file, std::ios::binary);
          if (!out) throw std::runtime_error("cannot open " + file.string());
          out << serialize_circuit(c);
        } catch (const std::exception& e) {
          outcome.failures.push_back("seed " + std::to_string(seed) + ": " + e.what());
        }
      }
    }
  }
  return outcome;
}

}  // namespace reqsim
