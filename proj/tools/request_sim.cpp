#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "reqsim/experiments.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out;
  int workers = -1;
  long long seed = -1;
  bool out_set = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out, "output path (CSV file, or directory for rqc-gen)");
  cmd->add_option("--workers", opts.workers, "worker thread count (0 = hardware)");
  cmd->add_option("--seed", opts.seed, "override the configured base seed");
}

int run_kind(const std::string& kind, const CommonOptions& opts) {
  std::ifstream in(opts.config_path);
  if (!in) {
    std::cerr << "error: cannot read config " << opts.config_path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  reqsim::ExperimentConfig cfg;
  try {
    cfg = reqsim::ExperimentConfig::from_json_text(buffer.str(), kind);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (!opts.out.empty()) cfg.out = opts.out;
  if (opts.workers >= 0) cfg.workers = opts.workers;
  if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);

  reqsim::ExperimentOutcome outcome;
  try {
    if (kind == "rqc-gen") {
      outcome = reqsim::run_rqc_gen(cfg);
    } else {
      std::ostringstream csv;
      if (kind == "suppress") {
        outcome = reqsim::run_suppression(cfg, csv);
      } else if (kind == "compare") {
        outcome = reqsim::run_compare(cfg, csv);
      } else if (kind == "mopt") {
        outcome = reqsim::run_mopt(cfg, csv);
      } else {
        outcome = reqsim::run_scaling(cfg, csv);
      }
      if (cfg.out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) {
          std::cerr << "error: cannot open output " << cfg.out << "\n";
          return 2;
        }
        out << csv.str();
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  for (const std::string& failure : outcome.failures) {
    std::cerr << "instance failed: " << failure << "\n";
  }
  return outcome.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "request-sim: density-matrix simulator and analysis toolkit for "
      "copy-based quantum error suppression (virtual distillation and its "
      "qubit-efficient reset-based variant)"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"suppress", "suppression sweep with noise restricted to state preparation"},
      {"compare", "REQUEST vs. many-register distillation under full noise"},
      {"mopt", "copy-count selection via near-Clifford proxy circuits"},
      {"scaling", "closed-form shot-cost scaling sweep"},
      {"rqc-gen", "generate random-circuit instances as circuit text files"},
  };
  std::vector<CommonOptions> opts(kinds.size());
  std::vector<CLI::App*> cmds;
  for (size_t i = 0; i < kinds.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(kinds[i].first, kinds[i].second);
    add_common(cmd, opts[i]);
    cmds.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < kinds.size(); ++i) {
    if (cmds[i]->parsed()) return run_kind(kinds[i].first, opts[i]);
  }
  return 2;
}
