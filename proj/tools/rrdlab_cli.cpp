// Command-line front end: run experiments, sample digraphs, check broad
// connectivity, count regular 0-1 matrices.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rrdlab/connectivity.hpp"
#include "rrdlab/error.hpp"
#include "rrdlab/harness.hpp"
#include "rrdlab/rrd_sampler.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;

int cmd_run(const std::string& config_path, const std::vector<std::pair<std::string, std::string>>& overrides) {
  auto cfg = rrdlab::load_config(config_path);
  for (const auto& [key, value] : overrides) rrdlab::apply_override(cfg, key, value);
  const auto rec = rrdlab::run(cfg);
  std::cout << "experiment " << rrdlab::to_string(cfg.experiment) << ": " << rec.trials << " trials, " << rec.failures
            << " failed, " << rec.wall_clock_seconds << " s\n";
  for (const auto& p : rec.outputs) std::cout << "  wrote " << p.string() << '\n';
  std::cout << rec.summary.dump() << '\n';
  if (rec.exit_code() != 0) std::cerr << "error: numerical failure budget exceeded\n";
  return rec.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rrdlab: spectra of random regular digraphs"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
  std::string config_path;
  run_cmd->add_option("config", config_path, "Config file (key = value lines)")->required()->check(CLI::ExistingFile);
  std::optional<std::string> o_n, o_p, o_d, o_zre, o_zim, o_trials, o_seed, o_exp, o_out, o_workers;
  run_cmd->add_option("--n", o_n, "Matrix size");
  run_cmd->add_option("--p", o_p, "Density p (d = floor(p n))");
  run_cmd->add_option("--d", o_d, "Explicit degree");
  run_cmd->add_option("--z-re", o_zre, "Real part of the shift z");
  run_cmd->add_option("--z-im", o_zim, "Imaginary part of the shift z");
  run_cmd->add_option("--trials", o_trials, "Number of trials");
  run_cmd->add_option("--seed", o_seed, "Master seed");
  run_cmd->add_option("--experiment", o_exp, "Experiment name");
  run_cmd->add_option("--out", o_out, "Output directory");
  run_cmd->add_option("--workers", o_workers, "Worker threads (0 = all cores)");
  std::vector<std::string> sets;
  run_cmd->add_option("--set", sets, "Extra key=value override (repeatable)");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample one regular digraph and print its edge list");
  int s_n = 0, s_d = 0;
  std::string s_method = "switch";
  std::optional<std::uint64_t> s_burn;
  std::uint64_t s_rejections = 1000;
  std::uint64_t s_seed = 0;
  std::string s_out;
  sample_cmd->add_option("--n", s_n, "Vertex count")->required();
  sample_cmd->add_option("--d", s_d, "Degree")->required();
  sample_cmd->add_option("--method", s_method, "switch | permutation")->check(CLI::IsMember({"switch", "permutation"}));
  sample_cmd->add_option("--burn-in", s_burn, "Switch-chain steps (default 20 n d ceil(ln nd))");
  sample_cmd->add_option("--max-rejections", s_rejections, "Permutation-sum attempts");
  sample_cmd->add_option("--seed", s_seed, "Seed");
  sample_cmd->add_option("--out", s_out, "Output file (default stdout)");

  // verify-broad
  auto* vb_cmd = app.add_subcommand("verify-broad", "Check broad connectivity of an edge-list digraph");
  std::string vb_input;
  double vb_h = 1.0, vb_delta = 0.25, vb_nu = 0.0625;
  std::string vb_mode = "randomized";
  int vb_trials = 1000;
  std::uint64_t vb_seed = 0;
  vb_cmd->add_option("--input", vb_input, "Edge-list file")->required()->check(CLI::ExistingFile);
  vb_cmd->add_option("--h-cut", vb_h, "Threshold h in (0,1]");
  vb_cmd->add_option("--delta", vb_delta, "delta in (0,1)");
  vb_cmd->add_option("--nu", vb_nu, "nu in (0,1)");
  vb_cmd->add_option("--mode", vb_mode, "exact | randomized")->check(CLI::IsMember({"exact", "randomized"}));
  vb_cmd->add_option("--trials", vb_trials, "Random column sets (randomized mode)");
  vb_cmd->add_option("--seed", vb_seed, "Seed (randomized mode)");

  // count
  auto* count_cmd = app.add_subcommand("count", "Exact number of n x n 0-1 matrices with all line sums d");
  int c_n = 0, c_d = 0;
  count_cmd->add_option("--n", c_n, "Size (<= 8)")->required();
  count_cmd->add_option("--d", c_d, "Line sum")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) {
      std::vector<std::pair<std::string, std::string>> overrides;
      auto add = [&](const char* key, const std::optional<std::string>& v) {
        if (v) overrides.emplace_back(key, *v);
      };
      add("experiment", o_exp);
      add("n", o_n);
      add("p", o_p);
      add("d", o_d);
      add("z_re", o_zre);
      add("z_im", o_zim);
      add("trials", o_trials);
      add("seed", o_seed);
      add("output_dir", o_out);
      add("workers", o_workers);
      for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw rrdlab::ConfigError("--set expects key=value, got '" + kv + "'");
        overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
      }
      return cmd_run(config_path, overrides);
    }
    if (*sample_cmd) {
      rrdlab::SamplerMethod method = rrdlab::SwitchChain{s_burn};
      if (s_method == "permutation") method = rrdlab::PermutationSum{s_rejections};
      const auto g = rrdlab::sample_rrd(s_n, s_d, method, s_seed);
      if (s_out.empty()) {
        rrdlab::write_edge_list(std::cout, g);
      } else {
        std::ofstream f(s_out);
        if (!f) throw rrdlab::ConfigError("cannot write " + s_out);
        rrdlab::write_edge_list(f, g);
      }
      return kExitOk;
    }
    if (*vb_cmd) {
      std::ifstream in(vb_input);
      const auto g = rrdlab::read_edge_list(in);
      const rrdlab::BroadConnectivityParams params{vb_h, vb_delta, vb_nu};
      rrdlab::BroadScanMode mode = rrdlab::ExactScan{};
      if (vb_mode == "randomized") mode = rrdlab::RandomizedScan{vb_trials, vb_seed};
      const rrdlab::GraphPrimitives prim(g.adjacency());
      const auto verdict = rrdlab::verify_broad(prim, params, mode);
      std::cout << rrdlab::broad_record(verdict, params, mode).dump(2) << '\n';
      return kExitOk;
    }
    if (*count_cmd) {
      std::cout << rrdlab::count_regular_matrices(c_n, c_d) << '\n';
      return kExitOk;
    }
  } catch (const rrdlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rrdlab::BudgetExhausted& e) {
    std::cerr << "sampler: " << e.what() << '\n';
    return 1;
  } catch (const rrdlab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
