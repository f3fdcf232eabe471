#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrdlab/matrix_builder.hpp"
#include "rrdlab/rrd_sampler.hpp"

namespace rrdlab {

enum class Experiment { Esd, SvDist, LogPot, SsvTail, Wegner, Broad, Discrepancy, DistSubspace, LinStat, I2m };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);  // throws ConfigError

enum class Profile { Rrd, Bernoulli };

/// Everything a harness run needs. Either p or d fixes the degree; with p,
/// d = floor(p n).
struct ExperimentConfig {
  Experiment experiment = Experiment::Esd;
  int n = 100;
  std::optional<double> p;
  std::optional<int> d;
  Complex z{0.0, 0.0};
  std::optional<WeightLaw> weight_law = RealGaussian{};  // nullopt: unweighted 0-1 matrix
  int trials = 1;
  Seed seed = 0;
  SamplerMethod sampler = SwitchChain{};
  Profile profile = Profile::Rrd;
  std::filesystem::path output_dir = "out";
  int workers = 0;  // 0: one per hardware thread

  // Experiment knobs.
  double alpha = 0.5;
  double a1 = 0.1;
  int k = 50;
  double eps0 = 0.2;
  int search_trials = 1000;
  double h_cut = 1.0;
  std::optional<double> delta;  // broad connectivity; default p/2
  std::optional<double> nu;     // default p/8
  int bins = 50;
  double trunc_delta = 1e-3;
  std::vector<double> t_grid;
  std::vector<int> n_list;
  std::vector<double> f_knots;
  std::vector<double> f_values;

  int degree() const;      // d, derived from p when needed
  int degree_at(int size) const;
  double density() const;  // p, or d / n
  double density_at(int size) const;
};

/// Throws ConfigError on any inconsistency. Called before any compute.
void validate(const ExperimentConfig& cfg);

// Flat `key = value` text (TOML-compatible subset): strings in double quotes,
// numbers bare, arrays as [a, b, c], '#' comments.
using RawConfig = std::map<std::string, std::string>;

RawConfig parse_config_text(std::istream& in);
ExperimentConfig config_from_raw(const RawConfig& raw);
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Canonical `key = value` rendering; its FNV-1a hash identifies the run.
std::string canonical_text(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace rrdlab
