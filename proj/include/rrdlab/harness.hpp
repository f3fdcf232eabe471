#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrdlab/config.hpp"

namespace rrdlab {

inline constexpr const char* kVersion = "0.1.0";

struct RunRecord {
  std::string config_text;  // canonical_text(config)
  std::uint64_t config_hash = 0;
  std::vector<Seed> trial_seeds;
  std::vector<std::filesystem::path> outputs;  // CSV and JSON files written
  int trials = 0;
  int failures = 0;
  std::vector<std::string> failure_messages;
  double wall_clock_seconds = 0.0;
  nlohmann::ordered_json summary;  // experiment-specific scalars

  /// 0 success, 1 when more than 10% of trials failed numerically.
  int exit_code() const noexcept { return failures * 10 > trials ? 1 : 0; }
};

/// Validates, dispatches to the configured experiment, runs trials in
/// parallel and writes <experiment>.csv (plus companions) and
/// <experiment>.json under cfg.output_dir. Throws ConfigError before any
/// compute on a bad config.
RunRecord run(const ExperimentConfig& cfg);

/// Header comment carried by every CSV: "# config_hash=<16 hex digits> experiment=<name>".
std::string csv_header_comment(const ExperimentConfig& cfg);

}  // namespace rrdlab
