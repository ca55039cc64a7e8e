#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tmac/latency.hpp"
#include "tmac/scenario.hpp"
#include "tmac/tmac.hpp"

namespace tmac {

// Synthetic fine-tuning experiment.
struct FinetuneDemoConfig {
  int ft_dim = 8;
  // 0 derives the bottleneck from the solved compression ratio.
  int ft_bottleneck = 0;
  int ft_frames_total = 40;
  int ft_frames_tune = 10;
  double ft_correlation = 0.9;
  double ft_alpha = 0.05;
  int ft_steps = 200;
  int ft_pretrain_steps = 2000;
  int ft_seeds = 50;
  int ft_scene_rank = 3;
  double ft_scene_noise = 0.1;
  int ft_bins = 8;

  void validate() const;
};

struct Config {
  ScenarioConfig scenario;
  TmacOptions tmac;
  std::vector<LatencyParams> latency{LatencyParams{}};
  FinetuneDemoConfig demo;
  // Replications per sweep point.
  int seeds = 20;
};

// Flat "key = value" text; '#' starts a comment. Keys are the field names of
// ScenarioConfig, LatencyParams and FinetuneDemoConfig plus budget_mode,
// max_rounds, beta_table, beta_set, seeds and latency_label. Pairs and lists
// are comma separated; beta_table entries are "rho:beta". Latency keys take
// lists to describe several parameter sets. Unknown or repeated keys throw
// ConfigError.
Config parse_config(const std::string& text);

// Throws ConfigError (field "config") when the file cannot be read.
Config load_config(const std::filesystem::path& path);

}  // namespace tmac
