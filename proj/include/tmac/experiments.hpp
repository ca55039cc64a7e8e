#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmac/baselines.hpp"
#include "tmac/config.hpp"
#include "tmac/csv.hpp"

namespace tmac {

// One scheme solved on one scenario.
struct SchemeOutcome {
  Scheme scheme = Scheme::kTmac;
  LinkMatrix links;
  RatePlan plan;
  double throughput = 0.0;
  bool converged = true;
  std::vector<Violation> violations;
};

SchemeOutcome run_scheme(Scheme scheme, const ScenarioState& state, const ChannelMatrix& channel,
                         const Config& cfg);

// Per-ego summary rows:
// scheme,seed,ego,local_data_bps,links_in,received_bps,payload_bps,budget_bps,
// ego_throughput_bps,total_throughput_bps,converged
CsvTable per_ego_header();
void append_per_ego_rows(CsvTable& table, const SchemeOutcome& outcome,
                         const ScenarioState& state, const ScenarioConfig& cfg);

struct SweepSpec {
  std::string param;  // vehicle_count | bandwidth_W | tx_power_Pt | span_m
  std::vector<double> values;
  int seeds = 1;
  std::vector<Scheme> schemes{Scheme::kTmac, Scheme::kDmddaLike, Scheme::kFtsLike,
                              Scheme::kNoFusion};

  // Throws ConfigError naming "param", "values", "seeds" or "schemes".
  void validate() const;
};

// Sets the swept field on a copy of the scenario config.
ScenarioConfig apply_sweep_value(ScenarioConfig cfg, const std::string& param, double value);

struct SweepPoint {
  double value = 0.0;
  Scheme scheme = Scheme::kTmac;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one seed
  int seeds = 0;
};

// Seeds are rng_seed, rng_seed + 1, ... Results are ordered by value index,
// then scheme order, independent of `parallel`. Throws ConsistencyError when
// a converged result fails the constraint audit.
std::vector<SweepPoint> run_sweep(const Config& cfg, const SweepSpec& spec, int parallel = 1);

// param,value,scheme,mean_throughput_bps,std_bps,seeds
CsvTable sweep_table(const std::string& param, const std::vector<SweepPoint>& points);

struct FinetuneSeedResult {
  std::uint64_t seed = 0;
  // Empty when every frame is used for fine-tuning.
  std::optional<double> pretrained_mse;
  std::optional<double> finetuned_mse;
  std::optional<double> h_future_bits;
  std::optional<double> mi_bits;
  std::optional<double> h_cond_bits;
};

struct FinetuneSummary {
  double rho_star = 1.0;
  double beta_star = 1.0;
  int bottleneck = 1;
  std::vector<FinetuneSeedResult> seeds;
  std::optional<double> median_pretrained_mse;
  std::optional<double> median_finetuned_mse;
};

// Pretrains a linear codec on one synthetic scene, then adapts it to the
// first ft_frames_tune frames of a new correlated sequence and scores both
// codecs on the remaining frames. The compression ratio comes from a TMAC
// solve of the configured scenario.
FinetuneSummary run_finetune_experiment(const Config& cfg);

// row_type,seed,frames_total,frames_tune,bottleneck,rho_star,beta_star,
// pretrained_mse,finetuned_mse,h_future_bits,mi_bits,h_cond_bits
CsvTable finetune_table(const Config& cfg, const FinetuneSummary& summary);

// scheme,n,i,L_ms,Lhat_ms,total_ms,under_100ms
CsvTable latency_table(const std::vector<LatencyRow>& rows);

// Empirical joint of (previous, current) values of one coordinate,
// quantized into `bins` equal-width bins. Rows index the current value.
Eigen::MatrixXd lagged_joint(const Eigen::MatrixXd& frames, int coordinate, int bins);

}  // namespace tmac
