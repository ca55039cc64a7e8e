#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace tmac {

// Member names double as configuration keys.
struct ScenarioConfig {
  int vehicle_count = 10;
  int lane_count = 6;
  double span_m = 200.0;
  std::pair<double, double> speed_range_kmh{0.0, 50.0};
  double bandwidth_W = 200e6;
  int subchannel_budget_K = 4;
  double tx_power_Pt = 8e-3;
  double noise_psd_N0 = 1e-17;
  double local_data_A = 40e6;
  double cycles_per_bit_beta = 10.0;
  std::pair<double, double> cpu_range_F{1e9, 3e9};
  double energy_budget_ET = 1000.0;
  double eta = 0.8;
  double rho_min = 0.5;
  double rho_max = 1.0;
  double tau_t = 0.1;
  double tau_c = 0.1;
  double epsilon_j = 5e-5;
  double comm_range_m = 200.0;
  std::uint64_t rng_seed = 7;

  double lane_width_m = 3.5;
  // -1 picks the vehicle nearest the middle of the span.
  int ego_index = -1;

  double path_loss_exponent = 2.5;
  double ref_gain_g0 = 1e-4;
  bool fading_enabled = false;

  // Throws ConfigError naming the first offending field.
  void validate() const;
};

struct Vehicle {
  int id = 0;
  int lane = 0;
  double position_m = 0.0;
  double speed_kmh = 0.0;
  double local_data_bps = 0.0;
  double cpu_hz = 0.0;
};

// Snapshot of one decision epoch. Immutable once generated.
struct ScenarioState {
  std::vector<Vehicle> vehicles;
  int ego_index = 0;
  // Pairwise planar distance in meters; symmetric with zero diagonal.
  Eigen::MatrixXd distance;
  // distance / comm_range clamped to [0, 1].
  Eigen::MatrixXd normalized;

  int size() const { return static_cast<int>(vehicles.size()); }
};

// Places vehicle_count vehicles uniformly over lanes x span. Every vehicle
// consumes a fixed number of draws in order, so the first k vehicles of a
// scenario with N > k vehicles coincide with the k-vehicle scenario.
ScenarioState generate_scenario(const ScenarioConfig& cfg);

// Rebuilds the distance matrices from vehicle records, e.g. after edits in
// tests or hand-built instances.
void refresh_geometry(ScenarioState& state, const ScenarioConfig& cfg);

double normalized_distance(const ScenarioState& state, int i, int j);

}  // namespace tmac
