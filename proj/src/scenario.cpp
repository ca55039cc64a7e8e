#include "tmac/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmac/errors.hpp"
#include "tmac/random.hpp"

namespace tmac {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void ScenarioConfig::validate() const {
  require(vehicle_count >= 1, "vehicle_count", "must be >= 1");
  require(lane_count >= 1, "lane_count", "must be >= 1");
  require(positive(span_m), "span_m", "must be > 0");
  require(std::isfinite(speed_range_kmh.first) && speed_range_kmh.first >= 0.0 &&
              speed_range_kmh.first <= speed_range_kmh.second &&
              std::isfinite(speed_range_kmh.second),
          "speed_range_kmh", "need 0 <= lower <= upper");
  require(positive(bandwidth_W), "bandwidth_W", "must be > 0");
  require(subchannel_budget_K >= 0, "subchannel_budget_K", "must be >= 0");
  require(positive(tx_power_Pt), "tx_power_Pt", "must be > 0");
  require(positive(noise_psd_N0), "noise_psd_N0", "must be > 0");
  require(positive(local_data_A), "local_data_A", "must be > 0");
  require(positive(cycles_per_bit_beta), "cycles_per_bit_beta", "must be > 0");
  require(positive(cpu_range_F.first) && cpu_range_F.first <= cpu_range_F.second &&
              std::isfinite(cpu_range_F.second),
          "cpu_range_F", "need 0 < lower <= upper");
  require(positive(energy_budget_ET), "energy_budget_ET", "must be > 0");
  require(positive(eta) && eta <= 1.0, "eta", "must lie in (0, 1]");
  require(positive(rho_min) && rho_min <= 1.0, "rho_min", "must lie in (0, 1]");
  require(positive(rho_max) && rho_max <= 1.0 && rho_min <= rho_max, "rho_max",
          "need rho_min <= rho_max <= 1");
  require(eta <= rho_max, "eta", "must not exceed rho_max");
  require(positive(tau_t), "tau_t", "must be > 0");
  require(positive(tau_c), "tau_c", "must be > 0");
  require(positive(epsilon_j), "epsilon_j", "must be > 0");
  require(positive(comm_range_m), "comm_range_m", "must be > 0");
  require(positive(lane_width_m), "lane_width_m", "must be > 0");
  require(ego_index >= -1 && ego_index < vehicle_count, "ego_index",
          "must be -1 or a vehicle index");
  require(positive(path_loss_exponent), "path_loss_exponent", "must be > 0");
  require(positive(ref_gain_g0), "ref_gain_g0", "must be > 0");
}

void refresh_geometry(ScenarioState& state, const ScenarioConfig& cfg) {
  const int n = state.size();
  state.distance = Eigen::MatrixXd::Zero(n, n);
  state.normalized = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vehicle& a = state.vehicles[static_cast<std::size_t>(i)];
      const Vehicle& b = state.vehicles[static_cast<std::size_t>(j)];
      const double dx = a.position_m - b.position_m;
      const double dy = (a.lane - b.lane) * cfg.lane_width_m;
      const double d = std::hypot(dx, dy);
      state.distance(i, j) = state.distance(j, i) = d;
      const double l = std::min(d / cfg.comm_range_m, 1.0);
      state.normalized(i, j) = state.normalized(j, i) = l;
    }
  }
}

ScenarioState generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);

  ScenarioState state;
  state.vehicles.reserve(static_cast<std::size_t>(cfg.vehicle_count));
  for (int k = 0; k < cfg.vehicle_count; ++k) {
    Vehicle v;
    v.id = k;
    v.lane = rng.uniform_index(cfg.lane_count);
    v.position_m = rng.uniform(0.0, cfg.span_m);
    v.speed_kmh = rng.uniform(cfg.speed_range_kmh.first, cfg.speed_range_kmh.second);
    v.cpu_hz = rng.uniform(cfg.cpu_range_F.first, cfg.cpu_range_F.second);
    v.local_data_bps = cfg.local_data_A;
    state.vehicles.push_back(v);
  }

  if (cfg.ego_index >= 0) {
    state.ego_index = cfg.ego_index;
  } else {
    const double mid = 0.5 * cfg.span_m;
    double best = std::abs(state.vehicles[0].position_m - mid);
    for (int k = 1; k < cfg.vehicle_count; ++k) {
      const double gap = std::abs(state.vehicles[static_cast<std::size_t>(k)].position_m - mid);
      if (gap < best) {
        best = gap;
        state.ego_index = k;
      }
    }
  }

  refresh_geometry(state, cfg);
  return state;
}

double normalized_distance(const ScenarioState& state, int i, int j) {
  if (i < 0 || j < 0 || i >= state.size() || j >= state.size()) {
    throw std::out_of_range("normalized_distance: vehicle index out of range");
  }
  return state.normalized(i, j);
}

}  // namespace tmac
