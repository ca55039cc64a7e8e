#pragma once

// Reference computations written directly from the model formulas, kept
// separate from the library code paths they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "tmac/channel.hpp"
#include "tmac/scenario.hpp"
#include "tmac/tmac.hpp"

namespace tmac::oracle {

inline double planar_distance(const ScenarioState& s, const ScenarioConfig& cfg, int i, int j) {
  const auto& a = s.vehicles[static_cast<std::size_t>(i)];
  const auto& b = s.vehicles[static_cast<std::size_t>(j)];
  const double dx = a.position_m - b.position_m;
  const double dy = (a.lane - b.lane) * cfg.lane_width_m;
  return std::sqrt(dx * dx + dy * dy);
}

inline double ratio_floor(const ScenarioState& s, const ScenarioConfig& cfg, int i, int j) {
  const double l = std::min(oracle::planar_distance(s, cfg, i, j) / cfg.comm_range_m, 1.0);
  return std::max(cfg.rho_min, cfg.eta * std::exp(-l));
}

inline double capacity(const ScenarioConfig& cfg, double gain) {
  const double b = cfg.bandwidth_W / cfg.subchannel_budget_K;
  return b * std::log2(1.0 + cfg.tx_power_Pt * gain / (cfg.noise_psd_N0 * b));
}

// Greedy by weight over a single budget; independent of the library helper.
inline double knapsack_value(std::vector<std::pair<double, double>> items, double budget) {
  std::sort(items.begin(), items.end(), [](auto a, auto b) { return a.first > b.first; });
  double value = 0.0;
  for (auto [w, cap] : items) {
    const double take = std::min(cap, budget);
    value += w * take;
    budget -= take;
    if (budget <= 0.0) break;
  }
  return value;
}

// Best throughput for a fixed link matrix, or -1 when some ego cannot meet
// its compute or energy limit even with zero payload.
inline double throughput_for(const ScenarioState& s, const ChannelMatrix& ch,
                             const ScenarioConfig& cfg, const LinkMatrix& links) {
  const int n = s.size();
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto& ego = s.vehicles[static_cast<std::size_t>(j)];
    int count = 0;
    std::vector<std::pair<double, double>> items;
    for (int i = 0; i < n; ++i) {
      if (links(i, j) == 0) continue;
      ++count;
      const double cap =
          std::min(oracle::capacity(cfg, ch.gain(i, j)), s.vehicles[static_cast<std::size_t>(i)].local_data_bps);
      items.emplace_back(1.0 / oracle::ratio_floor(s, cfg, i, j), cap);
    }
    const double et = cfg.epsilon_j * cfg.tau_c;
    const double gamma =
        cfg.energy_budget_ET / et - cfg.tau_t * cfg.tx_power_Pt * count / et - ego.local_data_bps;
    const double phi = ego.cpu_hz / cfg.cycles_per_bit_beta - ego.local_data_bps;
    const double budget = std::min(gamma, phi);
    if (budget < 0.0) return -1.0;
    total += ego.local_data_bps + knapsack_value(items, budget);
  }
  return total;
}

struct Enumeration {
  double best = -1.0;
  LinkMatrix links;
  long long candidates = 0;
};

// Every off-diagonal link matrix respecting K per ego column.
inline Enumeration exhaustive_optimum(const ScenarioState& s, const ChannelMatrix& ch,
                                      const ScenarioConfig& cfg) {
  const int n = s.size();
  std::vector<std::pair<int, int>> slots;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j) slots.emplace_back(i, j);
  Enumeration out;
  const std::uint64_t count = std::uint64_t{1} << slots.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    LinkMatrix links = LinkMatrix::Zero(n, n);
    for (std::size_t b = 0; b < slots.size(); ++b)
      if (mask >> b & 1) links(slots[b].first, slots[b].second) = 1;
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) ok = links.col(j).sum() <= cfg.subchannel_budget_K;
    if (!ok) continue;
    ++out.candidates;
    const double t = throughput_for(s, ch, cfg, links);
    if (t > out.best) {
      out.best = t;
      out.links = links;
    }
  }
  return out;
}

// Random per-ego rate LP: weights, caps and one budget row.
struct KnapsackInstance {
  Eigen::VectorXd weights;
  Eigen::VectorXd caps;
  double budget = 0.0;
};

inline KnapsackInstance random_knapsack(std::mt19937_64& rng, int max_items) {
  std::uniform_int_distribution<int> size(1, max_items);
  std::uniform_real_distribution<double> w(1.0, 1.0 / 0.3);
  std::uniform_real_distribution<double> cap(0.0, 40e6);
  const int n = size(rng);
  KnapsackInstance k;
  k.weights.resize(n);
  k.caps.resize(n);
  for (int i = 0; i < n; ++i) {
    k.weights(i) = w(rng);
    k.caps(i) = cap(rng);
  }
  std::uniform_real_distribution<double> frac(0.0, 1.2);
  k.budget = frac(rng) * k.caps.sum();
  return k;
}

}  // namespace tmac::oracle
