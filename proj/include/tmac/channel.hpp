#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "tmac/scenario.hpp"

namespace tmac {

struct ChannelMatrix {
  // Power gain h_ij; zero on the diagonal.
  Eigen::MatrixXd gain;
  // Per-sub-channel capacity C_ij in bits/s; zero on the diagonal.
  Eigen::MatrixXd capacity;
  double subchannel_bandwidth = 0.0;

  int size() const { return static_cast<int>(capacity.rows()); }
};

// Unit-mean exponential fading draw for the unordered pair {i, j}. A pure
// function of (seed, pair), so links see reciprocal fading.
double fading_factor(std::uint64_t seed, int i, int j);

// Log-distance path loss g0 * d^-alpha (d in meters, floored at the 1 m
// reference distance), times fading_factor when fading is enabled.
// Throws DomainError for i == j.
double channel_gain(const ScenarioState& state, const ScenarioConfig& cfg, int i, int j);

// (W/K) log2(1 + Pt h / (N0 W/K)).
double subchannel_capacity(const ScenarioConfig& cfg, double gain);

ChannelMatrix build_channel(const ScenarioState& state, const ScenarioConfig& cfg);

}  // namespace tmac
