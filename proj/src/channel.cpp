#include "tmac/channel.hpp"

#include <algorithm>
#include <cmath>

#include "tmac/errors.hpp"
#include "tmac/random.hpp"

namespace tmac {

namespace {

constexpr double kReferenceDistance = 1.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double fading_factor(std::uint64_t seed, int i, int j) {
  const auto lo = static_cast<std::uint64_t>(std::min(i, j));
  const auto hi = static_cast<std::uint64_t>(std::max(i, j));
  Rng rng(splitmix64(splitmix64(seed ^ 0xFADEULL) ^ (hi << 32 | lo)));
  return rng.exponential();
}

double channel_gain(const ScenarioState& state, const ScenarioConfig& cfg, int i, int j) {
  if (i == j) throw DomainError("channel_gain: a vehicle has no link to itself");
  if (i < 0 || j < 0 || i >= state.size() || j >= state.size()) {
    throw std::out_of_range("channel_gain: vehicle index out of range");
  }
  const double d = std::max(state.distance(i, j), kReferenceDistance);
  double h = cfg.ref_gain_g0 * std::pow(d / kReferenceDistance, -cfg.path_loss_exponent);
  if (cfg.fading_enabled) h *= fading_factor(cfg.rng_seed, i, j);
  return h;
}

double subchannel_capacity(const ScenarioConfig& cfg, double gain) {
  if (cfg.subchannel_budget_K <= 0) return 0.0;
  const double b = cfg.bandwidth_W / cfg.subchannel_budget_K;
  return b * std::log2(1.0 + cfg.tx_power_Pt * gain / (cfg.noise_psd_N0 * b));
}

ChannelMatrix build_channel(const ScenarioState& state, const ScenarioConfig& cfg) {
  const int n = state.size();
  ChannelMatrix ch;
  ch.gain = Eigen::MatrixXd::Zero(n, n);
  ch.capacity = Eigen::MatrixXd::Zero(n, n);
  ch.subchannel_bandwidth =
      cfg.subchannel_budget_K > 0 ? cfg.bandwidth_W / cfg.subchannel_budget_K : 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      ch.gain(i, j) = channel_gain(state, cfg, i, j);
      ch.capacity(i, j) = subchannel_capacity(cfg, ch.gain(i, j));
    }
  }
  return ch;
}

}  // namespace tmac
