#pragma once

#include <utility>
#include <vector>

#include "tmac/scenario.hpp"

namespace tmac::fixtures {

// Vehicles at the given (lane, position) pairs; everything else follows cfg
// and its seed.
inline ScenarioState placed(ScenarioConfig cfg, const std::vector<std::pair<int, double>>& at) {
  cfg.vehicle_count = static_cast<int>(at.size());
  cfg.ego_index = -1;
  ScenarioState s = generate_scenario(cfg);
  for (std::size_t k = 0; k < at.size(); ++k) {
    s.vehicles[k].lane = at[k].first;
    s.vehicles[k].position_m = at[k].second;
  }
  refresh_geometry(s, cfg);
  return s;
}

}  // namespace tmac::fixtures
