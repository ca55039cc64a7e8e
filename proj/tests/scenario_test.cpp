#include "tmac/scenario.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

#include "oracle.hpp"
#include "tmac/errors.hpp"

namespace tmac {
namespace {

TEST(GenerateScenario, SingleVehicle) {
  ScenarioConfig cfg;
  cfg.vehicle_count = 1;
  const auto s = generate_scenario(cfg);
  ASSERT_EQ(s.size(), 1);
  EXPECT_EQ(s.ego_index, 0);
  EXPECT_EQ(s.normalized.rows(), 1);
  EXPECT_EQ(s.normalized(0, 0), 0.0);
}

TEST(GenerateScenario, SameSeedIsBitwiseIdentical) {
  ScenarioConfig cfg;
  const auto a = generate_scenario(cfg);
  const auto b = generate_scenario(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (int i = 0; i < a.size(); ++i) {
    const auto& x = a.vehicles[static_cast<std::size_t>(i)];
    const auto& y = b.vehicles[static_cast<std::size_t>(i)];
    EXPECT_EQ(x.lane, y.lane);
    EXPECT_EQ(x.position_m, y.position_m);
    EXPECT_EQ(x.speed_kmh, y.speed_kmh);
    EXPECT_EQ(x.cpu_hz, y.cpu_hz);
  }
  EXPECT_TRUE(a.distance == b.distance);
  EXPECT_EQ(a.ego_index, b.ego_index);
}

TEST(GenerateScenario, BoundsHoldOverManySeeds) {
  ScenarioConfig cfg;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.rng_seed = seed;
    const auto s = generate_scenario(cfg);
    ASSERT_EQ(s.size(), 10);
    for (const auto& v : s.vehicles) {
      EXPECT_GE(v.position_m, 0.0);
      EXPECT_LE(v.position_m, cfg.span_m);
      EXPECT_GE(v.lane, 0);
      EXPECT_LT(v.lane, cfg.lane_count);
      EXPECT_GE(v.speed_kmh, cfg.speed_range_kmh.first);
      EXPECT_LE(v.speed_kmh, cfg.speed_range_kmh.second);
      EXPECT_GE(v.cpu_hz, cfg.cpu_range_F.first);
      EXPECT_LE(v.cpu_hz, cfg.cpu_range_F.second);
      EXPECT_EQ(v.local_data_bps, cfg.local_data_A);
    }
    EXPECT_GE(s.normalized.minCoeff(), 0.0);
    EXPECT_LE(s.normalized.maxCoeff(), 1.0);
    EXPECT_TRUE(s.distance.isApprox(s.distance.transpose(), 0.0));
    EXPECT_TRUE(s.distance.diagonal().isZero(0.0));
  }
}

TEST(GenerateScenario, TriangleInequalityAndPlanarDistances) {
  ScenarioConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.rng_seed = seed;
    const auto s = generate_scenario(cfg);
    const int n = s.size();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(s.distance(i, j), oracle::planar_distance(s, cfg, i, j), 1e-12);
        for (int k = 0; k < n; ++k) {
          EXPECT_LE(s.distance(i, j), s.distance(i, k) + s.distance(k, j) + 1e-9);
        }
      }
    }
  }
}

TEST(GenerateScenario, PrefixNested) {
  ScenarioConfig small;
  small.vehicle_count = 4;
  ScenarioConfig large;
  large.vehicle_count = 9;
  const auto a = generate_scenario(small);
  const auto b = generate_scenario(large);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(a.vehicles[static_cast<std::size_t>(i)].position_m,
              b.vehicles[static_cast<std::size_t>(i)].position_m);
    EXPECT_EQ(a.vehicles[static_cast<std::size_t>(i)].cpu_hz,
              b.vehicles[static_cast<std::size_t>(i)].cpu_hz);
  }
}

TEST(GenerateScenario, EgoNearestMidpointUnlessOverridden) {
  ScenarioConfig cfg;
  const auto s = generate_scenario(cfg);
  const double mid = cfg.span_m / 2;
  for (const auto& v : s.vehicles) {
    EXPECT_LE(std::abs(s.vehicles[static_cast<std::size_t>(s.ego_index)].position_m - mid),
              std::abs(v.position_m - mid));
  }
  cfg.ego_index = 3;
  EXPECT_EQ(generate_scenario(cfg).ego_index, 3);
}

TEST(NormalizedDistance, Endpoints) {
  ScenarioConfig cfg;
  cfg.vehicle_count = 3;
  cfg.comm_range_m = 200.0;
  auto s = generate_scenario(cfg);
  s.vehicles[0].lane = 0;
  s.vehicles[0].position_m = 0.0;
  s.vehicles[1].lane = 0;
  s.vehicles[1].position_m = 100.0;
  s.vehicles[2].lane = 0;
  s.vehicles[2].position_m = 200.0;
  refresh_geometry(s, cfg);
  EXPECT_EQ(normalized_distance(s, 1, 1), 0.0);
  EXPECT_DOUBLE_EQ(normalized_distance(s, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(normalized_distance(s, 0, 2), 1.0);
  cfg.comm_range_m = 150.0;
  refresh_geometry(s, cfg);
  EXPECT_DOUBLE_EQ(normalized_distance(s, 0, 2), 1.0);
  EXPECT_THROW(normalized_distance(s, 0, 3), std::out_of_range);
  EXPECT_THROW(normalized_distance(s, -1, 0), std::out_of_range);
}

TEST(ScenarioConfig, ValidationNamesField) {
  auto expect_field = [](ScenarioConfig cfg, const std::string& field) {
    try {
      cfg.validate();
      ADD_FAILURE() << "expected ConfigError for " << field;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), field);
    }
  };
  ScenarioConfig c;
  c.vehicle_count = 0;
  expect_field(c, "vehicle_count");
  c = {};
  c.rho_min = 0.0;
  expect_field(c, "rho_min");
  c = {};
  c.rho_max = 1.5;
  expect_field(c, "rho_max");
  c = {};
  c.eta = 0.0;
  expect_field(c, "eta");
  c = {};
  c.bandwidth_W = -1.0;
  expect_field(c, "bandwidth_W");
  c = {};
  c.speed_range_kmh = {50.0, 10.0};
  expect_field(c, "speed_range_kmh");
  c = {};
  c.cpu_range_F = {3e9, 1e9};
  expect_field(c, "cpu_range_F");
  c = {};
  c.ego_index = 10;
  expect_field(c, "ego_index");
  EXPECT_THROW(generate_scenario(c), ConfigError);
}

}  // namespace
}  // namespace tmac
