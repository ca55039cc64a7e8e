#pragma once

#include <string>

#include "tmac/channel.hpp"
#include "tmac/scenario.hpp"
#include "tmac/tmac.hpp"

namespace tmac {

enum class Scheme { kTmac, kDmddaLike, kFtsLike, kNoFusion };

// CSV tag: "TMAC", "DMDDA-like", "FTS-like", "NoFusion".
std::string to_string(Scheme s);
// Throws ConfigError on an unknown tag.
Scheme scheme_from_string(const std::string& tag);

struct BaselineResult {
  Scheme scheme = Scheme::kNoFusion;
  LinkMatrix links;
  RatePlan plan;
  double throughput = 0.0;
};

// Equal treatment of the K nearest transmitters per ego, uncompressed at
// rho_max; each ego's rates are scaled down uniformly to fit its compute and
// energy budget.
BaselineResult run_fts(const ScenarioState& state, const ChannelMatrix& channel,
                       const ScenarioConfig& cfg);

// Top-K by capacity, no compression (rho = 1), d = min(C, A); the weakest
// link into an over-budget ego is dropped until every ego fits.
BaselineResult run_dmdda_like(const ScenarioState& state, const ChannelMatrix& channel,
                              const ScenarioConfig& cfg);

// Local sensing only.
BaselineResult run_no_fusion(const ScenarioState& state, const ScenarioConfig& cfg);

// Audit relaxations for the scheme (uncompressed schemes may exceed rho_max).
AuditOptions audit_options_for(Scheme s);

}  // namespace tmac
