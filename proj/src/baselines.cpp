#include "tmac/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "tmac/errors.hpp"

namespace tmac {

namespace {

double ego_budget(const ScenarioState& state, const ScenarioConfig& cfg, const LinkMatrix& links,
                  int ego) {
  const EgoBudgets b =
      compute_budgets(state, cfg, links, Eigen::MatrixXd::Zero(state.size(), state.size()));
  return std::min(b.gamma(ego), b.phi(ego));
}

double link_cap(const ScenarioState& state, const ChannelMatrix& channel, int i, int j) {
  return std::min(channel.capacity(i, j),
                  state.vehicles[static_cast<std::size_t>(i)].local_data_bps);
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kTmac: return "TMAC";
    case Scheme::kDmddaLike: return "DMDDA-like";
    case Scheme::kFtsLike: return "FTS-like";
    case Scheme::kNoFusion: return "NoFusion";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& tag) {
  for (Scheme s : {Scheme::kTmac, Scheme::kDmddaLike, Scheme::kFtsLike, Scheme::kNoFusion}) {
    if (to_string(s) == tag) return s;
  }
  throw ConfigError("schemes", "unknown scheme '" + tag + "'");
}

AuditOptions audit_options_for(Scheme s) {
  AuditOptions o;
  o.enforce_rho_max = s != Scheme::kDmddaLike;
  return o;
}

BaselineResult run_fts(const ScenarioState& state, const ChannelMatrix& channel,
                       const ScenarioConfig& cfg) {
  const int n = state.size();
  const int k = cfg.subchannel_budget_K;
  BaselineResult out{Scheme::kFtsLike, LinkMatrix::Zero(n, n), RatePlan::zero(n), 0.0};

  for (int j = 0; j < n; ++j) {
    std::vector<int> tx;
    for (int i = 0; i < n; ++i) {
      if (i != j) tx.push_back(i);
    }
    std::stable_sort(tx.begin(), tx.end(),
                     [&](int a, int b) { return state.distance(a, j) < state.distance(b, j); });
    const int take = std::min<int>(k, static_cast<int>(tx.size()));
    for (int r = 0; r < take; ++r) out.links(tx[static_cast<std::size_t>(r)], j) = 1;

    const double budget = ego_budget(state, cfg, out.links, j);
    if (budget < 0.0) {
      out.links.col(j).setZero();
      continue;
    }
    double demand = 0.0;
    for (int i : tx) {
      if (out.links(i, j) != 0) demand += link_cap(state, channel, i, j);
    }
    const double scale = demand > budget ? budget / demand : 1.0;
    for (int i : tx) {
      if (out.links(i, j) == 0) continue;
      const double u = scale * link_cap(state, channel, i, j);
      out.plan.payload(i, j) = u;
      out.plan.ratio(i, j) = cfg.rho_max;
      out.plan.rate(i, j) = u / cfg.rho_max;
    }
  }
  out.throughput = total_throughput(state, out.links, out.plan.rate);
  return out;
}

BaselineResult run_dmdda_like(const ScenarioState& state, const ChannelMatrix& channel,
                              const ScenarioConfig& cfg) {
  const int n = state.size();
  BaselineResult out{Scheme::kDmddaLike, initial_links(channel, cfg.subchannel_budget_K),
                     RatePlan::zero(n), 0.0};

  for (int j = 0; j < n; ++j) {
    for (;;) {
      double load = 0.0;
      int weakest = -1;
      for (int i = 0; i < n; ++i) {
        if (out.links(i, j) == 0) continue;
        load += link_cap(state, channel, i, j);
        if (weakest < 0 || channel.capacity(i, j) < channel.capacity(weakest, j)) weakest = i;
      }
      if (weakest < 0 || load <= ego_budget(state, cfg, out.links, j)) break;
      out.links(weakest, j) = 0;
    }
    for (int i = 0; i < n; ++i) {
      if (out.links(i, j) == 0) continue;
      const double d = link_cap(state, channel, i, j);
      out.plan.rate(i, j) = d;
      out.plan.payload(i, j) = d;
      out.plan.ratio(i, j) = 1.0;
    }
  }
  out.throughput = total_throughput(state, out.links, out.plan.rate);
  return out;
}

BaselineResult run_no_fusion(const ScenarioState& state, const ScenarioConfig&) {
  const int n = state.size();
  BaselineResult out{Scheme::kNoFusion, LinkMatrix::Zero(n, n), RatePlan::zero(n), 0.0};
  out.throughput = total_throughput(state, out.links, out.plan.rate);
  return out;
}

}  // namespace tmac
