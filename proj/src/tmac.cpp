#include "tmac/tmac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tmac/errors.hpp"

namespace tmac {

namespace {

int incoming(const LinkMatrix& links, int ego) { return links.col(ego).sum(); }

bool exceeds(double lhs, double rhs, double rel_tol) {
  return lhs > rhs + rel_tol * std::max({std::abs(rhs), std::abs(lhs), 1.0});
}

// Egos that break the link budget, the compute limit or the energy limit
// under the current plan.
std::vector<int> violating_egos(const ScenarioState& state, const ScenarioConfig& cfg,
                                const RatePlan& plan, const LinkMatrix& links,
                                BudgetMode mode) {
  const int n = state.size();
  const EgoBudgets budgets = compute_budgets(state, cfg, links, plan.payload);
  std::vector<int> out;
  const bool network_over = mode == BudgetMode::kNetwork && links.sum() > cfg.subchannel_budget_K;
  for (int j = 0; j < n; ++j) {
    const int count = incoming(links, j);
    if (count == 0) continue;
    bool bad = network_over;
    if (mode == BudgetMode::kPerEgo && count > cfg.subchannel_budget_K) bad = true;
    double energy = 0.0;
    double processed = 0.0;
    for (int i = 0; i < n; ++i) {
      if (links(i, j) == 0) continue;
      energy += budgets.chi(i, j);
      processed += plan.payload(i, j);
    }
    const double a_j = state.vehicles[static_cast<std::size_t>(j)].local_data_bps;
    if (exceeds(energy, cfg.energy_budget_ET - cfg.tau_c * cfg.epsilon_j * a_j, 1e-9)) bad = true;
    if (exceeds(processed, budgets.phi(j), 1e-9) || budgets.phi(j) < 0.0) bad = true;
    if (budgets.gamma(j) < 0.0) bad = true;
    if (bad) out.push_back(j);
  }
  return out;
}

// Local data alone breaks the compute or energy limit; no link choice can fix it.
bool local_load_infeasible(const ScenarioState& state, const ScenarioConfig& cfg) {
  for (const auto& v : state.vehicles) {
    if (exceeds(v.local_data_bps, v.cpu_hz / cfg.cycles_per_bit_beta, 1e-9)) return true;
    if (exceeds(cfg.epsilon_j * cfg.tau_c * v.local_data_bps, cfg.energy_budget_ET, 1e-9)) return true;
  }
  return false;
}

}  // namespace

RatePlan RatePlan::zero(int n) {
  return {Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n),
          Eigen::MatrixXd::Zero(n, n)};
}

std::string to_string(const Action& a) {
  switch (a.kind) {
    case ActionKind::kNone: return "none";
    case ActionKind::kAdded:
      return "add(" + std::to_string(a.link.tx) + "->" + std::to_string(a.link.ego) + ")";
    case ActionKind::kRemoved:
      return "remove(" + std::to_string(a.link.tx) + "->" + std::to_string(a.link.ego) + ")";
  }
  return "unknown";
}

double ratio_floor(const ScenarioState& state, const ScenarioConfig& cfg, int tx, int ego) {
  return std::max(cfg.rho_min, cfg.eta * std::exp(-state.normalized(tx, ego)));
}

LinkMatrix initial_links(const ChannelMatrix& channel, int k, BudgetMode mode) {
  if (k < 0) throw DomainError("initial_links: K must be >= 0");
  const int n = channel.size();
  LinkMatrix links = LinkMatrix::Zero(n, n);
  if (mode == BudgetMode::kPerEgo) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> tx;
      for (int i = 0; i < n; ++i) {
        if (i != j) tx.push_back(i);
      }
      std::stable_sort(tx.begin(), tx.end(), [&](int a, int b) {
        return channel.capacity(a, j) > channel.capacity(b, j);
      });
      const int take = std::min<int>(k, static_cast<int>(tx.size()));
      for (int r = 0; r < take; ++r) links(tx[static_cast<std::size_t>(r)], j) = 1;
    }
    return links;
  }
  std::vector<Link> all;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) all.push_back({i, j});
    }
  }
  std::stable_sort(all.begin(), all.end(), [&](const Link& a, const Link& b) {
    return channel.capacity(a.tx, a.ego) > channel.capacity(b.tx, b.ego);
  });
  const int take = std::min<int>(k, static_cast<int>(all.size()));
  for (int r = 0; r < take; ++r) links(all[static_cast<std::size_t>(r)].tx, all[static_cast<std::size_t>(r)].ego) = 1;
  return links;
}

EgoBudgets compute_budgets(const ScenarioState& state, const ScenarioConfig& cfg,
                           const LinkMatrix& links, const Eigen::MatrixXd& payload) {
  const int n = state.size();
  EgoBudgets b;
  b.gamma.resize(n);
  b.phi.resize(n);
  b.chi = Eigen::MatrixXd::Zero(n, n);
  const double energy_per_bit = cfg.epsilon_j * cfg.tau_c;
  const double tx_energy = cfg.tau_t * cfg.tx_power_Pt;
  for (int j = 0; j < n; ++j) {
    const Vehicle& v = state.vehicles[static_cast<std::size_t>(j)];
    const int count = incoming(links, j);
    b.gamma(j) = cfg.energy_budget_ET / energy_per_bit - tx_energy * count / energy_per_bit -
                 v.local_data_bps;
    b.phi(j) = v.cpu_hz / cfg.cycles_per_bit_beta - v.local_data_bps;
    for (int i = 0; i < n; ++i) {
      if (links(i, j) != 0) b.chi(i, j) = payload(i, j) * energy_per_bit + tx_energy;
    }
  }
  return b;
}

RateLp build_p12(const ScenarioState& state, const ChannelMatrix& channel,
                 const ScenarioConfig& cfg, const LinkMatrix& links) {
  const int n = state.size();
  RateLp out;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j && links(i, j) != 0) out.links.push_back({i, j});
    }
  }
  const auto nv = static_cast<Eigen::Index>(out.links.size());
  out.lp = LpProblem<double>::with_variables(nv);
  out.weights.resize(nv);
  for (Eigen::Index v = 0; v < nv; ++v) {
    const Link& l = out.links[static_cast<std::size_t>(v)];
    out.weights(v) = 1.0 / ratio_floor(state, cfg, l.tx, l.ego);
    out.lp.upper(v) = std::min(channel.capacity(l.tx, l.ego),
                               state.vehicles[static_cast<std::size_t>(l.tx)].local_data_bps);
  }
  out.lp.objective = out.weights;

  const EgoBudgets budgets = compute_budgets(state, cfg, links, Eigen::MatrixXd::Zero(n, n));
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
    bool any = false;
    for (Eigen::Index v = 0; v < nv; ++v) {
      if (out.links[static_cast<std::size_t>(v)].ego == j) {
        row(v) = 1.0;
        any = true;
      }
    }
    if (!any) continue;
    const double budget = std::min(budgets.gamma(j), budgets.phi(j));
    if (budget < 0.0) out.infeasible_egos.push_back(j);
    out.lp.add_row(row, std::max(budget, 0.0));
  }
  return out;
}

RatePlan recover_plan(const Eigen::MatrixXd& payload, const ScenarioState& state,
                      const ChannelMatrix& channel, const ScenarioConfig& cfg,
                      const LinkMatrix& links) {
  const int n = state.size();
  RatePlan plan = RatePlan::zero(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j || links(i, j) == 0) continue;
      const double cap = std::min(channel.capacity(i, j),
                                  state.vehicles[static_cast<std::size_t>(i)].local_data_bps);
      double u = payload(i, j);
      if (exceeds(u, cap, 1e-8) || exceeds(0.0, u, 1e-8)) {
        throw ConsistencyError("recover_plan: payload on link " + std::to_string(i) + "->" +
                               std::to_string(j) + " breaks its rate cap");
      }
      u = std::clamp(u, 0.0, cap);
      const double floor = ratio_floor(state, cfg, i, j);
      plan.payload(i, j) = u;
      plan.rate(i, j) = u / floor;
      plan.ratio(i, j) = floor;
    }
  }
  return plan;
}

double total_throughput(const ScenarioState& state, const LinkMatrix& links,
                        const Eigen::MatrixXd& rate) {
  const int n = state.size();
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    double ego = state.vehicles[static_cast<std::size_t>(j)].local_data_bps;
    for (int i = 0; i < n; ++i) {
      if (i != j && links(i, j) != 0) ego += rate(i, j);
    }
    total += ego;
  }
  return total;
}

RateSolution solve_rates(const ScenarioState& state, const ChannelMatrix& channel,
                         const ScenarioConfig& cfg, const LinkMatrix& links) {
  const int n = state.size();
  RateSolution out;
  out.problem = build_p12(state, channel, cfg, links);
  out.lp = solve_lp(out.problem.lp);
  if (out.lp.status != LpStatus::kOptimal) {
    throw ConsistencyError(std::string("solve_rates: rate LP is ") + to_string(out.lp.status));
  }
  Eigen::MatrixXd payload = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t v = 0; v < out.problem.links.size(); ++v) {
    const Link& l = out.problem.links[v];
    payload(l.tx, l.ego) = out.lp.x(static_cast<Eigen::Index>(v));
  }
  out.plan = recover_plan(payload, state, channel, cfg, links);
  out.throughput = total_throughput(state, links, out.plan.rate);
  return out;
}

P2Step solve_p2_step(const ScenarioState& state, const ChannelMatrix& channel,
                     const ScenarioConfig& cfg, const RatePlan& plan, const LinkMatrix& links,
                     const TmacOptions& options) {
  const int n = state.size();
  const int k = cfg.subchannel_budget_K;
  P2Step step{links, {}};

  const std::vector<int> bad = violating_egos(state, cfg, plan, links, options.budget_mode);
  if (!bad.empty()) {
    // Weakest established link into a violating ego; column order, then
    // transmitter order, on ties.
    Link weakest{-1, -1};
    double weakest_cap = 0.0;
    for (int j : bad) {
      for (int i = 0; i < n; ++i) {
        if (links(i, j) == 0) continue;
        if (weakest.tx < 0 || channel.capacity(i, j) < weakest_cap) {
          weakest = {i, j};
          weakest_cap = channel.capacity(i, j);
        }
      }
    }
    if (options.budget_mode == BudgetMode::kNetwork && links.sum() > k) {
      weakest = {-1, -1};
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          if (links(i, j) == 0) continue;
          if (weakest.tx < 0 || channel.capacity(i, j) < weakest_cap) {
            weakest = {i, j};
            weakest_cap = channel.capacity(i, j);
          }
        }
      }
    }
    step.links(weakest.tx, weakest.ego) = 0;
    step.action = {ActionKind::kRemoved, weakest};
    return step;
  }

  const double current = total_throughput(state, links, plan.rate);
  const int total = links.sum();
  double best_value = current;
  double best_cap = 0.0;
  Link best{-1, -1};
  for (int j = 0; j < n; ++j) {
    const int count = incoming(links, j);
    if (options.budget_mode == BudgetMode::kPerEgo ? count >= k : total >= k) continue;
    for (int i = 0; i < n; ++i) {
      if (i == j || links(i, j) != 0) continue;
      LinkMatrix trial = links;
      trial(i, j) = 1;
      const EgoBudgets budgets =
          compute_budgets(state, cfg, trial, Eigen::MatrixXd::Zero(n, n));
      if (std::min(budgets.gamma(j), budgets.phi(j)) < 0.0) continue;
      const double value = solve_rates(state, channel, cfg, trial).throughput;
      if (value - current <= options.improvement_tol * current) continue;
      const double cap = channel.capacity(i, j);
      if (best.tx < 0 || value > best_value || (value == best_value && cap > best_cap)) {
        best = {i, j};
        best_value = value;
        best_cap = cap;
      }
    }
  }
  if (best.tx >= 0) {
    step.links(best.tx, best.ego) = 1;
    step.action = {ActionKind::kAdded, best};
  }
  return step;
}

void assign_operating_points(RatePlan& plan, const LinkMatrix& links, const BetaMap& map,
                             const RdOperatingSet& theta) {
  plan.beta_star.setZero(links.rows(), links.cols());
  for (Eigen::Index j = 0; j < links.cols(); ++j) {
    for (Eigen::Index i = 0; i < links.rows(); ++i) {
      if (links(i, j) == 0) continue;
      const double rho = std::clamp(plan.ratio(i, j), map.min_rho(), map.max_rho());
      plan.beta_star(i, j) = select_operating_point(theta, rho, map);
    }
  }
}

TmacResult run_tmac(const ScenarioState& state, const ChannelMatrix& channel,
                    const ScenarioConfig& cfg, const TmacOptions& options) {
  const int n = state.size();
  const int max_rounds =
      options.max_rounds > 0 ? options.max_rounds : 4 * n * cfg.subchannel_budget_K;

  TmacResult result;
  LinkMatrix links = initial_links(channel, cfg.subchannel_budget_K, options.budget_mode);
  int applied = 0;
  for (int round = 0;; ++round) {
    RateSolution rates = solve_rates(state, channel, cfg, links);
    P2Step step = solve_p2_step(state, channel, cfg, rates.plan, links, options);
    result.trace.push_back({round, rates.throughput, step.action});
    if (step.action.kind == ActionKind::kNone || applied >= max_rounds) {
      result.converged =
          step.action.kind == ActionKind::kNone && !local_load_infeasible(state, cfg);
      result.links = links;
      result.plan = std::move(rates.plan);
      result.throughput = rates.throughput;
      break;
    }
    links = std::move(step.links);
    ++applied;
  }
  assign_operating_points(result.plan, result.links, options.beta_map, options.operating_set);
  return result;
}

std::vector<Violation> audit_constraints(const LinkMatrix& links, const RatePlan& plan,
                                         const ScenarioState& state,
                                         const ChannelMatrix& channel,
                                         const ScenarioConfig& cfg,
                                         const AuditOptions& options) {
  const int n = state.size();
  const double tol = options.rel_tol;
  std::vector<Violation> out;
  auto flag = [&](const char* name, int tx, int ego, double magnitude) {
    out.push_back({name, tx, ego, magnitude});
  };

  int total = 0;
  for (int j = 0; j < n; ++j) {
    int count = 0;
    for (int i = 0; i < n; ++i) {
      const int s = links(i, j);
      if (s != 0 && s != 1) flag("link_matrix", i, j, s);
      if (i == j && s != 0) flag("link_matrix", i, j, s);
      if (i == j || s == 0) {
        if (i != j && (plan.rate(i, j) != 0.0 || plan.payload(i, j) != 0.0)) {
          flag("link_matrix", i, j, std::max(plan.rate(i, j), plan.payload(i, j)));
        }
        continue;
      }
      ++count;
      const double rho = plan.ratio(i, j);
      const double d = plan.rate(i, j);
      const double sent = rho * d;
      const double cap = std::min(channel.capacity(i, j),
                                  state.vehicles[static_cast<std::size_t>(i)].local_data_bps);
      if (exceeds(sent, cap, tol)) flag("rate_cap", i, j, sent - cap);
      if (d < 0.0) flag("rate_cap", i, j, -d);
      if (rho < cfg.rho_min * (1.0 - tol)) flag("ratio_bounds", i, j, cfg.rho_min - rho);
      if (options.enforce_rho_max && rho > cfg.rho_max * (1.0 + tol)) {
        flag("ratio_bounds", i, j, rho - cfg.rho_max);
      }
      const double priority = rho * std::exp(state.normalized(i, j));
      if (priority < cfg.eta * (1.0 - tol)) flag("ratio_priority", i, j, cfg.eta - priority);
      if (std::abs(sent - plan.payload(i, j)) >
          tol * std::max({std::abs(sent), std::abs(plan.payload(i, j)), 1.0})) {
        flag("rate_product", i, j, std::abs(sent - plan.payload(i, j)));
      }
    }
    total += count;
    if (options.budget_mode == BudgetMode::kPerEgo && count > cfg.subchannel_budget_K) {
      flag("subchannel_budget", -1, j, count - cfg.subchannel_budget_K);
    }

    const Vehicle& v = state.vehicles[static_cast<std::size_t>(j)];
    double processed = v.local_data_bps;
    for (int i = 0; i < n; ++i) {
      if (i != j && links(i, j) != 0) processed += plan.ratio(i, j) * plan.rate(i, j);
    }
    const double compute_cap = v.cpu_hz / cfg.cycles_per_bit_beta;
    if (exceeds(processed, compute_cap, tol)) flag("compute", -1, j, processed - compute_cap);
    const double energy =
        cfg.tau_t * cfg.tx_power_Pt * count + cfg.epsilon_j * processed * cfg.tau_c;
    if (exceeds(energy, cfg.energy_budget_ET, tol)) {
      flag("energy", -1, j, energy - cfg.energy_budget_ET);
    }
  }
  if (options.budget_mode == BudgetMode::kNetwork && total > cfg.subchannel_budget_K) {
    flag("subchannel_budget", -1, -1, total - cfg.subchannel_budget_K);
  }
  return out;
}

std::vector<Violation> audit_constraints(const TmacResult& result, const ScenarioState& state,
                                         const ChannelMatrix& channel,
                                         const ScenarioConfig& cfg,
                                         const AuditOptions& options) {
  return audit_constraints(result.links, result.plan, state, channel, cfg, options);
}

}  // namespace tmac
