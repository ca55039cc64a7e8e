#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "tmac/channel.hpp"
#include "tmac/rdmodel.hpp"
#include "tmac/scenario.hpp"
#include "tmac/simplex.hpp"

namespace tmac {

// s_ij = 1 when transmitter i feeds ego j. Binary, zero diagonal.
using LinkMatrix = Eigen::MatrixXi;

enum class BudgetMode {
  kPerEgo,   // at most K incoming links per ego column
  kNetwork,  // at most K links in total
};

struct TmacOptions {
  BudgetMode budget_mode = BudgetMode::kPerEgo;
  // 0 selects 4 * N * K.
  int max_rounds = 0;
  // An addition must raise T_sum by more than this fraction.
  double improvement_tol = 1e-6;
  BetaMap beta_map;
  RdOperatingSet operating_set;
};

struct RatePlan {
  Eigen::MatrixXd rate;       // d_ij, bits/s
  Eigen::MatrixXd ratio;      // rho_ij
  Eigen::MatrixXd payload;    // u_ij = rho_ij d_ij, bits/s
  Eigen::MatrixXd beta_star;  // selected trade-off parameter per link

  static RatePlan zero(int n);
};

struct EgoBudgets {
  // Energy-derived budget, before flooring at zero.
  Eigen::VectorXd gamma;
  // F_j / beta - A_j.
  Eigen::VectorXd phi;
  // Per-link energy cost u_ij eps tau_c + tau_t Pt.
  Eigen::MatrixXd chi;
};

struct Link {
  int tx = 0;
  int ego = 0;
  friend bool operator==(const Link&, const Link&) = default;
};

// Rate LP for a fixed link matrix. One variable per established link,
// ordered by ego, then transmitter.
struct RateLp {
  LpProblem<double> lp;
  std::vector<Link> links;
  Eigen::VectorXd weights;
  // Egos whose min(gamma, phi) is negative.
  std::vector<int> infeasible_egos;
};

struct RateSolution {
  RatePlan plan;
  double throughput = 0.0;
  RateLp problem;
  LpSolution<double> lp;
};

enum class ActionKind { kNone, kAdded, kRemoved };

struct Action {
  ActionKind kind = ActionKind::kNone;
  Link link;
};

std::string to_string(const Action& a);

struct P2Step {
  LinkMatrix links;
  Action action;
};

struct TraceEntry {
  int round = 0;
  double throughput = 0.0;
  Action action;
};

struct TmacResult {
  LinkMatrix links;
  RatePlan plan;
  double throughput = 0.0;
  std::vector<TraceEntry> trace;
  // False when the round limit was hit, or when some vehicle's local data
  // alone exceeds its compute or energy limit.
  bool converged = false;
};

// Lower bound max(rho_min, eta e^{-L_ij}) on the compression ratio.
double ratio_floor(const ScenarioState& state, const ScenarioConfig& cfg, int tx, int ego);

// Top-K capacities per ego column (or network-wide in kNetwork mode), ties
// broken by lower transmitter index. Throws DomainError for K < 0.
LinkMatrix initial_links(const ChannelMatrix& channel, int k,
                         BudgetMode mode = BudgetMode::kPerEgo);

EgoBudgets compute_budgets(const ScenarioState& state, const ScenarioConfig& cfg,
                           const LinkMatrix& links, const Eigen::MatrixXd& payload);

RateLp build_p12(const ScenarioState& state, const ChannelMatrix& channel,
                 const ScenarioConfig& cfg, const LinkMatrix& links);

// d = u / rho_floor, rho = rho_floor. Throws ConsistencyError when u breaks
// its caps beyond tolerance.
RatePlan recover_plan(const Eigen::MatrixXd& payload, const ScenarioState& state,
                      const ChannelMatrix& channel, const ScenarioConfig& cfg,
                      const LinkMatrix& links);

// T_sum = sum_j (A_j + sum_i s_ij d_ij).
double total_throughput(const ScenarioState& state, const LinkMatrix& links,
                        const Eigen::MatrixXd& rate);

// Builds and solves the rate LP, then recovers the plan.
RateSolution solve_rates(const ScenarioState& state, const ChannelMatrix& channel,
                         const ScenarioConfig& cfg, const LinkMatrix& links);

// One link-search move: drop the weakest link into an infeasible ego, or add
// the single link with the best strict throughput gain, or nothing.
P2Step solve_p2_step(const ScenarioState& state, const ChannelMatrix& channel,
                     const ScenarioConfig& cfg, const RatePlan& plan, const LinkMatrix& links,
                     const TmacOptions& options = {});

TmacResult run_tmac(const ScenarioState& state, const ChannelMatrix& channel,
                    const ScenarioConfig& cfg, const TmacOptions& options = {});

// Fills plan.beta_star on established links from each link's ratio.
void assign_operating_points(RatePlan& plan, const LinkMatrix& links, const BetaMap& map,
                             const RdOperatingSet& theta);

struct Violation {
  std::string constraint;
  int tx = -1;  // -1 when the constraint is per ego or global
  int ego = -1;
  double magnitude = 0.0;
};

struct AuditOptions {
  BudgetMode budget_mode = BudgetMode::kPerEgo;
  // Schemes that transmit uncompressed may exceed rho_max.
  bool enforce_rho_max = true;
  double rel_tol = 1e-8;
};

// Independent check of the link budget, rate caps, ratio bounds, compute and
// energy limits. Constraint names: "link_matrix", "subchannel_budget",
// "rate_cap", "ratio_bounds", "ratio_priority", "rate_product", "compute",
// "energy".
std::vector<Violation> audit_constraints(const LinkMatrix& links, const RatePlan& plan,
                                         const ScenarioState& state,
                                         const ChannelMatrix& channel,
                                         const ScenarioConfig& cfg,
                                         const AuditOptions& options = {});

std::vector<Violation> audit_constraints(const TmacResult& result, const ScenarioState& state,
                                         const ChannelMatrix& channel,
                                         const ScenarioConfig& cfg,
                                         const AuditOptions& options = {});

}  // namespace tmac
