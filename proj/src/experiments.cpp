#include "tmac/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "tmac/errors.hpp"
#include "tmac/random.hpp"

namespace tmac {

namespace {

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + stream;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string describe(const std::vector<Violation>& v) {
  const Violation& first = v.front();
  return first.constraint + " at (" + std::to_string(first.tx) + "," + std::to_string(first.ego) +
         ") by " + format_number(first.magnitude);
}

// Runs fn(0..count-1) on up to `parallel` threads, rethrowing the first error.
template <typename Fn>
void parallel_for(int count, int parallel, Fn&& fn) {
  const int workers = std::max(1, std::min(parallel, count));
  if (workers == 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k = next++; k < count; k = next++) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

SchemeOutcome run_scheme(Scheme scheme, const ScenarioState& state, const ChannelMatrix& channel,
                         const Config& cfg) {
  SchemeOutcome out;
  out.scheme = scheme;
  AuditOptions audit = audit_options_for(scheme);
  if (scheme == Scheme::kTmac) {
    TmacResult r = run_tmac(state, channel, cfg.scenario, cfg.tmac);
    out.links = std::move(r.links);
    out.plan = std::move(r.plan);
    out.throughput = r.throughput;
    out.converged = r.converged;
    audit.budget_mode = cfg.tmac.budget_mode;
  } else {
    BaselineResult r = scheme == Scheme::kDmddaLike ? run_dmdda_like(state, channel, cfg.scenario)
                       : scheme == Scheme::kFtsLike ? run_fts(state, channel, cfg.scenario)
                                                    : run_no_fusion(state, cfg.scenario);
    out.links = std::move(r.links);
    out.plan = std::move(r.plan);
    out.throughput = r.throughput;
  }
  out.violations = audit_constraints(out.links, out.plan, state, channel, cfg.scenario, audit);
  return out;
}

CsvTable per_ego_header() {
  return CsvTable({"scheme", "seed", "ego", "local_data_bps", "links_in", "received_bps",
                   "payload_bps", "budget_bps", "ego_throughput_bps", "total_throughput_bps",
                   "converged"});
}

void append_per_ego_rows(CsvTable& table, const SchemeOutcome& outcome,
                         const ScenarioState& state, const ScenarioConfig& cfg) {
  const int n = state.size();
  const EgoBudgets budgets = compute_budgets(state, cfg, outcome.links, outcome.plan.payload);
  for (int j = 0; j < n; ++j) {
    const double a = state.vehicles[static_cast<std::size_t>(j)].local_data_bps;
    double received = 0.0;
    double payload = 0.0;
    int links_in = 0;
    for (int i = 0; i < n; ++i) {
      if (i == j || outcome.links(i, j) == 0) continue;
      ++links_in;
      received += outcome.plan.rate(i, j);
      payload += outcome.plan.payload(i, j);
    }
    table.add_row({to_string(outcome.scheme), format_number(static_cast<long long>(cfg.rng_seed)),
                   format_number(j), format_number(a), format_number(links_in),
                   format_number(received), format_number(payload),
                   format_number(std::min(budgets.gamma(j), budgets.phi(j))),
                   format_number(a + received), format_number(outcome.throughput),
                   outcome.converged ? "true" : "false"});
  }
}

void SweepSpec::validate() const {
  static const char* kParams[] = {"vehicle_count", "bandwidth_W", "tx_power_Pt", "span_m"};
  if (std::find(std::begin(kParams), std::end(kParams), param) == std::end(kParams)) {
    throw ConfigError("param", "cannot sweep '" + param + "'");
  }
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  if (seeds < 1) throw ConfigError("seeds", "must be >= 1");
  if (schemes.empty()) throw ConfigError("schemes", "no schemes selected");
}

ScenarioConfig apply_sweep_value(ScenarioConfig cfg, const std::string& param, double value) {
  if (param == "vehicle_count") {
    if (value != std::floor(value)) throw ConfigError("values", "vehicle_count must be integral");
    cfg.vehicle_count = static_cast<int>(value);
  } else if (param == "bandwidth_W") {
    cfg.bandwidth_W = value;
  } else if (param == "tx_power_Pt") {
    cfg.tx_power_Pt = value;
  } else if (param == "span_m") {
    cfg.span_m = value;
  } else {
    throw ConfigError("param", "cannot sweep '" + param + "'");
  }
  if (cfg.ego_index >= cfg.vehicle_count) cfg.ego_index = -1;
  cfg.validate();
  return cfg;
}

std::vector<SweepPoint> run_sweep(const Config& cfg, const SweepSpec& spec, int parallel) {
  spec.validate();
  const int nv = static_cast<int>(spec.values.size());
  const int ns = spec.seeds;
  const int nsch = static_cast<int>(spec.schemes.size());
  std::vector<ScenarioConfig> point_cfg;
  for (double v : spec.values) point_cfg.push_back(apply_sweep_value(cfg.scenario, spec.param, v));

  std::vector<double> totals(static_cast<std::size_t>(nv * ns * nsch), 0.0);
  parallel_for(nv * ns, parallel, [&](int job) {
    const int v = job / ns;
    const int s = job % ns;
    Config local = cfg;
    local.scenario = point_cfg[static_cast<std::size_t>(v)];
    local.scenario.rng_seed = cfg.scenario.rng_seed + static_cast<std::uint64_t>(s);
    const ScenarioState state = generate_scenario(local.scenario);
    const ChannelMatrix channel = build_channel(state, local.scenario);
    for (int k = 0; k < nsch; ++k) {
      const SchemeOutcome o =
          run_scheme(spec.schemes[static_cast<std::size_t>(k)], state, channel, local);
      if (o.converged && !o.violations.empty()) {
        throw ConsistencyError(to_string(o.scheme) + " failed the constraint audit: " +
                               describe(o.violations));
      }
      totals[static_cast<std::size_t>((v * ns + s) * nsch + k)] = o.throughput;
    }
  });

  std::vector<SweepPoint> out;
  for (int v = 0; v < nv; ++v) {
    for (int k = 0; k < nsch; ++k) {
      double sum = 0.0;
      for (int s = 0; s < ns; ++s) sum += totals[static_cast<std::size_t>((v * ns + s) * nsch + k)];
      const double mean = sum / ns;
      double ss = 0.0;
      for (int s = 0; s < ns; ++s) {
        const double dev = totals[static_cast<std::size_t>((v * ns + s) * nsch + k)] - mean;
        ss += dev * dev;
      }
      out.push_back({spec.values[static_cast<std::size_t>(v)],
                     spec.schemes[static_cast<std::size_t>(k)], mean,
                     ns > 1 ? std::sqrt(ss / (ns - 1)) : 0.0, ns});
    }
  }
  return out;
}

CsvTable sweep_table(const std::string& param, const std::vector<SweepPoint>& points) {
  CsvTable t({"param", "value", "scheme", "mean_throughput_bps", "std_bps", "seeds"});
  for (const auto& p : points) {
    t.add_row({param, format_number(p.value), to_string(p.scheme), format_number(p.mean),
               format_number(p.stddev), format_number(p.seeds)});
  }
  return t;
}

Eigen::MatrixXd lagged_joint(const Eigen::MatrixXd& frames, int coordinate, int bins) {
  const Eigen::Index count = frames.cols();
  if (count < 2) throw DomainError("lagged_joint: need at least two frames");
  const Eigen::RowVectorXd series = frames.row(coordinate);
  const double lo = series.minCoeff();
  const double hi = series.maxCoeff();
  auto bin = [&](double x) {
    if (hi <= lo) return 0;
    const int b = static_cast<int>((x - lo) / (hi - lo) * bins);
    return std::clamp(b, 0, bins - 1);
  };
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(bins, bins);
  for (Eigen::Index t = 1; t < count; ++t) joint(bin(series(t)), bin(series(t - 1))) += 1.0;
  return joint / static_cast<double>(count - 1);
}

FinetuneSummary run_finetune_experiment(const Config& cfg) {
  const FinetuneDemoConfig& demo = cfg.demo;
  demo.validate();

  FinetuneSummary summary;
  {
    const ScenarioState state = generate_scenario(cfg.scenario);
    const ChannelMatrix channel = build_channel(state, cfg.scenario);
    const TmacResult r = run_tmac(state, channel, cfg.scenario, cfg.tmac);
    double sum = 0.0;
    int active = 0;
    for (Eigen::Index j = 0; j < r.links.cols(); ++j) {
      for (Eigen::Index i = 0; i < r.links.rows(); ++i) {
        if (r.links(i, j) != 0 && r.plan.payload(i, j) > 0.0) {
          sum += r.plan.ratio(i, j);
          ++active;
        }
      }
    }
    summary.rho_star = active > 0 ? sum / active : cfg.scenario.rho_max;
    const double rho = std::clamp(summary.rho_star, cfg.tmac.beta_map.min_rho(),
                                  cfg.tmac.beta_map.max_rho());
    summary.beta_star = select_operating_point(cfg.tmac.operating_set, rho, cfg.tmac.beta_map);
  }
  summary.bottleneck =
      demo.ft_bottleneck > 0
          ? demo.ft_bottleneck
          : std::clamp(static_cast<int>(std::lround(summary.rho_star * demo.ft_dim)), 1,
                       demo.ft_dim);

  constexpr int kPretrainFrames = 200;
  std::vector<double> pre;
  std::vector<double> post;
  for (int s = 0; s < demo.ft_seeds; ++s) {
    const std::uint64_t seed = cfg.scenario.rng_seed + static_cast<std::uint64_t>(s);
    FinetuneSeedResult res;
    res.seed = seed;

    const Eigen::MatrixXd pretrain_scene =
        scene_mixing(demo.ft_dim, demo.ft_scene_rank, demo.ft_scene_noise, mix_seed(seed, 1));
    const Eigen::MatrixXd target_scene =
        scene_mixing(demo.ft_dim, demo.ft_scene_rank, demo.ft_scene_noise, mix_seed(seed, 2));
    const Eigen::MatrixXd pretrain_frames = correlated_frames(
        pretrain_scene, kPretrainFrames, demo.ft_correlation, mix_seed(seed, 3));
    const Eigen::MatrixXd sequence = correlated_frames(target_scene, demo.ft_frames_total,
                                                       demo.ft_correlation, mix_seed(seed, 4));

    const LinearCodec<double> initial =
        random_codec(demo.ft_dim, summary.bottleneck, 0.1, mix_seed(seed, 5));
    const LinearCodec<double> pretrained =
        finetune_codec(initial, pretrain_frames, demo.ft_pretrain_steps, demo.ft_alpha);

    const int m = demo.ft_frames_tune;
    const int heldout = demo.ft_frames_total - m;
    const LinearCodec<double> tuned =
        m > 0 ? finetune_codec(pretrained, Eigen::MatrixXd(sequence.leftCols(m)), demo.ft_steps,
                               demo.ft_alpha)
              : pretrained;
    if (heldout > 0) {
      const Eigen::MatrixXd test = sequence.rightCols(heldout);
      res.pretrained_mse = reconstruction_mse(pretrained, test);
      res.finetuned_mse = reconstruction_mse(tuned, test);
      pre.push_back(*res.pretrained_mse);
      post.push_back(*res.finetuned_mse);
    }
    if (demo.ft_frames_total >= 2) {
      const Eigen::MatrixXd joint = lagged_joint(sequence, 0, demo.ft_bins);
      res.h_future_bits = marginal_entropy_future<double>(joint);
      res.mi_bits = mutual_information<double>(joint);
      res.h_cond_bits = conditional_entropy<double>(joint);
    }
    summary.seeds.push_back(res);
  }
  if (!pre.empty()) {
    summary.median_pretrained_mse = median(pre);
    summary.median_finetuned_mse = median(post);
  }
  return summary;
}

CsvTable finetune_table(const Config& cfg, const FinetuneSummary& summary) {
  CsvTable t({"row_type", "seed", "frames_total", "frames_tune", "bottleneck", "rho_star",
              "beta_star", "pretrained_mse", "finetuned_mse", "h_future_bits", "mi_bits",
              "h_cond_bits"});
  const auto& demo = cfg.demo;
  for (const auto& s : summary.seeds) {
    if (!s.pretrained_mse) continue;
    t.add_row({"seed", format_number(static_cast<long long>(s.seed)),
               format_number(demo.ft_frames_total), format_number(demo.ft_frames_tune),
               format_number(summary.bottleneck), format_number(summary.rho_star),
               format_number(summary.beta_star), optional_number(s.pretrained_mse),
               optional_number(s.finetuned_mse), optional_number(s.h_future_bits),
               optional_number(s.mi_bits), optional_number(s.h_cond_bits)});
  }
  std::vector<double> hf;
  std::vector<double> mi;
  std::vector<double> hc;
  for (const auto& s : summary.seeds) {
    if (s.h_future_bits) {
      hf.push_back(*s.h_future_bits);
      mi.push_back(*s.mi_bits);
      hc.push_back(*s.h_cond_bits);
    }
  }
  auto med = [](const std::vector<double>& v) {
    return v.empty() ? std::optional<double>{} : std::optional<double>{median(v)};
  };
  t.add_row({"summary", "", format_number(demo.ft_frames_total),
             format_number(demo.ft_frames_tune), format_number(summary.bottleneck),
             format_number(summary.rho_star), format_number(summary.beta_star),
             optional_number(summary.median_pretrained_mse),
             optional_number(summary.median_finetuned_mse), optional_number(med(hf)),
             optional_number(med(mi)), optional_number(med(hc))});
  return t;
}

CsvTable latency_table(const std::vector<LatencyRow>& rows) {
  CsvTable t({"scheme", "n", "i", "L_ms", "Lhat_ms", "total_ms", "under_100ms"});
  for (const auto& r : rows) {
    t.add_row({r.scheme, format_number(r.n), format_number(r.i), format_number(r.L_ms),
               format_number(r.Lhat_ms), format_number(r.total_ms),
               r.under_100ms ? "true" : "false"});
  }
  return t;
}

}  // namespace tmac
