#include "tmac/commands.hpp"

#include <fstream>
#include <functional>

#include "tmac/config.hpp"
#include "tmac/errors.hpp"
#include "tmac/experiments.hpp"

namespace tmac {

namespace {

bool to_stdout(const CommandOptions& opts) { return opts.out_path.empty() || opts.out_path == "-"; }

// The human-readable summary goes wherever the CSV does not.
std::ostream& summary_stream(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return to_stdout(opts) ? err : out;
}

void emit(const CsvTable& table, const CommandOptions& opts, std::ostream& out) {
  if (to_stdout(opts)) {
    table.write(out);
    return;
  }
  std::ofstream file(opts.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file '" + opts.out_path + "'");
  table.write(file);
  if (!file.flush()) throw std::runtime_error("write failed for '" + opts.out_path + "'");
}

Config load(const CommandOptions& opts) {
  Config cfg = opts.config_path.empty() ? Config{} : load_config(opts.config_path);
  if (opts.seeds && *opts.seeds < 1) throw ConfigError("seeds", "must be >= 1");
  if (opts.parallel < 1) throw ConfigError("parallel", "must be >= 1");
  return cfg;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      const auto b = cur.find_first_not_of(" \t");
      const auto e = cur.find_last_not_of(" \t");
      if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

double parse_value(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("values", "expected a number, got '" + s + "'");
  return v;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

void print_links(std::ostream& s, const SchemeOutcome& o) {
  const auto n = o.links.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (o.links(i, j) == 0) continue;
      s << "  " << i << "->" << j << "  d=" << format_number(o.plan.rate(i, j))
        << "  rho=" << format_number(o.plan.ratio(i, j))
        << "  beta*=" << format_number(o.plan.beta_star(i, j))
        << "  u=" << format_number(o.plan.payload(i, j)) << '\n';
    }
  }
}

bool check_audit(const SchemeOutcome& o, std::uint64_t seed, std::ostream& err) {
  if (!o.converged || o.violations.empty()) return true;
  for (const auto& v : o.violations) {
    err << "audit failure: scheme=" << to_string(o.scheme) << " seed=" << seed
        << " constraint=" << v.constraint << " tx=" << v.tx << " ego=" << v.ego
        << " magnitude=" << format_number(v.magnitude) << '\n';
  }
  return false;
}

int run_schemes(const CommandOptions& opts, std::ostream& out, std::ostream& err,
                const std::vector<Scheme>& schemes) {
  const Config cfg = load(opts);
  const int seeds = opts.seeds.value_or(1);
  std::ostream& summary = summary_stream(opts, out, err);
  CsvTable table = per_ego_header();
  bool converged = true;
  for (int s = 0; s < seeds; ++s) {
    Config local = cfg;
    local.scenario.rng_seed = cfg.scenario.rng_seed + static_cast<std::uint64_t>(s);
    const ScenarioState state = generate_scenario(local.scenario);
    const ChannelMatrix channel = build_channel(state, local.scenario);
    for (Scheme scheme : schemes) {
      const SchemeOutcome o = run_scheme(scheme, state, channel, local);
      if (!check_audit(o, local.scenario.rng_seed, err)) return kExitFailure;
      converged = converged && o.converged;
      summary << to_string(scheme) << " seed=" << local.scenario.rng_seed
              << " T_sum=" << format_number(o.throughput) << " bps"
              << (o.converged ? "" : " (not converged)") << '\n';
      if (scheme == Scheme::kTmac) print_links(summary, o);
      append_per_ego_rows(table, o, state, local.scenario);
    }
  }
  emit(table, opts, out);
  return converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return run_schemes(opts, out, err, {Scheme::kTmac}); });
}

int cmd_baselines(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    return run_schemes(opts, out, err,
                       {Scheme::kTmac, Scheme::kDmddaLike, Scheme::kFtsLike, Scheme::kNoFusion});
  });
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = load(opts);
    SweepSpec spec;
    spec.param = opts.param;
    for (const auto& v : split_list(opts.values)) spec.values.push_back(parse_value(v));
    spec.seeds = opts.seeds.value_or(cfg.seeds);
    if (!opts.schemes.empty()) {
      spec.schemes.clear();
      for (const auto& tag : split_list(opts.schemes)) spec.schemes.push_back(scheme_from_string(tag));
    }
    const auto points = run_sweep(cfg, spec, opts.parallel);
    std::ostream& summary = summary_stream(opts, out, err);
    for (const auto& p : points) {
      summary << spec.param << '=' << format_number(p.value) << ' ' << to_string(p.scheme)
              << " mean=" << format_number(p.mean) << " std=" << format_number(p.stddev) << '\n';
    }
    emit(sweep_table(spec.param, points), opts, out);
    return kExitOk;
  });
}

int cmd_finetune_demo(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Config cfg = load(opts);
    if (opts.seeds) cfg.demo.ft_seeds = *opts.seeds;
    const FinetuneSummary result = run_finetune_experiment(cfg);
    std::ostream& summary = summary_stream(opts, out, err);
    summary << "rho*=" << format_number(result.rho_star)
            << " beta*=" << format_number(result.beta_star)
            << " bottleneck=" << result.bottleneck << '\n';
    if (result.median_pretrained_mse) {
      summary << "median held-out MSE: pretrained=" << format_number(*result.median_pretrained_mse)
              << " finetuned=" << format_number(*result.median_finetuned_mse) << '\n';
    } else {
      summary << "all frames used for fine-tuning; no compressed frames to score\n";
    }
    emit(finetune_table(cfg, result), opts, out);
    return kExitOk;
  });
}

int cmd_latency(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Config cfg = load(opts);
    const auto rows = latency_report(cfg.latency);
    std::ostream& summary = summary_stream(opts, out, err);
    for (const auto& r : rows) {
      summary << r.scheme << " total=" << format_number(r.total_ms) << " ms"
              << (r.under_100ms ? "" : " (exceeds 100 ms)") << '\n';
    }
    emit(latency_table(rows), opts, out);
    return kExitOk;
  });
}

}  // namespace tmac
