#include "tmac/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tmac/errors.hpp"

namespace tmac {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back({});
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(key, "integer out of range");
  }
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::pair<double, double> to_pair(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 2) throw ConfigError(key, "expected 'lower, upper'");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

using Setter = std::function<void(Config&, const std::string&)>;

const std::map<std::string, Setter>& scalar_setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto dbl = [&t](const char* key, double ScenarioConfig::*m) {
      t[key] = [key, m](Config& c, const std::string& v) { c.scenario.*m = to_double(key, v); };
    };
    auto num = [&t](const char* key, int ScenarioConfig::*m) {
      t[key] = [key, m](Config& c, const std::string& v) { c.scenario.*m = to_int(key, v); };
    };
    auto range = [&t](const char* key, std::pair<double, double> ScenarioConfig::*m) {
      t[key] = [key, m](Config& c, const std::string& v) { c.scenario.*m = to_pair(key, v); };
    };
    num("vehicle_count", &ScenarioConfig::vehicle_count);
    num("lane_count", &ScenarioConfig::lane_count);
    dbl("span_m", &ScenarioConfig::span_m);
    range("speed_range_kmh", &ScenarioConfig::speed_range_kmh);
    dbl("bandwidth_W", &ScenarioConfig::bandwidth_W);
    num("subchannel_budget_K", &ScenarioConfig::subchannel_budget_K);
    dbl("tx_power_Pt", &ScenarioConfig::tx_power_Pt);
    dbl("noise_psd_N0", &ScenarioConfig::noise_psd_N0);
    dbl("local_data_A", &ScenarioConfig::local_data_A);
    dbl("cycles_per_bit_beta", &ScenarioConfig::cycles_per_bit_beta);
    range("cpu_range_F", &ScenarioConfig::cpu_range_F);
    dbl("energy_budget_ET", &ScenarioConfig::energy_budget_ET);
    dbl("eta", &ScenarioConfig::eta);
    dbl("rho_min", &ScenarioConfig::rho_min);
    dbl("rho_max", &ScenarioConfig::rho_max);
    dbl("tau_t", &ScenarioConfig::tau_t);
    dbl("tau_c", &ScenarioConfig::tau_c);
    dbl("epsilon_j", &ScenarioConfig::epsilon_j);
    dbl("comm_range_m", &ScenarioConfig::comm_range_m);
    dbl("lane_width_m", &ScenarioConfig::lane_width_m);
    num("ego_index", &ScenarioConfig::ego_index);
    dbl("path_loss_exponent", &ScenarioConfig::path_loss_exponent);
    dbl("ref_gain_g0", &ScenarioConfig::ref_gain_g0);
    t["rng_seed"] = [](Config& c, const std::string& v) {
      const long long s = to_integer("rng_seed", v);
      if (s < 0) throw ConfigError("rng_seed", "must be >= 0");
      c.scenario.rng_seed = static_cast<std::uint64_t>(s);
    };
    t["fading_enabled"] = [](Config& c, const std::string& v) {
      c.scenario.fading_enabled = to_bool("fading_enabled", v);
    };

    t["budget_mode"] = [](Config& c, const std::string& v) {
      if (v == "per_ego") {
        c.tmac.budget_mode = BudgetMode::kPerEgo;
      } else if (v == "network") {
        c.tmac.budget_mode = BudgetMode::kNetwork;
      } else {
        throw ConfigError("budget_mode", "expected per_ego or network");
      }
    };
    t["max_rounds"] = [](Config& c, const std::string& v) {
      c.tmac.max_rounds = to_int("max_rounds", v);
      if (c.tmac.max_rounds < 0) throw ConfigError("max_rounds", "must be >= 0");
    };
    t["seeds"] = [](Config& c, const std::string& v) { c.seeds = to_int("seeds", v); };
    t["beta_table"] = [](Config& c, const std::string& v) {
      std::vector<std::pair<double, double>> knots;
      for (const auto& entry : split(v, ',')) {
        const auto kv = split(entry, ':');
        if (kv.size() != 2) throw ConfigError("beta_table", "entries must be 'rho:beta'");
        knots.emplace_back(to_double("beta_table", kv[0]), to_double("beta_table", kv[1]));
      }
      try {
        c.tmac.beta_map = BetaMap(std::move(knots));
      } catch (const DomainError& e) {
        throw ConfigError("beta_table", e.what());
      }
    };
    t["beta_set"] = [](Config& c, const std::string& v) {
      std::vector<double> betas;
      for (const auto& entry : split(v, ',')) betas.push_back(to_double("beta_set", entry));
      try {
        c.tmac.operating_set = RdOperatingSet(std::move(betas));
      } catch (const DomainError& e) {
        throw ConfigError("beta_set", e.what());
      }
    };

    auto demo_int = [&t](const char* key, int FinetuneDemoConfig::*m) {
      t[key] = [key, m](Config& c, const std::string& v) { c.demo.*m = to_int(key, v); };
    };
    auto demo_dbl = [&t](const char* key, double FinetuneDemoConfig::*m) {
      t[key] = [key, m](Config& c, const std::string& v) { c.demo.*m = to_double(key, v); };
    };
    demo_int("ft_dim", &FinetuneDemoConfig::ft_dim);
    demo_int("ft_bottleneck", &FinetuneDemoConfig::ft_bottleneck);
    demo_int("ft_frames_total", &FinetuneDemoConfig::ft_frames_total);
    demo_int("ft_frames_tune", &FinetuneDemoConfig::ft_frames_tune);
    demo_dbl("ft_correlation", &FinetuneDemoConfig::ft_correlation);
    demo_dbl("ft_alpha", &FinetuneDemoConfig::ft_alpha);
    demo_int("ft_steps", &FinetuneDemoConfig::ft_steps);
    demo_int("ft_pretrain_steps", &FinetuneDemoConfig::ft_pretrain_steps);
    demo_int("ft_seeds", &FinetuneDemoConfig::ft_seeds);
    demo_int("ft_scene_rank", &FinetuneDemoConfig::ft_scene_rank);
    demo_dbl("ft_scene_noise", &FinetuneDemoConfig::ft_scene_noise);
    demo_int("ft_bins", &FinetuneDemoConfig::ft_bins);
    return t;
  }();
  return table;
}

using LatencySetter = std::function<void(LatencyParams&, const std::string&)>;

const std::map<std::string, LatencySetter>& latency_setters() {
  static const std::map<std::string, LatencySetter> table = [] {
    std::map<std::string, LatencySetter> t;
    auto dbl = [&t](const char* key, double LatencyParams::*m) {
      t[key] = [key, m](LatencyParams& p, const std::string& v) { p.*m = to_double(key, v); };
    };
    dbl("L_up", &LatencyParams::L_up);
    dbl("L_down", &LatencyParams::L_down);
    dbl("L_ft", &LatencyParams::L_ft);
    dbl("Lhat_up", &LatencyParams::Lhat_up);
    dbl("Lhat_down", &LatencyParams::Lhat_down);
    dbl("Lhat_inf", &LatencyParams::Lhat_inf);
    t["frames_per_packet"] = [](LatencyParams& p, const std::string& v) {
      p.frames_per_packet = to_int("frames_per_packet", v);
    };
    t["finetune_frames"] = [](LatencyParams& p, const std::string& v) {
      p.finetune_frames = to_int("finetune_frames", v);
    };
    t["latency_label"] = [](LatencyParams& p, const std::string& v) { p.label = v; };
    return t;
  }();
  return table;
}

}  // namespace

void FinetuneDemoConfig::validate() const {
  if (ft_dim < 1) throw ConfigError("ft_dim", "must be >= 1");
  if (ft_bottleneck < 0 || ft_bottleneck > ft_dim) {
    throw ConfigError("ft_bottleneck", "must lie in [0, ft_dim]");
  }
  if (ft_frames_total < 1) throw ConfigError("ft_frames_total", "must be >= 1");
  if (ft_frames_tune < 0 || ft_frames_tune > ft_frames_total) {
    throw ConfigError("ft_frames_tune", "must lie in [0, ft_frames_total]");
  }
  if (!(ft_correlation >= 0.0 && ft_correlation < 1.0)) {
    throw ConfigError("ft_correlation", "must lie in [0, 1)");
  }
  if (!(ft_alpha >= 0.0)) throw ConfigError("ft_alpha", "must be >= 0");
  if (ft_steps < 0) throw ConfigError("ft_steps", "must be >= 0");
  if (ft_pretrain_steps < 0) throw ConfigError("ft_pretrain_steps", "must be >= 0");
  if (ft_seeds < 1) throw ConfigError("ft_seeds", "must be >= 1");
  if (ft_scene_rank < 1 || ft_scene_rank > ft_dim) {
    throw ConfigError("ft_scene_rank", "must lie in [1, ft_dim]");
  }
  if (!(ft_scene_noise >= 0.0)) throw ConfigError("ft_scene_noise", "must be >= 0");
  if (ft_bins < 2) throw ConfigError("ft_bins", "must be >= 2");
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::set<std::string> seen;
  std::map<std::string, std::vector<std::string>> latency_values;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(key, "repeated key");

    if (auto it = scalar_setters().find(key); it != scalar_setters().end()) {
      it->second(cfg, value);
    } else if (latency_setters().count(key) != 0) {
      latency_values[key] = split(value, ',');
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  if (!latency_values.empty()) {
    std::size_t rows = 1;
    for (const auto& [key, values] : latency_values) {
      if (values.size() != 1 && rows != 1 && values.size() != rows) {
        throw ConfigError(key, "latency lists must share one length");
      }
      rows = std::max(rows, values.size());
    }
    cfg.latency.assign(rows, LatencyParams{});
    for (const auto& [key, values] : latency_values) {
      for (std::size_t r = 0; r < rows; ++r) {
        latency_setters().at(key)(cfg.latency[r], values.size() == 1 ? values[0] : values[r]);
      }
    }
  }

  cfg.scenario.validate();
  if (cfg.seeds < 1) throw ConfigError("seeds", "must be >= 1");
  cfg.demo.validate();
  for (const auto& p : cfg.latency) {
    if (p.finetune_frames < 0 || p.finetune_frames > p.frames_per_packet) {
      throw ConfigError("finetune_frames", "must lie in [0, frames_per_packet]");
    }
    const std::pair<const char*, double> parts[] = {
        {"L_up", p.L_up},       {"L_down", p.L_down},       {"L_ft", p.L_ft},
        {"Lhat_up", p.Lhat_up}, {"Lhat_down", p.Lhat_down}, {"Lhat_inf", p.Lhat_inf}};
    for (const auto& [name, v] : parts) {
      if (!(v >= 0.0)) throw ConfigError(name, "must be >= 0");
    }
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace tmac
