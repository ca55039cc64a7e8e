#pragma once

#include <optional>
#include <ostream>
#include <string>

namespace tmac {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotConverged = 3;

struct CommandOptions {
  // Empty runs the built-in defaults.
  std::string config_path;
  // "-" or empty writes the CSV to `out` and the human summary to `err`.
  std::string out_path;
  std::optional<int> seeds;
  int parallel = 1;

  // sweep only
  std::string param;
  std::string values;
  std::string schemes;
};

int cmd_solve(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_baselines(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_finetune_demo(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_latency(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace tmac
