#include <iostream>

#include "CLI11.hpp"
#include "tmac/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Link scheduling and adaptive compression for cooperative perception"};
  app.require_subcommand(1);

  tmac::CommandOptions opts;
  int seeds = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "Flat key = value config file");
    sub->add_option("--out", opts.out_path, "CSV output path ('-' for stdout)");
    sub->add_option("--seeds", seeds, "Number of seeds")->check(CLI::PositiveNumber);
    sub->add_option("--parallel", opts.parallel, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Run TMAC on one scenario");
  auto* baselines = app.add_subcommand("baselines", "Compare TMAC with the baseline schemes");
  auto* sweep = app.add_subcommand("sweep", "Average throughput over a parameter sweep");
  auto* finetune = app.add_subcommand("finetune-demo", "Fine-tuning experiment on synthetic frames");
  auto* latency = app.add_subcommand("latency", "Packet latency table");
  for (auto* sub : {solve, baselines, sweep, finetune, latency}) common(sub);
  sweep->add_option("--param", opts.param, "vehicle_count, bandwidth_W, tx_power_Pt or span_m")
      ->required();
  sweep->add_option("--values", opts.values, "Comma-separated values")->required();
  sweep->add_option("--schemes", opts.schemes, "Comma-separated schemes (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tmac::kExitConfig;
  }
  if (seeds > 0) opts.seeds = seeds;

  if (*solve) return tmac::cmd_solve(opts, std::cout, std::cerr);
  if (*baselines) return tmac::cmd_baselines(opts, std::cout, std::cerr);
  if (*sweep) return tmac::cmd_sweep(opts, std::cout, std::cerr);
  if (*finetune) return tmac::cmd_finetune_demo(opts, std::cout, std::cerr);
  return tmac::cmd_latency(opts, std::cout, std::cerr);
}
