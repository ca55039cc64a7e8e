#pragma once

#include <string>
#include <vector>

namespace tmac {

// Per-frame latency components in milliseconds. The first `finetune_frames`
// frames of a packet travel uncompressed and feed fine-tuning; the rest are
// compressed.
struct LatencyParams {
  std::string label = "TMAC";
  double L_up = 0.0;
  double L_down = 0.0;
  double L_ft = 0.0;
  double Lhat_up = 0.0;
  double Lhat_down = 0.0;
  double Lhat_inf = 0.0;
  int frames_per_packet = 10;
  int finetune_frames = 1;

  double uncompressed_ms() const { return L_up + L_down + L_ft; }
  double compressed_ms() const { return Lhat_up + Lhat_down + Lhat_inf; }
};

// i * L + (n - i) * L_hat. Throws DomainError when i > n or a component is
// negative.
double packet_latency(const LatencyParams& p);

inline constexpr double kLatencyRequirementMs = 100.0;

struct LatencyRow {
  std::string scheme;
  int n = 0;
  int i = 0;
  double L_ms = 0.0;
  double Lhat_ms = 0.0;
  double total_ms = 0.0;
  bool under_100ms = true;
};

// Best (minimum total) and worst (maximum total) entry per label, in order of
// first appearance; rows are tagged "<label>-best" / "<label>-worst".
std::vector<LatencyRow> latency_report(const std::vector<LatencyParams>& scenarios);

}  // namespace tmac
