#include "tmac/latency.hpp"

#include <algorithm>

#include "tmac/errors.hpp"

namespace tmac {

double packet_latency(const LatencyParams& p) {
  if (p.frames_per_packet < 0 || p.finetune_frames < 0) {
    throw DomainError("packet_latency: frame counts must be >= 0");
  }
  if (p.finetune_frames > p.frames_per_packet) {
    throw DomainError("packet_latency: finetune_frames exceeds frames_per_packet");
  }
  for (double c : {p.L_up, p.L_down, p.L_ft, p.Lhat_up, p.Lhat_down, p.Lhat_inf}) {
    if (!(c >= 0.0)) throw DomainError("packet_latency: latency components must be >= 0");
  }
  return p.finetune_frames * p.uncompressed_ms() +
         (p.frames_per_packet - p.finetune_frames) * p.compressed_ms();
}

std::vector<LatencyRow> latency_report(const std::vector<LatencyParams>& scenarios) {
  std::vector<std::string> labels;
  for (const auto& p : scenarios) {
    if (std::find(labels.begin(), labels.end(), p.label) == labels.end()) labels.push_back(p.label);
  }
  auto row = [](const LatencyParams& p, const std::string& tag) {
    LatencyRow r;
    r.scheme = p.label + "-" + tag;
    r.n = p.frames_per_packet;
    r.i = p.finetune_frames;
    r.L_ms = p.uncompressed_ms();
    r.Lhat_ms = p.compressed_ms();
    r.total_ms = packet_latency(p);
    r.under_100ms = r.total_ms <= kLatencyRequirementMs;
    return r;
  };

  std::vector<LatencyRow> out;
  for (const auto& label : labels) {
    const LatencyParams* best = nullptr;
    const LatencyParams* worst = nullptr;
    for (const auto& p : scenarios) {
      if (p.label != label) continue;
      const double t = packet_latency(p);
      if (!best || t < packet_latency(*best)) best = &p;
      if (!worst || t > packet_latency(*worst)) worst = &p;
    }
    out.push_back(row(*best, "best"));
    out.push_back(row(*worst, "worst"));
  }
  return out;
}

}  // namespace tmac
