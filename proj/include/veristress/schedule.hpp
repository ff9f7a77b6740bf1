#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace veristress {

enum class ScheduleKind { Linear, Sqrt };

ScheduleKind parse_schedule_kind(const std::string& name);
std::string schedule_kind_name(ScheduleKind kind);

// Timestep-indexed diffusion schedule. Arrays have length T+1 with the t=0
// boundary fixed at beta[0]=0, alpha_bar[0]=1, so t=0 is the identity.
struct NoiseSchedule {
  ScheduleKind kind = ScheduleKind::Sqrt;
  std::size_t T = 1000;
  std::vector<double> beta;       // beta[t] in (0,1) for t in [1,T]
  std::vector<double> alpha;      // 1 - beta[t]
  std::vector<double> alpha_bar;  // running product, strictly decreasing
};

// Linear: beta ramps 1e-4 -> 2e-2 across t=1..T.
// Sqrt: alpha_bar[t] = 1 - sqrt(t/T + 1e-4), clamped to (1e-6, 1], with beta
// derived from consecutive alpha_bar ratios (square-root schedule convention).
NoiseSchedule build_schedule(ScheduleKind kind, std::size_t T = 1000);

}  // namespace veristress
