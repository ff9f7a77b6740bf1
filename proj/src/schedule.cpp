#include "veristress/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace veristress {

ScheduleKind parse_schedule_kind(const std::string& name) {
  if (name == "linear") return ScheduleKind::Linear;
  if (name == "sqrt") return ScheduleKind::Sqrt;
  throw std::invalid_argument("unknown schedule kind: " + name);
}

std::string schedule_kind_name(ScheduleKind kind) {
  return kind == ScheduleKind::Linear ? "linear" : "sqrt";
}

NoiseSchedule build_schedule(ScheduleKind kind, std::size_t T) {
  if (T < 1) throw std::invalid_argument("build_schedule: T must be >= 1");

  NoiseSchedule s;
  s.kind = kind;
  s.T = T;
  s.beta.assign(T + 1, 0.0);
  s.alpha.assign(T + 1, 1.0);
  s.alpha_bar.assign(T + 1, 1.0);

  if (kind == ScheduleKind::Linear) {
    constexpr double beta_start = 1e-4;
    constexpr double beta_end = 2e-2;
    for (std::size_t t = 1; t <= T; ++t) {
      double frac = (T == 1) ? 0.0
                             : static_cast<double>(t - 1) / static_cast<double>(T - 1);
      s.beta[t] = beta_start + (beta_end - beta_start) * frac;
      s.alpha[t] = 1.0 - s.beta[t];
      s.alpha_bar[t] = s.alpha_bar[t - 1] * s.alpha[t];
    }
  } else {
    constexpr double shift = 1e-4;
    constexpr double floor = 1e-6;
    for (std::size_t t = 1; t <= T; ++t) {
      double ab = 1.0 - std::sqrt(static_cast<double>(t) / static_cast<double>(T) + shift);
      ab = std::clamp(ab, floor, 1.0);
      s.alpha_bar[t] = ab;
      s.alpha[t] = ab / s.alpha_bar[t - 1];
      s.beta[t] = 1.0 - s.alpha[t];
    }
  }
  return s;
}

}  // namespace veristress
