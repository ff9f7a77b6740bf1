#include <cmath>

#include <doctest.h>

#include "veristress/schedule.hpp"

using namespace veristress;

TEST_CASE("schedule kind parsing") {
  CHECK(parse_schedule_kind("linear") == ScheduleKind::Linear);
  CHECK(parse_schedule_kind("sqrt") == ScheduleKind::Sqrt);
  CHECK_THROWS(parse_schedule_kind("cosine"));
  CHECK(schedule_kind_name(ScheduleKind::Linear) == "linear");
  CHECK(schedule_kind_name(ScheduleKind::Sqrt) == "sqrt");
}

TEST_CASE("boundary conventions") {
  for (auto kind : {ScheduleKind::Linear, ScheduleKind::Sqrt}) {
    auto s = build_schedule(kind, 100);
    CHECK(s.alpha_bar[0] == 1.0);
    CHECK(s.beta[0] == 0.0);
    CHECK(s.beta.size() == 101);
    CHECK(s.alpha.size() == 101);
    CHECK(s.alpha_bar.size() == 101);
  }
}

TEST_CASE("linear endpoints") {
  auto s = build_schedule(ScheduleKind::Linear, 1000);
  CHECK(s.beta[1] == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(s.beta[1000] == doctest::Approx(2e-2).epsilon(1e-12));
}

TEST_CASE("linear alpha_bar matches extended-precision product oracle") {
  auto s = build_schedule(ScheduleKind::Linear, 1000);
  // Recompute beta from the interpolation formula and accumulate the product
  // in long double, independently of the library's loop.
  long double prod = 1.0L;
  for (int t = 1; t <= 500; ++t) {
    long double beta =
        1e-4L + (2e-2L - 1e-4L) * static_cast<long double>(t - 1) / 999.0L;
    prod *= 1.0L - beta;
  }
  CHECK(s.alpha_bar[500] == doctest::Approx(static_cast<double>(prod)).epsilon(1e-12));
}

TEST_CASE("schedule invariants for both kinds and several T") {
  for (auto kind : {ScheduleKind::Linear, ScheduleKind::Sqrt}) {
    for (std::size_t T : {std::size_t{10}, std::size_t{100}, std::size_t{1000}}) {
      auto s = build_schedule(kind, T);
      for (std::size_t t = 1; t <= T; ++t) {
        CHECK(s.beta[t] > 0.0);
        CHECK(s.beta[t] < 1.0);
        CHECK(std::abs(s.alpha[t] - (1.0 - s.beta[t])) < 1e-15);
        CHECK(s.alpha_bar[t] > 0.0);
        CHECK(s.alpha_bar[t] <= 1.0);
        CHECK(s.alpha_bar[t] < s.alpha_bar[t - 1]);
        CHECK(std::abs(s.alpha_bar[t] - s.alpha_bar[t - 1] * s.alpha[t]) < 1e-12);
      }
    }
  }
}

TEST_CASE("sqrt schedule follows its defining curve") {
  auto s = build_schedule(ScheduleKind::Sqrt, 1000);
  for (std::size_t t : {std::size_t{1}, std::size_t{250}, std::size_t{500}}) {
    double want = 1.0 - std::sqrt(static_cast<double>(t) / 1000.0 + 1e-4);
    CHECK(s.alpha_bar[t] == doctest::Approx(want).epsilon(1e-12));
  }
  // Deep noise: the clamp keeps alpha_bar strictly positive.
  CHECK(s.alpha_bar[1000] > 0.0);
}

TEST_CASE("T must be positive") { CHECK_THROWS(build_schedule(ScheduleKind::Linear, 0)); }
