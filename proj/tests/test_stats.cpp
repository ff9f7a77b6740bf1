#include <cmath>
#include <limits>

#include <doctest.h>

#include "veristress/rng.hpp"
#include "veristress/stats.hpp"

using namespace veristress;

namespace {

// Closed forms of the two-sided p-value for small degrees of freedom, used as
// an oracle independent of the incomplete-beta path.
double p_df1(double t) { return 1.0 - 2.0 / M_PI * std::atan(std::abs(t)); }
double p_df2(double t) { return 1.0 - std::abs(t) / std::sqrt(2.0 + t * t); }

}  // namespace

TEST_CASE("mean and sample stddev") {
  CHECK(mean({1.0, 2.0, 3.0}) == doctest::Approx(2.0));
  CHECK(sample_stddev({1.0, 2.0, 3.0}) == doctest::Approx(1.0));
  CHECK_THROWS(mean({}));
  CHECK_THROWS(sample_stddev({1.0}));
}

TEST_CASE("incomplete beta basics") {
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
  // I_x(a,b) + I_{1-x}(b,a) = 1
  for (double x : {0.1, 0.3, 0.7, 0.9}) {
    double s = regularized_incomplete_beta(2.5, 1.5, x) +
               regularized_incomplete_beta(1.5, 2.5, 1.0 - x);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("student t p-value against closed forms") {
  for (double t : {0.5, 1.0, 2.0, 3.4641016}) {
    CHECK(student_t_two_sided_p(t, 1.0) == doctest::Approx(p_df1(t)).epsilon(1e-8));
    CHECK(student_t_two_sided_p(t, 2.0) == doctest::Approx(p_df2(t)).epsilon(1e-8));
  }
  CHECK(student_t_two_sided_p(0.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("paired t-test hand examples") {
  auto r = paired_t_test({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0});
  CHECK(r.t == doctest::Approx(3.4641).epsilon(1e-3));
  CHECK(r.p == doctest::Approx(0.0742).epsilon(1e-2));
  CHECK(r.p == doctest::Approx(p_df2(r.t)).epsilon(1e-8));

  auto same = paired_t_test({1.0, 2.0}, {1.0, 2.0});
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);

  // d = (1, -1): zero mean difference.
  auto sym = paired_t_test({2.0, 1.0}, {1.0, 2.0});
  CHECK(sym.t == 0.0);
  CHECK(sym.p == doctest::Approx(1.0));
}

TEST_CASE("paired t-test degenerate cases") {
  auto r = paired_t_test({2.0, 3.0}, {1.0, 2.0});  // identical nonzero diffs
  CHECK(std::isinf(r.t));
  CHECK(r.t > 0);
  CHECK(r.p == 0.0);
  CHECK_THROWS(paired_t_test({1.0}, {1.0}));
  CHECK_THROWS(paired_t_test({1.0, 2.0}, {1.0}));
}

TEST_CASE("paired t-test antisymmetry on random pairs") {
  Rng rng(20260823);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng.next_below(30);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.next_gaussian();
      b[i] = rng.next_gaussian();
    }
    auto ab = paired_t_test(a, b);
    auto ba = paired_t_test(b, a);
    CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
    CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
  }
}
