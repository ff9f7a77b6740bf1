#include <doctest.h>

#include "veristress/energy.hpp"
#include "veristress/rng.hpp"

using namespace veristress;

TEST_CASE("mse energy hand values") {
  CHECK(mse_energy({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(mse_energy({1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.25));
  CHECK_THROWS(mse_energy({1.0}, {1.0, 2.0}));
}

TEST_CASE("mse energy matches extended-precision oracle") {
  Rng rng(99);
  std::vector<double> a(64), b(64);
  for (std::size_t i = 0; i < 64; ++i) {
    a[i] = rng.next_gaussian();
    b[i] = rng.next_gaussian();
  }
  long double acc = 0.0L;
  for (std::size_t i = 0; i < 64; ++i) {
    long double d = static_cast<long double>(a[i]) - b[i];
    acc += d * d;
  }
  double want = static_cast<double>(acc / 64.0L);
  CHECK(mse_energy(a, b) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("hybrid score endpoints and arithmetic") {
  CHECK(hybrid_score(0.37, 0.99, 1.0) == 0.37);
  CHECK(hybrid_score(0.2, 0.4, 0.0) == doctest::Approx(0.6));
  CHECK(hybrid_score(0.8, 0.4, 0.5) == doctest::Approx(0.7));
}

TEST_CASE("hybrid score is affine in lambda") {
  double s = 0.81, e = 0.13;
  double a = hybrid_score(s, e, 0.1);
  double m = hybrid_score(s, e, 0.5);
  double b = hybrid_score(s, e, 0.9);
  CHECK(m == doctest::Approx(0.5 * (a + b)).epsilon(1e-12));
}

TEST_CASE("hybrid score monotonicity and range") {
  for (double lambda : {0.0, 0.3, 0.7, 1.0}) {
    CHECK(hybrid_score(0.6, 0.2, lambda) >= hybrid_score(0.5, 0.2, lambda));
    CHECK(hybrid_score(0.5, 0.2, lambda) >= hybrid_score(0.5, 0.3, lambda));
    double v = hybrid_score(0.5, 0.2, lambda);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("hybrid score rejects out-of-range inputs") {
  CHECK_THROWS(hybrid_score(1.5, 0.5, 0.5));
  CHECK_THROWS(hybrid_score(0.5, -0.1, 0.5));
  CHECK_THROWS(hybrid_score(0.5, 0.5, 1.1));
}
