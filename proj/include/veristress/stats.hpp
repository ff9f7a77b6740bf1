#pragma once

#include <cstddef>
#include <vector>

namespace veristress {

double mean(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);  // n-1 denominator

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction,
// accurate to ~1e-10.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided p-value for Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
};

// Paired t-test on differences a - b; zero variance with nonzero mean yields
// the +/-inf sentinel with p = 0.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace veristress
