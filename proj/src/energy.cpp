#include "veristress/energy.hpp"

#include <stdexcept>

namespace veristress {

double mse_energy(const Vector& z0, const Vector& z_hat0) {
  if (z0.size() != z_hat0.size() || z0.empty()) {
    throw std::invalid_argument("mse_energy: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < z0.size(); ++i) {
    double d = z0[i] - z_hat0[i];
    s += d * d;
  }
  return s / static_cast<double>(z0.size());
}

double hybrid_score(double s_disc, double e_sem, double lambda) {
  if (s_disc < 0.0 || s_disc > 1.0 || e_sem < 0.0 || e_sem > 1.0 ||
      lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("hybrid_score: inputs must be in [0,1]");
  }
  return lambda * s_disc + (1.0 - lambda) * (1.0 - e_sem);
}

}  // namespace veristress
