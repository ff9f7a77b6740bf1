#pragma once

#include "veristress/embedder.hpp"

namespace veristress {

struct HybridConfig {
  double lambda = 0.5;  // in [0,1]
};

// Mean squared per-dimension distance between an embedding and its
// reconstruction (the raw reconstruction-energy baseline).
double mse_energy(const Vector& z0, const Vector& z_hat0);

// S = lambda * s_disc + (1 - lambda) * (1 - e_sem).
double hybrid_score(double s_disc, double e_sem, double lambda);

}  // namespace veristress
