#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "veristress/claims.hpp"
#include "veristress/critic.hpp"
#include "veristress/embedder.hpp"
#include "veristress/rng.hpp"
#include "veristress/schedule.hpp"

namespace veristress {

struct StressConfig {
  std::size_t t_star = 500;   // focal timestep, in [1, T]
  std::size_t steps = 50;     // reverse-sampling grid length, <= t_star
  ScheduleKind schedule_kind = ScheduleKind::Sqrt;
  std::uint64_t seed = 42;
  bool single_shot = false;   // skip ancestral sampling, denoise once at t*
  std::size_t repeat = 1;     // reconstructions per claim; e_sem is averaged
  // Embeddings are unit vectors while the forward noise is N(0,I) per
  // dimension; the dynamics run on scale*z so signal and noise live on the
  // same per-dimension footing (the usual DDPM normalization).
  double scale = 20.0;
};

struct StressTestResult {
  std::string claim_id;
  std::string original_text;
  std::string reconstruction_text;
  Vector z0;
  Vector z_hat0;
  double e_mse = 0.0;
  double e_sem = 0.0;
  double s_disc = 0.0;
  double s_hybrid = 0.0;
  std::string nearest_corpus_id;
  double denoiser_entropy = 0.0;
};

// Eq.-1 forward corruption: z_t = sqrt(ab[t]) z0 + sqrt(1-ab[t]) eps.
Vector forward_diffuse(const Vector& z0, const NoiseSchedule& schedule,
                       std::size_t t, Rng& rng);

struct DenoiseResult {
  Vector x_hat0;
  std::vector<double> weights;  // posterior over manifold rows, sums to 1
  double entropy = 0.0;
};

// Exact posterior mean under a uniform mixture prior over manifold rows with
// the forward-process Gaussian likelihood. Log-space weights with
// max-subtraction; (1 - alpha_bar) underflows the naive exponentials at
// small t.
DenoiseResult bayes_denoise(const Vector& z_t, const NoiseSchedule& schedule,
                            std::size_t t, const CorpusMatrix& manifold);

// DDPM ancestral sampling on an evenly spaced descending grid of length
// `steps` from t_star to 1; the final step returns x_hat0 deterministically.
Vector reverse_sample(const Vector& z_tstar, const NoiseSchedule& schedule,
                      const StressConfig& config, const CorpusMatrix& manifold,
                      Rng& rng);

struct DecodeResult {
  std::string text;
  std::string nearest_corpus_id;
  std::size_t row = 0;
};

// Nearest corpus text by cosine similarity; ties break to the lowest row.
DecodeResult decode(const Vector& z_hat0, const CorpusMatrix& manifold,
                    const ClaimSet& corpus);

// The full perturb-reconstruct-compare pipeline for one claim. The noise
// stream is seeded from (config.seed, claim.id), so batch order and worker
// count cannot change any result.
StressTestResult stress_test(const Claim& claim, const CorpusMatrix& manifold,
                             const ClaimSet& corpus, const NoiseSchedule& schedule,
                             const StressConfig& config, Critic& critic,
                             const CriticConfig& critic_config, double lambda);

// Runs stress_test over a claim set with `workers` threads; output order
// follows input order.
std::vector<StressTestResult> run_stress_batch(
    const ClaimSet& claims, const CorpusMatrix& manifold, const ClaimSet& corpus,
    const NoiseSchedule& schedule, const StressConfig& config, Critic& critic,
    const CriticConfig& critic_config, double lambda, std::size_t workers = 1);

}  // namespace veristress
