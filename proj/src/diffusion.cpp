#include "veristress/diffusion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "veristress/energy.hpp"
#include "veristress/hashing.hpp"

namespace veristress {

Vector forward_diffuse(const Vector& z0, const NoiseSchedule& schedule,
                       std::size_t t, Rng& rng) {
  if (t > schedule.T) throw std::invalid_argument("forward_diffuse: t out of range");
  double signal = std::sqrt(schedule.alpha_bar[t]);
  double noise = std::sqrt(1.0 - schedule.alpha_bar[t]);
  Vector z_t(z0.size());
  for (std::size_t i = 0; i < z0.size(); ++i) {
    z_t[i] = signal * z0[i] + noise * rng.next_gaussian();
  }
  return z_t;
}

DenoiseResult bayes_denoise(const Vector& z_t, const NoiseSchedule& schedule,
                            std::size_t t, const CorpusMatrix& manifold) {
  if (t < 1 || t > schedule.T) throw std::invalid_argument("bayes_denoise: t out of range");
  if (manifold.rows.empty()) throw std::invalid_argument("bayes_denoise: empty manifold");
  for (double x : z_t) {
    if (!std::isfinite(x)) throw std::invalid_argument("bayes_denoise: non-finite input");
  }

  double ab = schedule.alpha_bar[t];
  double signal = std::sqrt(ab);
  double var = 1.0 - ab;

  std::size_t n = manifold.rows.size();
  std::vector<double> logw(n);
  double max_logw = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& c = manifold.rows[i];
    if (c.size() != z_t.size()) throw std::invalid_argument("bayes_denoise: dimension mismatch");
    double d2 = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      double d = z_t[k] - signal * c[k];
      d2 += d * d;
    }
    logw[i] = -d2 / (2.0 * var);
    max_logw = std::max(max_logw, logw[i]);
  }

  DenoiseResult out;
  out.weights.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.weights[i] = std::exp(logw[i] - max_logw);
    total += out.weights[i];
  }
  out.x_hat0.assign(z_t.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double w = out.weights[i] / total;
    out.weights[i] = w;
    if (w > 0.0) out.entropy -= w * std::log(w);
    const Vector& c = manifold.rows[i];
    for (std::size_t k = 0; k < c.size(); ++k) out.x_hat0[k] += w * c[k];
  }
  return out;
}

namespace {

// Evenly spaced descending integer grid from t_star down to 1, deduplicated.
std::vector<std::size_t> sampling_grid(std::size_t t_star, std::size_t steps) {
  std::vector<std::size_t> grid;
  if (steps == 1) return {t_star};
  for (std::size_t i = 0; i < steps; ++i) {
    double frac = static_cast<double>(i) / static_cast<double>(steps - 1);
    auto t = static_cast<std::size_t>(
        std::llround(static_cast<double>(t_star) - frac * static_cast<double>(t_star - 1)));
    if (grid.empty() || t < grid.back()) grid.push_back(t);
  }
  return grid;
}

}  // namespace

Vector reverse_sample(const Vector& z_tstar, const NoiseSchedule& schedule,
                      const StressConfig& config, const CorpusMatrix& manifold,
                      Rng& rng) {
  if (config.t_star < 1 || config.t_star > schedule.T) {
    throw std::invalid_argument("reverse_sample: t_star out of range");
  }
  if (config.steps < 1 || config.steps > config.t_star) {
    throw std::invalid_argument("reverse_sample: steps must be in [1, t_star]");
  }
  if (config.single_shot) {
    return bayes_denoise(z_tstar, schedule, config.t_star, manifold).x_hat0;
  }

  auto grid = sampling_grid(config.t_star, config.steps);
  Vector z = z_tstar;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t t = grid[i];
    Vector x_hat0 = bayes_denoise(z, schedule, t, manifold).x_hat0;
    std::size_t t_prev = (i + 1 < grid.size()) ? grid[i + 1] : 0;
    if (t_prev == 0) return x_hat0;  // final step is noiseless

    double ab_t = schedule.alpha_bar[t];
    double ab_prev = schedule.alpha_bar[t_prev];
    double alpha_eff = ab_t / ab_prev;          // strided per-step retention
    double beta_eff = 1.0 - alpha_eff;
    double coef_x0 = std::sqrt(ab_prev) * beta_eff / (1.0 - ab_t);
    double coef_zt = std::sqrt(alpha_eff) * (1.0 - ab_prev) / (1.0 - ab_t);
    double sigma = std::sqrt(((1.0 - ab_prev) / (1.0 - ab_t)) * beta_eff);
    for (std::size_t k = 0; k < z.size(); ++k) {
      z[k] = coef_x0 * x_hat0[k] + coef_zt * z[k] + sigma * rng.next_gaussian();
    }
  }
  // steps == 1 grid: handled above (t_prev == 0 on the first iteration).
  throw std::logic_error("reverse_sample: grid did not terminate");
}

DecodeResult decode(const Vector& z_hat0, const CorpusMatrix& manifold,
                    const ClaimSet& corpus) {
  if (manifold.rows.empty()) throw std::invalid_argument("decode: empty manifold");
  if (manifold.rows.size() != corpus.size()) {
    throw std::invalid_argument("decode: manifold and corpus are not aligned");
  }
  double zn = norm(z_hat0);
  std::size_t best = 0;
  double best_sim = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < manifold.rows.size(); ++i) {
    // Rows are unit vectors; z_hat0's norm is a common factor, so raw dot
    // products rank identically (guarded for zn == 0).
    double sim = dot(manifold.rows[i], z_hat0);
    if (zn > 0.0) sim /= zn;
    if (sim > best_sim) {
      best_sim = sim;
      best = i;
    }
  }
  return {corpus.claims[best].text, manifold.claim_ids[best], best};
}

StressTestResult stress_test(const Claim& claim, const CorpusMatrix& manifold,
                             const ClaimSet& corpus, const NoiseSchedule& schedule,
                             const StressConfig& config, Critic& critic,
                             const CriticConfig& critic_config, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("stress_test: lambda out of range");
  if (config.repeat < 1) throw std::invalid_argument("stress_test: repeat must be >= 1");

  Rng rng(stable_hash_combine(config.seed, claim.id));
  Vector z0 = embed(claim.text, manifold.dim);

  // Dynamics in scaled space (see StressConfig::scale).
  Vector z0_s(z0.size());
  for (std::size_t i = 0; i < z0.size(); ++i) z0_s[i] = config.scale * z0[i];
  CorpusMatrix scaled;
  scaled.dim = manifold.dim;
  scaled.claim_ids = manifold.claim_ids;
  scaled.rows.reserve(manifold.rows.size());
  for (const auto& row : manifold.rows) {
    Vector r(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) r[i] = config.scale * row[i];
    scaled.rows.push_back(std::move(r));
  }

  StressTestResult result;
  result.claim_id = claim.id;
  result.original_text = claim.text;
  result.z0 = z0;

  double e_sem_sum = 0.0;
  for (std::size_t rep = 0; rep < config.repeat; ++rep) {
    Vector z_t = forward_diffuse(z0_s, schedule, config.t_star, rng);
    Vector z_hat = reverse_sample(z_t, schedule, config, scaled, rng);
    for (auto& x : z_hat) x /= config.scale;

    DenoiseResult final_weights = bayes_denoise(z_t, schedule, config.t_star, scaled);
    DecodeResult dec = decode(z_hat, manifold, corpus);
    e_sem_sum += semantic_energy(claim, dec.text, critic);

    if (rep == 0) {
      result.z_hat0 = z_hat;
      result.reconstruction_text = dec.text;
      result.nearest_corpus_id = dec.nearest_corpus_id;
      result.denoiser_entropy = final_weights.entropy;
      result.e_mse = mse_energy(z0, z_hat);
    }
  }
  result.e_sem = e_sem_sum / static_cast<double>(config.repeat);
  result.s_disc = discriminative_score(claim, critic, critic_config);
  result.s_hybrid = hybrid_score(result.s_disc, result.e_sem, lambda);
  return result;
}

std::vector<StressTestResult> run_stress_batch(
    const ClaimSet& claims, const CorpusMatrix& manifold, const ClaimSet& corpus,
    const NoiseSchedule& schedule, const StressConfig& config, Critic& critic,
    const CriticConfig& critic_config, double lambda, std::size_t workers) {
  std::vector<StressTestResult> results(claims.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < claims.size(); ++i) {
      results[i] = stress_test(claims.claims[i], manifold, corpus, schedule, config,
                               critic, critic_config, lambda);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= claims.size()) return;
      try {
        results[i] = stress_test(claims.claims[i], manifold, corpus, schedule, config,
                                 critic, critic_config, lambda);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace veristress
