#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "veristress/diffusion.hpp"
#include "veristress/stats.hpp"

namespace veristress {

struct ScoredSet {
  std::vector<double> scores;  // higher = more likely true
  std::vector<bool> labels;    // true = Supported
  std::string method_name;
};

// Mann-Whitney AUROC with midrank tie handling; equals the pairwise
// definition exactly.
double auroc(const ScoredSet& set);

struct ThresholdRule {
  enum class Kind { OracleBest, Fixed } kind = Kind::OracleBest;
  double tau = 0.5;
};

double accuracy(const ScoredSet& set, const ThresholdRule& rule);

struct MethodStats {
  double auroc_mean = 0.0;
  double auroc_std = 0.0;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

struct EvalReport {
  std::map<std::string, MethodStats> per_method;
  // t* -> (noise_pct, auroc)
  std::vector<std::tuple<std::size_t, double, double>> tstar_sweep;
  // lambda -> auroc
  std::vector<std::pair<double, double>> lambda_sweep;
  // "hybrid_vs_<method> (per-claim)" / "(per-seed)" -> t statistic, p value
  std::map<std::string, TTestResult> significance;
  std::map<std::string, std::string> config_echo;
  std::vector<std::uint64_t> seed_list;
};

struct EvalContext {
  const ClaimSet* dataset = nullptr;
  const CorpusMatrix* manifold = nullptr;
  const ClaimSet* corpus = nullptr;
  NoiseSchedule schedule;
  StressConfig stress;
  Critic* critic = nullptr;
  CriticConfig critic_config;
  double lambda = 0.5;
  ThresholdRule threshold;
  std::size_t workers = 1;
};

// Truth-score extraction per method; raw energies are negated here so every
// ranked quantity reads "higher = more likely true".
ScoredSet scores_for_method(const std::vector<StressTestResult>& results,
                            const ClaimSet& dataset, const std::string& method);

// Full pipeline AUROC per t* value; only t* varies (shared per-claim seeds).
std::vector<std::tuple<std::size_t, double, double>> sweep_timestep(
    const std::vector<std::size_t>& values, const EvalContext& ctx);

// Re-mixes stored (s_disc, e_sem) per lambda; no diffusion re-runs.
std::vector<std::pair<double, double>> sweep_lambda(
    const std::vector<double>& values, const std::vector<StressTestResult>& results,
    const ClaimSet& dataset);

enum class AblationVariant { Hybrid, MseOnly, DiscOnly, FixedTstar250, FixedTstar750 };
AblationVariant parse_ablation_variant(const std::string& name);

// One AUROC row per variant.
std::vector<std::pair<std::string, double>> run_ablation(
    const std::vector<AblationVariant>& variants, const EvalContext& ctx);

// Multi-seed evaluation with per-method mean +/- std and significance tests.
EvalReport evaluate(const EvalContext& ctx, const std::vector<std::uint64_t>& seeds);

}  // namespace veristress
