#include "veristress/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "veristress/energy.hpp"

namespace veristress {

double auroc(const ScoredSet& set) {
  if (set.scores.size() != set.labels.size()) {
    throw std::invalid_argument("auroc: scores/labels length mismatch");
  }
  std::size_t n = set.scores.size();
  std::size_t n_pos = 0;
  for (bool l : set.labels) n_pos += l ? 1 : 0;
  std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("auroc: need both classes present");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.scores[a] < set.scores[b];
  });

  // Rank sum of the positive class with midranks over tied score runs.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && set.scores[order[j]] == set.scores[order[i]]) ++j;
    double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (set.labels[order[k]]) pos_rank_sum += midrank;
    }
    i = j;
  }
  double u = pos_rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

// Accuracy of "predict Supported iff score >= tau".
double accuracy_at(const ScoredSet& set, double tau) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < set.scores.size(); ++i) {
    bool predicted = set.scores[i] >= tau;
    if (predicted == set.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(set.scores.size());
}

// Scanning every distinct score (plus +inf for the all-negative rule) covers
// every achievable split of the ranking.
double best_threshold(const ScoredSet& set) {
  std::vector<double> candidates = set.scores;
  candidates.push_back(std::numeric_limits<double>::infinity());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best_tau = candidates.front();
  double best_acc = -1.0;
  for (double tau : candidates) {
    double acc = accuracy_at(set, tau);
    if (acc > best_acc) {
      best_acc = acc;
      best_tau = tau;
    }
  }
  return best_tau;
}

}  // namespace

double accuracy(const ScoredSet& set, const ThresholdRule& rule) {
  if (set.scores.size() != set.labels.size() || set.scores.empty()) {
    throw std::invalid_argument("accuracy: bad scored set");
  }
  double tau = rule.kind == ThresholdRule::Kind::Fixed ? rule.tau : best_threshold(set);
  return accuracy_at(set, tau);
}

ScoredSet scores_for_method(const std::vector<StressTestResult>& results,
                            const ClaimSet& dataset, const std::string& method) {
  if (results.size() != dataset.size()) {
    throw std::invalid_argument("scores_for_method: results/dataset length mismatch");
  }
  ScoredSet out;
  out.method_name = method;
  out.scores.reserve(results.size());
  out.labels.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& c = dataset.claims[i];
    if (!c.label) throw std::invalid_argument("scores_for_method: unlabeled claim " + c.id);
    double s;
    if (method == "raw_mse") {
      s = -r.e_mse;
    } else if (method == "semantic_energy") {
      s = -r.e_sem;
    } else if (method == "direct_nli") {
      s = r.s_disc;
    } else if (method == "hybrid") {
      s = r.s_hybrid;
    } else {
      throw std::invalid_argument("scores_for_method: unknown method " + method);
    }
    out.scores.push_back(s);
    out.labels.push_back(*c.label == Label::Supported);
  }
  return out;
}

namespace {

std::vector<StressTestResult> run_batch(const EvalContext& ctx, const StressConfig& stress) {
  return run_stress_batch(*ctx.dataset, *ctx.manifold, *ctx.corpus, ctx.schedule,
                          stress, *ctx.critic, ctx.critic_config, ctx.lambda,
                          ctx.workers);
}

}  // namespace

std::vector<std::tuple<std::size_t, double, double>> sweep_timestep(
    const std::vector<std::size_t>& values, const EvalContext& ctx) {
  std::vector<std::tuple<std::size_t, double, double>> rows;
  rows.reserve(values.size());
  for (std::size_t t_star : values) {
    StressConfig stress = ctx.stress;
    stress.t_star = t_star;
    stress.steps = std::min(stress.steps, t_star);
    auto results = run_batch(ctx, stress);
    double noise_pct =
        100.0 * static_cast<double>(t_star) / static_cast<double>(ctx.schedule.T);
    rows.emplace_back(t_star, noise_pct,
                      auroc(scores_for_method(results, *ctx.dataset, "hybrid")));
  }
  return rows;
}

std::vector<std::pair<double, double>> sweep_lambda(
    const std::vector<double>& values, const std::vector<StressTestResult>& results,
    const ClaimSet& dataset) {
  ScoredSet set = scores_for_method(results, dataset, "hybrid");
  std::vector<std::pair<double, double>> rows;
  rows.reserve(values.size());
  for (double lambda : values) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      set.scores[i] = hybrid_score(results[i].s_disc, results[i].e_sem, lambda);
    }
    rows.emplace_back(lambda, auroc(set));
  }
  return rows;
}

AblationVariant parse_ablation_variant(const std::string& name) {
  if (name == "hybrid") return AblationVariant::Hybrid;
  if (name == "mse-only") return AblationVariant::MseOnly;
  if (name == "disc-only") return AblationVariant::DiscOnly;
  if (name == "tstar-250") return AblationVariant::FixedTstar250;
  if (name == "tstar-750") return AblationVariant::FixedTstar750;
  throw std::invalid_argument("unknown ablation variant: " + name);
}

std::vector<std::pair<std::string, double>> run_ablation(
    const std::vector<AblationVariant>& variants, const EvalContext& ctx) {
  std::vector<StressTestResult> base;
  bool have_base = false;
  auto base_results = [&]() -> const std::vector<StressTestResult>& {
    if (!have_base) {
      base = run_batch(ctx, ctx.stress);
      have_base = true;
    }
    return base;
  };

  std::vector<std::pair<std::string, double>> rows;
  for (AblationVariant v : variants) {
    switch (v) {
      case AblationVariant::Hybrid:
        rows.emplace_back("hybrid",
                          auroc(scores_for_method(base_results(), *ctx.dataset, "hybrid")));
        break;
      case AblationVariant::MseOnly:
        rows.emplace_back("mse-only",
                          auroc(scores_for_method(base_results(), *ctx.dataset, "raw_mse")));
        break;
      case AblationVariant::DiscOnly:
        rows.emplace_back("disc-only",
                          auroc(scores_for_method(base_results(), *ctx.dataset, "direct_nli")));
        break;
      case AblationVariant::FixedTstar250:
      case AblationVariant::FixedTstar750: {
        StressConfig stress = ctx.stress;
        stress.t_star = v == AblationVariant::FixedTstar250 ? 250 : 750;
        stress.steps = std::min(stress.steps, stress.t_star);
        auto results = run_batch(ctx, stress);
        rows.emplace_back(v == AblationVariant::FixedTstar250 ? "tstar-250" : "tstar-750",
                          auroc(scores_for_method(results, *ctx.dataset, "hybrid")));
        break;
      }
    }
  }
  return rows;
}

namespace {

const std::vector<std::string> kMethods = {"raw_mse", "semantic_energy", "direct_nli",
                                           "hybrid"};

}  // namespace

EvalReport evaluate(const EvalContext& ctx, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("evaluate: need at least one seed");

  EvalReport report;
  report.seed_list = seeds;

  std::map<std::string, std::vector<double>> aurocs;
  std::map<std::string, std::vector<double>> accuracies;
  std::vector<StressTestResult> first_seed_results;

  for (std::size_t si = 0; si < seeds.size(); ++si) {
    StressConfig stress = ctx.stress;
    stress.seed = seeds[si];
    auto results = run_batch(ctx, stress);
    for (const auto& m : kMethods) {
      ScoredSet set = scores_for_method(results, *ctx.dataset, m);
      aurocs[m].push_back(auroc(set));
      accuracies[m].push_back(accuracy(set, ctx.threshold));
      if (si == 0) {
        auto& ms = report.per_method[m];
        for (bool l : set.labels) (l ? ms.n_pos : ms.n_neg) += 1;
      }
    }
    if (si == 0) first_seed_results = results;
  }

  for (const auto& m : kMethods) {
    auto& ms = report.per_method[m];
    ms.auroc_mean = mean(aurocs[m]);
    ms.accuracy_mean = mean(accuracies[m]);
    if (seeds.size() >= 2) {
      ms.auroc_std = sample_stddev(aurocs[m]);
      ms.accuracy_std = sample_stddev(accuracies[m]);
    }
  }

  // Per-claim significance: paired truth-score differences on the first seed.
  std::vector<double> hybrid_scores =
      scores_for_method(first_seed_results, *ctx.dataset, "hybrid").scores;
  for (const auto& m : kMethods) {
    if (m == "hybrid") continue;
    std::vector<double> other =
        scores_for_method(first_seed_results, *ctx.dataset, m).scores;
    report.significance["hybrid_vs_" + m + " (per-claim)"] =
        paired_t_test(hybrid_scores, other);
    if (seeds.size() >= 2) {
      report.significance["hybrid_vs_" + m + " (per-seed)"] =
          paired_t_test(aurocs["hybrid"], aurocs[m]);
    }
  }

  report.tstar_sweep = sweep_timestep({100, 250, 500, 750, 900}, ctx);
  report.lambda_sweep =
      sweep_lambda({0.0, 0.25, 0.5, 0.75, 1.0}, first_seed_results, *ctx.dataset);

  report.config_echo["t_star"] = std::to_string(ctx.stress.t_star);
  report.config_echo["steps"] = std::to_string(ctx.stress.steps);
  report.config_echo["schedule"] = schedule_kind_name(ctx.schedule.kind);
  report.config_echo["T"] = std::to_string(ctx.schedule.T);
  report.config_echo["dim"] = std::to_string(ctx.manifold->dim);
  report.config_echo["scale"] = std::to_string(ctx.stress.scale);
  report.config_echo["lambda"] = std::to_string(ctx.lambda);
  report.config_echo["repeat"] = std::to_string(ctx.stress.repeat);
  report.config_echo["threshold"] =
      ctx.threshold.kind == ThresholdRule::Kind::Fixed
          ? "fixed:" + std::to_string(ctx.threshold.tau)
          : "oracle-best";
  return report;
}

}  // namespace veristress
