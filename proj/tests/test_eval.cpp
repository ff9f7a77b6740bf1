#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include <doctest.h>

#include "veristress/rng.hpp"

#include "veristress/energy.hpp"
#include "veristress/eval.hpp"

using namespace veristress;

namespace {

// O(n^2) Mann-Whitney definition, the independent oracle.
double pairwise_auroc(const ScoredSet& set) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < set.scores.size(); ++i) {
    if (!set.labels[i]) continue;
    for (std::size_t j = 0; j < set.scores.size(); ++j) {
      if (set.labels[j]) continue;
      ++pairs;
      if (set.scores[i] > set.scores[j]) wins += 1.0;
      else if (set.scores[i] == set.scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

ScoredSet random_set(Rng& rng, std::size_t n) {
  ScoredSet set;
  set.method_name = "random";
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    // Quantized scores so ties actually occur.
    set.scores.push_back(std::floor(rng.next_gaussian() * 4.0) / 4.0);
    bool pos = rng.next_below(2) == 0;
    if (i == n - 2 && !has_pos) pos = true;
    if (i == n - 1 && !has_neg) pos = false;
    set.labels.push_back(pos);
    (pos ? has_pos : has_neg) = true;
  }
  return set;
}

std::vector<StressTestResult> fake_results(std::size_t n, Rng& rng) {
  std::vector<StressTestResult> results(n);
  for (std::size_t i = 0; i < n; ++i) {
    results[i].claim_id = "c" + std::to_string(i);
    results[i].original_text = "claim " + std::to_string(i);
    results[i].e_mse = std::abs(rng.next_gaussian());
    results[i].e_sem = rng.next_uniform();
    results[i].s_disc = rng.next_uniform();
    results[i].s_hybrid = hybrid_score(results[i].s_disc, results[i].e_sem, 0.5);
  }
  return results;
}

ClaimSet fake_dataset(std::size_t n, Rng& rng) {
  ClaimSet set;
  for (std::size_t i = 0; i < n; ++i) {
    set.claims.push_back({"c" + std::to_string(i), "claim " + std::to_string(i),
                          i < 2 ? std::optional<Label>(i == 0 ? Label::Supported
                                                              : Label::Refuted)
                                : std::optional<Label>(rng.next_below(2) == 0
                                                           ? Label::Supported
                                                           : Label::Refuted),
                          {}});
  }
  return set;
}

}  // namespace

TEST_CASE("auroc hand values") {
  CHECK(auroc({{0.9, 0.8, 0.2, 0.1}, {true, true, false, false}, "m"}) == 1.0);
  CHECK(auroc({{0.5, 0.5, 0.5, 0.5}, {true, false, true, false}, "m"}) == 0.5);
  CHECK(auroc({{0.9, 0.4, 0.5, 0.1}, {true, true, false, false}, "m"}) ==
        doctest::Approx(0.75));
  CHECK_THROWS(auroc({{0.1, 0.2}, {true, true}, "m"}));
  CHECK_THROWS(auroc({{0.1}, {true, false}, "m"}));
}

TEST_CASE("auroc matches the pairwise oracle on random tied sets") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    ScoredSet set = random_set(rng, 2 + rng.next_below(120));
    CHECK(std::abs(auroc(set) - pairwise_auroc(set)) < 1e-12);
  }
}

TEST_CASE("auroc is invariant under strictly increasing transforms") {
  Rng rng(5);
  ScoredSet set = random_set(rng, 80);
  double base = auroc(set);

  ScoredSet affine = set;
  for (auto& s : affine.scores) s = 3.5 * s + 11.0;
  CHECK(std::abs(auroc(affine) - base) < 1e-12);

  ScoredSet expd = set;
  for (auto& s : expd.scores) s = std::exp(s);
  CHECK(std::abs(auroc(expd) - base) < 1e-12);
}

TEST_CASE("auroc negation complement without ties") {
  ScoredSet set{{0.11, 0.92, 0.35, 0.48, 0.73, 0.09},
                {true, false, true, false, true, false},
                "m"};
  ScoredSet neg = set;
  for (auto& s : neg.scores) s = -s;
  CHECK(auroc(set) + auroc(neg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("accuracy rules") {
  ScoredSet perfect{{0.9, 0.8, 0.2, 0.1}, {true, true, false, false}, "m"};
  CHECK(accuracy(perfect, {}) == 1.0);

  ScoredSet mixed{{0.9, 0.4, 0.5, 0.1}, {true, true, false, false}, "m"};
  CHECK(accuracy(mixed, {}) == doctest::Approx(0.75));

  ThresholdRule all_true{ThresholdRule::Kind::Fixed,
                         -std::numeric_limits<double>::infinity()};
  CHECK(accuracy(mixed, all_true) == doctest::Approx(0.5));  // fraction of positives
}

TEST_CASE("scores_for_method applies the truth-score convention") {
  Rng rng(7);
  auto results = fake_results(6, rng);
  auto dataset = fake_dataset(6, rng);
  auto mse = scores_for_method(results, dataset, "raw_mse");
  auto sem = scores_for_method(results, dataset, "semantic_energy");
  auto nli = scores_for_method(results, dataset, "direct_nli");
  auto hyb = scores_for_method(results, dataset, "hybrid");
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(mse.scores[i] == -results[i].e_mse);
    CHECK(sem.scores[i] == -results[i].e_sem);
    CHECK(nli.scores[i] == results[i].s_disc);
    CHECK(hyb.scores[i] == results[i].s_hybrid);
    CHECK(mse.labels[i] == (*dataset.claims[i].label == Label::Supported));
  }
  CHECK_THROWS(scores_for_method(results, dataset, "nope"));
}

TEST_CASE("sweep_lambda endpoints are bitwise identical to standalone scores") {
  Rng rng(17);
  auto results = fake_results(40, rng);
  auto dataset = fake_dataset(40, rng);
  auto rows = sweep_lambda({0.0, 0.5, 1.0}, results, dataset);
  REQUIRE(rows.size() == 3);

  ScoredSet generative;
  ScoredSet disc;
  for (std::size_t i = 0; i < results.size(); ++i) {
    generative.scores.push_back(1.0 - results[i].e_sem);
    disc.scores.push_back(results[i].s_disc);
    bool pos = *dataset.claims[i].label == Label::Supported;
    generative.labels.push_back(pos);
    disc.labels.push_back(pos);
  }
  CHECK(rows[0].second == auroc(generative));  // lambda = 0, bitwise
  CHECK(rows[2].second == auroc(disc));        // lambda = 1, bitwise
  CHECK(rows[0].first == 0.0);
  CHECK(rows[1].first == 0.5);
}

TEST_CASE("ablation variant parsing") {
  CHECK(parse_ablation_variant("hybrid") == AblationVariant::Hybrid);
  CHECK(parse_ablation_variant("mse-only") == AblationVariant::MseOnly);
  CHECK(parse_ablation_variant("disc-only") == AblationVariant::DiscOnly);
  CHECK(parse_ablation_variant("tstar-250") == AblationVariant::FixedTstar250);
  CHECK(parse_ablation_variant("tstar-750") == AblationVariant::FixedTstar750);
  CHECK_THROWS(parse_ablation_variant("bogus"));
}

namespace {

struct Pipeline {
  GeneratedWorld world;
  CorpusMatrix manifold;
  NoiseSchedule schedule;
  CriticConfig critic_cfg;
  std::unique_ptr<Critic> critic;
  EvalContext ctx;

  explicit Pipeline(std::size_t workers = 8) {
    WorldConfig cfg;
    cfg.n_entities = 10;
    cfg.n_relations = 3;
    cfg.n_objects_per_relation = 12;
    world = generate_world(cfg);
    manifold = embed_corpus(world.truth_corpus);
    schedule = build_schedule(ScheduleKind::Sqrt, 1000);
    critic = make_critic(critic_cfg);
    ctx.dataset = &world.test_set;
    ctx.manifold = &manifold;
    ctx.corpus = &world.truth_corpus;
    ctx.schedule = schedule;
    ctx.critic = critic.get();
    ctx.critic_config = critic_cfg;
    ctx.workers = workers;
  }
};

}  // namespace

TEST_CASE("timestep sweep produces the requested grid") {
  Pipeline p;
  auto rows = sweep_timestep({100, 500}, p.ctx);
  REQUIRE(rows.size() == 2);
  CHECK(std::get<0>(rows[0]) == 100);
  CHECK(std::get<1>(rows[0]) == doctest::Approx(10.0));  // percent noise
  CHECK(std::get<1>(rows[1]) == doctest::Approx(50.0));
  for (const auto& [t, pct, a] : rows) {
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
  }
  // Reproducible across runs with the same seed.
  auto again = sweep_timestep({100, 500}, p.ctx);
  CHECK(rows == again);
}

TEST_CASE("ablation emits one row per variant") {
  Pipeline p;
  auto rows = run_ablation({AblationVariant::Hybrid, AblationVariant::MseOnly,
                            AblationVariant::DiscOnly, AblationVariant::FixedTstar250,
                            AblationVariant::FixedTstar750},
                           p.ctx);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].first == "hybrid");
  CHECK(rows[4].first == "tstar-750");

  // DiscOnly coincides with the lambda=1 endpoint on the same results.
  auto results = run_stress_batch(p.world.test_set, p.manifold, p.world.truth_corpus,
                                  p.schedule, p.ctx.stress, *p.critic, p.critic_cfg,
                                  p.ctx.lambda, 8);
  auto lrows = sweep_lambda({1.0}, results, p.world.test_set);
  CHECK(rows[2].second == lrows[0].second);
}

TEST_CASE("evaluate aggregates across seeds") {
  Pipeline p;
  EvalReport one = evaluate(p.ctx, {42});
  REQUIRE(one.per_method.count("hybrid") == 1);
  for (const auto& [name, ms] : one.per_method) {
    CHECK(ms.auroc_std == 0.0);  // single seed
    CHECK(ms.accuracy_std == 0.0);
    CHECK(ms.auroc_mean >= 0.0);
    CHECK(ms.auroc_mean <= 1.0);
    CHECK(ms.n_pos == p.world.test_set.counts.n_supported);
    CHECK(ms.n_neg == p.world.test_set.counts.n_refuted);
  }
  CHECK(one.tstar_sweep.size() == 5);
  CHECK(one.lambda_sweep.size() == 5);
  CHECK(one.significance.count("hybrid_vs_raw_mse (per-claim)") == 1);
  CHECK(one.significance.count("hybrid_vs_raw_mse (per-seed)") == 0);

  EvalReport three = evaluate(p.ctx, {1, 2, 3});
  CHECK(three.seed_list == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(three.significance.count("hybrid_vs_direct_nli (per-seed)") == 1);

  // Aggregation arithmetic: mean of the three per-seed AUROCs.
  std::vector<double> seed_aurocs;
  for (std::uint64_t s : {1, 2, 3}) {
    StressConfig stress = p.ctx.stress;
    stress.seed = s;
    auto results = run_stress_batch(p.world.test_set, p.manifold,
                                    p.world.truth_corpus, p.schedule, stress,
                                    *p.critic, p.critic_cfg, p.ctx.lambda, 8);
    seed_aurocs.push_back(auroc(scores_for_method(results, p.world.test_set, "hybrid")));
  }
  CHECK(three.per_method["hybrid"].auroc_mean ==
        doctest::Approx(mean(seed_aurocs)).epsilon(1e-12));
  CHECK(three.per_method["hybrid"].auroc_std ==
        doctest::Approx(sample_stddev(seed_aurocs)).epsilon(1e-12));
}
