#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "veristress/diffusion.hpp"
#include "veristress/eval.hpp"
#include "veristress/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace veristress;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct Options {
  // world
  std::size_t entities = 50;
  std::size_t relations = 5;
  std::size_t objects = 60;
  double corpus_fraction = 0.8;
  double object_skew = 0.9;
  std::string template_text = "{s} {r} {o}.";
  // diffusion
  std::size_t T = 1000;
  std::size_t t_star = 500;
  std::size_t steps = 50;
  std::string schedule = "sqrt";
  double scale = 20.0;
  bool single_shot = false;
  std::size_t repeat = 1;
  // embedding / scoring
  std::size_t dim = kDefaultDim;
  double lambda = 0.5;
  std::string threshold = "oracle-best";
  // critic
  std::string critic = "schema";
  std::string critic_cmd;
  int timeout_ms = 5000;
  std::string tautology = "This is a true statement";
  bool claim_as_hypothesis = false;
  // run control
  std::uint64_t seed = 42;
  std::string seeds = "42";
  std::size_t workers = 1;
  bool verify = false;
  // io
  std::string corpus_path, test_path, manifold_path, results_path, out_path,
      csv_path, values;
};

void add_diffusion_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--T", o.T, "Total diffusion steps")->check(CLI::PositiveNumber);
  cmd->add_option("--t-star", o.t_star, "Focal timestep")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", o.steps, "Reverse sampling steps")->check(CLI::PositiveNumber);
  cmd->add_option("--schedule", o.schedule, "Noise schedule")
      ->check(CLI::IsMember({"sqrt", "linear"}));
  cmd->add_option("--scale", o.scale, "Internal diffusion scale")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--single-shot", o.single_shot, "Denoise once at t* instead of sampling");
  cmd->add_option("--repeat", o.repeat, "Reconstructions per claim")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--dim", o.dim, "Embedding dimension")->check(CLI::PositiveNumber);
}

void add_critic_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--critic", o.critic, "Critic kind")
      ->check(CLI::IsMember({"schema", "external"}));
  cmd->add_option("--critic-cmd", o.critic_cmd, "External critic command line")
      ->envname("VERISTRESS_CRITIC_CMD");
  cmd->add_option("--timeout-ms", o.timeout_ms, "External critic timeout")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tautology", o.tautology, "Tautology premise for S_disc");
  cmd->add_flag("--claim-as-hypothesis", o.claim_as_hypothesis,
                "Use the claim as hypothesis in S_disc");
  cmd->add_option("--template", o.template_text, "Claim template for the schema critic");
}

ThresholdRule parse_threshold(const std::string& s) {
  ThresholdRule rule;
  if (s == "oracle-best") return rule;
  if (s.rfind("fixed:", 0) == 0) {
    rule.kind = ThresholdRule::Kind::Fixed;
    rule.tau = std::stod(s.substr(6));
    return rule;
  }
  throw CLI::ValidationError("--threshold", "expected 'oracle-best' or 'fixed:<tau>'");
}

CriticConfig critic_config_from(const Options& o) {
  CriticConfig cfg;
  if (o.critic == "external") {
    if (o.critic_cmd.empty()) {
      throw CLI::ValidationError("--critic", "external critic needs --critic-cmd");
    }
    cfg.kind = CriticKind::External;
    cfg.external_command = o.critic_cmd;
  } else if (!o.critic_cmd.empty()) {
    throw CLI::ValidationError("--critic-cmd", "only valid with --critic external");
  }
  cfg.timeout_ms = o.timeout_ms;
  cfg.tautology_text = o.tautology;
  cfg.template_text = o.template_text;
  cfg.claim_as_premise = !o.claim_as_hypothesis;
  return cfg;
}

StressConfig stress_config_from(const Options& o) {
  StressConfig cfg;
  cfg.t_star = o.t_star;
  cfg.steps = std::min(o.steps, o.t_star);
  cfg.schedule_kind = parse_schedule_kind(o.schedule);
  cfg.seed = o.seed;
  cfg.single_shot = o.single_shot;
  cfg.repeat = o.repeat;
  cfg.scale = o.scale;
  return cfg;
}

json config_json(const Options& o, const std::string& command) {
  return json{{"command", command},
              {"T", o.T},
              {"t_star", o.t_star},
              {"steps", o.steps},
              {"schedule", o.schedule},
              {"scale", o.scale},
              {"single_shot", o.single_shot},
              {"repeat", o.repeat},
              {"dim", o.dim},
              {"lambda", o.lambda},
              {"threshold", o.threshold},
              {"critic", o.critic},
              {"seed", o.seed},
              {"seeds", o.seeds}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Normal mode writes through `writer`; verify mode writes to a scratch path,
// diffs against the existing artifact and leaves it untouched.
int emit(const std::string& path, bool verify,
         const std::function<void(const std::string&)>& writer) {
  if (!verify) {
    writer(path);
    return kExitOk;
  }
  std::string tmp = path + ".verify";
  writer(tmp);
  bool ok = fs::exists(path) && read_file(tmp) == read_file(path);
  std::remove(tmp.c_str());
  if (ok) {
    std::cout << "verify OK: " << path << "\n";
    return kExitOk;
  }
  std::cerr << "verify FAILED: " << path << " differs from a fresh run\n";
  return kExitRuntime;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
  }
  if (seeds.empty()) throw std::runtime_error("--seeds: empty list");
  return seeds;
}

template <typename T>
std::vector<T> parse_value_list(const std::string& s) {
  std::vector<T> values;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if constexpr (std::is_integral_v<T>) {
      values.push_back(static_cast<T>(std::stoull(tok)));
    } else {
      values.push_back(std::stod(tok));
    }
  }
  if (values.empty()) throw std::runtime_error("--values: empty list");
  return values;
}

struct LoadedData {
  ClaimSet corpus;
  ClaimSet test;
  CorpusMatrix manifold;
};

LoadedData load_data(const Options& o, bool need_test) {
  LoadedData d;
  d.corpus = load_fever_jsonl(o.corpus_path, 0, o.seed);
  if (need_test) d.test = load_fever_jsonl(o.test_path, 0, o.seed);
  if (o.manifold_path.empty()) {
    d.manifold = embed_corpus(d.corpus, o.dim);
  } else {
    d.manifold = load_corpus_matrix(o.manifold_path);
    if (d.manifold.size() != d.corpus.size()) {
      throw std::runtime_error("manifold rows do not match corpus size");
    }
    for (std::size_t i = 0; i < d.manifold.size(); ++i) {
      if (d.manifold.claim_ids[i] != d.corpus.claims[i].id) {
        throw std::runtime_error("manifold/corpus id mismatch at row " +
                                 std::to_string(i));
      }
    }
  }
  return d;
}

EvalContext make_context(const Options& o, const LoadedData& d,
                         const NoiseSchedule& schedule, Critic& critic) {
  EvalContext ctx;
  ctx.dataset = &d.test;
  ctx.manifold = &d.manifold;
  ctx.corpus = &d.corpus;
  ctx.schedule = schedule;
  ctx.stress = stress_config_from(o);
  ctx.critic = &critic;
  ctx.critic_config = critic_config_from(o);
  ctx.lambda = o.lambda;
  ctx.threshold = parse_threshold(o.threshold);
  ctx.workers = o.workers;
  return ctx;
}

int cmd_gen_world(const Options& o) {
  WorldConfig cfg;
  cfg.n_entities = o.entities;
  cfg.n_relations = o.relations;
  cfg.n_objects_per_relation = o.objects;
  cfg.template_text = o.template_text;
  cfg.corpus_fraction = o.corpus_fraction;
  cfg.object_skew = o.object_skew;
  cfg.seed = o.seed;
  GeneratedWorld world = generate_world(cfg);

  fs::create_directories(o.out_path);
  json meta{{"command", "gen-world"},
            {"entities", cfg.n_entities},
            {"relations", cfg.n_relations},
            {"objects", cfg.n_objects_per_relation},
            {"template", cfg.template_text},
            {"corpus_fraction", cfg.corpus_fraction},
            {"object_skew", cfg.object_skew},
            {"seed", cfg.seed}};

  int rc = kExitOk;
  auto step = [&](const std::string& name, const std::string& content) {
    if (rc != kExitOk) return;
    rc = emit((fs::path(o.out_path) / name).string(), o.verify,
              [&](const std::string& p) { atomic_write(p, content); });
  };
  step("corpus.jsonl", claims_to_jsonl(world.truth_corpus));
  step("test.jsonl", claims_to_jsonl(world.test_set));
  step("world_config.json", meta.dump(2) + "\n");
  if (rc == kExitOk && !o.verify) {
    std::cout << "gen-world: corpus=" << world.truth_corpus.size()
              << " test=" << world.test_set.size() << " ("
              << world.test_set.counts.n_supported << " supported / "
              << world.test_set.counts.n_refuted << " refuted) -> " << o.out_path
              << "\n";
  }
  return rc;
}

int cmd_build_manifold(const Options& o) {
  ClaimSet corpus = load_fever_jsonl(o.corpus_path, 0, o.seed);
  CorpusMatrix m = embed_corpus(corpus, o.dim);
  int rc = emit(o.out_path, o.verify,
                [&](const std::string& p) { save_corpus_matrix(m, p); });
  if (rc == kExitOk && !o.verify) {
    std::cout << "build-manifold: " << m.size() << " rows, dim=" << m.dim << " -> "
              << o.out_path << "\n";
  }
  return rc;
}

int cmd_stress_test(const Options& o) {
  LoadedData d = load_data(o, true);
  NoiseSchedule schedule = build_schedule(parse_schedule_kind(o.schedule), o.T);
  auto critic = make_critic(critic_config_from(o));
  EvalContext ctx = make_context(o, d, schedule, *critic);

  auto results = run_stress_batch(d.test, d.manifold, d.corpus, schedule, ctx.stress,
                                  *critic, ctx.critic_config, o.lambda, o.workers);
  json cfg = config_json(o, "stress-test");
  int rc = emit(o.out_path, o.verify,
                [&](const std::string& p) { save_results_jsonl(results, p, cfg); });
  if (rc == kExitOk && !o.csv_path.empty()) {
    rc = emit(o.csv_path, o.verify,
              [&](const std::string& p) { save_results_csv(results, p, cfg.dump()); });
  }
  if (rc == kExitOk && !o.verify) {
    double a = auroc(scores_for_method(results, d.test, "hybrid"));
    std::cout << "stress-test: n=" << results.size() << " hybrid AUROC=" << a
              << " -> " << o.out_path << "\n";
  }
  return rc;
}

int cmd_evaluate(const Options& o) {
  LoadedData d = load_data(o, true);
  NoiseSchedule schedule = build_schedule(parse_schedule_kind(o.schedule), o.T);
  auto critic = make_critic(critic_config_from(o));
  EvalContext ctx = make_context(o, d, schedule, *critic);

  EvalReport report = evaluate(ctx, parse_seed_list(o.seeds));
  report.config_echo["command"] = "evaluate";

  int rc = emit(o.out_path, o.verify,
                [&](const std::string& p) { save_report_json(report, p); });
  if (rc == kExitOk && !o.csv_path.empty()) {
    rc = emit(o.csv_path, o.verify,
              [&](const std::string& p) { save_report_csv(report, p); });
  }
  if (rc == kExitOk && !o.verify) {
    for (const auto& [name, ms] : report.per_method) {
      std::cout << name << " -> AUROC " << ms.auroc_mean << " +/- " << ms.auroc_std
                << " (acc " << ms.accuracy_mean << ")\n";
    }
  }
  return rc;
}

int cmd_sweep_tstar(const Options& o) {
  LoadedData d = load_data(o, true);
  NoiseSchedule schedule = build_schedule(parse_schedule_kind(o.schedule), o.T);
  auto critic = make_critic(critic_config_from(o));
  EvalContext ctx = make_context(o, d, schedule, *critic);

  auto values = o.values.empty() ? std::vector<std::size_t>{100, 250, 500, 750, 900}
                                 : parse_value_list<std::size_t>(o.values);
  auto rows = sweep_timestep(values, ctx);
  json cfg = config_json(o, "sweep-tstar");
  int rc = emit(o.out_path, o.verify, [&](const std::string& p) {
    save_tstar_sweep_csv(rows, p, cfg.dump());
  });
  if (rc == kExitOk && !o.verify) {
    for (const auto& [t, pct, a] : rows) {
      std::cout << "t*=" << t << " (" << pct << "% noise) -> AUROC " << a << "\n";
    }
  }
  return rc;
}

// Labels for stored results: joined from --test when given, otherwise from the
// gen-world id convention (corrupted ids carry a "#f" suffix).
ClaimSet dataset_for_results(const std::vector<StressTestResult>& results,
                             const Options& o) {
  ClaimSet set;
  std::map<std::string, Label> by_id;
  if (!o.test_path.empty()) {
    ClaimSet test = load_fever_jsonl(o.test_path, 0, o.seed);
    for (const auto& c : test.claims) {
      if (c.label) by_id[c.id] = *c.label;
    }
  }
  for (const auto& r : results) {
    Claim c;
    c.id = r.claim_id;
    c.text = r.original_text;
    if (auto it = by_id.find(c.id); it != by_id.end()) {
      c.label = it->second;
    } else if (o.test_path.empty()) {
      c.label = c.id.size() >= 2 && c.id.substr(c.id.size() - 2) == "#f"
                    ? Label::Refuted
                    : Label::Supported;
    } else {
      throw std::runtime_error("result id not present in --test: " + c.id);
    }
    set.claims.push_back(std::move(c));
  }
  return set;
}

int cmd_sweep_lambda(const Options& o) {
  auto results = load_results_jsonl(o.results_path);
  if (results.empty()) throw std::runtime_error("no results in " + o.results_path);
  ClaimSet dataset = dataset_for_results(results, o);

  auto values = o.values.empty() ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}
                                 : parse_value_list<double>(o.values);
  auto rows = sweep_lambda(values, results, dataset);
  json cfg = config_json(o, "sweep-lambda");
  cfg["results"] = o.results_path;
  json upstream = load_results_config(o.results_path);
  if (!upstream.is_null()) cfg["upstream"] = upstream;
  int rc = emit(o.out_path, o.verify, [&](const std::string& p) {
    save_lambda_sweep_csv(rows, p, cfg.dump());
  });
  if (rc == kExitOk && !o.verify) {
    for (const auto& [l, a] : rows) {
      std::cout << "lambda=" << l << " -> AUROC " << a << "\n";
    }
  }
  return rc;
}

int cmd_ablate(const Options& o) {
  LoadedData d = load_data(o, true);
  NoiseSchedule schedule = build_schedule(parse_schedule_kind(o.schedule), o.T);
  auto critic = make_critic(critic_config_from(o));
  EvalContext ctx = make_context(o, d, schedule, *critic);

  std::vector<AblationVariant> variants;
  if (o.values.empty()) {
    variants = {AblationVariant::Hybrid, AblationVariant::MseOnly,
                AblationVariant::DiscOnly, AblationVariant::FixedTstar250,
                AblationVariant::FixedTstar750};
  } else {
    std::stringstream ss(o.values);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) variants.push_back(parse_ablation_variant(tok));
    }
  }
  auto rows = run_ablation(variants, ctx);
  json cfg = config_json(o, "ablate");
  int rc = emit(o.out_path, o.verify,
                [&](const std::string& p) { save_ablation_csv(rows, p, cfg.dump()); });
  if (rc == kExitOk && !o.verify) {
    for (const auto& [name, a] : rows) {
      std::cout << name << " -> AUROC " << a << "\n";
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Generative stress-test verification engine"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-world", "Generate a synthetic claim world");
  gen->add_option("--entities", o.entities)->check(CLI::PositiveNumber);
  gen->add_option("--relations", o.relations)->check(CLI::PositiveNumber);
  gen->add_option("--objects", o.objects, "Objects per relation")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  gen->add_option("--corpus-fraction", o.corpus_fraction)
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--object-skew", o.object_skew)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--template", o.template_text);
  gen->add_option("--seed", o.seed);
  gen->add_option("--out", o.out_path, "Output directory")->required();
  gen->add_flag("--verify", o.verify, "Re-run and diff instead of writing");

  auto* build = app.add_subcommand("build-manifold", "Embed a truth corpus");
  build->add_option("--corpus", o.corpus_path)->required()->check(CLI::ExistingFile);
  build->add_option("--dim", o.dim)->check(CLI::PositiveNumber);
  build->add_option("--seed", o.seed);
  build->add_option("--out", o.out_path)->required();
  build->add_flag("--verify", o.verify);

  auto add_pipeline_io = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", o.corpus_path)->required()->check(CLI::ExistingFile);
    cmd->add_option("--test", o.test_path)->required()->check(CLI::ExistingFile);
    cmd->add_option("--manifold", o.manifold_path)->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_path)->required();
    cmd->add_option("--lambda", o.lambda)->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--threshold", o.threshold);
    cmd->add_option("--workers", o.workers)->check(CLI::PositiveNumber);
    cmd->add_flag("--verify", o.verify);
    add_diffusion_flags(cmd, o);
    add_critic_flags(cmd, o);
  };

  auto* stress = app.add_subcommand("stress-test", "Run the stress test on a claim set");
  add_pipeline_io(stress);
  stress->add_option("--seed", o.seed);
  stress->add_option("--csv", o.csv_path, "Also write a flat CSV");

  auto* eval_cmd = app.add_subcommand("evaluate", "Multi-seed evaluation report");
  add_pipeline_io(eval_cmd);
  eval_cmd->add_option("--seeds", o.seeds, "Comma-separated seed list");
  eval_cmd->add_option("--csv", o.csv_path, "Also write a summary CSV");

  auto* sweep_t = app.add_subcommand("sweep-tstar", "AUROC per focal timestep");
  add_pipeline_io(sweep_t);
  sweep_t->add_option("--seed", o.seed);
  sweep_t->add_option("--values", o.values, "Comma-separated t* list");

  auto* sweep_l = app.add_subcommand("sweep-lambda", "Re-mix stored results per lambda");
  sweep_l->add_option("--results", o.results_path)->required()->check(CLI::ExistingFile);
  sweep_l->add_option("--test", o.test_path, "Labels for the stored results")
      ->check(CLI::ExistingFile);
  sweep_l->add_option("--values", o.values, "Comma-separated lambda list");
  sweep_l->add_option("--seed", o.seed);
  sweep_l->add_option("--out", o.out_path)->required();
  sweep_l->add_flag("--verify", o.verify);

  auto* ablate = app.add_subcommand("ablate", "Scoring-variant ablation grid");
  add_pipeline_io(ablate);
  ablate->add_option("--seed", o.seed);
  ablate->add_option("--variants", o.values,
                     "Comma-separated: hybrid,mse-only,disc-only,tstar-250,tstar-750");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen_world(o);
    if (build->parsed()) return cmd_build_manifold(o);
    if (stress->parsed()) return cmd_stress_test(o);
    if (eval_cmd->parsed()) return cmd_evaluate(o);
    if (sweep_t->parsed()) return cmd_sweep_tstar(o);
    if (sweep_l->parsed()) return cmd_sweep_lambda(o);
    if (ablate->parsed()) return cmd_ablate(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
