#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "veristress/diffusion.hpp"
#include "veristress/eval.hpp"
#include "veristress/hashing.hpp"

namespace py = pybind11;
using namespace veristress;

namespace {

py::dict claim_to_dict(const Claim& c) {
  py::dict d;
  d["id"] = c.id;
  d["text"] = c.text;
  if (c.label) d["label"] = *c.label == Label::Supported ? "SUPPORTS" : "REFUTES";
  if (c.triple) {
    d["triple"] = py::make_tuple(c.triple->subject, c.triple->relation,
                                 c.triple->object);
  }
  return d;
}

py::dict result_to_dict(const StressTestResult& r) {
  py::dict d;
  d["claim_id"] = r.claim_id;
  d["original_text"] = r.original_text;
  d["reconstruction_text"] = r.reconstruction_text;
  d["e_mse"] = r.e_mse;
  d["e_sem"] = r.e_sem;
  d["s_disc"] = r.s_disc;
  d["s_hybrid"] = r.s_hybrid;
  d["nearest_corpus_id"] = r.nearest_corpus_id;
  d["denoiser_entropy"] = r.denoiser_entropy;
  return d;
}

ClaimSet claims_from_texts(const std::vector<std::string>& texts) {
  ClaimSet set;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    set.claims.push_back({"c" + std::to_string(i), texts[i], Label::Supported, {}});
  }
  return set;
}

}  // namespace

PYBIND11_MODULE(_veristress, m) {
  m.doc() = "Generative stress-test verification engine";

  py::class_<NoiseSchedule>(m, "NoiseSchedule")
      .def_property_readonly("kind",
                             [](const NoiseSchedule& s) { return schedule_kind_name(s.kind); })
      .def_readonly("T", &NoiseSchedule::T)
      .def_readonly("beta", &NoiseSchedule::beta)
      .def_readonly("alpha", &NoiseSchedule::alpha)
      .def_readonly("alpha_bar", &NoiseSchedule::alpha_bar);

  m.def(
      "build_schedule",
      [](const std::string& kind, std::size_t T) {
        return build_schedule(parse_schedule_kind(kind), T);
      },
      py::arg("kind") = "sqrt", py::arg("T") = 1000);

  m.def("embed", &embed, py::arg("text"), py::arg("dim") = kDefaultDim);

  m.def(
      "forward_diffuse",
      [](const Vector& z0, const NoiseSchedule& schedule, std::size_t t,
         std::uint64_t seed) {
        Rng rng(seed);
        return forward_diffuse(z0, schedule, t, rng);
      },
      py::arg("z0"), py::arg("schedule"), py::arg("t"), py::arg("seed") = 42);

  m.def(
      "bayes_denoise",
      [](const Vector& z_t, const NoiseSchedule& schedule, std::size_t t,
         const std::vector<Vector>& rows) {
        CorpusMatrix manifold;
        manifold.dim = rows.empty() ? 0 : rows[0].size();
        manifold.rows = rows;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          manifold.claim_ids.push_back("c" + std::to_string(i));
        }
        DenoiseResult r = bayes_denoise(z_t, schedule, t, manifold);
        return py::make_tuple(r.x_hat0, r.weights, r.entropy);
      },
      py::arg("z_t"), py::arg("schedule"), py::arg("t"), py::arg("rows"));

  m.def(
      "generate_world",
      [](std::size_t entities, std::size_t relations, std::size_t objects,
         double corpus_fraction, double object_skew, std::uint64_t seed) {
        WorldConfig cfg;
        cfg.n_entities = entities;
        cfg.n_relations = relations;
        cfg.n_objects_per_relation = objects;
        cfg.corpus_fraction = corpus_fraction;
        cfg.object_skew = object_skew;
        cfg.seed = seed;
        GeneratedWorld w = generate_world(cfg);
        py::list corpus, test;
        for (const auto& c : w.truth_corpus.claims) corpus.append(claim_to_dict(c));
        for (const auto& c : w.test_set.claims) test.append(claim_to_dict(c));
        py::dict out;
        out["corpus"] = corpus;
        out["test"] = test;
        out["template"] = w.template_text;
        return out;
      },
      py::arg("entities") = 50, py::arg("relations") = 5, py::arg("objects") = 60,
      py::arg("corpus_fraction") = 0.8, py::arg("object_skew") = 0.9,
      py::arg("seed") = 42);

  m.def(
      "stress_test",
      [](const std::string& claim_text, const std::vector<std::string>& corpus_texts,
         const std::string& claim_id, std::size_t t_star,
         std::size_t steps, const std::string& schedule_kind, std::size_t T,
         std::size_t dim, double scale, double lambda, std::uint64_t seed,
         const std::string& template_text) {
        ClaimSet corpus = claims_from_texts(corpus_texts);
        CorpusMatrix manifold = embed_corpus(corpus, dim);
        NoiseSchedule schedule = build_schedule(parse_schedule_kind(schedule_kind), T);
        StressConfig cfg;
        cfg.t_star = t_star;
        cfg.steps = std::min(steps, t_star);
        cfg.schedule_kind = schedule.kind;
        cfg.seed = seed;
        cfg.scale = scale;
        CriticConfig critic_cfg;
        critic_cfg.template_text = template_text;
        auto critic = make_critic(critic_cfg);
        Claim claim{claim_id, claim_text, {}, {}};
        return result_to_dict(stress_test(claim, manifold, corpus, schedule, cfg,
                                          *critic, critic_cfg, lambda));
      },
      py::arg("claim_text"), py::arg("corpus_texts"), py::arg("claim_id") = "q0",
      py::arg("t_star") = 500, py::arg("steps") = 50, py::arg("schedule") = "sqrt",
      py::arg("T") = 1000, py::arg("dim") = kDefaultDim, py::arg("scale") = 20.0,
      py::arg("lambda_") = 0.5, py::arg("seed") = 42,
      py::arg("template") = "{s} {r} {o}.");

  m.def("auroc", [](const std::vector<double>& scores, const std::vector<bool>& labels) {
    return auroc(ScoredSet{scores, labels, "py"});
  });

  m.def("paired_t_test",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          TTestResult r = paired_t_test(a, b);
          return py::make_tuple(r.t, r.p);
        });

  m.def("stable_hash", [](const std::string& s) { return stable_hash(s); });
}
