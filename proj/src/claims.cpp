#include "veristress/claims.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "veristress/hashing.hpp"
#include "veristress/rng.hpp"

namespace veristress {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

ClaimCounts recount(const std::vector<Claim>& claims) {
  ClaimCounts c;
  for (const auto& cl : claims) {
    if (!cl.label) {
      ++c.n_unlabeled;
    } else if (*cl.label == Label::Supported) {
      ++c.n_supported;
    } else {
      ++c.n_refuted;
    }
  }
  return c;
}

void check_unique_ids(const std::vector<Claim>& claims) {
  std::set<std::string> seen;
  for (const auto& c : claims) {
    if (!seen.insert(c.id).second) {
      throw std::runtime_error("duplicate claim id: " + c.id);
    }
  }
}

}  // namespace

void ClaimSet::validate() const {
  check_unique_ids(claims);
  ClaimCounts c = recount(claims);
  if (c.n_supported != counts.n_supported || c.n_refuted != counts.n_refuted ||
      c.n_unlabeled != counts.n_unlabeled) {
    throw std::runtime_error("claim counts disagree with labels");
  }
}

std::string render_template(const std::string& template_text, const Triple& t) {
  std::string out = template_text;
  auto replace = [&out](const std::string& slot, const std::string& value) {
    auto pos = out.find(slot);
    if (pos == std::string::npos) {
      throw std::runtime_error("template missing slot " + slot);
    }
    out.replace(pos, slot.size(), value);
  };
  replace("{s}", t.subject);
  replace("{r}", t.relation);
  replace("{o}", t.object);
  return out;
}

ClaimSet load_fever_jsonl(const std::string& path, std::size_t max_per_label,
                          std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open claims file: " + path);

  ClaimSet out;
  out.source = ClaimSource::FeverFile;

  std::string line;
  std::size_t lineno = 0;
  std::vector<Claim> supported, refuted;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed JSON line: " + e.what());
    }
    if (!j.is_object() || !j.contains("claim") || !j.contains("label") ||
        !j.contains("id")) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected object with id/claim/label fields");
    }
    std::string label = j.at("label").get<std::string>();
    if (label != "SUPPORTS" && label != "REFUTES") {
      ++out.skipped;  // NOT ENOUGH INFO etc.
      continue;
    }
    Claim c;
    c.id = j.at("id").is_string() ? j.at("id").get<std::string>()
                                  : std::to_string(j.at("id").get<std::int64_t>());
    c.text = trim(j.at("claim").get<std::string>());
    if (c.text.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty claim text");
    }
    c.label = (label == "SUPPORTS") ? Label::Supported : Label::Refuted;
    if (j.contains("triple") && j.at("triple").is_object()) {
      const auto& t = j.at("triple");
      c.triple = Triple{t.at("subject").get<std::string>(),
                        t.at("relation").get<std::string>(),
                        t.at("object").get<std::string>()};
    }
    (*c.label == Label::Supported ? supported : refuted).push_back(std::move(c));
  }

  // Seeded uniform subsample per class, preserving file order afterwards.
  auto subsample = [&](std::vector<Claim>& v, std::uint64_t salt) {
    if (max_per_label == 0 || v.size() <= max_per_label) return;
    Rng rng(stable_hash_combine(seed, salt == 0 ? "supported" : "refuted"));
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      std::swap(idx[i], idx[rng.next_below(i + 1)]);
    }
    idx.resize(max_per_label);
    std::sort(idx.begin(), idx.end());
    std::vector<Claim> kept;
    kept.reserve(max_per_label);
    for (auto i : idx) kept.push_back(std::move(v[i]));
    v = std::move(kept);
  };
  subsample(supported, 0);
  subsample(refuted, 1);

  out.claims.reserve(supported.size() + refuted.size());
  for (auto& c : supported) out.claims.push_back(std::move(c));
  for (auto& c : refuted) out.claims.push_back(std::move(c));
  if (out.claims.empty()) {
    throw std::runtime_error(path + ": no usable SUPPORTS/REFUTES claims");
  }
  check_unique_ids(out.claims);
  out.counts = recount(out.claims);
  return out;
}

namespace {

constexpr const char* kConsonants = "bcdfghjklmnpqrstvwz";
constexpr const char* kVowels = "aeiou";

// Pronounceable pseudoword, npairs consonant-vowel pairs, unique within the world.
std::string cv_name(std::size_t npairs, std::set<std::string>& used, Rng& rng) {
  for (;;) {
    std::string w;
    w.reserve(npairs * 2);
    for (std::size_t i = 0; i < npairs; ++i) {
      w += kConsonants[rng.next_below(19)];
      w += kVowels[rng.next_below(5)];
    }
    if (used.insert(w).second) return w;
  }
}

}  // namespace

Claim corrupt_claim(const Claim& claim, const WorldTable& table,
                    const std::string& template_text, Rng& rng) {
  if (!claim.triple) throw std::runtime_error("corrupt_claim: claim has no triple");
  const Triple& t = *claim.triple;
  auto pool_it = table.objects_by_relation.find(t.relation);
  if (pool_it == table.objects_by_relation.end()) {
    throw std::runtime_error("corrupt_claim: unknown relation " + t.relation);
  }
  std::vector<std::string> alts;
  for (const auto& o : pool_it->second) {
    if (o != t.object) alts.push_back(o);
  }
  if (alts.empty()) {
    throw std::runtime_error("corrupt_claim: no alternative object for " + t.relation);
  }
  Triple corrupted = t;
  corrupted.object = alts[rng.next_below(alts.size())];
  Claim out;
  out.id = claim.id + "#f";
  out.label = Label::Refuted;
  out.triple = corrupted;
  out.text = render_template(template_text, corrupted);
  return out;
}

GeneratedWorld generate_world(const WorldConfig& config) {
  if (config.n_entities == 0 || config.n_relations == 0) {
    throw std::runtime_error("generate_world: empty world");
  }
  if (config.n_objects_per_relation < 2) {
    throw std::runtime_error("generate_world: need >= 2 objects per relation");
  }
  if (config.corpus_fraction <= 0.0 || config.corpus_fraction >= 1.0) {
    throw std::runtime_error("generate_world: corpus_fraction must be in (0,1)");
  }
  // Fails fast on a bad template.
  render_template(config.template_text, Triple{"a", "b", "c"});

  Rng rng(stable_hash_combine(config.seed, "world"));
  std::set<std::string> used;

  std::vector<std::string> entities, relations;
  for (std::size_t i = 0; i < config.n_entities; ++i) {
    entities.push_back(cv_name(6, used, rng));
  }
  for (std::size_t j = 0; j < config.n_relations; ++j) {
    relations.push_back(cv_name(4, used, rng));
  }

  GeneratedWorld world;
  world.template_text = config.template_text;
  for (const auto& r : relations) {
    auto& pool = world.table.objects_by_relation[r];
    for (std::size_t k = 0; k < config.n_objects_per_relation; ++k) {
      pool.push_back(cv_name(6, used, rng));
    }
  }

  std::vector<Claim> true_claims;
  std::size_t idx = 0;
  for (const auto& e : entities) {
    for (const auto& r : relations) {
      const auto& pool = world.table.objects_by_relation[r];
      std::string obj;
      if (rng.next_uniform() <= config.object_skew) {
        obj = pool[0];
      } else {
        obj = pool[1 + rng.next_below(pool.size() - 1)];
      }
      world.table.facts[{e, r}] = obj;
      Claim c;
      c.id = "w" + std::to_string(idx++);
      c.label = Label::Supported;
      c.triple = Triple{e, r, obj};
      c.text = render_template(config.template_text, *c.triple);
      true_claims.push_back(std::move(c));
    }
  }

  // Seeded split: corpus_fraction into the truth corpus, the rest held out.
  std::vector<std::size_t> order(true_claims.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.next_below(i + 1)]);
  }
  auto n_corpus = static_cast<std::size_t>(
      std::llround(config.corpus_fraction * static_cast<double>(true_claims.size())));
  if (n_corpus == 0 || n_corpus >= true_claims.size()) {
    throw std::runtime_error("generate_world: corpus_fraction leaves an empty split");
  }

  for (std::size_t i = 0; i < n_corpus; ++i) {
    world.truth_corpus.claims.push_back(true_claims[order[i]]);
  }
  std::vector<Claim> heldout;
  for (std::size_t i = n_corpus; i < true_claims.size(); ++i) {
    heldout.push_back(true_claims[order[i]]);
  }
  if (heldout.empty()) {
    throw std::runtime_error("generate_world: no held-out claims for the test set");
  }
  if (heldout.size() > world.truth_corpus.claims.size()) {
    throw std::runtime_error("generate_world: corpus too small to source corruptions");
  }

  // False half: corrupt a seeded sample of corpus claims, so each false
  // claim's true counterpart sits on the manifold.
  std::vector<std::size_t> corder(world.truth_corpus.claims.size());
  for (std::size_t i = 0; i < corder.size(); ++i) corder[i] = i;
  for (std::size_t i = corder.size() - 1; i > 0; --i) {
    std::swap(corder[i], corder[rng.next_below(i + 1)]);
  }
  std::vector<Claim> corrupted;
  for (std::size_t i = 0; i < heldout.size(); ++i) {
    corrupted.push_back(corrupt_claim(world.truth_corpus.claims[corder[i]],
                                      world.table, config.template_text, rng));
  }

  world.truth_corpus.source = ClaimSource::Synthetic;
  world.truth_corpus.counts = recount(world.truth_corpus.claims);

  world.test_set.source = ClaimSource::Synthetic;
  for (auto& c : heldout) world.test_set.claims.push_back(std::move(c));
  for (auto& c : corrupted) world.test_set.claims.push_back(std::move(c));
  world.test_set.counts = recount(world.test_set.claims);
  world.test_set.validate();
  world.truth_corpus.validate();
  return world;
}

std::string claims_to_jsonl(const ClaimSet& set) {
  std::string body;
  for (const auto& c : set.claims) {
    json j;
    j["id"] = c.id;
    j["claim"] = c.text;
    j["label"] = !c.label                        ? "NOT ENOUGH INFO"
                 : (*c.label == Label::Supported) ? "SUPPORTS"
                                                  : "REFUTES";
    if (c.triple) {
      j["triple"] = {{"subject", c.triple->subject},
                     {"relation", c.triple->relation},
                     {"object", c.triple->object}};
    }
    body += j.dump();
    body += '\n';
  }
  return body;
}

void save_claims_jsonl(const ClaimSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << claims_to_jsonl(set);
}

}  // namespace veristress
