#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace veristress {

enum class Label { Supported, Refuted };

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;

  bool operator==(const Triple&) const = default;
};

struct Claim {
  std::string id;
  std::string text;
  std::optional<Label> label;
  std::optional<Triple> triple;
};

enum class ClaimSource { FeverFile, Synthetic };

struct ClaimCounts {
  std::size_t n_supported = 0;
  std::size_t n_refuted = 0;
  std::size_t n_unlabeled = 0;
};

struct ClaimSet {
  std::vector<Claim> claims;
  ClaimSource source = ClaimSource::Synthetic;
  ClaimCounts counts;
  std::size_t skipped = 0;  // lines dropped during ingestion (e.g. NOT ENOUGH INFO)

  std::size_t size() const { return claims.size(); }
  // Recomputes counts from labels; throws on duplicate ids.
  void validate() const;
};

struct WorldConfig {
  std::size_t n_entities = 50;
  std::size_t n_relations = 5;
  std::size_t n_objects_per_relation = 60;  // must be >= 2
  std::string template_text = "{s} {r} {o}.";
  double corpus_fraction = 0.8;
  // Probability that an (entity, relation) pair takes the relation's dominant
  // object; the rest are uniform over the remaining pool. Skew is what gives
  // held-out true claims on-manifold neighbors.
  double object_skew = 0.9;
  std::uint64_t seed = 42;
};

// Ground-truth fact table: (subject, relation) -> true object, plus the
// object pool per relation. Needed by corrupt_claim.
struct WorldTable {
  std::map<std::pair<std::string, std::string>, std::string> facts;
  std::map<std::string, std::vector<std::string>> objects_by_relation;
};

struct GeneratedWorld {
  ClaimSet truth_corpus;
  ClaimSet test_set;
  WorldTable table;
  std::string template_text;
};

// Renders a triple through a "{s} {r} {o}" template.
std::string render_template(const std::string& template_text, const Triple& t);

// FEVER-format JSONL: one object per line with fields `id`, `claim`, `label`.
// SUPPORTS/REFUTES map to labels, other labels are skipped and counted.
// max_per_label == 0 means "keep everything".
ClaimSet load_fever_jsonl(const std::string& path, std::size_t max_per_label,
                          std::uint64_t seed);

// Deterministic synthetic world: truth corpus + balanced labeled test set.
GeneratedWorld generate_world(const WorldConfig& config);

class Rng;
// Replaces the object slot with a different valid object for the same
// relation; returns a Refuted claim with a uniquified id.
Claim corrupt_claim(const Claim& claim, const WorldTable& table,
                    const std::string& template_text, Rng& rng);

// JSONL export matching the loader's schema, plus a `triple` object for
// synthetic claims so worlds round-trip through FEVER-compatible tooling.
std::string claims_to_jsonl(const ClaimSet& set);
void save_claims_jsonl(const ClaimSet& set, const std::string& path);

}  // namespace veristress
