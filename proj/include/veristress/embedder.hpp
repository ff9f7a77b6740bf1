#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "veristress/claims.hpp"

namespace veristress {

using Vector = std::vector<double>;

inline constexpr std::size_t kDefaultDim = 64;

// Row-major embedded truth corpus, rows aligned with claim ids.
struct CorpusMatrix {
  std::size_t dim = 0;
  std::vector<Vector> rows;
  std::vector<std::string> claim_ids;

  std::size_t size() const { return rows.size(); }
};

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);

// Deterministic feature-hash embedding: lowercased word unigrams plus
// character trigrams, signed-hashed into `dim` buckets, L2-normalized.
Vector embed(const std::string& text, std::size_t dim = kDefaultDim);

CorpusMatrix embed_corpus(const ClaimSet& corpus, std::size_t dim = kDefaultDim);

// CSV round-trip so manifolds can be built once and reused: header line
// "d,n", then one row per line as "claim_id,v0,...,v{d-1}".
void save_corpus_matrix(const CorpusMatrix& m, const std::string& path);
CorpusMatrix load_corpus_matrix(const std::string& path);

}  // namespace veristress
