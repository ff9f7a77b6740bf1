#include "veristress/embedder.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "veristress/hashing.hpp"

namespace veristress {

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

namespace {

void add_feature(Vector& v, std::string_view feature) {
  std::uint64_t h = stable_hash(feature);
  double sign = (h >> 63) ? 1.0 : -1.0;
  v[h % v.size()] += sign;
}

}  // namespace

Vector embed(const std::string& text, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("embed: dim must be positive");
  std::string lower;
  lower.reserve(text.size());
  for (unsigned char c : text) {
    lower += static_cast<char>(std::tolower(c));
  }
  // Non-empty after trimming?
  if (lower.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw std::invalid_argument("embed: empty text");
  }

  Vector v(dim, 0.0);

  // Word unigrams, prefixed so they never collide with trigram features.
  std::istringstream words(lower);
  std::string w;
  while (words >> w) {
    add_feature(v, "w:" + w);
  }
  // Character trigrams over the raw lowercased text, spaces included.
  for (std::size_t i = 0; i + 3 <= lower.size(); ++i) {
    add_feature(v, "c:" + lower.substr(i, 3));
  }

  double n = norm(v);
  if (n > 0.0) {
    for (auto& x : v) x /= n;
  }
  return v;
}

CorpusMatrix embed_corpus(const ClaimSet& corpus, std::size_t dim) {
  if (corpus.claims.empty()) throw std::invalid_argument("embed_corpus: empty corpus");
  CorpusMatrix m;
  m.dim = dim;
  m.rows.reserve(corpus.size());
  m.claim_ids.reserve(corpus.size());
  for (const auto& c : corpus.claims) {
    m.rows.push_back(embed(c.text, dim));
    m.claim_ids.push_back(c.id);
  }
  return m;
}

void save_corpus_matrix(const CorpusMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << m.dim << "," << m.rows.size() << "\n";
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    out << m.claim_ids[i];
    for (double x : m.rows[i]) out << "," << x;
    out << "\n";
  }
}

CorpusMatrix load_corpus_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty matrix file");
  CorpusMatrix m;
  std::size_t n = 0;
  {
    std::istringstream hdr(line);
    char comma;
    if (!(hdr >> m.dim >> comma >> n) || comma != ',') {
      throw std::runtime_error(path + ": bad matrix header");
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id;
    if (!std::getline(row, id, ',')) throw std::runtime_error(path + ": bad row");
    Vector v;
    v.reserve(m.dim);
    std::string cell;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != m.dim) throw std::runtime_error(path + ": row has wrong dimension");
    m.claim_ids.push_back(id);
    m.rows.push_back(std::move(v));
  }
  if (m.rows.size() != n) throw std::runtime_error(path + ": row count disagrees with header");
  return m;
}

}  // namespace veristress
