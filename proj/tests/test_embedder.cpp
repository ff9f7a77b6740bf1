#include <cstdio>
#include <filesystem>

#include <doctest.h>

#include "veristress/embedder.hpp"

using namespace veristress;

TEST_CASE("embed determinism and normalization") {
  Vector a = embed("The Earth orbits the Sun");
  Vector b = embed("The Earth orbits the Sun");
  CHECK(a == b);
  CHECK(a.size() == 64);
  CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(norm(embed("abc")) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("embed rejects empty text") {
  CHECK_THROWS(embed(""));
  CHECK_THROWS(embed("   \t\n"));
}

TEST_CASE("embed is case-insensitive") {
  CHECK(embed("Paris Is Nice") == embed("paris is nice"));
}

// Frozen reference vector: first 8 components of embed("the earth orbits the
// sun") at d=64, generated once and pinned. Any change here is a break in the
// hash-stability contract.
TEST_CASE("pinned reference embedding") {
  const double want[8] = {-0.17960530202677491, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  Vector v = embed("the earth orbits the sun");
  for (int i = 0; i < 8; ++i) {
    CHECK(v[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("shared-feature cosine is strictly between 0 and 1") {
  double c = dot(embed("paris is the capital of france"),
                 embed("paris is the capital of germany"));
  CHECK(c > 0.0);
  CHECK(c < 1.0);
}

namespace {

ClaimSet tiny_corpus() {
  ClaimSet set;
  set.claims = {{"a", "alpha beta gamma", Label::Supported, {}},
                {"b", "delta epsilon zeta", Label::Supported, {}},
                {"c", "alpha beta gamma", Label::Supported, {}}};
  return set;
}

}  // namespace

TEST_CASE("embed_corpus rows follow claim order") {
  ClaimSet set = tiny_corpus();
  CorpusMatrix m = embed_corpus(set, 32);
  REQUIRE(m.rows.size() == 3);
  CHECK(m.dim == 32);
  CHECK(m.claim_ids == std::vector<std::string>{"a", "b", "c"});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m.rows[i] == embed(set.claims[i].text, 32));
  }
  CHECK(m.rows[0] == m.rows[2]);  // duplicate texts, identical rows

  ClaimSet one;
  one.claims = {{"x", "solo", Label::Supported, {}}};
  CHECK(embed_corpus(one, 16).rows.size() == 1);
  CHECK_THROWS(embed_corpus(ClaimSet{}, 16));
}

TEST_CASE("embed_corpus permutation equivariance") {
  ClaimSet set = tiny_corpus();
  CorpusMatrix m = embed_corpus(set, 64);
  std::swap(set.claims[0], set.claims[1]);
  CorpusMatrix p = embed_corpus(set, 64);
  CHECK(p.rows[0] == m.rows[1]);
  CHECK(p.rows[1] == m.rows[0]);
  CHECK(p.rows[2] == m.rows[2]);
}

TEST_CASE("corpus matrix CSV round trip") {
  CorpusMatrix m = embed_corpus(tiny_corpus(), 24);
  std::string path =
      (std::filesystem::temp_directory_path() / "veristress_matrix_test.csv").string();
  save_corpus_matrix(m, path);
  CorpusMatrix r = load_corpus_matrix(path);
  std::remove(path.c_str());
  CHECK(r.dim == m.dim);
  CHECK(r.claim_ids == m.claim_ids);
  REQUIRE(r.rows.size() == m.rows.size());
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    CHECK(r.rows[i] == m.rows[i]);  // 17 significant digits round-trip exactly
  }
}
