#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "veristress/claims.hpp"

namespace veristress {

// Three-way NLI-style judgment; channels sum to 1.
struct CriticVerdict {
  double entailment = 0.0;
  double neutral = 0.0;
  double contradiction = 0.0;

  void validate() const;  // all in [0,1], sum within 1e-9 of 1
};

enum class CriticKind { Schema, External };

struct CriticConfig {
  CriticKind kind = CriticKind::Schema;
  std::string external_command;  // required when kind == External
  int timeout_ms = 5000;
  std::string tautology_text = "This is a true statement";
  // Template for the schema critic's parser (synthetic worlds).
  std::string template_text = "{s} {r} {o}.";
  // S_disc direction: claim as premise by default; flip to use claim as
  // hypothesis (the paper's wording is ambiguous).
  bool claim_as_premise = true;
};

class Critic {
 public:
  virtual ~Critic() = default;
  virtual CriticVerdict judge(const std::string& premise,
                              const std::string& hypothesis) = 0;
};

// Rule-based critic for synthetic worlds: parses both strings against the
// world template. Matching (subject, relation) with the same object is
// entailment, a different object is contradiction, anything else (including
// parse failure in either position) is neutral.
class SchemaCritic : public Critic {
 public:
  explicit SchemaCritic(std::string template_text);
  CriticVerdict judge(const std::string& premise,
                      const std::string& hypothesis) override;

  std::optional<Triple> parse(const std::string& text) const;

 private:
  std::string prefix_, mid1_, mid2_, suffix_;  // literal segments around slots
};

// Adapter for an external NLI process speaking JSON lines over stdin/stdout:
// request  {"id": n, "premise": "...", "hypothesis": "..."}
// response {"id": n, "entailment": e, "neutral": u, "contradiction": c}
// The child is long-lived; requests are serialized; a timeout or malformed
// response fails that judgment only.
class ExternalCritic : public Critic {
 public:
  ExternalCritic(std::string command, int timeout_ms);
  ~ExternalCritic() override;

  ExternalCritic(const ExternalCritic&) = delete;
  ExternalCritic& operator=(const ExternalCritic&) = delete;

  CriticVerdict judge(const std::string& premise,
                      const std::string& hypothesis) override;

 private:
  void ensure_started();
  void shutdown();

  std::string command_;
  int timeout_ms_;
  std::mutex mutex_;
  std::int64_t next_id_ = 0;
  int child_pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;
};

std::unique_ptr<Critic> make_critic(const CriticConfig& config);

// Eq.-style scores built on the critic.
double semantic_energy(const Claim& original, const std::string& reconstruction_text,
                       Critic& critic);
double discriminative_score(const Claim& claim, Critic& critic,
                            const CriticConfig& config);

}  // namespace veristress
