#include "veristress/critic.hpp"

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace veristress {

using nlohmann::json;

void CriticVerdict::validate() const {
  auto in_range = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_range(entailment) || !in_range(neutral) || !in_range(contradiction)) {
    throw std::runtime_error("critic verdict channel out of [0,1]");
  }
  double sum = entailment + neutral + contradiction;
  if (std::abs(sum - 1.0) > 1e-3) {
    throw std::runtime_error("critic verdict not normalized (sum=" +
                             std::to_string(sum) + ")");
  }
}

// ---------------------------------------------------------------------------
// SchemaCritic

SchemaCritic::SchemaCritic(std::string template_text) {
  auto s = template_text.find("{s}");
  auto r = template_text.find("{r}");
  auto o = template_text.find("{o}");
  if (s == std::string::npos || r == std::string::npos || o == std::string::npos ||
      !(s < r && r < o)) {
    throw std::invalid_argument("schema critic: template must contain {s} {r} {o} in order");
  }
  prefix_ = template_text.substr(0, s);
  mid1_ = template_text.substr(s + 3, r - (s + 3));
  mid2_ = template_text.substr(r + 3, o - (r + 3));
  suffix_ = template_text.substr(o + 3);
  if (mid1_.empty() || mid2_.empty()) {
    throw std::invalid_argument("schema critic: template slots must be separated");
  }
}

std::optional<Triple> SchemaCritic::parse(const std::string& text) const {
  if (text.size() < prefix_.size() + suffix_.size()) return std::nullopt;
  if (text.compare(0, prefix_.size(), prefix_) != 0) return std::nullopt;
  if (!suffix_.empty() &&
      text.compare(text.size() - suffix_.size(), suffix_.size(), suffix_) != 0) {
    return std::nullopt;
  }
  std::string body =
      text.substr(prefix_.size(), text.size() - prefix_.size() - suffix_.size());
  auto p1 = body.find(mid1_);
  if (p1 == std::string::npos) return std::nullopt;
  auto p2 = body.find(mid2_, p1 + mid1_.size());
  if (p2 == std::string::npos) return std::nullopt;
  Triple t;
  t.subject = body.substr(0, p1);
  t.relation = body.substr(p1 + mid1_.size(), p2 - (p1 + mid1_.size()));
  t.object = body.substr(p2 + mid2_.size());
  if (t.subject.empty() || t.relation.empty() || t.object.empty()) return std::nullopt;
  // Single-token slots: a slot swallowing a separator means a misparse.
  for (const auto* slot : {&t.subject, &t.relation, &t.object}) {
    if (slot->find(mid1_) != std::string::npos) return std::nullopt;
  }
  return t;
}

CriticVerdict SchemaCritic::judge(const std::string& premise,
                                  const std::string& hypothesis) {
  if (premise.empty() || hypothesis.empty()) {
    throw std::invalid_argument("judge: empty input");
  }
  auto p = parse(premise);
  auto h = parse(hypothesis);
  if (p && h && p->subject == h->subject && p->relation == h->relation) {
    if (p->object == h->object) return {0.95, 0.04, 0.01};
    return {0.01, 0.04, 0.95};
  }
  return {0.05, 0.90, 0.05};
}

// ---------------------------------------------------------------------------
// ExternalCritic

ExternalCritic::ExternalCritic(std::string command, int timeout_ms)
    : command_(std::move(command)), timeout_ms_(timeout_ms) {
  if (command_.empty()) throw std::invalid_argument("external critic: empty command");
  if (timeout_ms_ <= 0) throw std::invalid_argument("external critic: bad timeout");
}

ExternalCritic::~ExternalCritic() { shutdown(); }

void ExternalCritic::ensure_started() {
  if (child_pid_ > 0) return;
  std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];   // parent -> child
  int out_pipe[2];  // child -> parent
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw std::runtime_error("external critic: pipe() failed");
  }
  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("external critic: fork() failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  child_pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  read_buffer_.clear();
}

void ExternalCritic::shutdown() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (child_pid_ > 0) {
    kill(child_pid_, SIGTERM);
    int status = 0;
    waitpid(child_pid_, &status, 0);
    child_pid_ = -1;
  }
}

CriticVerdict ExternalCritic::judge(const std::string& premise,
                                    const std::string& hypothesis) {
  if (premise.empty() || hypothesis.empty()) {
    throw std::invalid_argument("judge: empty input");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  ensure_started();

  std::int64_t id = next_id_++;
  json req = {{"id", id}, {"premise", premise}, {"hypothesis", hypothesis}};
  std::string line = req.dump() + "\n";

  std::size_t written = 0;
  while (written < line.size()) {
    ssize_t n = write(to_child_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      shutdown();
      throw std::runtime_error("external critic: child process write failed (" +
                               std::string(std::strerror(errno)) + ")");
    }
    written += static_cast<std::size_t>(n);
  }

  // Read one response line within the timeout budget.
  for (;;) {
    auto nl = read_buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string resp_line = read_buffer_.substr(0, nl);
      read_buffer_.erase(0, nl + 1);
      json resp;
      try {
        resp = json::parse(resp_line);
      } catch (const json::exception& e) {
        throw std::runtime_error("external critic: malformed response: " + resp_line);
      }
      if (!resp.contains("id") || resp.at("id").get<std::int64_t>() != id) {
        throw std::runtime_error("external critic: response id mismatch");
      }
      CriticVerdict v{resp.at("entailment").get<double>(),
                      resp.at("neutral").get<double>(),
                      resp.at("contradiction").get<double>()};
      v.validate();
      return v;
    }

    pollfd pfd{from_child_, POLLIN, 0};
    int pr = poll(&pfd, 1, timeout_ms_);
    if (pr == 0) {
      throw std::runtime_error("external critic: timeout waiting for judgment " +
                               std::to_string(id));
    }
    if (pr < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("external critic: poll failed");
    }
    char buf[4096];
    ssize_t n = read(from_child_, buf, sizeof(buf));
    if (n <= 0) {
      shutdown();
      throw std::runtime_error("external critic: child process exited mid-judgment");
    }
    read_buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

// ---------------------------------------------------------------------------

std::unique_ptr<Critic> make_critic(const CriticConfig& config) {
  if (config.kind == CriticKind::Schema) {
    return std::make_unique<SchemaCritic>(config.template_text);
  }
  if (config.external_command.empty()) {
    throw std::invalid_argument("external critic requires a command");
  }
  return std::make_unique<ExternalCritic>(config.external_command, config.timeout_ms);
}

double semantic_energy(const Claim& original, const std::string& reconstruction_text,
                       Critic& critic) {
  return critic.judge(original.text, reconstruction_text).contradiction;
}

double discriminative_score(const Claim& claim, Critic& critic,
                            const CriticConfig& config) {
  if (config.claim_as_premise) {
    return critic.judge(claim.text, config.tautology_text).entailment;
  }
  return critic.judge(config.tautology_text, claim.text).entailment;
}

}  // namespace veristress
