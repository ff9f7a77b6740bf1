#include "veristress/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

using nlohmann::json;

namespace veristress {

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

namespace {

// JSON has no infinity; the t-test sentinel is stored as a string.
json num_to_json(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

double num_from_json(const json& j) {
  if (j.is_string()) {
    double inf = std::numeric_limits<double>::infinity();
    if (j == "inf") return inf;
    if (j == "-inf") return -inf;
    throw std::runtime_error("bad numeric value: " + j.dump());
  }
  return j.get<double>();
}

json result_to_json(const StressTestResult& r) {
  return json{{"claim_id", r.claim_id},
              {"original_text", r.original_text},
              {"reconstruction_text", r.reconstruction_text},
              {"z0", r.z0},
              {"z_hat0", r.z_hat0},
              {"e_mse", r.e_mse},
              {"e_sem", r.e_sem},
              {"s_disc", r.s_disc},
              {"s_hybrid", r.s_hybrid},
              {"nearest_corpus_id", r.nearest_corpus_id},
              {"denoiser_entropy", r.denoiser_entropy}};
}

StressTestResult result_from_json(const json& j) {
  StressTestResult r;
  r.claim_id = j.at("claim_id").get<std::string>();
  r.original_text = j.at("original_text").get<std::string>();
  r.reconstruction_text = j.at("reconstruction_text").get<std::string>();
  r.z0 = j.at("z0").get<Vector>();
  r.z_hat0 = j.at("z_hat0").get<Vector>();
  r.e_mse = j.at("e_mse").get<double>();
  r.e_sem = j.at("e_sem").get<double>();
  r.s_disc = j.at("s_disc").get<double>();
  r.s_hybrid = j.at("s_hybrid").get<double>();
  r.nearest_corpus_id = j.at("nearest_corpus_id").get<std::string>();
  r.denoiser_entropy = j.at("denoiser_entropy").get<double>();
  return r;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void save_results_jsonl(const std::vector<StressTestResult>& results,
                        const std::string& path, const json& config) {
  std::string body;
  if (!config.is_null()) {
    body += json{{"_config", config}}.dump();
    body += '\n';
  }
  for (const auto& r : results) {
    body += result_to_json(r).dump();
    body += '\n';
  }
  atomic_write(path, body);
}

std::vector<StressTestResult> load_results_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<StressTestResult> results;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      if (j.contains("_config")) continue;
      results.push_back(result_from_json(j));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return results;
}

nlohmann::json load_results_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains("_config")) return j["_config"];
    break;
  }
  return nullptr;
}

namespace {

std::string comment_line(const std::string& comment) {
  return comment.empty() ? std::string() : "# " + comment + "\n";
}

}  // namespace

void save_results_csv(const std::vector<StressTestResult>& results,
                      const std::string& path, const std::string& comment) {
  std::string body = comment_line(comment);
  body +=
      "claim_id,original_text,reconstruction_text,e_mse,e_sem,s_disc,s_hybrid,"
      "nearest_corpus_id,denoiser_entropy\n";
  for (const auto& r : results) {
    body += csv_escape(r.claim_id) + ',' + csv_escape(r.original_text) + ',' +
            csv_escape(r.reconstruction_text) + ',' + fmt(r.e_mse) + ',' +
            fmt(r.e_sem) + ',' + fmt(r.s_disc) + ',' + fmt(r.s_hybrid) + ',' +
            csv_escape(r.nearest_corpus_id) + ',' + fmt(r.denoiser_entropy) + '\n';
  }
  atomic_write(path, body);
}

json report_to_json(const EvalReport& report) {
  json per_method = json::object();
  for (const auto& [name, ms] : report.per_method) {
    per_method[name] = json{{"auroc_mean", ms.auroc_mean},
                            {"auroc_std", ms.auroc_std},
                            {"accuracy_mean", ms.accuracy_mean},
                            {"accuracy_std", ms.accuracy_std},
                            {"n_pos", ms.n_pos},
                            {"n_neg", ms.n_neg}};
  }
  json tstar = json::array();
  for (const auto& [t, pct, a] : report.tstar_sweep) {
    tstar.push_back(json{{"t_star", t}, {"noise_pct", pct}, {"auroc", a}});
  }
  json lambda = json::array();
  for (const auto& [l, a] : report.lambda_sweep) {
    lambda.push_back(json{{"lambda", l}, {"auroc", a}});
  }
  json sig = json::object();
  for (const auto& [pair, tt] : report.significance) {
    sig[pair] = json{{"t_statistic", num_to_json(tt.t)}, {"p_value", num_to_json(tt.p)}};
  }
  return json{{"per_method", per_method},
              {"tstar_sweep", tstar},
              {"lambda_sweep", lambda},
              {"significance", sig},
              {"config_echo", report.config_echo},
              {"seed_list", report.seed_list}};
}

EvalReport report_from_json(const json& j) {
  EvalReport report;
  for (const auto& [name, m] : j.at("per_method").items()) {
    MethodStats ms;
    ms.auroc_mean = m.at("auroc_mean").get<double>();
    ms.auroc_std = m.at("auroc_std").get<double>();
    ms.accuracy_mean = m.at("accuracy_mean").get<double>();
    ms.accuracy_std = m.at("accuracy_std").get<double>();
    ms.n_pos = m.at("n_pos").get<std::size_t>();
    ms.n_neg = m.at("n_neg").get<std::size_t>();
    report.per_method[name] = ms;
  }
  for (const auto& row : j.at("tstar_sweep")) {
    report.tstar_sweep.emplace_back(row.at("t_star").get<std::size_t>(),
                                    row.at("noise_pct").get<double>(),
                                    row.at("auroc").get<double>());
  }
  for (const auto& row : j.at("lambda_sweep")) {
    report.lambda_sweep.emplace_back(row.at("lambda").get<double>(),
                                     row.at("auroc").get<double>());
  }
  for (const auto& [pair, tt] : j.at("significance").items()) {
    report.significance[pair] = {num_from_json(tt.at("t_statistic")),
                                 num_from_json(tt.at("p_value"))};
  }
  report.config_echo =
      j.at("config_echo").get<std::map<std::string, std::string>>();
  report.seed_list = j.at("seed_list").get<std::vector<std::uint64_t>>();
  return report;
}

void save_report_json(const EvalReport& report, const std::string& path) {
  atomic_write(path, report_to_json(report).dump(2) + "\n");
}

EvalReport load_report_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  return report_from_json(j);
}

void save_report_csv(const EvalReport& report, const std::string& path) {
  std::string body = "method,auroc_mean,auroc_std,accuracy_mean,accuracy_std,n_pos,n_neg\n";
  for (const auto& [name, ms] : report.per_method) {
    body += csv_escape(name) + ',' + fmt(ms.auroc_mean) + ',' + fmt(ms.auroc_std) +
            ',' + fmt(ms.accuracy_mean) + ',' + fmt(ms.accuracy_std) + ',' +
            std::to_string(ms.n_pos) + ',' + std::to_string(ms.n_neg) + '\n';
  }
  atomic_write(path, body);
}

void save_tstar_sweep_csv(
    const std::vector<std::tuple<std::size_t, double, double>>& rows,
    const std::string& path, const std::string& comment) {
  std::string body = comment_line(comment) + "t_star,noise_pct,auroc\n";
  for (const auto& [t, pct, a] : rows) {
    body += std::to_string(t) + ',' + fmt(pct) + ',' + fmt(a) + '\n';
  }
  atomic_write(path, body);
}

void save_lambda_sweep_csv(const std::vector<std::pair<double, double>>& rows,
                           const std::string& path, const std::string& comment) {
  std::string body = comment_line(comment) + "lambda,auroc\n";
  for (const auto& [l, a] : rows) {
    body += fmt(l) + ',' + fmt(a) + '\n';
  }
  atomic_write(path, body);
}

void save_ablation_csv(const std::vector<std::pair<std::string, double>>& rows,
                       const std::string& path, const std::string& comment) {
  std::string body = comment_line(comment) + "variant,auroc\n";
  for (const auto& [name, a] : rows) {
    body += csv_escape(name) + ',' + fmt(a) + '\n';
  }
  atomic_write(path, body);
}

}  // namespace veristress
