#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "veristress/diffusion.hpp"
#include "veristress/eval.hpp"

namespace veristress {

// Writes to a temp file in the same directory, then renames into place.
void atomic_write(const std::string& path, const std::string& content);

// One result per line, field names exactly as in StressTestResult. A non-null
// `config` is written as a leading {"_config": ...} line; the loader skips it.
void save_results_jsonl(const std::vector<StressTestResult>& results,
                        const std::string& path,
                        const nlohmann::json& config = nullptr);
std::vector<StressTestResult> load_results_jsonl(const std::string& path);
nlohmann::json load_results_config(const std::string& path);

// Flat view for spreadsheets; embedding vectors are omitted.
void save_results_csv(const std::vector<StressTestResult>& results,
                      const std::string& path, const std::string& comment = "");

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

void save_report_json(const EvalReport& report, const std::string& path);
EvalReport load_report_json(const std::string& path);

// One row per method: method, auroc_mean, auroc_std, accuracy_mean,
// accuracy_std, n_pos, n_neg.
void save_report_csv(const EvalReport& report, const std::string& path);

// CSV writers accept an optional comment recorded as a leading "# " line
// (gnuplot-friendly), used to embed the producing configuration.
void save_tstar_sweep_csv(
    const std::vector<std::tuple<std::size_t, double, double>>& rows,
    const std::string& path, const std::string& comment = "");
// gnuplot-friendly two-column grid.
void save_lambda_sweep_csv(const std::vector<std::pair<double, double>>& rows,
                           const std::string& path, const std::string& comment = "");
void save_ablation_csv(const std::vector<std::pair<std::string, double>>& rows,
                       const std::string& path, const std::string& comment = "");

}  // namespace veristress
