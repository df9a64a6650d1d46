#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace textaug::metrics {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double f1_weighted = 0.0;
  std::vector<std::string> labels;
  std::vector<ClassMetrics> per_class;  // aligned with labels
  std::size_t n_examples = 0;
};

// Confusion-matrix metrics. Macro F1 averages over every declared label;
// weighted F1 weights by support. Zero denominators yield 0.
MetricsReport classification_metrics(const std::vector<std::string>& truth,
                                     const std::vector<std::string>& pred,
                                     const std::vector<std::string>& labels);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n-1); 0 when n == 1
};

struct AggregateReport {
  std::size_t runs = 0;
  MeanStd accuracy;
  MeanStd f1_macro;
  MeanStd f1_weighted;
};

AggregateReport aggregate_runs(const std::vector<MetricsReport>& reports);

nlohmann::json to_json(const MetricsReport& report);
MetricsReport metrics_report_from_json(const nlohmann::json& obj);
nlohmann::json to_json(const AggregateReport& report);

// Aligned text / CSV tables, one row per method, columns F1-macro,
// F1-weighted and accuracy as "mean ±std".
struct ReportRow {
  std::string method;
  AggregateReport aggregate;
};
std::string render_table_text(const std::vector<ReportRow>& rows);
std::string render_table_csv(const std::vector<ReportRow>& rows);

}  // namespace textaug::metrics
