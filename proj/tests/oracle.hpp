#pragma once

#include <string>
#include <vector>

#include "textaug/metrics.hpp"

// Brute-force metric recomputation, kept deliberately independent of the
// library's confusion-matrix implementation: every count is a fresh scan
// over the label lists.
namespace testutil {

struct OracleReport {
  double accuracy = 0.0;
  double f1_macro = 0.0;
  double f1_weighted = 0.0;
  std::vector<double> per_class_f1;
  std::vector<double> per_class_precision;
  std::vector<double> per_class_recall;
};

inline OracleReport metrics_oracle(const std::vector<std::string>& truth,
                                   const std::vector<std::string>& pred,
                                   const std::vector<std::string>& labels) {
  OracleReport r;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == pred[i]) ++correct;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

  double macro = 0.0;
  double weighted = 0.0;
  for (const std::string& label : labels) {
    std::size_t tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (pred[i] == label) ++predicted;
      if (truth[i] == label) ++actual;
      if (pred[i] == label && truth[i] == label) ++tp;
    }
    double precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / predicted;
    double recall = actual == 0 ? 0.0 : static_cast<double>(tp) / actual;
    double f1 = precision + recall == 0.0 ? 0.0 : 2 * precision * recall / (precision + recall);
    r.per_class_precision.push_back(precision);
    r.per_class_recall.push_back(recall);
    r.per_class_f1.push_back(f1);
    macro += f1;
    weighted += f1 * static_cast<double>(actual);
  }
  r.f1_macro = macro / static_cast<double>(labels.size());
  r.f1_weighted = weighted / static_cast<double>(truth.size());
  return r;
}

}  // namespace testutil
