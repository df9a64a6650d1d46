#include "textaug/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "textaug/error.hpp"

namespace textaug::metrics {

using nlohmann::json;

MetricsReport classification_metrics(const std::vector<std::string>& truth,
                                     const std::vector<std::string>& pred,
                                     const std::vector<std::string>& labels) {
  if (truth.size() != pred.size()) {
    throw Error(ErrorKind::invalid_argument,
                "truth has " + std::to_string(truth.size()) + " labels, predictions " +
                    std::to_string(pred.size()));
  }
  if (truth.empty()) throw Error(ErrorKind::invalid_argument, "no examples");
  if (labels.empty()) throw Error(ErrorKind::invalid_argument, "no labels");

  std::unordered_map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < labels.size(); ++i) label_index.emplace(labels[i], i);
  auto index_of = [&](const std::string& label) {
    auto it = label_index.find(label);
    if (it == label_index.end()) {
      throw Error(ErrorKind::invalid_argument, "unknown label '" + label + "'");
    }
    return it->second;
  };

  std::size_t k = labels.size();
  std::vector<std::size_t> tp(k, 0), fp(k, 0), fn(k, 0), support(k, 0);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    std::size_t ti = index_of(truth[i]);
    std::size_t pi = index_of(pred[i]);
    ++support[ti];
    if (ti == pi) {
      ++tp[ti];
      ++correct;
    } else {
      ++fn[ti];
      ++fp[pi];
    }
  }

  MetricsReport report;
  report.labels = labels;
  report.n_examples = truth.size();
  report.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  double macro_sum = 0.0;
  double weighted_sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    ClassMetrics m;
    m.support = support[c];
    std::size_t pred_pos = tp[c] + fp[c];
    std::size_t true_pos = tp[c] + fn[c];
    m.precision = pred_pos == 0 ? 0.0 : static_cast<double>(tp[c]) / static_cast<double>(pred_pos);
    m.recall = true_pos == 0 ? 0.0 : static_cast<double>(tp[c]) / static_cast<double>(true_pos);
    m.f1 = (m.precision + m.recall) == 0.0 ? 0.0
                                           : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    macro_sum += m.f1;
    weighted_sum += m.f1 * static_cast<double>(m.support);
    report.per_class.push_back(m);
  }
  report.f1_macro = macro_sum / static_cast<double>(k);
  report.f1_weighted = weighted_sum / static_cast<double>(truth.size());
  return report;
}

AggregateReport aggregate_runs(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw Error(ErrorKind::invalid_argument, "no reports");
  for (const MetricsReport& r : reports) {
    if (r.labels != reports.front().labels) {
      throw Error(ErrorKind::invalid_argument, "reports have mismatched label sets");
    }
  }
  auto mean_std = [&](auto getter) {
    MeanStd ms;
    double sum = 0.0;
    bool all_equal = true;
    for (const MetricsReport& r : reports) {
      sum += getter(r);
      all_equal = all_equal && getter(r) == getter(reports.front());
    }
    ms.mean = sum / static_cast<double>(reports.size());
    if (all_equal) ms.mean = getter(reports.front());
    if (reports.size() > 1 && !all_equal) {
      double sq = 0.0;
      for (const MetricsReport& r : reports) {
        double d = getter(r) - ms.mean;
        sq += d * d;
      }
      ms.stddev = std::sqrt(sq / static_cast<double>(reports.size() - 1));
    }
    return ms;
  };
  AggregateReport agg;
  agg.runs = reports.size();
  agg.accuracy = mean_std([](const MetricsReport& r) { return r.accuracy; });
  agg.f1_macro = mean_std([](const MetricsReport& r) { return r.f1_macro; });
  agg.f1_weighted = mean_std([](const MetricsReport& r) { return r.f1_weighted; });
  return agg;
}

json to_json(const MetricsReport& report) {
  json per_class = json::object();
  for (std::size_t c = 0; c < report.labels.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    per_class[report.labels[c]] = {{"precision", m.precision},
                                   {"recall", m.recall},
                                   {"f1", m.f1},
                                   {"support", m.support}};
  }
  return {{"accuracy", report.accuracy},
          {"f1_macro", report.f1_macro},
          {"f1_weighted", report.f1_weighted},
          {"labels", report.labels},
          {"per_class", per_class},
          {"n_examples", report.n_examples}};
}

MetricsReport metrics_report_from_json(const json& obj) {
  MetricsReport report;
  try {
    report.accuracy = obj.at("accuracy").get<double>();
    report.f1_macro = obj.at("f1_macro").get<double>();
    report.f1_weighted = obj.at("f1_weighted").get<double>();
    report.labels = obj.at("labels").get<std::vector<std::string>>();
    report.n_examples = obj.at("n_examples").get<std::size_t>();
    const json& per_class = obj.at("per_class");
    for (const std::string& label : report.labels) {
      const json& m = per_class.at(label);
      report.per_class.push_back({m.at("precision").get<double>(), m.at("recall").get<double>(),
                                  m.at("f1").get<double>(), m.at("support").get<std::size_t>()});
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::parse, std::string("bad metrics report: ") + ex.what());
  }
  return report;
}

json to_json(const AggregateReport& report) {
  auto ms = [](const MeanStd& m) { return json{{"mean", m.mean}, {"std", m.stddev}}; };
  return {{"runs", report.runs},
          {"accuracy", ms(report.accuracy)},
          {"f1_macro", ms(report.f1_macro)},
          {"f1_weighted", ms(report.f1_weighted)}};
}

namespace {

std::string cell(const MeanStd& m) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << m.mean << " ±" << m.stddev;
  return out.str();
}

}  // namespace

std::string render_table_text(const std::vector<ReportRow>& rows) {
  const std::string headers[4] = {"Method", "F1-macro", "F1-weighted", "Acc"};
  std::size_t widths[4];
  for (std::size_t i = 0; i < 4; ++i) widths[i] = headers[i].size();
  std::vector<std::array<std::string, 4>> body;
  for (const ReportRow& row : rows) {
    std::array<std::string, 4> cells = {row.method, cell(row.aggregate.f1_macro),
                                        cell(row.aggregate.f1_weighted), cell(row.aggregate.accuracy)};
    for (std::size_t i = 0; i < 4; ++i) {
      // The ± glyph is two bytes; measure display width, not byte count.
      std::size_t display = cells[i].size();
      if (cells[i].find("±") != std::string::npos) display -= 1;
      widths[i] = std::max(widths[i], display);
    }
    body.push_back(std::move(cells));
  }
  std::ostringstream out;
  auto pad = [&](const std::string& s, std::size_t width) {
    std::size_t display = s.size();
    if (s.find("±") != std::string::npos) display -= 1;
    out << s << std::string(width - display, ' ');
  };
  for (std::size_t i = 0; i < 4; ++i) {
    if (i + 1 < 4) {
      pad(headers[i], widths[i]);
      out << "  ";
    } else {
      out << headers[i];
    }
  }
  out << '\n';
  for (const auto& cells : body) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (i + 1 < 4) {
        pad(cells[i], widths[i]);
        out << "  ";
      } else {
        out << cells[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string render_table_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "method,f1_macro_mean,f1_macro_std,f1_weighted_mean,f1_weighted_std,acc_mean,acc_std\n";
  out << std::fixed << std::setprecision(6);
  for (const ReportRow& row : rows) {
    std::string method = row.method;
    if (method.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : method) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
      }
      quoted += "\"";
      method = quoted;
    }
    out << method << ',' << row.aggregate.f1_macro.mean << ',' << row.aggregate.f1_macro.stddev
        << ',' << row.aggregate.f1_weighted.mean << ',' << row.aggregate.f1_weighted.stddev << ','
        << row.aggregate.accuracy.mean << ',' << row.aggregate.accuracy.stddev << '\n';
  }
  return out.str();
}

}  // namespace textaug::metrics
