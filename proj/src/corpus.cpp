#include "textaug/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "textaug/error.hpp"
#include "textaug/rng.hpp"
#include "textaug/text.hpp"

namespace textaug::corpus {

using nlohmann::json;

bool Dataset::has_label(const std::string& label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
  throw Error(ErrorKind::parse, path + ":" + std::to_string(line) + ": " + what);
}

void append_example(Dataset& d, std::unordered_map<std::string, std::size_t>& seen,
                    const std::string& path, std::size_t line, Example e, bool explicit_id) {
  if (text::trim(e.text).empty()) parse_fail(path, line, "empty text");
  if (!text::valid_utf8(e.text)) parse_fail(path, line, "text is not valid UTF-8");
  if (e.label.empty()) parse_fail(path, line, "empty label");
  if (e.id.empty()) parse_fail(path, line, "empty id");
  auto [it, inserted] = seen.emplace(e.id, line);
  if (!inserted) {
    if (explicit_id) parse_fail(path, line, "duplicate id '" + e.id + "' (first seen at line " + std::to_string(it->second) + ")");
    parse_fail(path, line, "auto-assigned id '" + e.id + "' collides with an earlier row");
  }
  if (!d.has_label(e.label)) d.labels.push_back(e.label);
  d.examples.push_back(std::move(e));
}

Dataset load_jsonl(const std::string& path, std::istream& in) {
  Dataset d;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) parse_fail(path, line_no, "invalid JSON");
    if (!obj.is_object()) parse_fail(path, line_no, "expected a JSON object");
    if (!obj.contains("text") || !obj["text"].is_string()) parse_fail(path, line_no, "missing string field 'text'");
    if (!obj.contains("label") || !obj["label"].is_string()) parse_fail(path, line_no, "missing string field 'label'");
    Example e;
    e.text = obj["text"].get<std::string>();
    e.label = obj["label"].get<std::string>();
    bool explicit_id = obj.contains("id");
    if (explicit_id) {
      if (!obj["id"].is_string()) parse_fail(path, line_no, "field 'id' must be a string");
      e.id = obj["id"].get<std::string>();
    } else {
      e.id = std::to_string(row);
    }
    append_example(d, seen, path, line_no, std::move(e), explicit_id);
    ++row;
  }
  if (d.examples.empty()) throw Error(ErrorKind::parse, path + ": no examples");
  return d;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

Dataset load_tsv(const std::string& path, std::istream& in) {
  Dataset d;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse, path + ": no examples");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_tabs(line);
  bool has_id;
  if (header == std::vector<std::string>{"id", "text", "label"}) {
    has_id = true;
  } else if (header == std::vector<std::string>{"text", "label"}) {
    has_id = false;
  } else {
    parse_fail(path, line_no, "header must be 'id<TAB>text<TAB>label' or 'text<TAB>label'");
  }
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    std::size_t expected = has_id ? 3 : 2;
    if (fields.size() != expected) {
      parse_fail(path, line_no, "expected " + std::to_string(expected) + " tab-separated fields, got " + std::to_string(fields.size()));
    }
    Example e;
    if (has_id) {
      e.id = fields[0];
      e.text = fields[1];
      e.label = fields[2];
    } else {
      e.id = std::to_string(row);
      e.text = fields[0];
      e.label = fields[1];
    }
    append_example(d, seen, path, line_no, std::move(e), has_id);
    ++row;
  }
  if (d.examples.empty()) throw Error(ErrorKind::parse, path + ": no examples");
  return d;
}

}  // namespace

Dataset load_corpus(const std::string& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return format == Format::jsonl ? load_jsonl(path, in) : load_tsv(path, in);
}

Dataset load_corpus(const std::string& path) {
  Format format = path.size() >= 4 && path.substr(path.size() - 4) == ".tsv" ? Format::tsv : Format::jsonl;
  return load_corpus(path, format);
}

void save_jsonl(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  for (const Example& e : d.examples) {
    json obj = {{"id", e.id}, {"text", e.text}, {"label", e.label}};
    out << obj.dump() << '\n';
  }
}

std::unordered_map<std::string, std::size_t> id_index(const Dataset& d) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(d.examples.size());
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    auto [it, inserted] = index.emplace(d.examples[i].id, i);
    if (!inserted) throw Error(ErrorKind::invalid_argument, "duplicate id '" + d.examples[i].id + "'");
  }
  return index;
}

std::vector<std::pair<std::string, std::size_t>> label_counts(const Dataset& d) {
  std::vector<std::pair<std::string, std::size_t>> counts;
  counts.reserve(d.labels.size());
  for (const std::string& label : d.labels) counts.emplace_back(label, 0);
  for (const Example& e : d.examples) {
    for (auto& [label, count] : counts) {
      if (label == e.label) {
        ++count;
        break;
      }
    }
  }
  return counts;
}

Dataset apply_label_map(const Dataset& d, const std::map<std::string, std::string>& mapping) {
  Dataset out;
  out.examples.reserve(d.examples.size());
  for (const Example& e : d.examples) {
    Example m = e;
    auto it = mapping.find(e.label);
    if (it != mapping.end()) m.label = it->second;
    if (!out.has_label(m.label)) out.labels.push_back(m.label);
    out.examples.push_back(std::move(m));
  }
  return out;
}

DistributionReport class_distribution(const Dataset& d) {
  if (d.examples.empty()) throw Error(ErrorKind::invalid_argument, "empty dataset");
  DistributionReport report;
  report.total = d.examples.size();
  for (const auto& [label, count] : label_counts(d)) {
    double raw = 100.0 * static_cast<double>(count) / static_cast<double>(report.total);
    double rounded = std::floor(raw * 10.0 + 0.5) / 10.0;  // half-up, 1 decimal
    report.per_class.push_back({label, count, rounded});
  }
  return report;
}

namespace {

// Largest-remainder allocation of `total` units across quotas; ties go to the
// earlier slot.
std::vector<std::size_t> largest_remainder(const std::vector<double>& quotas, std::size_t total) {
  std::vector<std::size_t> alloc(quotas.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < quotas.size(); ++i) {
    alloc[i] = static_cast<std::size_t>(std::floor(quotas[i]));
    assigned += alloc[i];
    remainders.emplace_back(quotas[i] - std::floor(quotas[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k) {
    ++alloc[remainders[k % remainders.size()].second];
    ++assigned;
  }
  return alloc;
}

}  // namespace

std::tuple<Dataset, Dataset, Dataset> stratified_split(const Dataset& d,
                                                       const SplitFractions& fractions,
                                                       std::uint64_t seed) {
  const double fracs[3] = {fractions.train, fractions.dev, fractions.test};
  double sum = fracs[0] + fracs[1] + fracs[2];
  for (double f : fracs) {
    if (f <= 0.0) throw Error(ErrorKind::invalid_argument, "fractions must be positive");
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::invalid_argument, "fractions sum to " + std::to_string(sum) + ", expected 1");
  }

  // Positions per class, shuffled with the seeded generator.
  std::vector<std::vector<std::size_t>> per_class(d.labels.size());
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    auto it = std::find(d.labels.begin(), d.labels.end(), d.examples[i].label);
    per_class[static_cast<std::size_t>(it - d.labels.begin())].push_back(i);
  }
  Rng rng(seed);
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    if (per_class[c].size() < 3) {
      throw Error(ErrorKind::invalid_argument,
                  "class '" + d.labels[c] + "' has " + std::to_string(per_class[c].size()) +
                      " examples, cannot populate 3 splits");
    }
    rng.shuffle(per_class[c]);
  }

  // Split totals by largest remainder over the whole dataset.
  std::size_t n = d.examples.size();
  std::vector<double> split_quotas = {fracs[0] * n, fracs[1] * n, fracs[2] * n};
  std::vector<std::size_t> split_sizes = largest_remainder(split_quotas, n);

  // Fill train and dev split by split: per-class floors first, then extras by
  // descending fractional remainder, bounded by what each class has left.
  // Test takes the leftovers, keeping both marginals exact.
  std::vector<std::size_t> taken(per_class.size(), 0);
  std::array<std::vector<std::size_t>, 3> assignment;  // split -> positions
  for (std::size_t s = 0; s < 2; ++s) {
    std::vector<std::size_t> want(per_class.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      double quota = fracs[s] * static_cast<double>(per_class[c].size());
      want[c] = static_cast<std::size_t>(std::floor(quota));
      assigned += want[c];
      remainders.emplace_back(quota - std::floor(quota), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::size_t k = 0;
    while (assigned < split_sizes[s] && k < remainders.size()) {
      std::size_t c = remainders[k++].second;
      if (taken[c] + want[c] < per_class[c].size()) {
        ++want[c];
        ++assigned;
      }
    }
    for (std::size_t c = 0; c < per_class.size(); ++c) {
      for (std::size_t i = 0; i < want[c]; ++i) {
        assignment[s].push_back(per_class[c][taken[c] + i]);
      }
      taken[c] += want[c];
    }
  }
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    for (std::size_t i = taken[c]; i < per_class[c].size(); ++i) {
      assignment[2].push_back(per_class[c][i]);
    }
  }

  std::array<Dataset, 3> out;
  for (std::size_t s = 0; s < 3; ++s) {
    std::sort(assignment[s].begin(), assignment[s].end());
    out[s].labels = d.labels;
    out[s].examples.reserve(assignment[s].size());
    for (std::size_t pos : assignment[s]) out[s].examples.push_back(d.examples[pos]);
  }
  return {std::move(out[0]), std::move(out[1]), std::move(out[2])};
}

PetDataSplit sample_training_set(const Dataset& d, std::size_t t_size, std::uint64_t seed) {
  std::size_t k = d.labels.size();
  if (k == 0 || d.examples.empty()) throw Error(ErrorKind::invalid_argument, "empty dataset");
  if (t_size == 0 || t_size % k != 0) {
    throw Error(ErrorKind::invalid_argument,
                "t_size " + std::to_string(t_size) + " is not divisible by " + std::to_string(k) + " classes");
  }
  std::size_t per_class_take = t_size / k;

  std::vector<std::vector<std::size_t>> per_class(k);
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    auto it = std::find(d.labels.begin(), d.labels.end(), d.examples[i].label);
    per_class[static_cast<std::size_t>(it - d.labels.begin())].push_back(i);
  }

  Rng rng(seed);
  std::vector<bool> in_labeled(d.examples.size(), false);
  for (std::size_t c = 0; c < k; ++c) {
    if (per_class[c].size() < per_class_take) {
      throw Error(ErrorKind::invalid_argument,
                  "class '" + d.labels[c] + "' has only " + std::to_string(per_class[c].size()) +
                      " examples, need " + std::to_string(per_class_take));
    }
    rng.shuffle(per_class[c]);
    for (std::size_t i = 0; i < per_class_take; ++i) in_labeled[per_class[c][i]] = true;
  }

  PetDataSplit split;
  split.labeled.labels = d.labels;
  split.unlabeled.labels = d.labels;
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    if (in_labeled[i]) {
      split.labeled.examples.push_back(d.examples[i]);
    } else {
      Example hidden = d.examples[i];
      split.hidden_labels.emplace(hidden.id, hidden.label);
      hidden.label.clear();
      split.unlabeled.examples.push_back(std::move(hidden));
    }
  }
  return split;
}

}  // namespace textaug::corpus
