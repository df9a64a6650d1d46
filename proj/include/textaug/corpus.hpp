#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace textaug::corpus {

struct Example {
  std::string id;
  std::string text;
  std::string label;

  bool operator==(const Example&) const = default;
};

// Labeled corpus. `labels` holds the class names in first-appearance order;
// example order is the file/insertion order and is never reordered silently.
struct Dataset {
  std::vector<Example> examples;
  std::vector<std::string> labels;

  std::size_t size() const { return examples.size(); }
  bool has_label(const std::string& label) const;

  bool operator==(const Dataset&) const = default;
};

enum class Format { jsonl, tsv };

Dataset load_corpus(const std::string& path, Format format);
// Picks the format from the file extension (.tsv -> tsv, anything else jsonl).
Dataset load_corpus(const std::string& path);

void save_jsonl(const Dataset& d, const std::string& path);

// id -> position map; throws on duplicate ids.
std::unordered_map<std::string, std::size_t> id_index(const Dataset& d);

// Per-class counts in label order.
std::vector<std::pair<std::string, std::size_t>> label_counts(const Dataset& d);

// Re-labels every example through `mapping` (labels absent from the map pass
// through). The label set is rebuilt in first-appearance order.
Dataset apply_label_map(const Dataset& d,
                        const std::map<std::string, std::string>& mapping);

struct DistributionReport {
  struct Entry {
    std::string label;
    std::size_t count = 0;
    double percent = 0.0;  // rounded half-up to 1 decimal
  };
  std::size_t total = 0;
  std::vector<Entry> per_class;  // label order
};

DistributionReport class_distribution(const Dataset& d);

struct SplitFractions {
  double train = 0.7;
  double dev = 0.15;
  double test = 0.15;
};

// Seeded stratified three-way split. Split totals follow largest-remainder
// rounding of the fractions; per-class allocations stay within one example
// of exact proportionality. Splits are disjoint by id and their union is d.
std::tuple<Dataset, Dataset, Dataset> stratified_split(const Dataset& d,
                                                       const SplitFractions& fractions,
                                                       std::uint64_t seed);

// The few-shot training split: a small labeled set T with equal per-class
// counts and the remainder D with labels hidden from the visible records.
struct PetDataSplit {
  Dataset labeled;
  Dataset unlabeled;  // example.label is empty
  std::unordered_map<std::string, std::string> hidden_labels;  // id -> true label
};

PetDataSplit sample_training_set(const Dataset& d, std::size_t t_size,
                                 std::uint64_t seed);

}  // namespace textaug::corpus
