#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "textaug/corpus.hpp"
#include "textaug/lexicons.hpp"
#include "textaug/metrics.hpp"
#include "textaug/model.hpp"

namespace textaug::pet {

inline constexpr std::string_view kMaskToken = "[MASK]";

// Cloze template with exactly one {x} slot and one {mask} slot.
struct Pattern {
  std::string id;
  std::string template_text;
};

// Validates the slots.
Pattern make_pattern(std::string id, std::string template_text);

std::string apply_pattern(const Pattern& p, const corpus::Example& e);

// Injective label -> token map, in label order.
struct Verbalizer {
  std::vector<std::pair<std::string, std::string>> mapping;

  const std::string* token_for(const std::string& label) const;
};

Verbalizer make_verbalizer(std::vector<std::pair<std::string, std::string>> mapping);

struct PvpConfig {
  std::vector<Pattern> patterns;
  Verbalizer verbalizer;
};

PvpConfig pvp_from_json(const nlohmann::json& obj);
PvpConfig load_pvp(const std::string& path);

struct SoftLabeledItem {
  corpus::Example example;  // label hidden (empty)
  std::vector<double> soft_label;
};

struct SoftLabeledSet {
  std::vector<std::string> label_order;
  std::vector<SoftLabeledItem> items;
};

struct PatternModel {
  Pattern pattern;
  model::BowModel scorer;
};

using Ensemble = std::vector<PatternModel>;

// One scorer per pattern, trained on the pattern-applied labeled set; member
// i is seeded seed + i.
Ensemble train_pvp_models(const corpus::PetDataSplit& split, const std::vector<Pattern>& patterns,
                          const Verbalizer& verbalizer,
                          std::shared_ptr<const lex::EmbeddingTable> embeddings,
                          const model::BowConfig& cfg, std::uint64_t seed);

// Soft labels are the unweighted mean of the member distributions, each
// member scoring its own pattern-applied view.
SoftLabeledSet annotate_unlabeled(const Ensemble& ensemble, const corpus::Dataset& unlabeled);

// Trains the final classifier on raw texts with soft targets.
model::BowModel distill(const SoftLabeledSet& soft,
                        std::shared_ptr<const lex::EmbeddingTable> embeddings,
                        const model::BowConfig& cfg, std::uint64_t seed);

struct PetConfig {
  std::size_t t_size = 100;
  model::BowConfig model;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  bool ipet = false;
  int generations = 3;
  double growth = 5.0;
};

struct GenerationRecord {
  std::size_t train_size = 0;
  std::vector<std::pair<std::string, std::size_t>> class_counts;
  std::size_t unlabeled_size = 0;
  std::vector<std::string> labeled_ids;  // sorted
};

struct SeedRun {
  std::uint64_t seed = 0;
  metrics::MetricsReport test_metrics;
  std::vector<GenerationRecord> generations;
};

struct PetResult {
  model::BowModel final_model;  // from the last seed
  std::vector<SeedRun> runs;
  metrics::AggregateReport aggregate;
  std::vector<std::size_t> history;  // training-set sizes per generation
  std::vector<std::string> warnings;
};

PetResult run_pet(const corpus::Dataset& train, const corpus::Dataset& test,
                  std::shared_ptr<const lex::EmbeddingTable> embeddings, const PvpConfig& pvp,
                  const PetConfig& cfg);

PetResult run_ipet(const corpus::Dataset& train, const corpus::Dataset& test,
                   std::shared_ptr<const lex::EmbeddingTable> embeddings, const PvpConfig& pvp,
                   const PetConfig& cfg);

nlohmann::json result_to_json(const PetResult& result);

}  // namespace textaug::pet
