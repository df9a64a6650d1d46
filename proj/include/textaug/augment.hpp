#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "textaug/corpus.hpp"
#include "textaug/lexicons.hpp"
#include "textaug/translate.hpp"

namespace textaug::aug {

// A synthetic example plus the provenance needed to trace and audit it.
struct AugmentedExample {
  corpus::Example example;
  std::string origin_id;
  std::string method;  // oversample | eda_sr | eda_rd | backtranslate | greyscale
  nlohmann::json params = nlohmann::json::object();
  std::optional<double> score;
};

struct EdaConfig {
  double alpha_sr = 0.1;  // n = max(1, floor(alpha_sr * non-stopword count))
  double p_rd = 0.1;      // per-token deletion probability
  int copies_per_example = 3;
  // Random-deletion copies among copies_per_example; -1 means
  // copies_per_example / 3 (one deletion variant per two replacements).
  int rd_copies = -1;
};

struct OversampleResult {
  corpus::Dataset dataset;              // originals followed by the copies
  std::vector<AugmentedExample> added;  // the copies, with provenance
};

// Duplicates minority-class examples (sampled with replacement, seeded) until
// every class matches the majority count.
OversampleResult oversample(const corpus::Dataset& d, std::uint64_t seed);

AugmentedExample synonym_replacement(const corpus::Example& e, const lex::Thesaurus& t,
                                     const lex::StopwordSet& sw, const EdaConfig& cfg,
                                     std::uint64_t seed);

AugmentedExample random_deletion(const corpus::Example& e, const EdaConfig& cfg,
                                 std::uint64_t seed);

// copies_per_example variants per original, synonym replacements first.
std::vector<AugmentedExample> eda_augment(const corpus::Dataset& d, const lex::Thesaurus& t,
                                          const lex::StopwordSet& sw, const EdaConfig& cfg,
                                          std::uint64_t seed, int jobs = 1);

// One output per (scale-word occurrence, strictly milder alternative),
// substituting a single occurrence in the original surface text. Outputs per
// original are ordered nearest-milder first, then by position, so a cap keeps
// the closest substitutions.
std::vector<AugmentedExample> greyscale_augment(const corpus::Dataset& d, const lex::ScaleSet& s,
                                                std::optional<int> cap = std::nullopt);

// en -> pivot -> en round trip.
AugmentedExample back_translate(const corpus::Example& e, TranslationClient& client,
                                const std::string& pivot);

// Every example through every pivot, in (example, pivot) order.
std::vector<AugmentedExample> back_translate_all(const corpus::Dataset& d,
                                                 TranslationClient& client,
                                                 const std::vector<std::string>& pivots);

// JSONL with fields id, text, label, origin_id, method, params, score?.
// When `originals` is given its records are written first as plain rows.
void write_augmented_jsonl(const std::string& path, const std::vector<AugmentedExample>& items,
                           const corpus::Dataset* originals = nullptr);

std::vector<AugmentedExample> read_augmented_jsonl(const std::string& path);

}  // namespace textaug::aug
