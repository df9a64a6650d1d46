#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace textaug::lex {

struct StopwordSet {
  std::unordered_set<std::string> words;

  bool contains(const std::string& w) const { return words.count(w) > 0; }
  bool operator==(const StopwordSet&) const = default;
};

// word -> ordered synonym list, all lowercase. A word never lists itself.
struct Thesaurus {
  std::unordered_map<std::string, std::vector<std::string>> entries;

  const std::vector<std::string>* find(const std::string& w) const {
    auto it = entries.find(w);
    return it == entries.end() ? nullptr : &it->second;
  }
  bool operator==(const Thesaurus&) const = default;
};

enum class ScaleSource { demelo, crowd, wilkinson, custom };

// One polarity of an adjective intensity scale, mildest word first.
struct HalfScale {
  std::vector<std::string> words;
  ScaleSource source = ScaleSource::custom;

  bool operator==(const HalfScale&) const = default;
};

struct ScaleSet {
  std::vector<HalfScale> scales;
  // word -> (scale index, position) for every occurrence; words may appear in
  // several scales.
  std::unordered_map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> index;

  bool contains(const std::string& w) const { return index.count(w) > 0; }
  bool operator==(const ScaleSet&) const = default;
};

struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;

  const std::vector<double>* find(const std::string& token) const {
    auto it = vectors.find(token);
    return it == vectors.end() ? nullptr : &it->second;
  }
  bool operator==(const EmbeddingTable&) const = default;
};

StopwordSet load_stopwords(const std::string& path);
Thesaurus load_thesaurus(const std::string& path);
ScaleSet load_half_scales(const std::vector<std::string>& paths);
EmbeddingTable load_embeddings(const std::string& path);

// Validates scales (length >= 2, no duplicate words) and builds the index.
ScaleSet make_scale_set(std::vector<HalfScale> scales);

// All strictly milder words across every scale containing `word`:
// nearest-milder first within each scale, scales in load order, de-duplicated
// keeping the first occurrence. Empty when the word is unknown or mildest.
std::vector<std::string> milder_alternatives(const ScaleSet& s, std::string_view word);

// Mean of the in-vocabulary token vectors of `text_value` (lowercased
// tokenization); the zero vector when nothing is in vocabulary.
std::vector<double> mean_embedding(const EmbeddingTable& t, std::string_view text_value);

// Canonical byte serialization, used to verify the table is never mutated.
std::string embedding_fingerprint(const EmbeddingTable& t);

}  // namespace textaug::lex
