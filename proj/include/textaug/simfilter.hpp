#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "textaug/augment.hpp"
#include "textaug/corpus.hpp"
#include "textaug/lexicons.hpp"

namespace textaug::sim {

// Mean of the in-vocabulary word vectors; the zero vector when the text has
// no in-vocabulary token.
std::vector<double> embed_text(const lex::EmbeddingTable& t, std::string_view text_value);

// 1 - arccos(cos(u, v)) / pi, in [0, 1]. The cosine is clamped to [-1, 1]
// before arccos. Throws on a zero-norm input.
double angular_similarity(std::span<const double> u, std::span<const double> v);

struct ScoredItem {
  aug::AugmentedExample example;
  double score = 0.0;
  bool degenerate = false;  // unembeddable origin or augmentation
};

struct ScoredSet {
  std::vector<ScoredItem> items;
};

// Scores every augmented example against its origin. Unembeddable pairs score
// 0 and are flagged degenerate; an unresolved origin_id is an error.
ScoredSet score_augmented(const std::vector<aug::AugmentedExample>& items,
                          const corpus::Dataset& origins, const lex::EmbeddingTable& t,
                          int jobs = 1);

// Drops exactly floor(quantile * N) lowest-scoring items; on ties the
// earlier-indexed item is kept. Survivors keep input order and carry their
// score.
std::vector<aug::AugmentedExample> quartile_filter(const ScoredSet& s, double quantile = 0.25);

struct ScoreSummary {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Nearest-rank quantiles (rank = ceil(p * N), lower rank on ties).
ScoreSummary score_distribution(const ScoredSet& s);

}  // namespace textaug::sim
