#include "textaug/simfilter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "textaug/error.hpp"

namespace textaug::sim {

std::vector<double> embed_text(const lex::EmbeddingTable& t, std::string_view text_value) {
  return lex::mean_embedding(t, text_value);
}

namespace {

double norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

double angular_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(ErrorKind::invalid_argument, "dimension mismatch");
  double nu = norm(u);
  double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) {
    throw Error(ErrorKind::invalid_argument, "zero-norm vector is unembeddable");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  double cosine = std::clamp(dot / (nu * nv), -1.0, 1.0);
  return 1.0 - std::acos(cosine) / std::numbers::pi;
}

ScoredSet score_augmented(const std::vector<aug::AugmentedExample>& items,
                          const corpus::Dataset& origins, const lex::EmbeddingTable& t,
                          int jobs) {
  auto index = corpus::id_index(origins);
  ScoredSet out;
  out.items.resize(items.size());
  detail::parallel_for(items.size(), jobs, [&](std::size_t i) {
    const aug::AugmentedExample& item = items[i];
    auto it = index.find(item.origin_id);
    if (it == index.end()) {
      throw Error(ErrorKind::not_found, "origin id '" + item.origin_id + "' not in origin dataset");
    }
    ScoredItem scored;
    scored.example = item;
    std::vector<double> u = embed_text(t, origins.examples[it->second].text);
    std::vector<double> v = embed_text(t, item.example.text);
    bool u_zero = std::all_of(u.begin(), u.end(), [](double x) { return x == 0.0; });
    bool v_zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    if (u_zero || v_zero) {
      scored.score = 0.0;
      scored.degenerate = true;
    } else {
      scored.score = angular_similarity(u, v);
    }
    scored.example.score = scored.score;
    out.items[i] = std::move(scored);
  });
  return out;
}

std::vector<aug::AugmentedExample> quartile_filter(const ScoredSet& s, double quantile) {
  if (s.items.empty()) throw Error(ErrorKind::invalid_argument, "empty scored set");
  if (quantile < 0.0 || quantile >= 1.0) {
    throw Error(ErrorKind::invalid_argument, "quantile must be in [0, 1)");
  }
  std::size_t n = s.items.size();
  std::size_t drop = static_cast<std::size_t>(std::floor(quantile * static_cast<double>(n)));

  // Lowest scores go first; on equal scores the later index is dropped first,
  // which keeps earlier-indexed items.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (s.items[a].score != s.items[b].score) return s.items[a].score < s.items[b].score;
    return a > b;
  });
  std::vector<bool> dropped(n, false);
  for (std::size_t k = 0; k < drop; ++k) dropped[order[k]] = true;

  std::vector<aug::AugmentedExample> kept;
  kept.reserve(n - drop);
  for (std::size_t i = 0; i < n; ++i) {
    if (!dropped[i]) kept.push_back(s.items[i].example);
  }
  return kept;
}

ScoreSummary score_distribution(const ScoredSet& s) {
  if (s.items.empty()) throw Error(ErrorKind::invalid_argument, "empty scored set");
  std::vector<double> scores;
  scores.reserve(s.items.size());
  for (const ScoredItem& item : s.items) scores.push_back(item.score);
  std::sort(scores.begin(), scores.end());
  auto nearest_rank = [&](double p) {
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(scores.size())));
    if (rank == 0) rank = 1;
    return scores[rank - 1];
  };
  ScoreSummary summary;
  summary.q1 = nearest_rank(0.25);
  summary.median = nearest_rank(0.5);
  summary.q3 = nearest_rank(0.75);
  summary.min = scores.front();
  summary.max = scores.back();
  return summary;
}

}  // namespace textaug::sim
