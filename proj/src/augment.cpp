#include "textaug/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "parallel.hpp"
#include "textaug/error.hpp"
#include "textaug/rng.hpp"
#include "textaug/text.hpp"

namespace textaug::aug {

using nlohmann::json;

namespace {

std::string aug_id(const std::string& origin_id, const std::string& method, const std::string& tag) {
  return origin_id + ":" + method + ":" + tag;
}

}  // namespace

OversampleResult oversample(const corpus::Dataset& d, std::uint64_t seed) {
  if (d.examples.empty()) throw Error(ErrorKind::invalid_argument, "empty dataset");

  std::vector<std::vector<std::size_t>> per_class(d.labels.size());
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    auto it = std::find(d.labels.begin(), d.labels.end(), d.examples[i].label);
    per_class[static_cast<std::size_t>(it - d.labels.begin())].push_back(i);
  }
  std::size_t max_count = 0;
  for (const auto& members : per_class) max_count = std::max(max_count, members.size());

  OversampleResult result;
  result.dataset.labels = d.labels;
  result.dataset.examples = d.examples;

  Rng rng(seed);
  std::vector<std::size_t> copies_per_origin(d.examples.size(), 0);
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    const auto& members = per_class[c];
    for (std::size_t k = members.size(); k < max_count; ++k) {
      std::size_t pick = members[static_cast<std::size_t>(rng.below(members.size()))];
      const corpus::Example& origin = d.examples[pick];
      AugmentedExample copy;
      copy.origin_id = origin.id;
      copy.method = "oversample";
      copy.example = origin;
      copy.example.id = aug_id(origin.id, "oversample", std::to_string(copies_per_origin[pick]++));
      result.dataset.examples.push_back(copy.example);
      result.added.push_back(std::move(copy));
    }
  }
  return result;
}

AugmentedExample synonym_replacement(const corpus::Example& e, const lex::Thesaurus& t,
                                     const lex::StopwordSet& sw, const EdaConfig& cfg,
                                     std::uint64_t seed) {
  std::vector<std::string> tokens = text::tokenize_lower(e.text);
  if (tokens.empty()) throw Error(ErrorKind::invalid_argument, "example '" + e.id + "' has no tokens");

  std::size_t non_stopword = 0;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (sw.contains(tokens[i])) continue;
    ++non_stopword;
    if (t.find(tokens[i]) != nullptr) candidates.push_back(i);
  }
  std::size_t n = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(cfg.alpha_sr * static_cast<double>(non_stopword))));

  AugmentedExample out;
  out.origin_id = e.id;
  out.method = "eda_sr";
  out.example.label = e.label;
  out.params["alpha"] = cfg.alpha_sr;

  if (candidates.empty()) {
    out.example.id = aug_id(e.id, "eda_sr", "0");
    out.example.text = text::join_tokens(tokens);
    out.params["n"] = 0;
    out.params["degenerate"] = true;
    return out;
  }

  Rng rng(seed);
  std::size_t take = std::min(n, candidates.size());
  std::vector<std::size_t> picks = rng.sample_indices(candidates.size(), take);
  std::vector<std::size_t> positions;
  positions.reserve(picks.size());
  for (std::size_t p : picks) positions.push_back(candidates[p]);
  std::sort(positions.begin(), positions.end());

  json replacements = json::array();
  for (std::size_t pos : positions) {
    const std::vector<std::string>& synonyms = *t.find(tokens[pos]);
    const std::string& chosen = synonyms[static_cast<std::size_t>(rng.below(synonyms.size()))];
    replacements.push_back({{"position", pos}, {"from", tokens[pos]}, {"to", chosen}});
    tokens[pos] = chosen;
  }
  out.example.id = aug_id(e.id, "eda_sr", "0");
  out.example.text = text::join_tokens(tokens);
  out.params["n"] = take;
  out.params["replacements"] = std::move(replacements);
  return out;
}

AugmentedExample random_deletion(const corpus::Example& e, const EdaConfig& cfg,
                                 std::uint64_t seed) {
  std::vector<std::string> tokens = text::tokenize_lower(e.text);
  if (tokens.empty()) throw Error(ErrorKind::invalid_argument, "example '" + e.id + "' has no tokens");

  Rng rng(seed);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (rng.next_double() >= cfg.p_rd) kept.push_back(i);
  }
  if (kept.empty()) {
    kept.push_back(static_cast<std::size_t>(rng.below(tokens.size())));
  }

  json deleted = json::array();
  std::vector<std::string> surviving;
  std::size_t next_kept = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (next_kept < kept.size() && kept[next_kept] == i) {
      surviving.push_back(tokens[i]);
      ++next_kept;
    } else {
      deleted.push_back(i);
    }
  }

  AugmentedExample out;
  out.origin_id = e.id;
  out.method = "eda_rd";
  out.example.id = aug_id(e.id, "eda_rd", "0");
  out.example.label = e.label;
  out.example.text = text::join_tokens(surviving);
  out.params["p"] = cfg.p_rd;
  out.params["deleted_positions"] = std::move(deleted);
  return out;
}

std::vector<AugmentedExample> eda_augment(const corpus::Dataset& d, const lex::Thesaurus& t,
                                          const lex::StopwordSet& sw, const EdaConfig& cfg,
                                          std::uint64_t seed, int jobs) {
  if (cfg.copies_per_example < 1) {
    throw Error(ErrorKind::invalid_argument, "copies_per_example must be >= 1");
  }
  int copies = cfg.copies_per_example;
  int rd_copies = cfg.rd_copies < 0 ? copies / 3 : std::min(cfg.rd_copies, copies);
  int sr_copies = copies - rd_copies;

  std::vector<std::vector<AugmentedExample>> per_example(d.examples.size());
  detail::parallel_for(d.examples.size(), jobs, [&](std::size_t i) {
    const corpus::Example& e = d.examples[i];
    std::uint64_t example_seed = Rng::mix(seed, i);
    std::vector<AugmentedExample>& outputs = per_example[i];
    outputs.reserve(static_cast<std::size_t>(copies));
    for (int j = 0; j < copies; ++j) {
      std::uint64_t copy_seed = Rng::mix(example_seed, static_cast<std::uint64_t>(j));
      AugmentedExample out = j < sr_copies ? synonym_replacement(e, t, sw, cfg, copy_seed)
                                           : random_deletion(e, cfg, copy_seed);
      // Copy index disambiguates the per-method ids within one original.
      out.example.id = aug_id(e.id, out.method, std::to_string(j));
      outputs.push_back(std::move(out));
    }
  });

  std::vector<AugmentedExample> flat;
  flat.reserve(d.examples.size() * static_cast<std::size_t>(copies));
  for (auto& outputs : per_example) {
    for (auto& out : outputs) flat.push_back(std::move(out));
  }
  return flat;
}

std::vector<AugmentedExample> greyscale_augment(const corpus::Dataset& d, const lex::ScaleSet& s,
                                                std::optional<int> cap) {
  if (cap && *cap < 0) throw Error(ErrorKind::invalid_argument, "cap must be >= 0");
  std::vector<AugmentedExample> out;
  for (const corpus::Example& e : d.examples) {
    struct Candidate {
      std::size_t rank;
      std::size_t span_index;
      text::TokenSpan span;
      std::string from;
      std::string to;
    };
    std::vector<Candidate> candidates;
    std::vector<text::TokenSpan> spans = text::token_spans(e.text);
    for (std::size_t si = 0; si < spans.size(); ++si) {
      std::string token = text::to_lower(
          std::string_view(e.text).substr(spans[si].begin, spans[si].end - spans[si].begin));
      std::vector<std::string> alternatives = lex::milder_alternatives(s, token);
      for (std::size_t rank = 0; rank < alternatives.size(); ++rank) {
        candidates.push_back({rank, si, spans[si], token, alternatives[rank]});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.rank != b.rank) return a.rank < b.rank;
      return a.span_index < b.span_index;
    });
    std::size_t limit = cap ? std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(*cap))
                            : candidates.size();
    for (std::size_t k = 0; k < limit; ++k) {
      const Candidate& c = candidates[k];
      AugmentedExample a;
      a.origin_id = e.id;
      a.method = "greyscale";
      a.example.id = aug_id(e.id, "greyscale", std::to_string(k));
      a.example.label = e.label;
      a.example.text = e.text.substr(0, c.span.begin) + c.to + e.text.substr(c.span.end);
      a.params["occurrence"] = c.span_index;
      a.params["from"] = c.from;
      a.params["to"] = c.to;
      a.params["rank"] = c.rank;
      out.push_back(std::move(a));
    }
  }
  return out;
}

AugmentedExample back_translate(const corpus::Example& e, TranslationClient& client,
                                const std::string& pivot) {
  try {
    std::string forward = client.translate(e.text, "en", pivot);
    std::string back = client.translate(forward, pivot, "en");
    AugmentedExample out;
    out.origin_id = e.id;
    out.method = "backtranslate";
    out.example.id = aug_id(e.id, "backtranslate", pivot);
    out.example.label = e.label;
    out.example.text = std::move(back);
    out.params["pivot"] = pivot;
    return out;
  } catch (const Error& err) {
    throw Error(err.kind(), "back-translation of example '" + e.id + "' via '" + pivot +
                                "' failed: " + err.what());
  }
}

std::vector<AugmentedExample> back_translate_all(const corpus::Dataset& d,
                                                 TranslationClient& client,
                                                 const std::vector<std::string>& pivots) {
  if (pivots.empty()) throw Error(ErrorKind::invalid_argument, "no pivot languages");
  std::vector<AugmentedExample> out;
  out.reserve(d.examples.size() * pivots.size());
  for (const corpus::Example& e : d.examples) {
    for (const std::string& pivot : pivots) {
      out.push_back(back_translate(e, client, pivot));
    }
  }
  return out;
}

void write_augmented_jsonl(const std::string& path, const std::vector<AugmentedExample>& items,
                           const corpus::Dataset* originals) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  if (originals != nullptr) {
    for (const corpus::Example& e : originals->examples) {
      json obj = {{"id", e.id}, {"text", e.text}, {"label", e.label}};
      out << obj.dump() << '\n';
    }
  }
  for (const AugmentedExample& a : items) {
    json obj = {{"id", a.example.id},   {"text", a.example.text}, {"label", a.example.label},
                {"origin_id", a.origin_id}, {"method", a.method},     {"params", a.params}};
    if (a.score) obj["score"] = *a.score;
    out << obj.dump() << '\n';
  }
}

std::vector<AugmentedExample> read_augmented_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::vector<AugmentedExample> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw Error(ErrorKind::parse, path + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    if (!obj.contains("origin_id")) continue;  // plain original row
    AugmentedExample a;
    try {
      a.example.id = obj.at("id").get<std::string>();
      a.example.text = obj.at("text").get<std::string>();
      a.example.label = obj.at("label").get<std::string>();
      a.origin_id = obj.at("origin_id").get<std::string>();
      a.method = obj.at("method").get<std::string>();
      a.params = obj.value("params", json::object());
      if (obj.contains("score")) a.score = obj["score"].get<double>();
    } catch (const json::exception& ex) {
      throw Error(ErrorKind::parse, path + ":" + std::to_string(line_no) + ": " + ex.what());
    }
    items.push_back(std::move(a));
  }
  return items;
}

}  // namespace textaug::aug
