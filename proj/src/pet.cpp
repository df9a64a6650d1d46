#include "textaug/pet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "textaug/error.hpp"
#include "textaug/rng.hpp"

namespace textaug::pet {

using nlohmann::json;

namespace {

std::size_t count_occurrences(const std::string& s, const std::string& needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = s.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

std::string replace_once(std::string s, const std::string& slot, const std::string& value) {
  std::size_t pos = s.find(slot);
  s.replace(pos, slot.size(), value);
  return s;
}

}  // namespace

Pattern make_pattern(std::string id, std::string template_text) {
  if (count_occurrences(template_text, "{x}") != 1 ||
      count_occurrences(template_text, "{mask}") != 1) {
    throw Error(ErrorKind::invalid_argument,
                "pattern '" + id + "' must contain exactly one {x} and one {mask} slot");
  }
  return Pattern{std::move(id), std::move(template_text)};
}

std::string apply_pattern(const Pattern& p, const corpus::Example& e) {
  return replace_once(replace_once(p.template_text, "{x}", e.text), "{mask}",
                      std::string(kMaskToken));
}

const std::string* Verbalizer::token_for(const std::string& label) const {
  for (const auto& [l, token] : mapping) {
    if (l == label) return &token;
  }
  return nullptr;
}

Verbalizer make_verbalizer(std::vector<std::pair<std::string, std::string>> mapping) {
  if (mapping.empty()) throw Error(ErrorKind::invalid_argument, "empty verbalizer");
  std::unordered_set<std::string> labels;
  std::unordered_set<std::string> tokens;
  for (const auto& [label, token] : mapping) {
    if (token.empty()) throw Error(ErrorKind::invalid_argument, "empty verbalizer token");
    if (!labels.insert(label).second) {
      throw Error(ErrorKind::invalid_argument, "duplicate verbalizer label '" + label + "'");
    }
    if (!tokens.insert(token).second) {
      throw Error(ErrorKind::invalid_argument,
                  "verbalizer token '" + token + "' maps from two labels");
    }
  }
  return Verbalizer{std::move(mapping)};
}

PvpConfig pvp_from_json(const json& obj) {
  PvpConfig cfg;
  try {
    for (const json& p : obj.at("patterns")) {
      cfg.patterns.push_back(
          make_pattern(p.at("id").get<std::string>(), p.at("template").get<std::string>()));
    }
    std::vector<std::pair<std::string, std::string>> mapping;
    const json& verbalizer = obj.at("verbalizer");
    for (auto it = verbalizer.begin(); it != verbalizer.end(); ++it) {
      mapping.emplace_back(it.key(), it.value().get<std::string>());
    }
    cfg.verbalizer = make_verbalizer(std::move(mapping));
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::parse, std::string("bad pattern/verbalizer config: ") + ex.what());
  }
  if (cfg.patterns.empty()) throw Error(ErrorKind::invalid_argument, "no patterns");
  return cfg;
}

PvpConfig load_pvp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  json obj = json::parse(in, nullptr, false);
  if (obj.is_discarded()) throw Error(ErrorKind::parse, path + ": invalid JSON");
  return pvp_from_json(obj);
}

Ensemble train_pvp_models(const corpus::PetDataSplit& split, const std::vector<Pattern>& patterns,
                          const Verbalizer& verbalizer,
                          std::shared_ptr<const lex::EmbeddingTable> embeddings,
                          const model::BowConfig& cfg, std::uint64_t seed) {
  if (patterns.empty()) throw Error(ErrorKind::invalid_argument, "no patterns");
  for (const std::string& label : split.labeled.labels) {
    if (verbalizer.token_for(label) == nullptr) {
      throw Error(ErrorKind::invalid_argument, "verbalizer does not cover class '" + label + "'");
    }
  }
  for (const auto& [label, count] : corpus::label_counts(split.labeled)) {
    if (count == 0) {
      throw Error(ErrorKind::invalid_argument, "class '" + label + "' missing from the labeled set");
    }
  }

  Ensemble ensemble;
  ensemble.reserve(patterns.size());
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    corpus::Dataset view;
    view.labels = split.labeled.labels;
    view.examples.reserve(split.labeled.examples.size());
    for (const corpus::Example& e : split.labeled.examples) {
      view.examples.push_back({e.id, apply_pattern(patterns[i], e), e.label});
    }
    model::BowModel scorer = model::train_bow(view, embeddings, cfg, seed + i);
    ensemble.push_back({patterns[i], std::move(scorer)});
  }
  return ensemble;
}

SoftLabeledSet annotate_unlabeled(const Ensemble& ensemble, const corpus::Dataset& unlabeled) {
  if (ensemble.empty()) throw Error(ErrorKind::invalid_argument, "empty ensemble");
  SoftLabeledSet soft;
  soft.label_order = ensemble.front().scorer.label_order;
  std::size_t k = soft.label_order.size();
  soft.items.resize(unlabeled.examples.size());
  for (std::size_t i = 0; i < unlabeled.examples.size(); ++i) {
    soft.items[i].example = unlabeled.examples[i];
    soft.items[i].soft_label.assign(k, 0.0);
  }
  for (const PatternModel& member : ensemble) {
    std::vector<std::string> views;
    views.reserve(unlabeled.examples.size());
    for (const corpus::Example& e : unlabeled.examples) {
      views.push_back(apply_pattern(member.pattern, e));
    }
    model::ProbMatrix probs = model::predict(member.scorer, views);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      for (std::size_t c = 0; c < k; ++c) soft.items[i].soft_label[c] += probs[i][c];
    }
  }
  double scale = 1.0 / static_cast<double>(ensemble.size());
  for (SoftLabeledItem& item : soft.items) {
    for (double& v : item.soft_label) v *= scale;
  }
  return soft;
}

model::BowModel distill(const SoftLabeledSet& soft,
                        std::shared_ptr<const lex::EmbeddingTable> embeddings,
                        const model::BowConfig& cfg, std::uint64_t seed) {
  if (soft.items.empty()) throw Error(ErrorKind::invalid_argument, "empty soft-labeled set");
  std::vector<std::string> texts;
  std::vector<std::vector<double>> targets;
  texts.reserve(soft.items.size());
  targets.reserve(soft.items.size());
  for (const SoftLabeledItem& item : soft.items) {
    texts.push_back(item.example.text);
    targets.push_back(item.soft_label);
  }
  return model::train_bow_soft(texts, targets, soft.label_order, std::move(embeddings), cfg, seed);
}

namespace {

GenerationRecord record_generation(const corpus::Dataset& labeled,
                                   const corpus::Dataset& unlabeled) {
  GenerationRecord rec;
  rec.train_size = labeled.examples.size();
  rec.class_counts = corpus::label_counts(labeled);
  rec.unlabeled_size = unlabeled.examples.size();
  rec.labeled_ids.reserve(labeled.examples.size());
  for (const corpus::Example& e : labeled.examples) rec.labeled_ids.push_back(e.id);
  std::sort(rec.labeled_ids.begin(), rec.labeled_ids.end());
  return rec;
}

metrics::MetricsReport evaluate_on(const model::BowModel& m, const corpus::Dataset& test) {
  std::vector<std::string> texts;
  std::vector<std::string> truth;
  texts.reserve(test.examples.size());
  for (const corpus::Example& e : test.examples) {
    texts.push_back(e.text);
    truth.push_back(e.label);
  }
  std::vector<std::string> pred = model::predict_labels(m, texts);
  return metrics::classification_metrics(truth, pred, m.label_order);
}

// Grows the labeled set to per-class targets using the ensemble's soft
// labels. Pass 1 takes candidates by descending overall confidence into their
// argmax class; pass 2 tops up short classes by that class's probability.
void grow_labeled(corpus::Dataset& labeled, corpus::Dataset& unlabeled,
                  const SoftLabeledSet& soft, const std::vector<std::size_t>& per_class_target) {
  std::size_t k = labeled.labels.size();
  std::vector<std::size_t> current(k, 0);
  for (const auto& [label, count] : corpus::label_counts(labeled)) {
    auto it = std::find(labeled.labels.begin(), labeled.labels.end(), label);
    current[static_cast<std::size_t>(it - labeled.labels.begin())] = count;
  }

  std::vector<std::size_t> needed(k, 0);
  for (std::size_t c = 0; c < k; ++c) {
    needed[c] = per_class_target[c] > current[c] ? per_class_target[c] - current[c] : 0;
  }

  std::size_t n = soft.items.size();
  std::vector<int> assigned_class(n, -1);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double ca = *std::max_element(soft.items[a].soft_label.begin(), soft.items[a].soft_label.end());
    double cb = *std::max_element(soft.items[b].soft_label.begin(), soft.items[b].soft_label.end());
    if (ca != cb) return ca > cb;
    return a < b;
  });
  for (std::size_t idx : order) {
    const auto& p = soft.items[idx].soft_label;
    std::size_t c = static_cast<std::size_t>(
        std::max_element(p.begin(), p.end()) - p.begin());
    if (needed[c] > 0) {
      assigned_class[idx] = static_cast<int>(c);
      --needed[c];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (needed[c] == 0) continue;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i) {
      if (assigned_class[i] < 0) rest.push_back(i);
    }
    std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
      double pa = soft.items[a].soft_label[c];
      double pb = soft.items[b].soft_label[c];
      if (pa != pb) return pa > pb;
      return a < b;
    });
    for (std::size_t i = 0; i < rest.size() && needed[c] > 0; ++i) {
      assigned_class[rest[i]] = static_cast<int>(c);
      --needed[c];
    }
  }

  corpus::Dataset remaining;
  remaining.labels = unlabeled.labels;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned_class[i] >= 0) {
      corpus::Example e = soft.items[i].example;
      e.label = labeled.labels[static_cast<std::size_t>(assigned_class[i])];
      labeled.examples.push_back(std::move(e));
    } else {
      remaining.examples.push_back(unlabeled.examples[i]);
    }
  }
  unlabeled = std::move(remaining);
}

PetResult run_impl(const corpus::Dataset& train, const corpus::Dataset& test,
                   std::shared_ptr<const lex::EmbeddingTable> embeddings, const PvpConfig& pvp,
                   const PetConfig& cfg, bool ipet) {
  if (cfg.seeds.empty()) throw Error(ErrorKind::invalid_argument, "no seeds");
  if (ipet) {
    if (cfg.generations < 2) throw Error(ErrorKind::invalid_argument, "generations must be >= 2");
    if (cfg.growth <= 1.0) throw Error(ErrorKind::invalid_argument, "growth must be > 1");
  }
  int generations = ipet ? cfg.generations : 1;

  PetResult result;
  std::set<std::string> warnings;
  std::vector<metrics::MetricsReport> reports;

  for (std::uint64_t seed : cfg.seeds) {
    corpus::PetDataSplit split = corpus::sample_training_set(train, cfg.t_size, seed);
    corpus::Dataset labeled = std::move(split.labeled);
    corpus::Dataset unlabeled = std::move(split.unlabeled);

    SeedRun run;
    run.seed = seed;
    std::vector<std::size_t> history;
    SoftLabeledSet soft;

    for (int g = 0; g < generations; ++g) {
      run.generations.push_back(record_generation(labeled, unlabeled));
      history.push_back(labeled.examples.size());

      corpus::PetDataSplit view;
      view.labeled = labeled;
      view.unlabeled = unlabeled;
      Ensemble ensemble = train_pvp_models(view, pvp.patterns, pvp.verbalizer, embeddings,
                                           cfg.model, Rng::mix(seed, g));
      soft = annotate_unlabeled(ensemble, unlabeled);

      if (g + 1 < generations) {
        double target = static_cast<double>(cfg.t_size) *
                        std::pow(cfg.growth, static_cast<double>(g + 1));
        std::size_t n_next = static_cast<std::size_t>(std::llround(target));
        if (n_next > train.examples.size()) {
          n_next = train.examples.size();
          warnings.insert("growth schedule exceeds available data; training set capped at " +
                          std::to_string(n_next));
        }
        std::size_t k = labeled.labels.size();
        std::vector<std::size_t> per_class_target(k, n_next / k);
        for (std::size_t c = 0; c < n_next % k; ++c) ++per_class_target[c];
        grow_labeled(labeled, unlabeled, soft, per_class_target);
      }
    }

    model::BowModel final_model;
    if (!soft.items.empty()) {
      final_model = distill(soft, embeddings, cfg.model, seed);
    } else {
      // The schedule absorbed every unlabeled example; fall back to
      // supervised training on the grown labeled set.
      warnings.insert("no unlabeled examples left to distill from; trained on the labeled set");
      final_model = model::train_bow(labeled, embeddings, cfg.model, seed);
    }
    run.test_metrics = evaluate_on(final_model, test);
    reports.push_back(run.test_metrics);
    result.runs.push_back(std::move(run));
    result.history = std::move(history);
    result.final_model = std::move(final_model);
  }

  result.aggregate = metrics::aggregate_runs(reports);
  result.warnings.assign(warnings.begin(), warnings.end());
  return result;
}

}  // namespace

PetResult run_pet(const corpus::Dataset& train, const corpus::Dataset& test,
                  std::shared_ptr<const lex::EmbeddingTable> embeddings, const PvpConfig& pvp,
                  const PetConfig& cfg) {
  return run_impl(train, test, std::move(embeddings), pvp, cfg, false);
}

PetResult run_ipet(const corpus::Dataset& train, const corpus::Dataset& test,
                   std::shared_ptr<const lex::EmbeddingTable> embeddings, const PvpConfig& pvp,
                   const PetConfig& cfg) {
  return run_impl(train, test, std::move(embeddings), pvp, cfg, true);
}

json result_to_json(const PetResult& result) {
  json runs = json::array();
  for (const SeedRun& run : result.runs) {
    json generations = json::array();
    for (const GenerationRecord& rec : run.generations) {
      json counts = json::object();
      for (const auto& [label, count] : rec.class_counts) counts[label] = count;
      generations.push_back({{"train_size", rec.train_size},
                             {"class_counts", counts},
                             {"unlabeled_size", rec.unlabeled_size}});
    }
    runs.push_back({{"seed", run.seed},
                    {"metrics", metrics::to_json(run.test_metrics)},
                    {"generations", generations}});
  }
  return {{"runs", runs},
          {"aggregate", metrics::to_json(result.aggregate)},
          {"history", result.history},
          {"warnings", result.warnings}};
}

}  // namespace textaug::pet
