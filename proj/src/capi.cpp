#include "textaug.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include <json.hpp>

#include "textaug/augment.hpp"
#include "textaug/corpus.hpp"
#include "textaug/error.hpp"
#include "textaug/lexicons.hpp"
#include "textaug/metrics.hpp"
#include "textaug/model.hpp"
#include "textaug/pet.hpp"
#include "textaug/simfilter.hpp"
#include "textaug/translate.hpp"

using nlohmann::json;
namespace corpus = textaug::corpus;
namespace lex = textaug::lex;
namespace aug = textaug::aug;
namespace sim = textaug::sim;
namespace model = textaug::model;
namespace pet = textaug::pet;
namespace metrics = textaug::metrics;

struct ta_dataset {
  corpus::Dataset value;
};
struct ta_stopwords {
  lex::StopwordSet value;
};
struct ta_thesaurus {
  lex::Thesaurus value;
};
struct ta_scales {
  lex::ScaleSet value;
};
struct ta_embeddings {
  std::shared_ptr<const lex::EmbeddingTable> value;
};
struct ta_augset {
  std::vector<aug::AugmentedExample> value;
};
struct ta_scoredset {
  sim::ScoredSet value;
};
struct ta_model {
  model::BowModel value;
};

namespace {

thread_local std::string g_last_error;

ta_status status_of(textaug::ErrorKind kind) {
  switch (kind) {
    case textaug::ErrorKind::io: return TA_ERR_IO;
    case textaug::ErrorKind::parse: return TA_ERR_PARSE;
    case textaug::ErrorKind::invalid_argument: return TA_ERR_INVALID;
    case textaug::ErrorKind::not_found: return TA_ERR_NOT_FOUND;
    case textaug::ErrorKind::runtime: return TA_ERR_RUNTIME;
  }
  return TA_ERR_RUNTIME;
}

template <class Fn>
ta_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const textaug::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TA_ERR_RUNTIME;
  }
}

ta_status invalid(const char* message) {
  g_last_error = message;
  return TA_ERR_INVALID;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t pos = csv.find(',', start);
    if (pos == std::string::npos) pos = csv.size();
    std::string field = csv.substr(start, pos - start);
    if (!field.empty()) out.push_back(field);
    start = pos + 1;
  }
  return out;
}

json parse_json_or_throw(const char* text_value, const char* what) {
  json obj = json::parse(text_value, nullptr, false);
  if (obj.is_discarded()) {
    throw textaug::Error(textaug::ErrorKind::parse, std::string("invalid JSON for ") + what);
  }
  return obj;
}

model::BowConfig bow_config_from_json(const json& obj) {
  model::BowConfig cfg;
  if (obj.is_null()) return cfg;
  if (!obj.is_object()) {
    throw textaug::Error(textaug::ErrorKind::invalid_argument, "model config must be an object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    if (key == "hidden_units") cfg.hidden_units = it.value().get<int>();
    else if (key == "dropout_rate") cfg.dropout_rate = it.value().get<double>();
    else if (key == "learning_rate") cfg.learning_rate = it.value().get<double>();
    else if (key == "epochs") cfg.epochs = it.value().get<int>();
    else if (key == "batch_size") cfg.batch_size = it.value().get<int>();
    else if (key == "distill_temperature") cfg.distill_temperature = it.value().get<double>();
    else {
      throw textaug::Error(textaug::ErrorKind::invalid_argument,
                           "unknown model config key '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace

extern "C" {

const char* ta_version(void) { return TEXTAUG_VERSION; }

const char* ta_last_error(void) { return g_last_error.c_str(); }

void ta_string_free(char* s) { std::free(s); }

/* ---- corpus ---- */

ta_status ta_dataset_load(const char* path, ta_format format, ta_dataset** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    corpus::Dataset d;
    switch (format) {
      case TA_FORMAT_JSONL: d = corpus::load_corpus(path, corpus::Format::jsonl); break;
      case TA_FORMAT_TSV: d = corpus::load_corpus(path, corpus::Format::tsv); break;
      default: d = corpus::load_corpus(path); break;
    }
    *out = new ta_dataset{std::move(d)};
    return TA_OK;
  });
}

ta_status ta_dataset_save_jsonl(const ta_dataset* d, const char* path) {
  if (!d || !path) return invalid("null argument");
  return guarded([&] {
    corpus::save_jsonl(d->value, path);
    return TA_OK;
  });
}

void ta_dataset_free(ta_dataset* d) { delete d; }

size_t ta_dataset_size(const ta_dataset* d) { return d ? d->value.examples.size() : 0; }

size_t ta_dataset_num_labels(const ta_dataset* d) { return d ? d->value.labels.size() : 0; }

ta_status ta_dataset_stats_json(const ta_dataset* d, char** json_out) {
  if (!d || !json_out) return invalid("null argument");
  return guarded([&] {
    corpus::DistributionReport report = corpus::class_distribution(d->value);
    json per_class = json::object();
    for (const auto& entry : report.per_class) {
      per_class[entry.label] = {{"count", entry.count}, {"percent", entry.percent}};
    }
    json obj = {{"total", report.total}, {"per_class", per_class}};
    *json_out = dup_string(obj.dump(2));
    return TA_OK;
  });
}

ta_status ta_dataset_map_labels(const ta_dataset* d, const char* mapping_json, ta_dataset** out) {
  if (!d || !mapping_json || !out) return invalid("null argument");
  return guarded([&] {
    json obj = parse_json_or_throw(mapping_json, "label mapping");
    if (!obj.is_object()) {
      throw textaug::Error(textaug::ErrorKind::invalid_argument, "label mapping must be an object");
    }
    std::map<std::string, std::string> mapping;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      mapping[it.key()] = it.value().get<std::string>();
    }
    *out = new ta_dataset{corpus::apply_label_map(d->value, mapping)};
    return TA_OK;
  });
}

ta_status ta_dataset_stratified_split(const ta_dataset* d, double train_frac, double dev_frac,
                                      double test_frac, uint64_t seed, ta_dataset** train_out,
                                      ta_dataset** dev_out, ta_dataset** test_out) {
  if (!d || !train_out || !dev_out || !test_out) return invalid("null argument");
  return guarded([&] {
    auto [train, dev, test] =
        corpus::stratified_split(d->value, {train_frac, dev_frac, test_frac}, seed);
    *train_out = new ta_dataset{std::move(train)};
    *dev_out = new ta_dataset{std::move(dev)};
    *test_out = new ta_dataset{std::move(test)};
    return TA_OK;
  });
}

ta_status ta_dataset_sample_training(const ta_dataset* d, size_t t_size, uint64_t seed,
                                     ta_dataset** labeled_out, ta_dataset** unlabeled_out) {
  if (!d || !labeled_out || !unlabeled_out) return invalid("null argument");
  return guarded([&] {
    corpus::PetDataSplit split = corpus::sample_training_set(d->value, t_size, seed);
    *labeled_out = new ta_dataset{std::move(split.labeled)};
    *unlabeled_out = new ta_dataset{std::move(split.unlabeled)};
    return TA_OK;
  });
}

/* ---- lexicons ---- */

ta_status ta_stopwords_load(const char* path, ta_stopwords** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ta_stopwords{lex::load_stopwords(path)};
    return TA_OK;
  });
}

void ta_stopwords_free(ta_stopwords* s) { delete s; }

ta_status ta_thesaurus_load(const char* path, ta_thesaurus** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ta_thesaurus{lex::load_thesaurus(path)};
    return TA_OK;
  });
}

void ta_thesaurus_free(ta_thesaurus* t) { delete t; }

ta_status ta_scales_load(const char* const* paths, size_t n_paths, ta_scales** out) {
  if (!paths || n_paths == 0 || !out) return invalid("null argument");
  return guarded([&] {
    std::vector<std::string> files;
    for (size_t i = 0; i < n_paths; ++i) {
      if (!paths[i]) throw textaug::Error(textaug::ErrorKind::invalid_argument, "null path");
      files.emplace_back(paths[i]);
    }
    *out = new ta_scales{lex::load_half_scales(files)};
    return TA_OK;
  });
}

void ta_scales_free(ta_scales* s) { delete s; }

size_t ta_scales_count(const ta_scales* s) { return s ? s->value.scales.size() : 0; }

ta_status ta_embeddings_load(const char* path, ta_embeddings** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    auto table = std::make_shared<lex::EmbeddingTable>(lex::load_embeddings(path));
    *out = new ta_embeddings{std::move(table)};
    return TA_OK;
  });
}

void ta_embeddings_free(ta_embeddings* e) { delete e; }

size_t ta_embeddings_dim(const ta_embeddings* e) { return e ? e->value->dim : 0; }

/* ---- augmentation ---- */

void ta_eda_params_init(ta_eda_params* params) {
  if (!params) return;
  params->alpha_sr = 0.1;
  params->p_rd = 0.1;
  params->copies_per_example = 3;
  params->rd_copies = -1;
  params->jobs = 1;
}

ta_status ta_augment_oversample(const ta_dataset* d, uint64_t seed, ta_augset** out) {
  if (!d || !out) return invalid("null argument");
  return guarded([&] {
    aug::OversampleResult result = aug::oversample(d->value, seed);
    *out = new ta_augset{std::move(result.added)};
    return TA_OK;
  });
}

ta_status ta_augment_eda(const ta_dataset* d, const ta_thesaurus* t, const ta_stopwords* sw,
                         const ta_eda_params* params, uint64_t seed, ta_augset** out) {
  if (!d || !t || !sw || !out) return invalid("null argument");
  return guarded([&] {
    aug::EdaConfig cfg;
    int jobs = 1;
    if (params) {
      cfg.alpha_sr = params->alpha_sr;
      cfg.p_rd = params->p_rd;
      cfg.copies_per_example = params->copies_per_example;
      cfg.rd_copies = params->rd_copies;
      jobs = params->jobs;
    }
    *out = new ta_augset{aug::eda_augment(d->value, t->value, sw->value, cfg, seed, jobs)};
    return TA_OK;
  });
}

ta_status ta_augment_greyscale(const ta_dataset* d, const ta_scales* s, int cap, ta_augset** out) {
  if (!d || !s || !out) return invalid("null argument");
  return guarded([&] {
    std::optional<int> cap_opt;
    if (cap >= 0) cap_opt = cap;
    *out = new ta_augset{aug::greyscale_augment(d->value, s->value, cap_opt)};
    return TA_OK;
  });
}

ta_status ta_augment_backtranslate(const ta_dataset* d, const char* endpoint,
                                   const char* cache_path, const char* pivots_csv,
                                   ta_augset** out) {
  if (!d || !pivots_csv || !out) return invalid("null argument");
  if (!endpoint && !cache_path) return invalid("need an endpoint or a cache file");
  return guarded([&] {
    std::vector<std::string> pivots = split_csv(pivots_csv);
    std::shared_ptr<aug::TranslationClient> upstream;
    if (endpoint) upstream = std::make_shared<aug::HttpTranslationClient>(endpoint);
    std::shared_ptr<aug::TranslationClient> client = upstream;
    if (cache_path) {
      auto cache = std::make_shared<aug::TranslationCache>(cache_path);
      client = std::make_shared<aug::CachingTranslationClient>(cache, upstream);
    }
    *out = new ta_augset{aug::back_translate_all(d->value, *client, pivots)};
    return TA_OK;
  });
}

ta_status ta_augset_load_jsonl(const char* path, ta_augset** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ta_augset{aug::read_augmented_jsonl(path)};
    return TA_OK;
  });
}

ta_status ta_augset_save_jsonl(const ta_augset* a, const char* path, const ta_dataset* originals) {
  if (!a || !path) return invalid("null argument");
  return guarded([&] {
    aug::write_augmented_jsonl(path, a->value, originals ? &originals->value : nullptr);
    return TA_OK;
  });
}

size_t ta_augset_size(const ta_augset* a) { return a ? a->value.size() : 0; }

void ta_augset_free(ta_augset* a) { delete a; }

/* ---- similarity filter ---- */

ta_status ta_score_augmented(const ta_augset* a, const ta_dataset* origins,
                             const ta_embeddings* e, int jobs, ta_scoredset** out) {
  if (!a || !origins || !e || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ta_scoredset{sim::score_augmented(a->value, origins->value, *e->value, jobs)};
    return TA_OK;
  });
}

ta_status ta_scoredset_filter(const ta_scoredset* s, double quantile, ta_augset** kept_out) {
  if (!s || !kept_out) return invalid("null argument");
  return guarded([&] {
    *kept_out = new ta_augset{sim::quartile_filter(s->value, quantile)};
    return TA_OK;
  });
}

ta_status ta_scoredset_distribution_json(const ta_scoredset* s, char** json_out) {
  if (!s || !json_out) return invalid("null argument");
  return guarded([&] {
    sim::ScoreSummary summary = sim::score_distribution(s->value);
    json obj = {{"q1", summary.q1},
                {"median", summary.median},
                {"q3", summary.q3},
                {"min", summary.min},
                {"max", summary.max}};
    *json_out = dup_string(obj.dump(2));
    return TA_OK;
  });
}

size_t ta_scoredset_size(const ta_scoredset* s) { return s ? s->value.items.size() : 0; }

void ta_scoredset_free(ta_scoredset* s) { delete s; }

/* ---- model ---- */

ta_status ta_model_train(const ta_dataset* train, const ta_embeddings* e, const char* config_json,
                         uint64_t seed, ta_model** out) {
  if (!train || !e || !out) return invalid("null argument");
  return guarded([&] {
    json cfg_obj = config_json ? parse_json_or_throw(config_json, "model config") : json();
    model::BowConfig cfg = bow_config_from_json(cfg_obj);
    *out = new ta_model{model::train_bow(train->value, e->value, cfg, seed)};
    return TA_OK;
  });
}

ta_status ta_model_save(const ta_model* m, const char* path) {
  if (!m || !path) return invalid("null argument");
  return guarded([&] {
    model::save_checkpoint(m->value, path);
    return TA_OK;
  });
}

ta_status ta_model_load(const char* path, ta_model** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ta_model{model::load_checkpoint(path)};
    return TA_OK;
  });
}

ta_status ta_model_predict_jsonl(const ta_model* m, const ta_dataset* d, const char* out_path) {
  if (!m || !d || !out_path) return invalid("null argument");
  return guarded([&] {
    model::ProbMatrix probs = model::predict(m->value, d->value);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw textaug::Error(textaug::ErrorKind::io, std::string("cannot write ") + out_path);
    for (std::size_t i = 0; i < d->value.examples.size(); ++i) {
      const corpus::Example& example = d->value.examples[i];
      std::size_t best = 0;
      json prob_obj = json::object();
      for (std::size_t c = 0; c < probs[i].size(); ++c) {
        prob_obj[m->value.label_order[c]] = probs[i][c];
        if (probs[i][c] > probs[i][best]) best = c;
      }
      json row = {{"id", example.id},
                  {"text", example.text},
                  {"label", m->value.label_order[best]},
                  {"probs", prob_obj}};
      out << row.dump() << '\n';
    }
    return TA_OK;
  });
}

void ta_model_free(ta_model* m) { delete m; }

/* ---- metrics ---- */

ta_status ta_evaluate(const ta_dataset* truth, const ta_dataset* pred, const char* labels_csv,
                      char** report_json_out) {
  if (!truth || !pred || !report_json_out) return invalid("null argument");
  return guarded([&] {
    auto pred_index = corpus::id_index(pred->value);
    std::vector<std::string> truth_labels;
    std::vector<std::string> pred_labels;
    truth_labels.reserve(truth->value.examples.size());
    for (const corpus::Example& e : truth->value.examples) {
      auto it = pred_index.find(e.id);
      if (it == pred_index.end()) {
        throw textaug::Error(textaug::ErrorKind::not_found,
                             "no prediction for example '" + e.id + "'");
      }
      truth_labels.push_back(e.label);
      pred_labels.push_back(pred->value.examples[it->second].label);
    }
    std::vector<std::string> labels =
        labels_csv ? split_csv(labels_csv) : truth->value.labels;
    metrics::MetricsReport report =
        metrics::classification_metrics(truth_labels, pred_labels, labels);
    *report_json_out = dup_string(metrics::to_json(report).dump(2));
    return TA_OK;
  });
}

ta_status ta_aggregate_reports(const char* reports_json, char** aggregate_json_out) {
  if (!reports_json || !aggregate_json_out) return invalid("null argument");
  return guarded([&] {
    json arr = parse_json_or_throw(reports_json, "metrics reports");
    if (!arr.is_array()) {
      throw textaug::Error(textaug::ErrorKind::invalid_argument, "expected a JSON array");
    }
    std::vector<metrics::MetricsReport> reports;
    for (const json& obj : arr) reports.push_back(metrics::metrics_report_from_json(obj));
    metrics::AggregateReport agg = metrics::aggregate_runs(reports);
    *aggregate_json_out = dup_string(metrics::to_json(agg).dump(2));
    return TA_OK;
  });
}

ta_status ta_render_report(const char* rows_json, const char* format, char** out) {
  if (!rows_json || !format || !out) return invalid("null argument");
  return guarded([&] {
    json arr = parse_json_or_throw(rows_json, "report rows");
    if (!arr.is_array()) {
      throw textaug::Error(textaug::ErrorKind::invalid_argument, "expected a JSON array");
    }
    std::vector<metrics::ReportRow> rows;
    for (const json& row : arr) {
      std::vector<metrics::MetricsReport> reports;
      for (const json& obj : row.at("reports")) {
        reports.push_back(metrics::metrics_report_from_json(obj));
      }
      rows.push_back({row.at("method").get<std::string>(), metrics::aggregate_runs(reports)});
    }
    std::string fmt = format;
    if (fmt == "text") {
      *out = dup_string(metrics::render_table_text(rows));
    } else if (fmt == "csv") {
      *out = dup_string(metrics::render_table_csv(rows));
    } else {
      throw textaug::Error(textaug::ErrorKind::invalid_argument,
                           "format must be 'text' or 'csv'");
    }
    return TA_OK;
  });
}

/* ---- PET / iPET ---- */

ta_status ta_pet_run(const ta_dataset* train, const ta_dataset* test, const ta_embeddings* e,
                     const char* config_json, char** result_json_out) {
  if (!train || !test || !e || !config_json || !result_json_out) return invalid("null argument");
  return guarded([&] {
    json obj = parse_json_or_throw(config_json, "pet config");
    pet::PetConfig cfg;
    if (!obj.contains("t_size")) {
      throw textaug::Error(textaug::ErrorKind::invalid_argument, "pet config needs t_size");
    }
    cfg.t_size = obj["t_size"].get<std::size_t>();
    if (obj.contains("seeds")) cfg.seeds = obj["seeds"].get<std::vector<std::uint64_t>>();
    if (obj.contains("ipet")) cfg.ipet = obj["ipet"].get<bool>();
    if (obj.contains("generations")) cfg.generations = obj["generations"].get<int>();
    if (obj.contains("growth")) cfg.growth = obj["growth"].get<double>();
    if (obj.contains("model")) cfg.model = bow_config_from_json(obj["model"]);

    pet::PvpConfig pvp;
    if (obj.contains("pvp")) {
      pvp = pet::pvp_from_json(obj["pvp"]);
    } else if (obj.contains("pvp_path")) {
      pvp = pet::load_pvp(obj["pvp_path"].get<std::string>());
    } else {
      throw textaug::Error(textaug::ErrorKind::invalid_argument, "pet config needs pvp or pvp_path");
    }

    pet::PetResult result = cfg.ipet ? pet::run_ipet(train->value, test->value, e->value, pvp, cfg)
                                     : pet::run_pet(train->value, test->value, e->value, pvp, cfg);
    if (obj.contains("save_model")) {
      model::save_checkpoint(result.final_model, obj["save_model"].get<std::string>());
    }
    *result_json_out = dup_string(pet::result_to_json(result).dump(2));
    return TA_OK;
  });
}

/* ---- misc ---- */

ta_status ta_hash_file(const char* path, char** hex_out) {
  if (!path || !hex_out) return invalid("null argument");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw textaug::Error(textaug::ErrorKind::io, std::string("cannot open ") + path);
    std::uint64_t hash = 14695981039346656037ULL;
    char buffer[4096];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
      std::streamsize got = in.gcount();
      for (std::streamsize i = 0; i < got; ++i) {
        hash ^= static_cast<unsigned char>(buffer[i]);
        hash *= 1099511628211ULL;
      }
      if (got < static_cast<std::streamsize>(sizeof(buffer))) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    *hex_out = dup_string(hex);
    return TA_OK;
  });
}

} /* extern "C" */
