#include "textaug/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "textaug/error.hpp"
#include "textaug/rng.hpp"

namespace textaug::model {

using nlohmann::json;

namespace {

constexpr double kLogEps = 1e-12;

void softmax(std::span<const double> logits, std::span<double> out) {
  double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] /= sum;
}

struct Forward {
  std::vector<double> pre1;    // hidden pre-activation
  std::vector<double> hidden;  // after relu and (optional) dropout
  std::vector<double> probs;
};

void forward_one(const BowModel& m, std::span<const double> x, const std::vector<double>* mask,
                 Forward& f) {
  std::size_t h = m.hidden;
  std::size_t k = m.label_order.size();
  f.pre1.assign(h, 0.0);
  f.hidden.assign(h, 0.0);
  f.probs.assign(k, 0.0);
  for (std::size_t j = 0; j < h; ++j) {
    double acc = m.b1[j];
    const double* row = &m.w1[j * m.input_dim];
    for (std::size_t i = 0; i < m.input_dim; ++i) acc += row[i] * x[i];
    f.pre1[j] = acc;
    double a = acc > 0.0 ? acc : 0.0;
    f.hidden[j] = mask ? a * (*mask)[j] : a;
  }
  std::vector<double> logits(k);
  for (std::size_t c = 0; c < k; ++c) {
    double acc = m.b2[c];
    const double* row = &m.w2[c * h];
    for (std::size_t j = 0; j < h; ++j) acc += row[j] * f.hidden[j];
    logits[c] = acc;
  }
  softmax(logits, f.probs);
}

// Accumulates gradients for one example; scale is 1/batch_size.
void backward_one(const BowModel& m, std::span<const double> x, const Forward& f,
                  std::span<const double> target, const std::vector<double>* mask, double scale,
                  BowGradients& g) {
  std::size_t h = m.hidden;
  std::size_t k = m.label_order.size();
  std::vector<double> dz(k);
  for (std::size_t c = 0; c < k; ++c) dz[c] = (f.probs[c] - target[c]) * scale;
  std::vector<double> dhidden(h, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    double* grow = &g.w2[c * h];
    const double* wrow = &m.w2[c * h];
    for (std::size_t j = 0; j < h; ++j) {
      grow[j] += dz[c] * f.hidden[j];
      dhidden[j] += wrow[j] * dz[c];
    }
    g.b2[c] += dz[c];
  }
  for (std::size_t j = 0; j < h; ++j) {
    double da = mask ? dhidden[j] * (*mask)[j] : dhidden[j];
    double dpre = f.pre1[j] > 0.0 ? da : 0.0;
    if (dpre == 0.0) continue;
    double* grow = &g.w1[j * m.input_dim];
    for (std::size_t i = 0; i < m.input_dim; ++i) grow[i] += dpre * x[i];
    g.b1[j] += dpre;
  }
}

void validate_config(const BowConfig& cfg) {
  if (cfg.hidden_units < 1) throw Error(ErrorKind::invalid_argument, "hidden_units must be >= 1");
  if (cfg.dropout_rate < 0.0 || cfg.dropout_rate >= 1.0) {
    throw Error(ErrorKind::invalid_argument, "dropout_rate must be in [0, 1)");
  }
  if (cfg.learning_rate <= 0.0) throw Error(ErrorKind::invalid_argument, "learning_rate must be > 0");
  if (cfg.epochs < 1) throw Error(ErrorKind::invalid_argument, "epochs must be >= 1");
  if (cfg.batch_size < 1) throw Error(ErrorKind::invalid_argument, "batch_size must be >= 1");
  if (cfg.distill_temperature <= 0.0) {
    throw Error(ErrorKind::invalid_argument, "distill_temperature must be > 0");
  }
}

}  // namespace

std::vector<double> temper_target(std::span<const double> q, double temperature) {
  std::vector<double> out(q.begin(), q.end());
  if (temperature == 1.0) return out;
  double sum = 0.0;
  for (double& v : out) {
    v = v <= 0.0 ? 0.0 : std::pow(v, 1.0 / temperature);
    sum += v;
  }
  if (sum <= 0.0) throw Error(ErrorKind::invalid_argument, "target distribution sums to 0");
  for (double& v : out) v /= sum;
  return out;
}

double soft_cross_entropy(std::span<const double> p, std::span<const double> q,
                          double temperature) {
  if (p.size() != q.size()) throw Error(ErrorKind::invalid_argument, "distribution size mismatch");
  std::vector<double> tempered = temper_target(q, temperature);
  double loss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (tempered[i] > 0.0) loss -= tempered[i] * std::log(std::max(p[i], kLogEps));
  }
  return loss;
}

double batch_loss(const BowModel& m, const std::vector<std::vector<double>>& features,
                  const std::vector<std::vector<double>>& tempered_targets) {
  double total = 0.0;
  Forward f;
  for (std::size_t i = 0; i < features.size(); ++i) {
    forward_one(m, features[i], nullptr, f);
    for (std::size_t c = 0; c < m.label_order.size(); ++c) {
      if (tempered_targets[i][c] > 0.0) {
        total -= tempered_targets[i][c] * std::log(std::max(f.probs[c], kLogEps));
      }
    }
  }
  return total / static_cast<double>(features.size());
}

double batch_loss_and_gradients(const BowModel& m,
                                const std::vector<std::vector<double>>& features,
                                const std::vector<std::vector<double>>& tempered_targets,
                                BowGradients& out) {
  out.w1.assign(m.w1.size(), 0.0);
  out.b1.assign(m.b1.size(), 0.0);
  out.w2.assign(m.w2.size(), 0.0);
  out.b2.assign(m.b2.size(), 0.0);
  double total = 0.0;
  double scale = 1.0 / static_cast<double>(features.size());
  Forward f;
  for (std::size_t i = 0; i < features.size(); ++i) {
    forward_one(m, features[i], nullptr, f);
    backward_one(m, features[i], f, tempered_targets[i], nullptr, scale, out);
    for (std::size_t c = 0; c < m.label_order.size(); ++c) {
      if (tempered_targets[i][c] > 0.0) {
        total -= tempered_targets[i][c] * std::log(std::max(f.probs[c], kLogEps));
      }
    }
  }
  return total * scale;
}

BowModel train_bow_soft(const std::vector<std::string>& texts,
                        const std::vector<std::vector<double>>& targets,
                        const std::vector<std::string>& label_order,
                        std::shared_ptr<const lex::EmbeddingTable> embeddings,
                        const BowConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  if (!embeddings || embeddings->dim == 0) {
    throw Error(ErrorKind::invalid_argument, "embedding table is required");
  }
  if (texts.empty()) throw Error(ErrorKind::invalid_argument, "empty training set");
  if (texts.size() != targets.size()) {
    throw Error(ErrorKind::invalid_argument, "texts and targets differ in length");
  }
  if (label_order.empty()) throw Error(ErrorKind::invalid_argument, "no classes");
  for (const auto& row : targets) {
    if (row.size() != label_order.size()) {
      throw Error(ErrorKind::invalid_argument,
                  "soft-label width " + std::to_string(row.size()) + " does not match " +
                      std::to_string(label_order.size()) + " classes");
    }
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) throw Error(ErrorKind::invalid_argument, "negative soft-label entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw Error(ErrorKind::invalid_argument, "soft label does not sum to 1");
    }
  }

  BowModel m;
  m.config = cfg;
  m.label_order = label_order;
  m.input_dim = embeddings->dim;
  m.hidden = static_cast<std::size_t>(cfg.hidden_units);
  m.embeddings = embeddings;

  std::size_t k = label_order.size();
  Rng rng(seed);
  auto init = [&](std::vector<double>& w, std::size_t count, std::size_t fan_in) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    w.resize(count);
    for (double& v : w) v = (2.0 * rng.next_double() - 1.0) * bound;
  };
  init(m.w1, m.hidden * m.input_dim, m.input_dim);
  m.b1.assign(m.hidden, 0.0);
  init(m.w2, k * m.hidden, m.hidden);
  m.b2.assign(k, 0.0);

  // Frozen features: the embedding table is read once and never written.
  std::vector<std::vector<double>> features(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    features[i] = lex::mean_embedding(*embeddings, texts[i]);
  }
  std::vector<std::vector<double>> tempered(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    tempered[i] = temper_target(targets[i], cfg.distill_temperature);
  }

  std::vector<std::size_t> order(texts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  BowGradients grads;
  Forward f;
  double keep = 1.0 - cfg.dropout_rate;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::size_t batch = end - start;
      grads.w1.assign(m.w1.size(), 0.0);
      grads.b1.assign(m.b1.size(), 0.0);
      grads.w2.assign(m.w2.size(), 0.0);
      grads.b2.assign(m.b2.size(), 0.0);
      double scale = 1.0 / static_cast<double>(batch);
      for (std::size_t bi = start; bi < end; ++bi) {
        std::size_t idx = order[bi];
        std::vector<double> mask(m.hidden, 1.0);
        if (cfg.dropout_rate > 0.0) {
          for (double& v : mask) v = rng.next_double() < cfg.dropout_rate ? 0.0 : 1.0 / keep;
        }
        forward_one(m, features[idx], &mask, f);
        backward_one(m, features[idx], f, tempered[idx], &mask, scale, grads);
      }
      double lr = cfg.learning_rate;
      for (std::size_t i = 0; i < m.w1.size(); ++i) m.w1[i] -= lr * grads.w1[i];
      for (std::size_t i = 0; i < m.b1.size(); ++i) m.b1[i] -= lr * grads.b1[i];
      for (std::size_t i = 0; i < m.w2.size(); ++i) m.w2[i] -= lr * grads.w2[i];
      for (std::size_t i = 0; i < m.b2.size(); ++i) m.b2[i] -= lr * grads.b2[i];
    }
  }
  return m;
}

BowModel train_bow(const corpus::Dataset& train,
                   std::shared_ptr<const lex::EmbeddingTable> embeddings, const BowConfig& cfg,
                   std::uint64_t seed) {
  if (train.examples.empty()) throw Error(ErrorKind::invalid_argument, "empty training set");
  for (const auto& [label, count] : corpus::label_counts(train)) {
    if (count == 0) {
      throw Error(ErrorKind::invalid_argument, "class '" + label + "' has no training examples");
    }
  }
  std::vector<std::string> texts;
  std::vector<std::vector<double>> targets;
  texts.reserve(train.examples.size());
  targets.reserve(train.examples.size());
  for (const corpus::Example& e : train.examples) {
    texts.push_back(e.text);
    std::vector<double> one_hot(train.labels.size(), 0.0);
    auto it = std::find(train.labels.begin(), train.labels.end(), e.label);
    one_hot[static_cast<std::size_t>(it - train.labels.begin())] = 1.0;
    targets.push_back(std::move(one_hot));
  }
  return train_bow_soft(texts, targets, train.labels, std::move(embeddings), cfg, seed);
}

ProbMatrix predict(const BowModel& m, const std::vector<std::string>& texts) {
  ProbMatrix probs;
  probs.reserve(texts.size());
  Forward f;
  for (const std::string& text_value : texts) {
    std::vector<double> x = lex::mean_embedding(*m.embeddings, text_value);
    forward_one(m, x, nullptr, f);
    probs.push_back(f.probs);
  }
  return probs;
}

ProbMatrix predict(const BowModel& m, const corpus::Dataset& d) {
  std::vector<std::string> texts;
  texts.reserve(d.examples.size());
  for (const corpus::Example& e : d.examples) texts.push_back(e.text);
  return predict(m, texts);
}

std::vector<std::string> predict_labels(const BowModel& m, const std::vector<std::string>& texts) {
  ProbMatrix probs = predict(m, texts);
  std::vector<std::string> labels;
  labels.reserve(probs.size());
  for (const auto& row : probs) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    labels.push_back(m.label_order[best]);
  }
  return labels;
}

void save_checkpoint(const BowModel& m, const std::string& path) {
  json vectors = json::object();
  for (const auto& [token, vec] : m.embeddings->vectors) vectors[token] = vec;
  json obj = {{"format", "textaug-bow"},
              {"version", 1},
              {"config",
               {{"hidden_units", m.config.hidden_units},
                {"dropout_rate", m.config.dropout_rate},
                {"learning_rate", m.config.learning_rate},
                {"epochs", m.config.epochs},
                {"batch_size", m.config.batch_size},
                {"distill_temperature", m.config.distill_temperature}}},
              {"label_order", m.label_order},
              {"input_dim", m.input_dim},
              {"hidden", m.hidden},
              {"w1", m.w1},
              {"b1", m.b1},
              {"w2", m.w2},
              {"b2", m.b2},
              {"embeddings", {{"dim", m.embeddings->dim}, {"vectors", vectors}}}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << obj.dump() << '\n';
}

BowModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  json obj = json::parse(in, nullptr, false);
  if (obj.is_discarded() || !obj.is_object() || obj.value("format", "") != "textaug-bow") {
    throw Error(ErrorKind::parse, path + " is not a model checkpoint");
  }
  BowModel m;
  try {
    const json& cfg = obj.at("config");
    m.config.hidden_units = cfg.at("hidden_units").get<int>();
    m.config.dropout_rate = cfg.at("dropout_rate").get<double>();
    m.config.learning_rate = cfg.at("learning_rate").get<double>();
    m.config.epochs = cfg.at("epochs").get<int>();
    m.config.batch_size = cfg.at("batch_size").get<int>();
    m.config.distill_temperature = cfg.at("distill_temperature").get<double>();
    m.label_order = obj.at("label_order").get<std::vector<std::string>>();
    m.input_dim = obj.at("input_dim").get<std::size_t>();
    m.hidden = obj.at("hidden").get<std::size_t>();
    m.w1 = obj.at("w1").get<std::vector<double>>();
    m.b1 = obj.at("b1").get<std::vector<double>>();
    m.w2 = obj.at("w2").get<std::vector<double>>();
    m.b2 = obj.at("b2").get<std::vector<double>>();
    auto table = std::make_shared<lex::EmbeddingTable>();
    const json& emb = obj.at("embeddings");
    table->dim = emb.at("dim").get<std::size_t>();
    for (auto it = emb.at("vectors").begin(); it != emb.at("vectors").end(); ++it) {
      table->vectors[it.key()] = it.value().get<std::vector<double>>();
    }
    m.embeddings = std::move(table);
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::parse, path + ": " + ex.what());
  }
  if (m.w1.size() != m.hidden * m.input_dim || m.b1.size() != m.hidden ||
      m.w2.size() != m.label_order.size() * m.hidden || m.b2.size() != m.label_order.size()) {
    throw Error(ErrorKind::parse, path + ": inconsistent weight shapes");
  }
  return m;
}

}  // namespace textaug::model
