#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "textaug/corpus.hpp"
#include "textaug/lexicons.hpp"

namespace textaug::model {

struct BowConfig {
  int hidden_units = 256;
  double dropout_rate = 0.5;      // in [0, 1)
  double learning_rate = 1e-3;
  int epochs = 10;
  int batch_size = 16;
  double distill_temperature = 2.0;  // applied to soft targets; 1 = plain
};

// Mean-of-embeddings classifier: one rectified dense layer with dropout and a
// softmax output. The embedding table is frozen and only referenced.
struct BowModel {
  BowConfig config;
  std::vector<std::string> label_order;
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x input_dim, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // classes x hidden, row-major
  std::vector<double> b2;  // classes
  std::shared_ptr<const lex::EmbeddingTable> embeddings;
};

using ProbMatrix = std::vector<std::vector<double>>;

// Targets sharpened/softened as q^(1/T) renormalized; one-hot targets are
// fixed points for every T.
std::vector<double> temper_target(std::span<const double> q, double temperature);

// -sum_k tempered(q)_k * log(max(p_k, 1e-12)).
double soft_cross_entropy(std::span<const double> p, std::span<const double> q,
                          double temperature);

// Supervised training on one-hot targets built from the dataset labels.
BowModel train_bow(const corpus::Dataset& train,
                   std::shared_ptr<const lex::EmbeddingTable> embeddings, const BowConfig& cfg,
                   std::uint64_t seed);

// Soft-target training; `targets` rows are distributions over label_order.
// The supervised path routes through here, so equal seeds give bit-identical
// weights for one-hot targets.
BowModel train_bow_soft(const std::vector<std::string>& texts,
                        const std::vector<std::vector<double>>& targets,
                        const std::vector<std::string>& label_order,
                        std::shared_ptr<const lex::EmbeddingTable> embeddings,
                        const BowConfig& cfg, std::uint64_t seed);

ProbMatrix predict(const BowModel& m, const std::vector<std::string>& texts);
ProbMatrix predict(const BowModel& m, const corpus::Dataset& d);
std::vector<std::string> predict_labels(const BowModel& m, const std::vector<std::string>& texts);

void save_checkpoint(const BowModel& m, const std::string& path);
BowModel load_checkpoint(const std::string& path);

// Exposed for gradient verification: loss and analytic gradients on a batch
// of feature vectors with dropout off.
struct BowGradients {
  std::vector<double> w1, b1, w2, b2;
};
double batch_loss(const BowModel& m, const std::vector<std::vector<double>>& features,
                  const std::vector<std::vector<double>>& tempered_targets);
double batch_loss_and_gradients(const BowModel& m,
                                const std::vector<std::vector<double>>& features,
                                const std::vector<std::vector<double>>& tempered_targets,
                                BowGradients& out);

}  // namespace textaug::model
