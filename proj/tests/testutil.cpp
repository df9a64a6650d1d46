#include "testutil.hpp"

#include <cmath>

#include "textaug/rng.hpp"

namespace testutil {

textaug::lex::EmbeddingTable make_embedding_fixture(const std::vector<std::string>& tokens,
                                                    std::size_t dim, std::uint64_t seed) {
  textaug::lex::EmbeddingTable table;
  table.dim = dim;
  textaug::Rng rng(seed);
  for (const std::string& token : tokens) {
    std::vector<double> vec(dim);
    double norm = 0.0;
    for (double& v : vec) {
      v = 2.0 * rng.next_double() - 1.0;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (double& v : vec) v /= norm;
    }
    table.vectors[token] = std::move(vec);
  }
  return table;
}

FewShotCorpus make_fewshot_corpus(const FewShotOptions& options) {
  using textaug::corpus::Dataset;
  FewShotCorpus out;
  textaug::Rng rng(options.seed);

  std::vector<std::vector<std::string>> class_keywords(2);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < options.keywords_per_class; ++i) {
      std::string word = (c == 0 ? "akey" : "bkey") + std::to_string(i);
      class_keywords[c].push_back(word);
      out.vocabulary.push_back(word);
    }
  }
  std::vector<std::string> noise;
  for (std::size_t i = 0; i < options.noise_vocab; ++i) {
    noise.push_back("noise" + std::to_string(i));
    out.vocabulary.push_back(noise.back());
  }

  const std::vector<std::string> labels = {"A", "B"};
  auto make_example = [&](std::size_t row) {
    std::size_t c = row % 2;
    std::vector<std::string> words;
    for (std::size_t k = 0; k < options.keywords_per_example; ++k) {
      words.push_back(class_keywords[c][rng.below(class_keywords[c].size())]);
    }
    for (std::size_t k = 0; k < options.noise_per_example; ++k) {
      words.push_back(noise[rng.below(noise.size())]);
    }
    rng.shuffle(words);
    std::string text;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) text += ' ';
      text += words[i];
    }
    return textaug::corpus::Example{std::to_string(row), text, labels[c]};
  };

  out.train.labels = labels;
  out.test.labels = labels;
  std::size_t row = 0;
  for (std::size_t i = 0; i < options.train_size; ++i) out.train.examples.push_back(make_example(row++));
  for (std::size_t i = 0; i < options.test_size; ++i) out.test.examples.push_back(make_example(row++));
  return out;
}

}  // namespace testutil
