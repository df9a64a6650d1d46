#include "textaug/lexicons.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "textaug/error.hpp"
#include "textaug/text.hpp"

namespace textaug::lex {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
  throw Error(ErrorKind::parse, path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  return in;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(text::trim(field));
  return out;
}

ScaleSource parse_source(const std::string& name, const std::string& path, std::size_t line) {
  if (name == "demelo") return ScaleSource::demelo;
  if (name == "crowd") return ScaleSource::crowd;
  if (name == "wilkinson") return ScaleSource::wilkinson;
  if (name == "custom") return ScaleSource::custom;
  parse_fail(path, line, "unknown scale source '" + name + "'");
}

}  // namespace

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  StopwordSet sw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string word = text::trim(line);
    if (word.empty() || word[0] == '#') continue;
    if (word.find_first_of(" \t") != std::string::npos) {
      parse_fail(path, line_no, "stopword contains whitespace");
    }
    sw.words.insert(text::to_lower(word));
  }
  if (sw.words.empty()) throw Error(ErrorKind::parse, path + ": no stopwords");
  return sw;
}

Thesaurus load_thesaurus(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  Thesaurus t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) parse_fail(path, line_no, "expected 'word<TAB>syn1,syn2,...'");
    std::string word = text::to_lower(text::trim(line.substr(0, tab)));
    if (word.empty()) parse_fail(path, line_no, "empty headword");
    std::vector<std::string> synonyms;
    for (const std::string& raw : split_commas(line.substr(tab + 1))) {
      if (raw.empty()) continue;
      std::string syn = text::to_lower(raw);
      if (syn == word) parse_fail(path, line_no, "word '" + word + "' lists itself as a synonym");
      synonyms.push_back(std::move(syn));
    }
    if (synonyms.empty()) parse_fail(path, line_no, "empty synonym list for '" + word + "'");
    auto [it, inserted] = t.entries.emplace(std::move(word), std::move(synonyms));
    if (!inserted) parse_fail(path, line_no, "duplicate headword '" + it->first + "'");
  }
  return t;
}

ScaleSet make_scale_set(std::vector<HalfScale> scales) {
  ScaleSet s;
  s.scales = std::move(scales);
  for (std::size_t i = 0; i < s.scales.size(); ++i) {
    const HalfScale& scale = s.scales[i];
    if (scale.words.size() < 2) {
      throw Error(ErrorKind::invalid_argument, "half-scale needs at least 2 words");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t pos = 0; pos < scale.words.size(); ++pos) {
      const std::string& w = scale.words[pos];
      if (!seen.insert(w).second) {
        throw Error(ErrorKind::invalid_argument, "duplicate word '" + w + "' within one half-scale");
      }
      s.index[w].emplace_back(i, pos);
    }
  }
  return s;
}

ScaleSet load_half_scales(const std::vector<std::string>& paths) {
  std::vector<HalfScale> scales;
  for (const std::string& path : paths) {
    std::ifstream in = open_or_throw(path);
    ScaleSource source = ScaleSource::custom;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string trimmed = text::trim(line);
      if (trimmed.empty()) continue;
      if (trimmed[0] == '#') {
        if (trimmed.rfind("#source=", 0) == 0) {
          source = parse_source(text::trim(trimmed.substr(8)), path, line_no);
        }
        continue;
      }
      HalfScale scale;
      scale.source = source;
      for (const std::string& w : split_commas(trimmed)) {
        if (!w.empty()) scale.words.push_back(text::to_lower(w));
      }
      if (scale.words.size() < 2) parse_fail(path, line_no, "half-scale needs at least 2 words");
      std::unordered_set<std::string> seen(scale.words.begin(), scale.words.end());
      if (seen.size() != scale.words.size()) parse_fail(path, line_no, "duplicate word within one half-scale");
      scales.push_back(std::move(scale));
    }
  }
  return make_scale_set(std::move(scales));
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  EmbeddingTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    if (token.empty()) parse_fail(path, line_no, "missing token");
    std::vector<double> vec;
    double v;
    while (ss >> v) vec.push_back(v);
    if (!ss.eof()) parse_fail(path, line_no, "non-numeric embedding value");
    if (vec.empty()) parse_fail(path, line_no, "no embedding values");
    if (t.dim == 0) {
      t.dim = vec.size();
    } else if (vec.size() != t.dim) {
      parse_fail(path, line_no,
                 "expected " + std::to_string(t.dim) + " values, got " + std::to_string(vec.size()));
    }
    t.vectors[text::to_lower(token)] = std::move(vec);
  }
  if (t.vectors.empty()) throw Error(ErrorKind::parse, path + ": no embeddings");
  return t;
}

std::vector<std::string> milder_alternatives(const ScaleSet& s, std::string_view word) {
  std::vector<std::string> out;
  auto it = s.index.find(std::string(word));
  if (it == s.index.end()) return out;
  std::unordered_set<std::string> seen;
  for (const auto& [scale_idx, pos] : it->second) {
    const std::vector<std::string>& words = s.scales[scale_idx].words;
    for (std::size_t i = pos; i-- > 0;) {  // nearest milder first
      if (seen.insert(words[i]).second) out.push_back(words[i]);
    }
  }
  return out;
}

std::vector<double> mean_embedding(const EmbeddingTable& t, std::string_view text_value) {
  std::vector<double> mean(t.dim, 0.0);
  std::size_t hits = 0;
  for (const std::string& token : text::tokenize_lower(text_value)) {
    if (const std::vector<double>* vec = t.find(token)) {
      for (std::size_t i = 0; i < t.dim; ++i) mean[i] += (*vec)[i];
      ++hits;
    }
  }
  if (hits > 0) {
    for (double& v : mean) v /= static_cast<double>(hits);
  }
  return mean;
}

std::string embedding_fingerprint(const EmbeddingTable& t) {
  std::vector<const std::string*> tokens;
  tokens.reserve(t.vectors.size());
  for (const auto& [token, vec] : t.vectors) tokens.push_back(&token);
  std::sort(tokens.begin(), tokens.end(), [](const auto* a, const auto* b) { return *a < *b; });
  std::string bytes;
  bytes.append(reinterpret_cast<const char*>(&t.dim), sizeof(t.dim));
  for (const std::string* token : tokens) {
    bytes += *token;
    bytes.push_back('\0');
    const std::vector<double>& vec = t.vectors.at(*token);
    bytes.append(reinterpret_cast<const char*>(vec.data()), vec.size() * sizeof(double));
  }
  return bytes;
}

}  // namespace textaug::lex
