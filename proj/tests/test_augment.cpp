#include "textaug/augment.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "testutil.hpp"
#include "textaug/error.hpp"
#include "textaug/rng.hpp"
#include "textaug/text.hpp"

using namespace textaug;
using testutil::TempDir;

namespace {

const char* kTable3Source = "Who is she.....may be she has escaped from some mental hospital...";

lex::StopwordSet table3_stopwords() {
  lex::StopwordSet sw;
  sw.words = {"who", "is", "may", "be", "she", "has", "from", "some"};
  return sw;
}

struct IdentityClient : aug::TranslationClient {
  std::string translate(const std::string& text, const std::string&, const std::string&) override {
    return text;
  }
};

struct ReversingClient : aug::TranslationClient {
  std::string translate(const std::string& text, const std::string&, const std::string&) override {
    std::istringstream in(text);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    std::reverse(words.begin(), words.end());
    return text::join_tokens(words);
  }
};

struct FailingClient : aug::TranslationClient {
  std::string translate(const std::string&, const std::string&, const std::string&) override {
    throw Error(ErrorKind::runtime, "backend down");
  }
};

}  // namespace

TEST_CASE("oversample levels every class at the majority count") {
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 5; ++i) rows.push_back({"a text " + std::to_string(i), "A"});
  for (int i = 0; i < 2; ++i) rows.push_back({"b text " + std::to_string(i), "B"});
  for (int i = 0; i < 3; ++i) rows.push_back({"c text " + std::to_string(i), "C"});
  corpus::Dataset d = testutil::make_dataset(rows);

  aug::OversampleResult result = aug::oversample(d, 0);
  CHECK(result.added.size() == 5);
  CHECK(result.dataset.examples.size() == 15);
  for (const auto& [label, count] : corpus::label_counts(result.dataset)) CHECK(count == 5);

  // originals retained, prefix intact
  for (std::size_t i = 0; i < d.examples.size(); ++i) {
    CHECK(result.dataset.examples[i] == d.examples[i]);
  }
  // copies are exact text copies of their origin, labels preserved
  auto index = corpus::id_index(d);
  for (const aug::AugmentedExample& copy : result.added) {
    CHECK(copy.method == "oversample");
    const corpus::Example& origin = d.examples[index.at(copy.origin_id)];
    CHECK(copy.example.text == origin.text);
    CHECK(copy.example.label == origin.label);
  }

  aug::OversampleResult again = aug::oversample(d, 0);
  CHECK(again.dataset == result.dataset);
  aug::OversampleResult other = aug::oversample(d, 9);
  CHECK(other.dataset.examples.size() == 15);
}

TEST_CASE("oversample leaves already-uniform datasets unchanged") {
  corpus::Dataset d = testutil::make_dataset(
      {{"a1", "A"}, {"a2", "A"}, {"a3", "A"}, {"a4", "A"},
       {"b1", "B"}, {"b2", "B"}, {"b3", "B"}, {"b4", "B"}});
  aug::OversampleResult result = aug::oversample(d, 3);
  CHECK(result.added.empty());
  CHECK(result.dataset == d);
}

TEST_CASE("oversample levels the Table 1 fixture at the NAG count") {
  corpus::Dataset d = testutil::make_trac2_train_fixture();
  aug::OversampleResult result = aug::oversample(d, 1);
  for (const auto& [label, count] : corpus::label_counts(result.dataset)) {
    CHECK(count == testutil::kTrac2Nag);
  }
}

TEST_CASE("synonym_replacement reproduces the Table 3 rows") {
  corpus::Example e{"42", kTable3Source, "CAG"};
  lex::StopwordSet sw = table3_stopwords();
  aug::EdaConfig cfg;

  SUBCASE("mental -> genial") {
    lex::Thesaurus t;
    t.entries["mental"] = {"genial"};
    aug::AugmentedExample out = aug::synonym_replacement(e, t, sw, cfg, 0);
    CHECK(out.example.text == "who is she may be she has escaped from some genial hospital");
    CHECK(out.example.label == "CAG");
    CHECK(out.method == "eda_sr");
    CHECK(out.params["n"] == 1);
  }

  SUBCASE("escaped -> break away") {
    lex::Thesaurus t;
    t.entries["escaped"] = {"break away"};
    aug::AugmentedExample out = aug::synonym_replacement(e, t, sw, cfg, 0);
    CHECK(out.example.text == "who is she may be she has break away from some mental hospital");
  }

  SUBCASE("empty thesaurus degenerates to a lowercase copy") {
    lex::Thesaurus t;
    aug::AugmentedExample out = aug::synonym_replacement(e, t, sw, cfg, 0);
    CHECK(out.example.text == "who is she may be she has escaped from some mental hospital");
    CHECK(out.params["degenerate"] == true);
  }
}

TEST_CASE("synonym_replacement edit bound and coverage invariants") {
  lex::Thesaurus t;
  t.entries["quick"] = {"fast", "speedy"};
  t.entries["lazy"] = {"idle"};
  t.entries["brown"] = {"tan"};
  lex::StopwordSet sw;
  sw.words = {"the", "over"};
  aug::EdaConfig cfg;
  cfg.alpha_sr = 0.5;

  Rng seeds(11);
  for (int trial = 0; trial < 200; ++trial) {
    corpus::Example e{"x", "The quick brown fox jumps over the lazy dog", "A"};
    std::uint64_t seed = seeds.next_u64();
    aug::AugmentedExample out = aug::synonym_replacement(e, t, sw, cfg, seed);
    std::vector<std::string> before = text::tokenize_lower(e.text);
    // compare at slot level: replacements may be multi-word
    std::size_t n = out.params["n"].get<std::size_t>();
    CHECK(n <= 3);  // floor(0.5 * 6 non-stopwords) = 3
    for (const auto& rep : out.params["replacements"]) {
      std::size_t pos = rep["position"].get<std::size_t>();
      std::string from = rep["from"].get<std::string>();
      CHECK(before[pos] == from);
      CHECK_FALSE(sw.contains(from));
      CHECK(t.find(from) != nullptr);
      const auto& synonyms = *t.find(from);
      CHECK(std::find(synonyms.begin(), synonyms.end(), rep["to"].get<std::string>()) !=
            synonyms.end());
    }
    CHECK(out.params["replacements"].size() == n);
  }
}

TEST_CASE("random_deletion respects the survival guarantees") {
  aug::EdaConfig cfg;

  SUBCASE("p = 0 keeps the token sequence") {
    cfg.p_rd = 0.0;
    corpus::Example e{"x", "Alpha, beta; GAMMA delta", "A"};
    aug::AugmentedExample out = aug::random_deletion(e, cfg, 5);
    CHECK(out.example.text == "alpha beta gamma delta");
  }

  SUBCASE("single token always survives") {
    cfg.p_rd = 0.97;
    corpus::Example e{"x", "lonely", "A"};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      CHECK(aug::random_deletion(e, cfg, seed).example.text == "lonely");
    }
  }

  SUBCASE("output tokens form a subsequence of the input") {
    cfg.p_rd = 0.4;
    corpus::Example e{"x", "one two three four five six seven eight", "A"};
    std::vector<std::string> input = text::tokenize_lower(e.text);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      aug::AugmentedExample out = aug::random_deletion(e, cfg, seed);
      std::vector<std::string> output = text::tokenize_lower(out.example.text);
      CHECK(output.size() >= 1);
      std::size_t i = 0;
      for (const std::string& token : output) {
        while (i < input.size() && input[i] != token) ++i;
        REQUIRE(i < input.size());
        ++i;
      }
    }
  }

  SUBCASE("survival rate tracks 1 - p") {
    cfg.p_rd = 0.1;
    corpus::Example e{"x", "t0 t1 t2 t3 t4 t5 t6 t7 t8 t9", "A"};
    std::size_t survived = 0;
    const int trials = 10000;
    for (int seed = 0; seed < trials; ++seed) {
      aug::AugmentedExample out = aug::random_deletion(e, cfg, static_cast<std::uint64_t>(seed));
      survived += text::tokenize_lower(out.example.text).size();
    }
    double mean = static_cast<double>(survived) / trials;
    CHECK(mean == doctest::Approx(9.0).epsilon(0.012));
  }
}

TEST_CASE("eda_augment emits copies_per_example variants per original") {
  lex::Thesaurus t;
  t.entries["good"] = {"fine"};
  lex::StopwordSet sw;
  sw.words = {"the"};
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 100; ++i) rows.push_back({"the good sample " + std::to_string(i), "A"});
  corpus::Dataset d = testutil::make_dataset(rows);

  aug::EdaConfig cfg;
  std::vector<aug::AugmentedExample> out = aug::eda_augment(d, t, sw, cfg, 0);
  CHECK(out.size() == 300);
  // default mix: two replacements then one deletion per original
  CHECK(out[0].method == "eda_sr");
  CHECK(out[1].method == "eda_sr");
  CHECK(out[2].method == "eda_rd");

  cfg.copies_per_example = 1;
  CHECK(aug::eda_augment(d, t, sw, cfg, 0).size() == 100);

  corpus::Dataset empty;
  empty.labels = {"A"};
  CHECK(aug::eda_augment(empty, t, sw, cfg, 0).empty());
}

TEST_CASE("eda_augment is deterministic and order-stable under jobs") {
  lex::Thesaurus t;
  t.entries["alpha"] = {"beta", "gamma"};
  lex::StopwordSet sw;
  sw.words = {"the"};
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 40; ++i) rows.push_back({"the alpha item " + std::to_string(i), "A"});
  corpus::Dataset d = testutil::make_dataset(rows);

  aug::EdaConfig cfg;
  auto a = aug::eda_augment(d, t, sw, cfg, 123, 1);
  auto b = aug::eda_augment(d, t, sw, cfg, 123, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].example.id == b[i].example.id);
    CHECK(a[i].example.text == b[i].example.text);
    CHECK(a[i].params == b[i].params);
  }
  auto c = aug::eda_augment(d, t, sw, cfg, 124, 1);
  bool any_different = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].example.text != c[i].example.text) any_different = true;
  }
  CHECK(any_different);
}

TEST_CASE("greyscale_augment reproduces the Table 3 substitution") {
  corpus::Dataset d;
  d.labels = {"CAG"};
  d.examples.push_back({"42", kTable3Source, "CAG"});
  lex::ScaleSet s = lex::make_scale_set({{{"few", "some", "many"}, lex::ScaleSource::custom}});

  std::vector<aug::AugmentedExample> out = aug::greyscale_augment(d, s);
  REQUIRE(out.size() == 1);
  CHECK(out[0].example.text ==
        "Who is she.....may be she has escaped from few mental hospital...");
  CHECK(out[0].example.text.find("from few mental hospital") != std::string::npos);
  CHECK(out[0].params["from"] == "some");
  CHECK(out[0].params["to"] == "few");
  CHECK(out[0].example.label == "CAG");
}

TEST_CASE("greyscale_augment enumerates every milder substitution") {
  corpus::Dataset d;
  d.labels = {"X"};
  d.examples.push_back({"0", "deadly and toxic", "X"});
  lex::ScaleSet s = lex::make_scale_set({{{"harmful", "toxic", "deadly"}, lex::ScaleSource::custom}});

  std::vector<aug::AugmentedExample> out = aug::greyscale_augment(d, s);
  REQUIRE(out.size() == 3);
  std::multiset<std::string> texts;
  for (const auto& a : out) texts.insert(a.example.text);
  CHECK(texts.count("toxic and toxic") == 1);    // deadly -> toxic
  CHECK(texts.count("harmful and toxic") == 1);  // deadly -> harmful
  CHECK(texts.count("deadly and harmful") == 1); // toxic -> harmful

  // nearest-milder substitutions come first, so a cap keeps rank-0 rewrites
  std::vector<aug::AugmentedExample> capped = aug::greyscale_augment(d, s, 2);
  REQUIRE(capped.size() == 2);
  CHECK(capped[0].example.text == "toxic and toxic");
  CHECK(capped[1].example.text == "deadly and harmful");
}

TEST_CASE("greyscale_augment skips examples without scale adjectives") {
  corpus::Dataset d;
  d.labels = {"X"};
  d.examples.push_back({"0", "nothing matches here", "X"});
  lex::ScaleSet s = lex::make_scale_set({{{"few", "some", "many"}, lex::ScaleSource::custom}});
  CHECK(aug::greyscale_augment(d, s).empty());
}

TEST_CASE("greyscale_augment matches surface tokens case-insensitively") {
  corpus::Dataset d;
  d.labels = {"X"};
  d.examples.push_back({"0", "SOME things. Some, things!", "X"});
  lex::ScaleSet s = lex::make_scale_set({{{"few", "some", "many"}, lex::ScaleSource::custom}});
  std::vector<aug::AugmentedExample> out = aug::greyscale_augment(d, s);
  REQUIRE(out.size() == 2);
  CHECK(out[0].example.text == "few things. Some, things!");
  CHECK(out[1].example.text == "SOME things. few, things!");
}

TEST_CASE("back_translate round trip with mock clients") {
  corpus::Example e{"7", "one two three", "A"};

  IdentityClient identity;
  aug::AugmentedExample same = aug::back_translate(e, identity, "es");
  CHECK(same.example.text == e.text);
  CHECK(same.params["pivot"] == "es");
  CHECK(same.example.label == "A");

  ReversingClient reversing;
  aug::AugmentedExample restored = aug::back_translate(e, reversing, "fr");
  CHECK(restored.example.text == "one two three");

  FailingClient failing;
  CHECK_THROWS_WITH_AS(aug::back_translate(e, failing, "it"), doctest::Contains("'7'"), Error);
  CHECK_THROWS_WITH_AS(aug::back_translate(e, failing, "it"), doctest::Contains("'it'"), Error);
}

TEST_CASE("back_translate_all yields |pivots| extras per example") {
  std::vector<std::pair<std::string, std::string>> rows;
  for (int i = 0; i < 50; ++i) rows.push_back({"text number " + std::to_string(i), "A"});
  corpus::Dataset d = testutil::make_dataset(rows);
  IdentityClient identity;
  std::vector<aug::AugmentedExample> out = aug::back_translate_all(d, identity, {"es", "fr", "it"});
  CHECK(out.size() == 150);
  CHECK(out[0].params["pivot"] == "es");
  CHECK(out[1].params["pivot"] == "fr");
  CHECK(out[2].params["pivot"] == "it");
  CHECK(out[0].origin_id == "0");
  CHECK(out[3].origin_id == "1");
}

TEST_CASE("label preservation holds for every augmentation method") {
  lex::Thesaurus t;
  t.entries["strong"] = {"sturdy"};
  lex::StopwordSet sw;
  sw.words = {"a"};
  lex::ScaleSet s = lex::make_scale_set({{{"firm", "strong", "fierce"}, lex::ScaleSource::custom}});
  corpus::Dataset d = testutil::make_dataset({{"a strong point", "POS"},
                                              {"a fierce storm", "NEG"},
                                              {"a strong fierce mix", "POS"}});
  auto index = corpus::id_index(d);
  auto check_labels = [&](const std::vector<aug::AugmentedExample>& items) {
    for (const auto& a : items) {
      CHECK(a.example.label == d.examples[index.at(a.origin_id)].label);
    }
  };
  check_labels(aug::eda_augment(d, t, sw, {}, 3));
  check_labels(aug::greyscale_augment(d, s));
  IdentityClient identity;
  check_labels(aug::back_translate_all(d, identity, {"es"}));
  check_labels(aug::oversample(d, 3).added);
}

TEST_CASE("augmented JSONL round-trips with provenance and originals") {
  TempDir tmp;
  corpus::Dataset d = testutil::make_dataset({{"base text", "A"}});
  lex::ScaleSet s = lex::make_scale_set({{{"plain", "base"}, lex::ScaleSource::custom}});
  std::vector<aug::AugmentedExample> items = aug::greyscale_augment(d, s);
  REQUIRE(items.size() == 1);
  items[0].score = 0.75;

  std::string path = tmp.file("aug.jsonl");
  aug::write_augmented_jsonl(path, items, &d);

  // the combined file is a valid corpus again
  corpus::Dataset combined = corpus::load_corpus(path);
  CHECK(combined.examples.size() == 2);

  // provenance rows reload with params and score
  std::vector<aug::AugmentedExample> back = aug::read_augmented_jsonl(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].origin_id == "0");
  CHECK(back[0].method == "greyscale");
  CHECK(back[0].params == items[0].params);
  CHECK(back[0].score == doctest::Approx(0.75));
}
