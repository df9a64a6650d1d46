#include "textaug/simfilter.hpp"

#include <doctest.h>

#include <cmath>

#include "testutil.hpp"
#include "textaug/error.hpp"
#include "textaug/rng.hpp"

using namespace textaug;

namespace {

sim::ScoredSet scored_from(const std::vector<double>& scores) {
  sim::ScoredSet s;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    sim::ScoredItem item;
    item.example.example = {"a" + std::to_string(i), "text " + std::to_string(i), "X"};
    item.example.origin_id = std::to_string(i);
    item.example.method = "greyscale";
    item.score = scores[i];
    item.example.score = scores[i];
    s.items.push_back(std::move(item));
  }
  return s;
}

}  // namespace

TEST_CASE("embed_text degenerate and averaging cases") {
  lex::EmbeddingTable t;
  t.dim = 3;
  t.vectors["cat"] = {1.0, 0.0, 0.0};
  t.vectors["dog"] = {0.0, 1.0, 0.0};
  CHECK(sim::embed_text(t, "cat") == std::vector<double>{1.0, 0.0, 0.0});
  CHECK(sim::embed_text(t, "cat dog") == std::vector<double>{0.5, 0.5, 0.0});
  CHECK(sim::embed_text(t, "zebra lion") == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("angular_similarity anchors") {
  std::vector<double> u = {0.3, -1.2, 0.5};
  std::vector<double> minus_u = {-0.3, 1.2, -0.5};
  std::vector<double> x = {1.0, 0.0};
  std::vector<double> y = {0.0, 2.0};
  CHECK(sim::angular_similarity(u, u) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sim::angular_similarity(x, y) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sim::angular_similarity(u, minus_u) == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> zero = {0.0, 0.0, 0.0};
  CHECK_THROWS_WITH_AS(sim::angular_similarity(u, zero), doctest::Contains("zero-norm"), Error);
  CHECK_THROWS_AS(sim::angular_similarity(zero, u), Error);
  CHECK_THROWS_AS(sim::angular_similarity(u, x), Error);  // dimension mismatch
}

TEST_CASE("angular_similarity is symmetric and in range on random pairs") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t dim = 1 + rng.below(8);
    std::vector<double> u(dim), v(dim);
    double nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      u[i] = 4.0 * rng.next_double() - 2.0;
      v[i] = 4.0 * rng.next_double() - 2.0;
      nu += u[i] * u[i];
      nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) continue;
    double ab = sim::angular_similarity(u, v);
    double ba = sim::angular_similarity(v, u);
    CHECK(ab == ba);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("score_augmented scores against the origin text") {
  lex::EmbeddingTable t;
  t.dim = 2;
  t.vectors["cat"] = {1.0, 0.0};
  t.vectors["dog"] = {0.0, 1.0};

  corpus::Dataset origins = testutil::make_dataset({{"cat cat", "A"}});
  auto make_item = [](const std::string& id, const std::string& origin,
                      const std::string& text_value) {
    aug::AugmentedExample a;
    a.example = {id, text_value, "A"};
    a.origin_id = origin;
    a.method = "eda_sr";
    return a;
  };

  SUBCASE("identical text scores 1") {
    sim::ScoredSet s = sim::score_augmented({make_item("x", "0", "cat cat")}, origins, t);
    CHECK(s.items[0].score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(s.items[0].degenerate);
  }

  SUBCASE("a single distant-word swap lowers the score") {
    // mean("cat dog") = (0.5, 0.5); angle to (1, 0) is pi/4, so 1 - 1/4.
    sim::ScoredSet s = sim::score_augmented(
        {make_item("same", "0", "cat cat"), make_item("swap", "0", "cat dog")}, origins, t);
    CHECK(s.items[1].score == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(s.items[1].score < s.items[0].score);
  }

  SUBCASE("unembeddable augmentation scores 0 with the degeneracy flag") {
    sim::ScoredSet s = sim::score_augmented({make_item("oov", "0", "zebra")}, origins, t);
    CHECK(s.items[0].score == 0.0);
    CHECK(s.items[0].degenerate);
  }

  SUBCASE("unresolved origin id is an error") {
    CHECK_THROWS_WITH_AS(sim::score_augmented({make_item("x", "missing", "cat")}, origins, t),
                         doctest::Contains("missing"), Error);
  }

  SUBCASE("scores stay in range over a mixed batch and jobs do not reorder") {
    std::vector<aug::AugmentedExample> items;
    for (int i = 0; i < 37; ++i) {
      items.push_back(make_item("b" + std::to_string(i), "0", i % 2 ? "cat dog" : "dog"));
    }
    sim::ScoredSet serial = sim::score_augmented(items, origins, t, 1);
    sim::ScoredSet parallel = sim::score_augmented(items, origins, t, 4);
    REQUIRE(serial.items.size() == parallel.items.size());
    for (std::size_t i = 0; i < serial.items.size(); ++i) {
      CHECK(serial.items[i].score >= 0.0);
      CHECK(serial.items[i].score <= 1.0);
      CHECK(serial.items[i].score == parallel.items[i].score);
      CHECK(serial.items[i].example.example.id == parallel.items[i].example.example.id);
    }
  }
}

TEST_CASE("quartile_filter drops exactly floor(q*N) lowest scores") {
  SUBCASE("worked example: 8 items, two low scores go") {
    sim::ScoredSet s = scored_from({0.9, 0.9, 0.9, 0.4, 0.9, 0.9, 0.3, 0.9});
    std::vector<aug::AugmentedExample> kept = sim::quartile_filter(s, 0.25);
    REQUIRE(kept.size() == 6);
    for (const auto& a : kept) CHECK(*a.score == 0.9);
  }

  SUBCASE("quantile 0 removes nothing") {
    sim::ScoredSet s = scored_from({0.1, 0.5, 0.9});
    CHECK(sim::quartile_filter(s, 0.0).size() == 3);
  }

  SUBCASE("ties keep earlier-indexed items") {
    sim::ScoredSet s = scored_from({0.5, 0.5, 0.5, 0.5, 0.5});
    std::vector<aug::AugmentedExample> kept = sim::quartile_filter(s, 0.25);
    REQUIRE(kept.size() == 4);  // floor(1.25) = 1 removed
    for (std::size_t i = 0; i < kept.size(); ++i) {
      CHECK(kept[i].example.id == "a" + std::to_string(i));  // a4 dropped
    }
  }

  SUBCASE("survivors retain input order") {
    sim::ScoredSet s = scored_from({0.9, 0.1, 0.8, 0.2, 0.7, 0.3, 0.6, 0.4});
    std::vector<aug::AugmentedExample> kept = sim::quartile_filter(s, 0.25);
    REQUIRE(kept.size() == 6);
    CHECK(kept[0].example.id == "a0");
    CHECK(kept[1].example.id == "a2");
  }

  SUBCASE("errors") {
    sim::ScoredSet empty;
    CHECK_THROWS_AS(sim::quartile_filter(empty, 0.25), Error);
    sim::ScoredSet s = scored_from({0.5});
    CHECK_THROWS_AS(sim::quartile_filter(s, 1.0), Error);
    CHECK_THROWS_AS(sim::quartile_filter(s, -0.1), Error);
  }
}

TEST_CASE("score_distribution uses nearest-rank quantiles") {
  SUBCASE("lower nearest rank on the 4-point example") {
    sim::ScoreSummary summary = sim::score_distribution(scored_from({0.4, 0.1, 0.3, 0.2}));
    CHECK(summary.q1 == 0.1);
    CHECK(summary.median == 0.2);
    CHECK(summary.q3 == 0.3);
    CHECK(summary.min == 0.1);
    CHECK(summary.max == 0.4);
  }

  SUBCASE("all-equal scores collapse the quartiles") {
    sim::ScoreSummary summary = sim::score_distribution(scored_from({0.7, 0.7, 0.7}));
    CHECK(summary.q1 == 0.7);
    CHECK(summary.median == 0.7);
    CHECK(summary.q3 == 0.7);
  }

  SUBCASE("three quarters scoring >= 0.98 puts the first quartile at >= 0.98") {
    sim::ScoreSummary summary = sim::score_distribution(scored_from({0.98, 0.99, 0.995, 1.0}));
    CHECK(summary.q1 >= 0.98);
  }

  SUBCASE("empty set errors") {
    CHECK_THROWS_AS(sim::score_distribution(sim::ScoredSet{}), Error);
  }
}
