#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mailgen/error.hpp"
#include "mailgen/evalkit/bleu.hpp"
#include "mailgen/evalkit/study_stats.hpp"

using namespace mailgen;
using namespace mailgen::evalkit;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

Tokens t(std::string_view s) { return tokenize(s); }

// Hand-derived: p1 = 8/9, p2 = 4/7, p3 = 1/5, c = 9, r = 10.
Corpus small_corpus() {
  return {{t("the cat is on the mat"), {t("the cat sat on the mat"), t("there is a cat on the mat")}},
          {t("a dog runs"), {t("the dog runs fast")}}};
}

TaskLog log(std::string r, Condition c, double seconds, int rating = 3) { return {std::move(r), "t", c, rating, seconds}; }

}  // namespace

TEST_SUITE("bleu") {
  TEST_CASE("tokenize") {
    CHECK(tokenize("Hej, Kim! Vi ses.") == Tokens{"Hej", ",", "Kim", "!", "Vi", "ses", "."});
    CHECK(tokenize("   ").empty());
  }

  TEST_CASE("identity and disjoint") {
    for (int n = 1; n <= 6; ++n) {
      CHECK(bleu({{t("a b c"), {t("a b c")}}, {{t("x y")}, {t("x y")}}}, n) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(bleu({{t("a b c"), {t("d e f")}}}) == 0.0);
    CHECK(sentence_bleu(t("a b c"), {t("d e f")}) == 0.0);
  }

  TEST_CASE("brevity penalty only") {
    CHECK(std::abs(bleu({{t("the cat sat"), {t("the cat sat on the mat")}}}, 2) - 0.36787944117144233) < 1e-9);
  }

  TEST_CASE("clipped unigram precision") {
    CHECK(std::abs(bleu({{t("the the the the"), {t("the cat")}}}, 1) - 0.25) < 1e-12);
  }

  TEST_CASE("small corpus") {
    CHECK(std::abs(bleu(small_corpus(), 3) - 0.4175336984410017) < 1e-9);
    CHECK(bleu(small_corpus(), 4) == 0.0);
  }

  TEST_CASE("closest reference length ties to the shorter") {
    const auto s = segment_stats({t("a b c"), {t("a b c d"), t("a b")}}, 2);
    CHECK(s.reference_length == 2);
  }

  TEST_CASE("smoothed sentence bleu") {
    CHECK(std::abs(sentence_bleu(t("a b c"), {t("a b d")}, 2) - 2.0 / 3.0) < 1e-12);
    CHECK(sentence_bleu(t("a b c"), {t("a b d")}, 2, false) == doctest::Approx(std::sqrt(2.0 / 3.0 * 1.0 / 2.0)));
    CHECK(sentence_bleu({}, {t("a b")}) == 0.0);
    CHECK(sentence_bleu(t("a b c d"), {t("a b c d")}) == doctest::Approx(1.0));
  }

  TEST_CASE("unsmoothed sentence equals single-segment corpus bleu") {
    const Segment s{t("the cat is on the mat"), {t("the cat sat on the mat")}};
    CHECK(sentence_bleu(s.hypothesis, s.references, 2, false) == doctest::Approx(bleu({s}, 2)).epsilon(1e-12));
  }

  TEST_CASE("permutation invariance") {
    auto corpus = small_corpus();
    corpus.push_back({t("hello there world"), {t("hello world")}});
    const double base = bleu(corpus, 2);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      std::shuffle(corpus.begin(), corpus.end(), rng);
      CHECK(bleu(corpus, 2) == base);
    }
  }

  TEST_CASE("bounds") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> word(0, 5), len(0, 8);
    for (int i = 0; i < 200; ++i) {
      auto sentence = [&] {
        Tokens out;
        for (int k = len(rng); k > 0; --k) out.push_back(std::string(1, static_cast<char>('a' + word(rng))));
        return out;
      };
      Segment s{sentence(), {sentence()}};
      if (s.references[0].empty()) s.references[0] = {"a"};
      const double b = bleu({s}, 4);
      const double sb = sentence_bleu(s.hypothesis, s.references, 4);
      CHECK(b >= 0.0);
      CHECK(b <= 1.0);
      CHECK(sb >= 0.0);
      CHECK(sb <= 1.0);
    }
  }

  TEST_CASE("errors") {
    CHECK(code_of([] { bleu({}); }) == ErrorCode::EmptyCorpus);
    CHECK(code_of([] { bleu({{t("a"), {}}}); }) == ErrorCode::EmptyCorpus);
    CHECK(code_of([] { bleu({{t("a"), {t("a")}}}, 0); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { read_bleu_jsonl("{\"hyp\":\"a\"}\n"); }) == ErrorCode::MalformedDocument);
  }

  TEST_CASE("jsonl input") {
    const auto corpus = read_bleu_jsonl("{\"hyp\":\"a b\",\"refs\":[\"a b\",\"c\"]}\n\n{\"hyp\":\"x\",\"refs\":[\"y\"]}\n");
    REQUIRE(corpus.size() == 2);
    CHECK(corpus[0].references.size() == 2);
  }
}

TEST_SUITE("study_stats") {
  TEST_CASE("single recruiter") {
    const std::vector<TaskLog> logs = {log("R1", Condition::Helped, 100), log("R1", Condition::Helped, 120),
                                       log("R1", Condition::Unhelped, 150), log("R1", Condition::Unhelped, 170)};
    const auto s = summarize_study(logs);
    CHECK(s.mean_seconds_helped == 110);
    CHECK(s.mean_seconds_unhelped == 160);
    CHECK(s.raw_time_delta == 50);
    CHECK(s.zero_averaged_time_delta == doctest::Approx(50).epsilon(1e-12));
  }

  TEST_CASE("ratings") {
    std::vector<TaskLog> logs;
    for (int r : {4, 3, 2, 1}) logs.push_back(log("R", Condition::Helped, 1, r));
    logs.push_back(log("R", Condition::Unhelped, 1, 4));
    const auto s = summarize_study(logs);
    CHECK(s.mean_rating_helped == 2.5);
    CHECK(s.pct_satisfactory_helped == 50.0);
    CHECK(s.pct_satisfactory_unhelped == 100.0);
  }

  TEST_CASE("per-recruiter offset cancels") {
    std::vector<TaskLog> logs = {log("A", Condition::Helped, 100), log("A", Condition::Unhelped, 180),
                                 log("A", Condition::Unhelped, 160), log("B", Condition::Helped, 90),
                                 log("B", Condition::Helped, 110), log("B", Condition::Unhelped, 130)};
    const auto before = summarize_study(logs);
    for (auto& l : logs) {
      if (l.recruiter_id == "B") l.seconds += 300;
    }
    const auto after = summarize_study(logs);
    CHECK(after.raw_time_delta != before.raw_time_delta);
    CHECK(std::abs(after.zero_averaged_time_delta - before.zero_averaged_time_delta) <= 1e-9);
  }

  TEST_CASE("missing condition") {
    const std::vector<TaskLog> logs = {log("A", Condition::Helped, 1)};
    CHECK(code_of([&] { summarize_study(logs); }) == ErrorCode::MissingCondition);
    CHECK(code_of([] { summarize_study(std::vector<TaskLog>{}); }) == ErrorCode::MissingCondition);
  }

  TEST_CASE("jsonl validation") {
    CHECK(code_of([] {
            read_task_logs_jsonl(R"({"recruiter_id":"a","task_id":"t","condition":"helped","rating":5,"seconds":1})");
          }) == ErrorCode::MalformedDocument);
    CHECK(code_of([] {
            read_task_logs_jsonl(R"({"recruiter_id":"a","task_id":"t","condition":"maybe","rating":3,"seconds":1})");
          }) == ErrorCode::MalformedDocument);
    const auto logs =
        read_task_logs_jsonl(R"({"recruiter_id":"a","task_id":"t","condition":"unhelped","rating":3,"seconds":2.5})");
    REQUIRE(logs.size() == 1);
    CHECK(logs[0].condition == Condition::Unhelped);
  }
}
