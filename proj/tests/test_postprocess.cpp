#include <doctest.h>

#include <random>

#include "mailgen/postprocess.hpp"

using namespace mailgen;

namespace {

std::string random_string(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "a", "b", "hej", "Vi", "æ", "ø", "Å", "é", "1", "23", " ", " ", "  ", "\t", "\n", "\n\n", "\n\n\n", ".", ",",
      "!", "?", ";", ":", "...", " . ", "kr.", "f.eks.", "(", ")", "\"", "{", "}", "-", "'", "«", "»", "ca.", "x.y"};
  std::uniform_int_distribution<std::size_t> len(0, 40);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::string s;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) s += pieces[pick(rng)];
  return s;
}

std::string letters(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') out += c;
    if (c >= 'A' && c <= 'Z') out += static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

TEST_SUITE("postprocess") {
  TEST_CASE("dedupe punctuation") {
    CHECK(dedupe_punctuation("Hej!!.") == "Hej.");
    CHECK(dedupe_punctuation("Hej.") == "Hej.");
    CHECK(dedupe_punctuation("Hej ! ?") == "Hej?");
    CHECK(dedupe_punctuation("a, b") == "a, b");
    CHECK(dedupe_punctuation("a ,. b") == "a. b");
  }

  TEST_CASE("capitalize sentences") {
    CHECK(capitalize_sentences("hej. vi ses") == "Hej. Vi ses");
    CHECK(capitalize_sentences("HEJ") == "HEJ");
    CHECK(capitalize_sentences("123 kr. er nok") == "123 kr. er nok");
    CHECK(capitalize_sentences("ring f.eks. i morgen") == "Ring f.eks. i morgen");
    CHECK(capitalize_sentences("hej!\n\nøh, ja? åh") == "Hej!\n\nØh, ja? Åh");
    CHECK(capitalize_sentences("(hej) med dig") == "(Hej) med dig");
    CHECK(capitalize_sentences("hej.vi ses") == "Hej.vi ses");
  }

  TEST_CASE("abbreviation list comes from config") {
    PostprocessConfig cfg;
    cfg.abbreviations = {};
    CHECK(capitalize_sentences("123 kr. er nok", cfg) == "123 kr. Er nok");
  }

  TEST_CASE("fix spacing") {
    CHECK(fix_spacing("ord1  ord2 .") == "ord1 ord2.");
    CHECK(fix_spacing("a ,b") == "a, b");
    CHECK(fix_spacing("A\n\n\n\nB") == "A\n\nB");
    CHECK(fix_spacing("  a \n b  ") == "a\nb");
    CHECK(fix_spacing("kl. 12:30 og 3,5 kr.") == "kl. 12:30 og 3,5 kr.");
    CHECK(fix_spacing("Hej Kim,\nVi ses") == "Hej Kim,\nVi ses");
  }

  TEST_CASE("full pipeline") {
    CHECK(postprocess("hej kim ,.  vi så din profil").value == "Hej kim. Vi så din profil");
    CHECK(postprocess("").value.empty());
    const std::string clean = "Hej Kim.\n\nVi så din profil, og den er god.";
    CHECK(postprocess(clean).value == clean);
  }

  TEST_CASE("checker flags each invariant") {
    CHECK(clean_text_violations("Hej. Vi ses.").empty());
    CHECK_FALSE(clean_text_violations("Hej.. Vi").empty());
    CHECK_FALSE(clean_text_violations("Hej. vi").empty());
    CHECK_FALSE(clean_text_violations("Hej  vi").empty());
    CHECK_FALSE(clean_text_violations("Hej .").empty());
    CHECK_FALSE(clean_text_violations("A\n\n\nB").empty());
    CHECK_FALSE(clean_text_violations("A \nB").empty());
  }

  TEST_CASE("idempotent and clean on random strings") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 10000; ++i) {
      const auto input = random_string(rng);
      const auto once = postprocess(input).value;
      CAPTURE(input);
      CAPTURE(once);
      REQUIRE(postprocess(once).value == once);
      REQUIRE(clean_text_violations(once).empty());
      REQUIRE(letters(once) == letters(input));
    }
  }
}
