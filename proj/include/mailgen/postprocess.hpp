#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mailgen {

struct PostprocessConfig {
  // Marks that collapse when they appear in a row.
  std::string punctuation = ".!?;:,";
  // Tokens ending in '.' that do not end a sentence.
  std::vector<std::string> abbreviations = {"bl.a.", "ca.", "evt.", "f.eks.", "kr.", "mv."};
};

struct CleanText {
  std::string value;
};

// Each run of punctuation marks (spaces between them ignored) becomes its
// last mark; spaces directly before a collapsed run are dropped as well.
std::string dedupe_punctuation(std::string_view text, const PostprocessConfig& config = {});

std::string fix_spacing(std::string_view text);

std::string capitalize_sentences(std::string_view text, const PostprocessConfig& config = {});

// dedupe_punctuation, then fix_spacing, then capitalize_sentences.
CleanText postprocess(std::string_view text, const PostprocessConfig& config = {});

// Empty when `text` satisfies every CleanText invariant, otherwise one
// message per violation.
std::vector<std::string> clean_text_violations(std::string_view text, const PostprocessConfig& config = {});

}  // namespace mailgen
