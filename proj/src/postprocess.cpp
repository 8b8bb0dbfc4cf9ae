#include "mailgen/postprocess.hpp"

#include <algorithm>

#include "mailgen/text.hpp"

namespace mailgen {

namespace {

using Codepoints = std::u32string;

Codepoints decode(std::string_view s) {
  Codepoints out;
  for (std::size_t pos = 0; pos < s.size();) out.push_back(text::next_code_point(s, pos));
  return out;
}

std::string encode(const Codepoints& cps) {
  std::string out;
  for (char32_t cp : cps) text::append_utf8(out, cp);
  return out;
}

bool is_hspace(char32_t c) { return c == U' ' || c == U'\t'; }
bool is_space(char32_t c) { return is_hspace(c) || c == U'\n' || c == U'\r'; }
bool is_sentence_end(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }
bool is_spacing_mark(char32_t c) { return c == U'.' || c == U',' || c == U'!' || c == U'?' || c == U';' || c == U':'; }
bool is_opener(char32_t c) {
  return c == U'{' || c == U'(' || c == U'[' || c == U'"' || c == U'\'' || c == U'«' || c == U'“' ||
         c == U'„';
}
bool starts_word(char32_t c) { return text::is_alnum(c) || c == U'{'; }

bool in_set(char32_t c, const Codepoints& set) { return set.find(c) != Codepoints::npos; }

// Whether the '.' at `dot` (already in `out`) ends a listed abbreviation.
bool ends_abbreviation(const Codepoints& out, std::size_t dot, const std::vector<std::string>& abbreviations) {
  std::size_t begin = dot;
  while (begin > 0 && !is_space(out[begin - 1])) --begin;
  while (begin < dot && is_opener(out[begin])) ++begin;
  const std::string token = text::to_lower(encode(out.substr(begin, dot - begin + 1)));
  return std::find(abbreviations.begin(), abbreviations.end(), token) != abbreviations.end();
}

std::vector<Codepoints> split_lines(const Codepoints& cps) {
  std::vector<Codepoints> lines(1);
  for (char32_t c : cps) {
    if (c == U'\n') {
      lines.emplace_back();
    } else if (c != U'\r') {
      lines.back().push_back(c);
    }
  }
  return lines;
}

Codepoints fix_line(const Codepoints& line) {
  Codepoints out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char32_t c = line[i];
    if (is_hspace(c)) {
      if (!out.empty() && out.back() != U' ') out.push_back(U' ');
      continue;
    }
    if (!is_spacing_mark(c)) {
      out.push_back(c);
      continue;
    }
    while (!out.empty() && out.back() == U' ') out.pop_back();
    out.push_back(c);
    const bool has_next = i + 1 < line.size();
    const bool flanked = i > 0 && text::is_alnum(line[i - 1]) && has_next && text::is_alnum(line[i + 1]);
    if (has_next && starts_word(line[i + 1]) && !flanked) out.push_back(U' ');
  }
  while (!out.empty() && out.back() == U' ') out.pop_back();
  const auto first = out.find_first_not_of(U' ');
  return first == Codepoints::npos ? Codepoints{} : out.substr(first);
}

}  // namespace

std::string dedupe_punctuation(std::string_view input, const PostprocessConfig& config) {
  const Codepoints marks = decode(config.punctuation);
  const Codepoints cps = decode(input);
  Codepoints out;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!in_set(cps[i], marks)) {
      out.push_back(cps[i++]);
      continue;
    }
    std::size_t last = i;
    std::size_t count = 1;
    for (std::size_t k = i + 1; k < cps.size();) {
      while (k < cps.size() && is_hspace(cps[k])) ++k;
      if (k >= cps.size() || !in_set(cps[k], marks)) break;
      last = k++;
      ++count;
    }
    if (count >= 2) {
      while (!out.empty() && is_hspace(out.back())) out.pop_back();
    }
    out.push_back(cps[last]);
    i = last + 1;
  }
  return encode(out);
}

std::string fix_spacing(std::string_view input) {
  std::vector<Codepoints> lines;
  for (const auto& line : split_lines(decode(input))) lines.push_back(fix_line(line));

  Codepoints out;
  bool pending_blank = false;
  for (const auto& line : lines) {
    if (line.empty()) {
      pending_blank = !out.empty();
      continue;
    }
    if (!out.empty()) out += pending_blank ? U"\n\n" : U"\n";
    pending_blank = false;
    out += line;
  }
  return encode(out);
}

std::string capitalize_sentences(std::string_view input, const PostprocessConfig& config) {
  const Codepoints cps = decode(input);
  Codepoints out;
  bool sentence_start = true;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    char32_t c = cps[i];
    if (sentence_start) {
      if (is_space(c) || is_opener(c)) {
        out.push_back(c);
        continue;
      }
      if (text::is_lower(c)) c = text::to_upper(c);
      sentence_start = false;
      out.push_back(c);
    } else {
      out.push_back(c);
    }
    if (c == U'\n' && out.size() >= 2 && out[out.size() - 2] == U'\n') {
      sentence_start = true;
    } else if (is_sentence_end(c) && (i + 1 == cps.size() || is_space(cps[i + 1]))) {
      sentence_start = !(c == U'.' && ends_abbreviation(out, out.size() - 1, config.abbreviations));
    }
  }
  return encode(out);
}

CleanText postprocess(std::string_view input, const PostprocessConfig& config) {
  return {capitalize_sentences(fix_spacing(dedupe_punctuation(input, config)), config)};
}

std::vector<std::string> clean_text_violations(std::string_view input, const PostprocessConfig& config) {
  std::vector<std::string> problems;
  const Codepoints marks = decode(config.punctuation);
  const Codepoints cps = decode(input);
  auto at = [](std::size_t i) { return " at code point " + std::to_string(i); };

  if (!cps.empty() && (cps.front() == U'\n' || cps.back() == U'\n')) problems.push_back("text starts or ends with a newline");
  bool sentence_start = true;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    const char32_t next = i + 1 < cps.size() ? cps[i + 1] : U'\0';
    if (c == U'\t' || c == U'\r') problems.push_back("tab or carriage return" + at(i));
    if (c == U' ' && next == U' ') problems.push_back("double space" + at(i));
    if (c == U' ' && is_spacing_mark(next)) problems.push_back("space before punctuation" + at(i));
    if (c == U' ' && (i == 0 || next == U'\n' || next == U'\0' || cps[i - 1] == U'\n')) {
      problems.push_back("whitespace at line edge" + at(i));
    }
    if (c == U'\n' && next == U'\n' && i + 2 < cps.size() && cps[i + 2] == U'\n') {
      problems.push_back("more than one blank line" + at(i));
    }
    if (in_set(c, marks)) {
      std::size_t k = i + 1;
      while (k < cps.size() && is_hspace(cps[k])) ++k;
      if (k < cps.size() && in_set(cps[k], marks)) problems.push_back("punctuation run" + at(i));
    }

    if (sentence_start) {
      if (is_space(c) || is_opener(c)) continue;
      if (text::is_lower(c)) problems.push_back("sentence starts lowercase" + at(i));
      sentence_start = false;
    }
    if (c == U'\n' && i > 0 && cps[i - 1] == U'\n') {
      sentence_start = true;
    } else if (is_sentence_end(c) && (next == U'\0' || is_space(next))) {
      sentence_start = !(c == U'.' && ends_abbreviation(cps, i, config.abbreviations));
    }
  }
  return problems;
}

}  // namespace mailgen
