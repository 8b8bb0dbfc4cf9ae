#include "mailgen/evalkit/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include <json.hpp>

#include "mailgen/error.hpp"
#include "mailgen/text.hpp"

namespace mailgen::evalkit {

namespace {

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts count_ngrams(const Tokens& tokens, int n) {
  NgramCounts counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + len))];
  }
  return counts;
}

void check_max_n(int max_n) {
  if (max_n < 1) throw Error(ErrorCode::InvalidConfig, "max_n must be >= 1");
}

double score(const NgramStats& s, bool smoothing) {
  if (s.hypothesis_length == 0) return 0.0;
  double log_sum = 0.0;
  int orders = 0;
  for (std::size_t i = 0; i < s.matches.size(); ++i) {
    double m = s.matches[i];
    double t = s.totals[i];
    if (smoothing && i > 0) {
      m += 1;
      t += 1;
    }
    if (t == 0) continue;
    if (m == 0) return 0.0;
    log_sum += std::log(m / t);
    ++orders;
  }
  const double bp =
      s.hypothesis_length < s.reference_length ? std::exp(1.0 - s.reference_length / s.hypothesis_length) : 1.0;
  return bp * std::exp(log_sum / orders);
}

}  // namespace

NgramStats& NgramStats::operator+=(const NgramStats& other) {
  for (std::size_t i = 0; i < matches.size(); ++i) {
    matches[i] += other.matches[i];
    totals[i] += other.totals[i];
  }
  hypothesis_length += other.hypothesis_length;
  reference_length += other.reference_length;
  return *this;
}

NgramStats segment_stats(const Segment& segment, int max_n) {
  check_max_n(max_n);
  if (segment.references.empty()) throw Error(ErrorCode::EmptyCorpus, "segment has no references");
  NgramStats stats;
  stats.matches.assign(static_cast<std::size_t>(max_n), 0.0);
  stats.totals.assign(static_cast<std::size_t>(max_n), 0.0);
  for (int n = 1; n <= max_n; ++n) {
    const auto hyp = count_ngrams(segment.hypothesis, n);
    NgramCounts max_ref;
    for (const auto& ref : segment.references) {
      for (const auto& [gram, count] : count_ngrams(ref, n)) max_ref[gram] = std::max(max_ref[gram], count);
    }
    for (const auto& [gram, count] : hyp) {
      const auto it = max_ref.find(gram);
      stats.matches[n - 1] += std::min(count, it == max_ref.end() ? 0 : it->second);
      stats.totals[n - 1] += count;
    }
  }
  const auto c = static_cast<long>(segment.hypothesis.size());
  long best = static_cast<long>(segment.references.front().size());
  for (const auto& ref : segment.references) {
    const auto r = static_cast<long>(ref.size());
    if (std::labs(r - c) < std::labs(best - c) || (std::labs(r - c) == std::labs(best - c) && r < best)) best = r;
  }
  stats.hypothesis_length = static_cast<double>(c);
  stats.reference_length = static_cast<double>(best);
  return stats;
}

double bleu(const Corpus& corpus, int max_n) {
  check_max_n(max_n);
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no segments");
  NgramStats total = segment_stats(corpus.front(), max_n);
  for (std::size_t i = 1; i < corpus.size(); ++i) total += segment_stats(corpus[i], max_n);
  return score(total, false);
}

double sentence_bleu(const Tokens& hypothesis, const std::vector<Tokens>& references, int max_n, bool smoothing) {
  return score(segment_stats({hypothesis, references}, max_n), smoothing);
}

double mean_sentence_bleu(const Corpus& corpus, int max_n, bool smoothing) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no segments");
  double sum = 0.0;
  for (const auto& segment : corpus) sum += sentence_bleu(segment.hypothesis, segment.references, max_n, smoothing);
  return sum / static_cast<double>(corpus.size());
}

Tokens tokenize(std::string_view input) {
  Tokens out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t pos = 0; pos < input.size();) {
    const std::size_t start = pos;
    const char32_t cp = text::next_code_point(input, pos);
    if (text::is_space(cp)) {
      flush();
    } else if (text::is_punct(cp)) {
      flush();
      out.emplace_back(input.substr(start, pos - start));
    } else {
      current.append(input.substr(start, pos - start));
    }
  }
  flush();
  return out;
}

Corpus read_bleu_jsonl(std::string_view jsonl) {
  Corpus corpus;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = text::trim(jsonl.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty()) continue;
    try {
      const auto doc = nlohmann::json::parse(line);
      Segment segment;
      segment.hypothesis = tokenize(doc.at("hyp").get<std::string>());
      for (const auto& ref : doc.at("refs")) segment.references.push_back(tokenize(ref.get<std::string>()));
      if (segment.references.empty()) throw Error(ErrorCode::MalformedDocument, "no references");
      corpus.push_back(std::move(segment));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace mailgen::evalkit
