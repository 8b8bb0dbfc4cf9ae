#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mailgen::evalkit {

using Tokens = std::vector<std::string>;

struct Segment {
  Tokens hypothesis;
  std::vector<Tokens> references;
};

using Corpus = std::vector<Segment>;

// Clipped n-gram counts for one segment, orders 1..max_n at index n-1.
struct NgramStats {
  std::vector<double> matches;
  std::vector<double> totals;
  double hypothesis_length = 0;
  double reference_length = 0;  // closest reference length, ties to the shorter

  NgramStats& operator+=(const NgramStats& other);
};

NgramStats segment_stats(const Segment& segment, int max_n);

// Corpus-level BLEU with uniform weights and brevity penalty. Orders for
// which the hypotheses hold no n-grams at all are left out of the mean.
// Throws Error{EmptyCorpus} on an empty corpus or a segment without references.
double bleu(const Corpus& corpus, int max_n = 4);

// Single-segment BLEU; with smoothing, orders n >= 2 use (m + 1) / (t + 1).
double sentence_bleu(const Tokens& hypothesis, const std::vector<Tokens>& references, int max_n = 4,
                     bool smoothing = true);

// Average of sentence_bleu over the corpus.
double mean_sentence_bleu(const Corpus& corpus, int max_n = 4, bool smoothing = true);

// Whitespace split with punctuation marks split off as their own tokens.
Tokens tokenize(std::string_view text);

// JSONL, one {"hyp": string, "refs": [string]} per line.
Corpus read_bleu_jsonl(std::string_view jsonl);

}  // namespace mailgen::evalkit
