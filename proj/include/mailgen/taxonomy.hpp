#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mailgen/model.hpp"

namespace mailgen {

enum class QualKind { Skill, Occupation, Language };
enum class Lang { da, en };

std::string_view to_string(QualKind kind);

struct QualEntry {
  std::string surface;  // normalized label
  QualKind kind = QualKind::Skill;
  Lang lang = Lang::da;
  std::string canonical_id;

  bool operator==(const QualEntry&) const = default;
};

// One record of the `label,kind,lang,id` export.
struct TaxonomyRow {
  std::string label;
  std::string kind;
  std::string lang;
  std::string id;
};

// Gazetteer over normalized labels, indexed by first token.
class QualificationTaxonomy {
 public:
  const std::vector<QualEntry>& entries() const { return entries_; }
  std::size_t max_ngram() const { return max_ngram_; }
  const std::string& default_language() const { return default_language_; }

  const QualEntry* find(std::string_view surface) const;
  // Indices of entries whose first token is `token`.
  const std::vector<std::size_t>& starting_with(std::string_view token) const;
  const std::vector<std::string>& entry_tokens(std::size_t i) const { return entry_tokens_[i]; }

 private:
  friend QualificationTaxonomy ingest_taxonomy(const std::vector<TaxonomyRow>&, std::string_view);

  std::vector<QualEntry> entries_;
  std::vector<std::vector<std::string>> entry_tokens_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
  std::map<std::string, std::size_t, std::less<>> by_surface_;
  std::size_t max_ngram_ = 1;
  std::string default_language_;
};

// Duplicate surfaces keep the entry of highest kind precedence
// (Language > Occupation > Skill); among equal kinds the first row wins.
// Throws Error{BadRow|EmptyTaxonomy}.
QualificationTaxonomy ingest_taxonomy(const std::vector<TaxonomyRow>& rows, std::string_view default_language = "dansk");

// Parses CSV text with header `label,kind,lang,id`. Throws Error{BadRow}.
std::vector<TaxonomyRow> read_taxonomy_csv(std::string_view csv);

struct Span {
  std::size_t start = 0;  // token offset
  std::size_t length = 0;
  std::size_t entry = 0;  // index into QualificationTaxonomy::entries()
};

// Non-overlapping dictionary spans over the normalized tokens of `text`:
// longer spans win, ties go to the leftmost. Sorted by start.
std::vector<Span> extract_spans(std::string_view text, const QualificationTaxonomy& tax);

// Distinct entries found in `text`, sorted by surface.
std::vector<QualEntry> extract(std::string_view text, const QualificationTaxonomy& tax);

struct MatchResult {
  std::vector<std::string> skills;
  std::vector<std::string> occupations;
  std::vector<std::string> languages;

  bool empty() const { return skills.empty() && occupations.empty() && languages.empty(); }
  bool operator==(const MatchResult&) const = default;
};

std::vector<std::string> job_text_fields(const JobPosting& job);
std::vector<std::string> candidate_text_fields(const CandidateProfile& cand);

// Qualifications present on both sides, intersected by canonical id and
// displayed with the job-side label. The default language never appears.
MatchResult match(const JobPosting& job, const CandidateProfile& cand, const QualificationTaxonomy& tax,
                  std::string_view default_language);

}  // namespace mailgen
