#include "mailgen/taxonomy.hpp"

#include <algorithm>
#include <set>

#include "mailgen/error.hpp"
#include "mailgen/text.hpp"

namespace mailgen {

std::string_view to_string(QualKind kind) {
  switch (kind) {
    case QualKind::Skill: return "skill";
    case QualKind::Occupation: return "occupation";
    case QualKind::Language: return "language";
  }
  return "skill";
}

namespace {

int precedence(QualKind kind) {
  switch (kind) {
    case QualKind::Language: return 2;
    case QualKind::Occupation: return 1;
    case QualKind::Skill: return 0;
  }
  return 0;
}

std::string bad_row(std::size_t line, const std::string& why) {
  return "line " + std::to_string(line) + ": " + why;
}

}  // namespace

const QualEntry* QualificationTaxonomy::find(std::string_view surface) const {
  const auto it = by_surface_.find(surface);
  return it == by_surface_.end() ? nullptr : &entries_[it->second];
}

const std::vector<std::size_t>& QualificationTaxonomy::starting_with(std::string_view token) const {
  static const std::vector<std::size_t> kNone;
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kNone : it->second;
}

QualificationTaxonomy ingest_taxonomy(const std::vector<TaxonomyRow>& rows, std::string_view default_language) {
  QualificationTaxonomy tax;
  tax.default_language_ = text::normalize(default_language);
  // Line numbers count the CSV header as line 1.
  std::size_t line = 1;
  for (const auto& row : rows) {
    ++line;
    QualEntry entry;
    entry.surface = text::normalize(row.label);
    if (entry.surface.empty()) throw Error(ErrorCode::BadRow, bad_row(line, "empty label"));
    if (row.kind == "skill") {
      entry.kind = QualKind::Skill;
    } else if (row.kind == "occupation") {
      entry.kind = QualKind::Occupation;
    } else if (row.kind == "language") {
      entry.kind = QualKind::Language;
    } else {
      throw Error(ErrorCode::BadRow, bad_row(line, "unknown kind '" + row.kind + "'"));
    }
    if (row.lang == "da") {
      entry.lang = Lang::da;
    } else if (row.lang == "en") {
      entry.lang = Lang::en;
    } else {
      throw Error(ErrorCode::BadRow, bad_row(line, "unknown lang '" + row.lang + "'"));
    }
    entry.canonical_id = text::trim(row.id);
    if (entry.canonical_id.empty()) throw Error(ErrorCode::BadRow, bad_row(line, "empty id"));

    if (const auto it = tax.by_surface_.find(entry.surface); it != tax.by_surface_.end()) {
      auto& existing = tax.entries_[it->second];
      if (precedence(entry.kind) > precedence(existing.kind)) existing = std::move(entry);
      continue;
    }
    tax.by_surface_.emplace(entry.surface, tax.entries_.size());
    tax.entries_.push_back(std::move(entry));
  }
  if (tax.entries_.empty()) throw Error(ErrorCode::EmptyTaxonomy, "no rows");

  for (std::size_t i = 0; i < tax.entries_.size(); ++i) {
    auto toks = text::tokens(tax.entries_[i].surface);
    tax.max_ngram_ = std::max(tax.max_ngram_, toks.size());
    tax.index_[toks.front()].push_back(i);
    tax.entry_tokens_.push_back(std::move(toks));
  }
  return tax;
}

std::vector<TaxonomyRow> read_taxonomy_csv(std::string_view csv) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  std::vector<std::string> fields(1);
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_record = [&] {
    if (any || fields.size() > 1 || !fields.front().empty()) {
      records.push_back(std::move(fields));
      record_lines.push_back(record_line);
    }
    fields.assign(1, {});
    any = false;
    record_line = line;
  };

  for (std::size_t i = 0; i < csv.size(); ++i) {
    const char c = csv[i];
    if (quoted) {
      if (c == '"' && i + 1 < csv.size() && csv[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        if (c == '\n') ++line;
        fields.back() += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c == '\n') {
      ++line;
      end_record();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::BadRow, bad_row(record_line, "unterminated quote"));
  end_record();

  if (records.empty()) return {};
  auto& header = records.front();
  if (!header.empty() && header[0].substr(0, 3) == "\xEF\xBB\xBF") header[0].erase(0, 3);
  for (auto& h : header) h = text::trim(h);
  if (header != std::vector<std::string>{"label", "kind", "lang", "id"}) {
    throw Error(ErrorCode::BadRow, bad_row(1, "header must be label,kind,lang,id"));
  }
  std::vector<TaxonomyRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    if (f.size() != 4) {
      throw Error(ErrorCode::BadRow, bad_row(record_lines[r], "expected 4 columns, got " + std::to_string(f.size())));
    }
    rows.push_back({f[0], text::trim(f[1]), text::trim(f[2]), f[3]});
  }
  return rows;
}

std::vector<Span> extract_spans(std::string_view input, const QualificationTaxonomy& tax) {
  const auto toks = text::tokens(text::normalize(input));
  std::vector<Span> found;
  for (std::size_t start = 0; start < toks.size(); ++start) {
    for (const std::size_t e : tax.starting_with(toks[start])) {
      const auto& want = tax.entry_tokens(e);
      if (start + want.size() <= toks.size() && std::equal(want.begin(), want.end(), toks.begin() + start)) {
        found.push_back({start, want.size(), e});
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Span& a, const Span& b) {
    return a.length != b.length ? a.length > b.length : a.start < b.start;
  });
  std::vector<bool> taken(toks.size(), false);
  std::vector<Span> kept;
  for (const auto& span : found) {
    const auto first = taken.begin() + static_cast<std::ptrdiff_t>(span.start);
    const auto last = first + static_cast<std::ptrdiff_t>(span.length);
    if (std::find(first, last, true) != last) continue;
    std::fill(first, last, true);
    kept.push_back(span);
  }
  std::sort(kept.begin(), kept.end(), [](const Span& a, const Span& b) { return a.start < b.start; });
  return kept;
}

std::vector<QualEntry> extract(std::string_view input, const QualificationTaxonomy& tax) {
  std::set<std::size_t> hits;
  for (const auto& span : extract_spans(input, tax)) hits.insert(span.entry);
  std::vector<QualEntry> out;
  for (const auto i : hits) out.push_back(tax.entries()[i]);
  std::sort(out.begin(), out.end(), [](const QualEntry& a, const QualEntry& b) { return a.surface < b.surface; });
  return out;
}

std::vector<std::string> job_text_fields(const JobPosting& job) { return {job.title, job.company, job.description}; }

std::vector<std::string> candidate_text_fields(const CandidateProfile& cand) {
  std::vector<std::string> fields{cand.headline, cand.resume};
  for (const auto* list : {&cand.keywords, &cand.preferred_titles, &cand.work_experience, &cand.education}) {
    fields.insert(fields.end(), list->begin(), list->end());
  }
  return fields;
}

namespace {

// canonical id -> entry with the smallest surface; independent of field order.
std::map<std::string, QualEntry> extract_fields(const std::vector<std::string>& fields,
                                                const QualificationTaxonomy& tax) {
  std::map<std::string, QualEntry> by_id;
  for (const auto& field : fields) {
    for (auto& entry : extract(field, tax)) {
      auto [it, inserted] = by_id.try_emplace(entry.canonical_id, entry);
      if (!inserted && entry.surface < it->second.surface) it->second = std::move(entry);
    }
  }
  return by_id;
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

MatchResult match(const JobPosting& job, const CandidateProfile& cand, const QualificationTaxonomy& tax,
                  std::string_view default_language) {
  const auto job_hits = extract_fields(job_text_fields(job), tax);
  const auto cand_hits = extract_fields(candidate_text_fields(cand), tax);

  const std::string default_surface = text::normalize(default_language);
  std::string default_id;
  if (const auto* entry = tax.find(default_surface)) default_id = entry->canonical_id;

  MatchResult result;
  for (const auto& [id, entry] : job_hits) {
    if (!cand_hits.contains(id)) continue;
    switch (entry.kind) {
      case QualKind::Language:
        if (entry.surface != default_surface && id != default_id) result.languages.push_back(entry.surface);
        break;
      case QualKind::Occupation: result.occupations.push_back(entry.surface); break;
      case QualKind::Skill: result.skills.push_back(entry.surface); break;
    }
  }
  sort_unique(result.skills);
  sort_unique(result.occupations);
  sort_unique(result.languages);
  return result;
}

}  // namespace mailgen
