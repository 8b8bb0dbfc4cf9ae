#include "mailgen/model.hpp"

#include "mailgen/error.hpp"

namespace mailgen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::MissingId: return "MissingId";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::MalformedMarkup: return "MalformedMarkup";
    case ErrorCode::NoSkeletons: return "NoSkeletons";
    case ErrorCode::InvalidMotivationTemplate: return "InvalidMotivationTemplate";
    case ErrorCode::CorruptLibrary: return "CorruptLibrary";
    case ErrorCode::BadRow: return "BadRow";
    case ErrorCode::EmptyTaxonomy: return "EmptyTaxonomy";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::NoMotivationTemplates: return "NoMotivationTemplates";
    case ErrorCode::UnfillableSlot: return "UnfillableSlot";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MissingCondition: return "MissingCondition";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Functional: return "functional";
    case ComponentKind::CaseSpecific: return "case_specific";
    case ComponentKind::AutoFill: return "auto_fill";
  }
  return "functional";
}

ComponentKind component_kind_from_string(std::string_view s) {
  if (s == "functional") return ComponentKind::Functional;
  if (s == "case_specific") return ComponentKind::CaseSpecific;
  if (s == "auto_fill") return ComponentKind::AutoFill;
  throw Error(ErrorCode::MalformedDocument, "unknown component kind '" + std::string(s) + "'");
}

bool is_component_name(std::string_view name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  for (char c : name) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

std::string_view to_string(TemplateSource source) {
  switch (source) {
    case TemplateSource::CompanySpecific: return "company_specific";
    case TemplateSource::SynthesizedFollower: return "synthesized_follower";
    case TemplateSource::SynthesizedNonFollower: return "synthesized_non_follower";
  }
  return "synthesized_non_follower";
}

namespace {

using nlohmann::json;

std::string string_field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return {};
  if (!it->is_string()) throw Error(ErrorCode::MalformedDocument, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> list_field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return {};
  if (!it->is_array()) throw Error(ErrorCode::MalformedDocument, std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : *it) {
    if (!item.is_string()) {
      throw Error(ErrorCode::MalformedDocument, std::string("field '") + key + "' must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string required_id(const json& doc, const char* what) {
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, std::string(what) + " document must be a JSON object");
  std::string id = string_field(doc, "id");
  if (id.empty()) throw Error(ErrorCode::MissingId, std::string(what) + " document has no id");
  return id;
}

json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, std::string(what) + ": " + e.what());
  }
}

}  // namespace

JobPosting job_from_json(const json& doc) {
  JobPosting job;
  job.id = required_id(doc, "job");
  job.title = string_field(doc, "title");
  job.company = string_field(doc, "company");
  job.description = string_field(doc, "description");
  if (auto it = doc.find("degenerate"); it != doc.end()) {
    if (!it->is_boolean()) throw Error(ErrorCode::MalformedDocument, "field 'degenerate' must be a boolean");
    job.degenerate = it->get<bool>();
  }
  if ((job.title.empty() || job.company.empty()) && !job.degenerate) {
    throw Error(ErrorCode::MalformedDocument,
                "job '" + job.id + "' has an empty title or company but is not flagged degenerate");
  }
  return job;
}

CandidateProfile candidate_from_json(const json& doc) {
  CandidateProfile cand;
  cand.id = required_id(doc, "candidate");
  cand.name = string_field(doc, "name");
  cand.headline = string_field(doc, "headline");
  cand.keywords = list_field(doc, "keywords");
  cand.preferred_titles = list_field(doc, "preferred_titles");
  cand.work_experience = list_field(doc, "work_experience");
  cand.education = list_field(doc, "education");
  cand.resume = string_field(doc, "resume");
  for (auto& company : list_field(doc, "following")) {
    if (company.empty()) throw Error(ErrorCode::MalformedDocument, "candidate '" + cand.id + "' follows an empty company name");
    cand.following.insert(std::move(company));
  }
  return cand;
}

json to_json(const JobPosting& job) {
  json doc = {{"id", job.id}, {"title", job.title}, {"company", job.company}, {"description", job.description}};
  if (job.degenerate) doc["degenerate"] = true;
  return doc;
}

json to_json(const CandidateProfile& cand) {
  return {{"id", cand.id},
          {"name", cand.name},
          {"headline", cand.headline},
          {"keywords", cand.keywords},
          {"preferred_titles", cand.preferred_titles},
          {"work_experience", cand.work_experience},
          {"education", cand.education},
          {"resume", cand.resume},
          {"following", json(std::vector<std::string>(cand.following.begin(), cand.following.end()))}};
}

json to_json(const GeneratedEmail& email) {
  json fills = json::array();
  for (const auto& [name, value] : email.fills) fills.push_back({{"component", name}, {"text", value}});
  json trace = json::array();
  for (const auto& step : email.trace) {
    trace.push_back({{"depth", step.depth}, {"component", step.component}, {"index", step.chosen_index}});
  }
  return {{"body", email.body},
          {"template_source", std::string(to_string(email.template_source))},
          {"fills", fills},
          {"seed", email.seed},
          {"source_template", email.source_template},
          {"template", email.template_text},
          {"trace", trace}};
}

std::pair<JobPosting, CandidateProfile> load_pair(std::string_view job_document,
                                                  std::string_view candidate_document) {
  return {job_from_json(parse_document(job_document, "job")),
          candidate_from_json(parse_document(candidate_document, "candidate"))};
}

}  // namespace mailgen
