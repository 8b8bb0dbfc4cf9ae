#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mailgen {

struct JobPosting {
  std::string id;
  std::string title;
  std::string company;
  std::string description;
  // Set when title or company is legitimately empty; generation falls back
  // to configured placeholders.
  bool degenerate = false;

  bool operator==(const JobPosting&) const = default;
};

struct CandidateProfile {
  std::string id;
  std::string name;
  std::string headline;
  std::vector<std::string> keywords;
  std::vector<std::string> preferred_titles;
  std::vector<std::string> work_experience;
  std::vector<std::string> education;
  std::string resume;
  std::set<std::string> following;

  bool operator==(const CandidateProfile&) const = default;
};

enum class ComponentKind { Functional, CaseSpecific, AutoFill };

// Component names with fixed roles in the pipeline.
inline constexpr std::string_view kSkeletonFollower = "skeleton_follower";
inline constexpr std::string_view kSkeletonNonFollower = "skeleton_non_follower";
inline constexpr std::string_view kMotivation = "motivation";
inline constexpr std::string_view kMatchedSkills = "matched_skills";
inline constexpr std::string_view kMatchedOccupations = "matched_occupations";

std::string_view to_string(ComponentKind kind);
ComponentKind component_kind_from_string(std::string_view s);

// A `[% name %]` placeholder.
struct SlotMarker {
  std::string component_name;

  std::string str() const { return "[% " + component_name + " %]"; }
};

bool is_component_name(std::string_view name);

enum class TemplateSource { CompanySpecific, SynthesizedFollower, SynthesizedNonFollower };

std::string_view to_string(TemplateSource source);

struct TraceStep {
  int depth = 0;
  std::string component;
  std::size_t chosen_index = 0;

  bool operator==(const TraceStep&) const = default;
};

using ExpansionTrace = std::vector<TraceStep>;

struct GeneratedEmail {
  std::string body;
  TemplateSource template_source = TemplateSource::SynthesizedNonFollower;
  std::vector<std::pair<std::string, std::string>> fills;
  std::uint64_t seed = 0;
  // Selected template, its full expansion before slot filling, and the
  // choices that led from one to the other.
  std::string source_template;
  std::string template_text;
  ExpansionTrace trace;
};

JobPosting job_from_json(const nlohmann::json& doc);
CandidateProfile candidate_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const JobPosting& job);
nlohmann::json to_json(const CandidateProfile& cand);
nlohmann::json to_json(const GeneratedEmail& email);

// Parses both documents (JSON text). Throws Error{MalformedDocument|MissingId}.
std::pair<JobPosting, CandidateProfile> load_pair(std::string_view job_document,
                                                  std::string_view candidate_document);

}  // namespace mailgen
