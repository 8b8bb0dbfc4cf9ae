#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mailgen/model.hpp"
#include "mailgen/postprocess.hpp"
#include "mailgen/rng.hpp"
#include "mailgen/taxonomy.hpp"
#include "mailgen/template_parser.hpp"

namespace mailgen {

struct GenerationConfig {
  std::uint64_t seed = 0;
  std::string default_language = "dansk";
  int max_expansion_depth = 16;
  std::vector<std::string> fallback_motivations = {
      "Vi tror, at din profil passer godt til stillingen.",
      "Vi mener, at du har en relevant baggrund for jobbet.",
      "Din erfaring gør dig til en interessant kandidat til stillingen.",
  };
  // Clause templates, one `{}` each.
  std::string skill_conj = "din erfaring med {}";
  std::string occupation_conj = "din baggrund som {}";
  std::string language_conj = "dine sprogkundskaber i {}";
  std::string pair_connector = " samt ";
  // Stands in for the missing side of a two-slot motivation.
  std::string slot_fallback = "dine kvalifikationer";

  std::string recruiter_name = "Rekrutteringsteamet";
  std::string apply_link = "https://job.example.dk/ansog";
  std::string fallback_candidate_name = "kandidat";
  std::string fallback_job_title = "stillingen";
  std::string fallback_company = "virksomheden";

  // Wrap case-specific insertions in braces, e.g. "{python}".
  bool mark_fills = false;
  PostprocessConfig postprocess;

  // Throws Error{InvalidConfig}.
  void validate() const;
  static GenerationConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct SelectedTemplate {
  std::string text;
  TemplateSource source = TemplateSource::SynthesizedNonFollower;
};

SelectedTemplate select_template(const JobPosting& job, const CandidateProfile& cand, const ComponentLibrary& lib,
                                 Rng& rng);

struct Expansion {
  std::string text;
  ExpansionTrace trace;
};

// Replaces Functional markers pass by pass until none remain.
// Throws Error{DepthExceeded|UnknownComponent}.
Expansion expand(std::string_view template_text, const ComponentLibrary& lib, Rng& rng, const GenerationConfig& config);

// Re-runs an expansion with every choice forced from `trace`.
std::string replay_expansion(std::string_view template_text, const ComponentLibrary& lib, const ExpansionTrace& trace,
                             const GenerationConfig& config);

// "a", "a og b", "a, b og c", ...  Throws Error{EmptyList}.
std::string join_list(const std::vector<std::string>& items);

std::string compose_motivation(const MatchResult& m, const std::vector<std::string>& motivation_templates, Rng& rng,
                               const GenerationConfig& config);

// Resolves every remaining marker. The body is returned unpostprocessed.
// Throws Error{UnfillableSlot}.
GeneratedEmail fill_slots(std::string_view expanded_template, const JobPosting& job, const CandidateProfile& cand,
                          const MatchResult& m, std::string_view motivation_text, const GenerationConfig& config);

GeneratedEmail generate(const JobPosting& job, const CandidateProfile& cand, const ComponentLibrary& lib,
                        const QualificationTaxonomy& tax, const GenerationConfig& config);

}  // namespace mailgen
