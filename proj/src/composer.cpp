#include "mailgen/composer.hpp"

#include <algorithm>

#include "mailgen/error.hpp"
#include "mailgen/text.hpp"

namespace mailgen {

using nlohmann::json;

namespace {

std::size_t count_braces(std::string_view s) {
  std::size_t n = 0;
  for (auto pos = s.find("{}"); pos != std::string_view::npos; pos = s.find("{}", pos + 2)) ++n;
  return n;
}

std::string fill_clause(std::string_view clause, std::string_view value) {
  const auto pos = clause.find("{}");
  return std::string(clause.substr(0, pos)) + std::string(value) + std::string(clause.substr(pos + 2));
}

std::vector<std::string> marked(const std::vector<std::string>& items, bool mark) {
  if (!mark) return items;
  std::vector<std::string> out;
  for (const auto& item : items) out.push_back("{" + item + "}");
  return out;
}

}  // namespace

void GenerationConfig::validate() const {
  for (const auto* clause : {&skill_conj, &occupation_conj, &language_conj}) {
    if (count_braces(*clause) != 1) {
      throw Error(ErrorCode::InvalidConfig, "clause template '" + *clause + "' must contain exactly one {}");
    }
  }
  if (fallback_motivations.empty()) throw Error(ErrorCode::InvalidConfig, "fallback_motivations is empty");
  if (max_expansion_depth < 1) throw Error(ErrorCode::InvalidConfig, "max_expansion_depth must be >= 1");
}

GenerationConfig GenerationConfig::from_json(const json& doc) {
  GenerationConfig c;
  if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "default_language") c.default_language = value.get<std::string>();
      else if (key == "max_expansion_depth") c.max_expansion_depth = value.get<int>();
      else if (key == "fallback_motivations") c.fallback_motivations = value.get<std::vector<std::string>>();
      else if (key == "skill_conj") c.skill_conj = value.get<std::string>();
      else if (key == "occupation_conj") c.occupation_conj = value.get<std::string>();
      else if (key == "language_conj") c.language_conj = value.get<std::string>();
      else if (key == "pair_connector") c.pair_connector = value.get<std::string>();
      else if (key == "slot_fallback") c.slot_fallback = value.get<std::string>();
      else if (key == "recruiter_name") c.recruiter_name = value.get<std::string>();
      else if (key == "apply_link") c.apply_link = value.get<std::string>();
      else if (key == "fallback_candidate_name") c.fallback_candidate_name = value.get<std::string>();
      else if (key == "fallback_job_title") c.fallback_job_title = value.get<std::string>();
      else if (key == "fallback_company") c.fallback_company = value.get<std::string>();
      else if (key == "mark_fills") c.mark_fills = value.get<bool>();
      else if (key == "punctuation") c.postprocess.punctuation = value.get<std::string>();
      else if (key == "abbreviations") c.postprocess.abbreviations = value.get<std::vector<std::string>>();
      else throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  c.validate();
  return c;
}

json GenerationConfig::to_json() const {
  return {{"seed", seed},
          {"default_language", default_language},
          {"max_expansion_depth", max_expansion_depth},
          {"fallback_motivations", fallback_motivations},
          {"skill_conj", skill_conj},
          {"occupation_conj", occupation_conj},
          {"language_conj", language_conj},
          {"pair_connector", pair_connector},
          {"slot_fallback", slot_fallback},
          {"recruiter_name", recruiter_name},
          {"apply_link", apply_link},
          {"fallback_candidate_name", fallback_candidate_name},
          {"fallback_job_title", fallback_job_title},
          {"fallback_company", fallback_company},
          {"mark_fills", mark_fills},
          {"punctuation", postprocess.punctuation},
          {"abbreviations", postprocess.abbreviations}};
}

SelectedTemplate select_template(const JobPosting& job, const CandidateProfile& cand, const ComponentLibrary& lib,
                                 Rng& rng) {
  const std::string company = text::normalize_company(job.company);
  if (!company.empty()) {
    if (const auto it = lib.company_templates.find(company); it != lib.company_templates.end() && !it->second.empty()) {
      return {it->second[rng.pick(it->second.size())], TemplateSource::CompanySpecific};
    }
  }
  const bool follower =
      !company.empty() && std::any_of(cand.following.begin(), cand.following.end(),
                                      [&](const std::string& f) { return text::normalize_company(f) == company; });
  const auto& skeletons = lib.contents(follower ? kSkeletonFollower : kSkeletonNonFollower);
  return {skeletons[rng.pick(skeletons.size())],
          follower ? TemplateSource::SynthesizedFollower : TemplateSource::SynthesizedNonFollower};
}

namespace {

using Chooser = std::function<std::size_t(int depth, const std::string& component, std::size_t options)>;

Expansion expand_with(std::string_view template_text, const ComponentLibrary& lib, const GenerationConfig& config,
                      const Chooser& choose) {
  Expansion result{std::string(template_text), {}};
  for (int depth = 1;; ++depth) {
    const auto markers = find_markers(result.text);
    std::vector<const MarkerSpan*> functional;
    for (const auto& m : markers) {
      const auto kind = lib.kind_of(m.name);
      if (!kind) throw Error(ErrorCode::UnknownComponent, m.name);
      if (*kind == ComponentKind::Functional) functional.push_back(&m);
    }
    if (functional.empty()) return result;
    if (depth > config.max_expansion_depth) {
      throw Error(ErrorCode::DepthExceeded, functional.front()->name + " still unexpanded after " +
                                                std::to_string(config.max_expansion_depth) + " passes");
    }

    std::string next;
    std::size_t copied = 0;
    for (const auto* m : functional) {
      const auto& options = lib.contents(m->name);
      if (options.empty()) throw Error(ErrorCode::UnknownComponent, m->name + " has no content");
      const std::size_t index = choose(depth, m->name, options.size());
      next.append(result.text, copied, m->pos - copied);
      next += options[index];
      copied = m->pos + m->length;
      result.trace.push_back({depth, m->name, index});
    }
    next.append(result.text, copied);
    result.text = std::move(next);
  }
}

}  // namespace

Expansion expand(std::string_view template_text, const ComponentLibrary& lib, Rng& rng, const GenerationConfig& config) {
  return expand_with(template_text, lib, config,
                     [&](int, const std::string&, std::size_t options) { return rng.pick(options); });
}

std::string replay_expansion(std::string_view template_text, const ComponentLibrary& lib, const ExpansionTrace& trace,
                             const GenerationConfig& config) {
  std::size_t step = 0;
  auto forced = [&](int depth, const std::string& component, std::size_t options) {
    if (step >= trace.size() || trace[step].depth != depth || trace[step].component != component ||
        trace[step].chosen_index >= options) {
      throw Error(ErrorCode::MalformedDocument, "expansion trace does not match at step " + std::to_string(step));
    }
    return trace[step++].chosen_index;
  };
  auto text = expand_with(template_text, lib, config, forced).text;
  if (step != trace.size()) throw Error(ErrorCode::MalformedDocument, "expansion trace has unused steps");
  return text;
}

std::string join_list(const std::vector<std::string>& items) {
  if (items.empty()) throw Error(ErrorCode::EmptyList, "join_list needs at least one item");
  std::string out = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) {
    out += (i + 1 == items.size()) ? " og " : ", ";
    out += items[i];
  }
  return out;
}

std::string compose_motivation(const MatchResult& m, const std::vector<std::string>& motivation_templates, Rng& rng,
                               const GenerationConfig& config) {
  if (motivation_templates.empty()) throw Error(ErrorCode::NoMotivationTemplates, "library has no motivation entries");
  if (m.empty()) return config.fallback_motivations[rng.pick(config.fallback_motivations.size())];

  const std::string& tmpl = motivation_templates[rng.pick(motivation_templates.size())];

  auto clause = [&](const std::vector<std::string>& items, const std::string& conj) {
    return items.empty() ? std::string() : fill_clause(conj, join_list(marked(items, config.mark_fills)));
  };
  const std::string skills = clause(m.skills, config.skill_conj);
  const std::string occupations = clause(m.occupations, config.occupation_conj);
  const std::string languages = clause(m.languages, config.language_conj);

  enum class Role { Skills, Occupations };
  struct Slot {
    std::size_t pos;
    std::size_t length;
    Role role;
  };
  std::vector<Slot> slots;
  for (auto pos = tmpl.find("{}"); pos != std::string::npos; pos = tmpl.find("{}", pos + 2)) {
    slots.push_back({pos, 2, Role::Skills});
  }
  for (const auto& marker : find_markers(tmpl)) {
    if (marker.name == kMatchedSkills) slots.push_back({marker.pos, marker.length, Role::Skills});
    if (marker.name == kMatchedOccupations) slots.push_back({marker.pos, marker.length, Role::Occupations});
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.pos < b.pos; });
  if (slots.size() > 2) throw Error(ErrorCode::InvalidMotivationTemplate, "more than two slots in '" + tmpl + "'");
  if (slots.empty()) return tmpl;

  auto join_present = [&](std::vector<std::string> parts) {
    std::string out;
    for (const auto& part : parts) {
      if (part.empty()) continue;
      if (!out.empty()) out += config.pair_connector;
      out += part;
    }
    return out;
  };

  std::vector<std::string> values;
  if (slots.size() == 1) {
    values.push_back(join_present({skills, occupations, languages}));
  } else {
    // Positional slots take skills then occupations; named markers keep their role.
    if (tmpl.compare(slots[1].pos, 2, "{}") == 0) slots[1].role = Role::Occupations;
    for (const auto& slot : slots) {
      const std::string& side = slot.role == Role::Skills ? skills : occupations;
      values.push_back(side.empty() ? config.slot_fallback : side);
    }
    values.back() = join_present({values.back(), languages});
  }

  std::string out;
  std::size_t copied = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    out.append(tmpl, copied, slots[i].pos - copied);
    out += values[i];
    copied = slots[i].pos + slots[i].length;
  }
  out.append(tmpl, copied);
  return out;
}

GeneratedEmail fill_slots(std::string_view expanded_template, const JobPosting& job, const CandidateProfile& cand,
                          const MatchResult& m, std::string_view motivation_text, const GenerationConfig& config) {
  auto pair_value = [&](const std::string& value, const std::string& fallback) {
    const std::string& v = value.empty() ? fallback : value;
    return config.mark_fills ? "{" + v + "}" : v;
  };
  auto list_value = [&](const std::vector<std::string>& items) {
    return items.empty() ? config.slot_fallback : join_list(marked(items, config.mark_fills));
  };

  GeneratedEmail email;
  email.template_text = std::string(expanded_template);

  // Motivation text may itself hold auto-fill markers; it is resolved one
  // level down and may not nest another motivation.
  std::function<std::string(std::string_view, bool)> resolve = [&](std::string_view source, bool allow_motivation) {
    std::string out;
    std::size_t copied = 0;
    for (const auto& marker : find_markers(source)) {
      std::string value;
      const auto& name = marker.name;
      if (name == "job_title") value = pair_value(job.title, config.fallback_job_title);
      else if (name == "company_name") value = pair_value(job.company, config.fallback_company);
      else if (name == "candidate_name") value = pair_value(cand.name, config.fallback_candidate_name);
      else if (name == "recruiter_name") value = config.recruiter_name;
      else if (name == "apply_link") value = config.apply_link;
      else if (name == kMatchedSkills) value = list_value(m.skills);
      else if (name == kMatchedOccupations) value = list_value(m.occupations);
      else if (name == kMotivation && allow_motivation) value = resolve(motivation_text, false);
      else throw Error(ErrorCode::UnfillableSlot, name);

      out.append(source.substr(copied, marker.pos - copied));
      out += value;
      copied = marker.pos + marker.length;
      email.fills.emplace_back(name, std::move(value));
    }
    out.append(source.substr(copied));
    return out;
  };
  email.body = resolve(expanded_template, true);
  return email;
}

GeneratedEmail generate(const JobPosting& job, const CandidateProfile& cand, const ComponentLibrary& lib,
                        const QualificationTaxonomy& tax, const GenerationConfig& config) {
  Rng rng(config.seed);
  const auto selected = select_template(job, cand, lib, rng);
  auto expansion = expand(selected.text, lib, rng, config);
  const auto matched = match(job, cand, tax, config.default_language);

  std::string motivation;
  const auto markers = find_markers(expansion.text);
  if (std::any_of(markers.begin(), markers.end(), [](const MarkerSpan& s) { return s.name == kMotivation; })) {
    motivation = compose_motivation(matched, lib.contents(kMotivation), rng, config);
  }

  auto email = fill_slots(expansion.text, job, cand, matched, motivation, config);
  email.body = postprocess(email.body, config.postprocess).value;
  email.template_source = selected.source;
  email.seed = config.seed;
  email.source_template = selected.text;
  email.trace = std::move(expansion.trace);
  return email;
}

}  // namespace mailgen
