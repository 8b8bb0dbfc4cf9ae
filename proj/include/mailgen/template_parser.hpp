#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mailgen/model.hpp"

namespace mailgen {

struct ComponentSpec {
  std::string name;
  ComponentKind kind = ComponentKind::Functional;
  std::string description;
};

// Ordered inventory of the tags an annotator may use.
class ComponentRegistry {
 public:
  ComponentRegistry() = default;
  explicit ComponentRegistry(std::vector<ComponentSpec> specs);

  // Throws Error{MalformedDocument} on a duplicate or ill-formed name.
  void add(ComponentSpec spec);

  std::optional<ComponentKind> kind_of(std::string_view name) const;
  bool contains(std::string_view name) const { return kind_of(name).has_value(); }
  const std::vector<ComponentSpec>& specs() const { return specs_; }

  // The shipped fourteen-component inventory.
  static ComponentRegistry fixture();
  static ComponentRegistry from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

 private:
  std::vector<ComponentSpec> specs_;
};

enum class Audience { Follower, NonFollower };

struct AnnotatedTemplate {
  std::string id;
  std::optional<std::string> company;
  Audience audience = Audience::NonFollower;
  // Body markup, i.e. the content of the <template> root element.
  std::string markup;
};

// Reads a whole template document: `<template audience=".." company="..">body</template>`.
// The body is trimmed of surrounding whitespace.
AnnotatedTemplate read_template_document(std::string_view document, std::string id);

using ComponentEntry = std::pair<std::string, std::string>;

// Emits one entry per element, children before their parent, each child
// replaced in its parent's content by its slot marker. The root residual
// is emitted last under the skeleton key for the template's audience.
std::vector<ComponentEntry> parse_template(const AnnotatedTemplate& t, const ComponentRegistry& registry);

// Company template body with Functional elements inlined as their text and
// CaseSpecific/AutoFill elements replaced by their markers.
std::string flatten_template(const AnnotatedTemplate& t, const ComponentRegistry& registry);

struct ComponentLibrary {
  std::map<std::string, std::vector<std::string>> entries;
  std::map<std::string, ComponentKind> kinds;
  std::map<std::string, std::vector<std::string>> company_templates;

  bool operator==(const ComponentLibrary&) const = default;

  const std::vector<std::string>& contents(std::string_view name) const;
  std::optional<ComponentKind> kind_of(std::string_view name) const;
};

ComponentLibrary build_library(const std::vector<AnnotatedTemplate>& templates, const ComponentRegistry& registry);

// Throws Error{NoSkeletons|UnknownComponent|InvalidMotivationTemplate}.
void validate_library(const ComponentLibrary& lib);

std::string save_library(const ComponentLibrary& lib);
ComponentLibrary load_library(std::string_view bytes);

struct MarkerSpan {
  std::size_t pos = 0;
  std::size_t length = 0;
  std::string name;
};

// All well-formed `[% name %]` markers, left to right.
std::vector<MarkerSpan> find_markers(std::string_view text);

// Number of `{}` plus named matched_* markers in a motivation template.
std::size_t motivation_slot_count(std::string_view motivation_template);

}  // namespace mailgen
