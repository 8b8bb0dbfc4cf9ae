#include "mailgen/template_parser.hpp"

#include <algorithm>
#include <set>

#include "mailgen/error.hpp"
#include "mailgen/text.hpp"

namespace mailgen {

using nlohmann::json;

ComponentRegistry::ComponentRegistry(std::vector<ComponentSpec> specs) {
  for (auto& spec : specs) add(std::move(spec));
}

void ComponentRegistry::add(ComponentSpec spec) {
  if (!is_component_name(spec.name)) {
    throw Error(ErrorCode::MalformedDocument, "invalid component name '" + spec.name + "'");
  }
  if (spec.name == kSkeletonFollower || spec.name == kSkeletonNonFollower) {
    throw Error(ErrorCode::MalformedDocument, "'" + spec.name + "' is reserved for skeletons");
  }
  if (contains(spec.name)) throw Error(ErrorCode::MalformedDocument, "duplicate component '" + spec.name + "'");
  specs_.push_back(std::move(spec));
}

std::optional<ComponentKind> ComponentRegistry::kind_of(std::string_view name) const {
  for (const auto& spec : specs_) {
    if (spec.name == name) return spec.kind;
  }
  return std::nullopt;
}

ComponentRegistry ComponentRegistry::fixture() {
  using K = ComponentKind;
  return ComponentRegistry({
      {"greeting", K::Functional, "Opening salutation"},
      {"candidate_name", K::AutoFill, "Candidate's name"},
      {"intro", K::Functional, "Recruiter introduction"},
      {"job_mention", K::Functional, "Sentence presenting the job"},
      {"job_title", K::AutoFill, "Title of the job posting"},
      {"company_name", K::AutoFill, "Hiring company"},
      {"follower_note", K::Functional, "Remark that the candidate follows the company"},
      {"motivation", K::CaseSpecific, "Why the candidate fits the job"},
      {"matched_skills", K::CaseSpecific, "Skills shared by job and candidate"},
      {"matched_occupations", K::CaseSpecific, "Occupations shared by job and candidate"},
      {"cta", K::Functional, "Call to action"},
      {"apply_link", K::AutoFill, "Link to the application form"},
      {"signature", K::Functional, "Closing and sign-off"},
      {"recruiter_name", K::AutoFill, "Recruiter's name"},
  });
}

ComponentRegistry ComponentRegistry::from_json(const json& doc) {
  ComponentRegistry registry;
  try {
    for (const auto& item : doc.at("components")) {
      registry.add({item.at("name").get<std::string>(),
                    component_kind_from_string(item.at("kind").get<std::string>()),
                    item.value("description", std::string())});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("registry: ") + e.what());
  }
  return registry;
}

json ComponentRegistry::to_json() const {
  json components = json::array();
  for (const auto& spec : specs_) {
    components.push_back(
        {{"name", spec.name}, {"kind", std::string(mailgen::to_string(spec.kind))}, {"description", spec.description}});
  }
  return {{"components", components}};
}

std::vector<MarkerSpan> find_markers(std::string_view text) {
  std::vector<MarkerSpan> out;
  std::size_t pos = 0;
  while ((pos = text.find("[% ", pos)) != std::string_view::npos) {
    const auto close = text.find(" %]", pos + 3);
    if (close == std::string_view::npos) break;
    const auto name = text.substr(pos + 3, close - pos - 3);
    if (is_component_name(name)) {
      out.push_back({pos, close + 3 - pos, std::string(name)});
      pos = close + 3;
    } else {
      pos += 1;
    }
  }
  return out;
}

std::size_t motivation_slot_count(std::string_view motivation_template) {
  std::size_t count = 0;
  for (auto pos = motivation_template.find("{}"); pos != std::string_view::npos;
       pos = motivation_template.find("{}", pos + 2)) {
    ++count;
  }
  for (const auto& m : find_markers(motivation_template)) {
    if (m.name == kMatchedSkills || m.name == kMatchedOccupations) ++count;
  }
  return count;
}

namespace {

struct Node {
  std::string name;
  // Alternating text runs and child references; child < 0 means text.
  struct Piece {
    std::string text;
    int child = -1;
  };
  std::vector<Piece> pieces;
  std::vector<Node> children;

  void add_text(std::string_view s) {
    if (pieces.empty() || pieces.back().child >= 0) pieces.push_back({});
    pieces.back().text.append(s);
  }
};

class MarkupReader {
 public:
  MarkupReader(std::string_view src, const ComponentRegistry& registry, const std::string& id)
      : src_(src), registry_(registry), id_(id) {}

  Node read() {
    Node root;
    read_content(root, /*is_root=*/true);
    return root;
  }

 private:
  [[noreturn]] void malformed(std::size_t at, const std::string& why) const {
    throw Error(ErrorCode::MalformedMarkup, "template '" + id_ + "' at byte " + std::to_string(at) + ": " + why);
  }

  std::string read_tag_name(std::size_t at) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           ((src_[pos_] >= 'a' && src_[pos_] <= 'z') || (src_[pos_] >= '0' && src_[pos_] <= '9') || src_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start || pos_ >= src_.size() || src_[pos_] != '>') malformed(at, "bad tag syntax");
    std::string name(src_.substr(start, pos_ - start));
    ++pos_;
    return name;
  }

  void read_content(Node& node, bool is_root) {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '<') {
        const std::size_t at = pos_;
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
          pos_ += 2;
          const std::string name = read_tag_name(at);
          if (is_root) malformed(at, "unexpected closing tag </" + name + ">");
          if (name != node.name) malformed(at, "</" + name + "> closes <" + node.name + ">");
          return;
        }
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] >= 'a' && src_[pos_ + 1] <= 'z') {
          pos_ += 1;
          std::string name = read_tag_name(at);
          if (!registry_.contains(name)) {
            throw Error(ErrorCode::UnknownTag, "template '" + id_ + "': <" + name + ">");
          }
          Node child;
          child.name = std::move(name);
          read_content(child, /*is_root=*/false);
          node.pieces.push_back({{}, static_cast<int>(node.children.size())});
          node.children.push_back(std::move(child));
          continue;
        }
        malformed(at, "stray '<'");
      } else if (c == '&') {
        read_entity(node);
      } else if (c == '[' && src_.substr(pos_, 2) == "[%") {
        read_literal_marker(node);
      } else {
        const auto next = src_.find_first_of("<&[", pos_ + 1);
        const auto end = next == std::string_view::npos ? src_.size() : next;
        node.add_text(src_.substr(pos_, end - pos_));
        pos_ = end;
      }
    }
    if (!is_root) malformed(src_.size(), "<" + node.name + "> is never closed");
  }

  void read_entity(Node& node) {
    static constexpr std::pair<std::string_view, std::string_view> kEntities[] = {
        {"&lt;", "<"}, {"&gt;", ">"}, {"&amp;", "&"}, {"&quot;", "\""}, {"&apos;", "'"}};
    for (const auto& [entity, value] : kEntities) {
      if (src_.substr(pos_, entity.size()) == entity) {
        node.add_text(value);
        pos_ += entity.size();
        return;
      }
    }
    node.add_text("&");
    ++pos_;
  }

  void read_literal_marker(Node& node) {
    const auto close = src_.find(" %]", pos_);
    const auto markers =
        close == std::string_view::npos ? std::vector<MarkerSpan>{} : find_markers(src_.substr(pos_, close + 3 - pos_));
    if (markers.empty() || markers.front().pos != 0) malformed(pos_, "malformed slot marker");
    const auto& m = markers.front();
    if (!registry_.contains(m.name)) throw Error(ErrorCode::UnknownTag, "template '" + id_ + "': [% " + m.name + " %]");
    node.add_text(src_.substr(pos_, m.length));
    pos_ += m.length;
  }

  std::string_view src_;
  const ComponentRegistry& registry_;
  const std::string& id_;
  std::size_t pos_ = 0;
};

std::string concat_pieces(const Node& node, const std::vector<std::string>& child_text) {
  std::string out;
  for (const auto& piece : node.pieces) {
    out += piece.child < 0 ? piece.text : child_text[static_cast<std::size_t>(piece.child)];
  }
  return out;
}

std::string reduce(const Node& node, std::vector<ComponentEntry>& out) {
  std::vector<std::string> child_text;
  for (const auto& child : node.children) {
    std::string content = reduce(child, out);
    out.emplace_back(child.name, std::move(content));
    child_text.push_back(SlotMarker{child.name}.str());
  }
  return concat_pieces(node, child_text);
}

std::string flatten(const Node& node, const ComponentRegistry& registry) {
  std::vector<std::string> child_text;
  for (const auto& child : node.children) {
    if (registry.kind_of(child.name) == ComponentKind::Functional) {
      child_text.push_back(flatten(child, registry));
    } else {
      child_text.push_back(SlotMarker{child.name}.str());
    }
  }
  return concat_pieces(node, child_text);
}

std::string_view skeleton_key(Audience audience) {
  return audience == Audience::Follower ? kSkeletonFollower : kSkeletonNonFollower;
}

std::string decode_attribute(std::string_view raw) {
  static constexpr std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&quot;", '"'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&apos;", '\''}};
  std::string out;
  std::size_t i = 0;
  while (i < raw.size()) {
    const auto* hit = std::find_if(std::begin(kEntities), std::end(kEntities),
                                   [&](const auto& e) { return raw.substr(i, e.first.size()) == e.first; });
    if (raw[i] == '&' && hit != std::end(kEntities)) {
      out += hit->second;
      i += hit->first.size();
    } else {
      out += raw[i++];
    }
  }
  return out;
}

}  // namespace

AnnotatedTemplate read_template_document(std::string_view document, std::string id) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::MalformedMarkup, "template '" + id + "': " + why);
  };
  if (document.substr(0, 3) == "\xEF\xBB\xBF") document.remove_prefix(3);
  const auto start = document.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos || document.substr(start, 9) != "<template") {
    throw fail("document must start with <template>");
  }
  const auto open_end = document.find('>', start);
  if (open_end == std::string_view::npos) throw fail("unterminated <template> tag");
  const auto close = document.rfind("</template>");
  if (close == std::string_view::npos || close < open_end) throw fail("missing </template>");
  if (document.find_first_not_of(" \t\r\n", close + 11) != std::string_view::npos) {
    throw fail("content after </template>");
  }

  AnnotatedTemplate t;
  t.id = std::move(id);
  std::string_view attrs = document.substr(start + 9, open_end - start - 9);
  while (true) {
    const auto key_begin = attrs.find_first_not_of(" \t\r\n");
    if (key_begin == std::string_view::npos) break;
    const auto eq = attrs.find('=', key_begin);
    if (eq == std::string_view::npos || eq + 1 >= attrs.size() || attrs[eq + 1] != '"') {
      throw fail("bad attribute syntax");
    }
    const auto value_end = attrs.find('"', eq + 2);
    if (value_end == std::string_view::npos) throw fail("unterminated attribute value");
    const std::string key = text::trim(attrs.substr(key_begin, eq - key_begin));
    const std::string value = decode_attribute(attrs.substr(eq + 2, value_end - eq - 2));
    if (key == "audience") {
      if (value == "follower") {
        t.audience = Audience::Follower;
      } else if (value == "non_follower") {
        t.audience = Audience::NonFollower;
      } else {
        throw fail("audience must be follower or non_follower");
      }
    } else if (key == "company") {
      if (text::trim(value).empty()) throw fail("empty company attribute");
      t.company = value;
    } else {
      throw fail("unknown attribute '" + key + "'");
    }
    attrs.remove_prefix(value_end + 1);
  }
  t.markup = text::trim(document.substr(open_end + 1, close - open_end - 1));
  return t;
}

std::vector<ComponentEntry> parse_template(const AnnotatedTemplate& t, const ComponentRegistry& registry) {
  const Node root = MarkupReader(t.markup, registry, t.id).read();
  std::vector<ComponentEntry> out;
  std::string skeleton = reduce(root, out);
  out.emplace_back(std::string(skeleton_key(t.audience)), std::move(skeleton));
  return out;
}

std::string flatten_template(const AnnotatedTemplate& t, const ComponentRegistry& registry) {
  return flatten(MarkupReader(t.markup, registry, t.id).read(), registry);
}

const std::vector<std::string>& ComponentLibrary::contents(std::string_view name) const {
  static const std::vector<std::string> kEmpty;
  const auto it = entries.find(std::string(name));
  return it == entries.end() ? kEmpty : it->second;
}

std::optional<ComponentKind> ComponentLibrary::kind_of(std::string_view name) const {
  const auto it = kinds.find(std::string(name));
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

ComponentLibrary build_library(const std::vector<AnnotatedTemplate>& templates, const ComponentRegistry& registry) {
  std::map<std::string, std::set<std::string>> entries;
  std::map<std::string, std::set<std::string>> company;
  for (const auto& t : templates) {
    if (t.company) {
      company[text::normalize_company(*t.company)].insert(flatten_template(t, registry));
      continue;
    }
    for (auto& [name, content] : parse_template(t, registry)) entries[name].insert(std::move(content));
  }

  ComponentLibrary lib;
  for (auto& [name, set] : entries) lib.entries[name].assign(set.begin(), set.end());
  for (auto& [name, set] : company) lib.company_templates[name].assign(set.begin(), set.end());
  for (const auto& spec : registry.specs()) lib.kinds[spec.name] = spec.kind;
  lib.kinds[std::string(kSkeletonFollower)] = ComponentKind::Functional;
  lib.kinds[std::string(kSkeletonNonFollower)] = ComponentKind::Functional;
  validate_library(lib);
  return lib;
}

void validate_library(const ComponentLibrary& lib) {
  for (auto key : {kSkeletonFollower, kSkeletonNonFollower}) {
    if (lib.contents(key).empty()) {
      throw Error(ErrorCode::NoSkeletons, "no general template yields a '" + std::string(key) + "' entry");
    }
  }
  auto check_markers = [&](const std::string& owner, const std::string& content) {
    for (const auto& m : find_markers(content)) {
      const auto kind = lib.kind_of(m.name);
      if (!kind) throw Error(ErrorCode::UnknownComponent, "'" + owner + "' references unregistered '" + m.name + "'");
      if (*kind == ComponentKind::Functional && lib.contents(m.name).empty()) {
        throw Error(ErrorCode::UnknownComponent,
                    "'" + owner + "' references functional '" + m.name + "' which has no content");
      }
    }
  };
  for (const auto& [name, contents] : lib.entries) {
    if (!lib.kind_of(name)) throw Error(ErrorCode::UnknownComponent, "entries for unregistered '" + name + "'");
    for (const auto& content : contents) check_markers(name, content);
  }
  for (const auto& [name, bodies] : lib.company_templates) {
    for (const auto& body : bodies) check_markers("company template " + name, body);
  }
  for (const auto& motivation : lib.contents(kMotivation)) {
    if (motivation_slot_count(motivation) > 2) {
      throw Error(ErrorCode::InvalidMotivationTemplate, "more than two slots in '" + motivation + "'");
    }
  }
}

std::string save_library(const ComponentLibrary& lib) {
  json kinds = json::object();
  for (const auto& [name, kind] : lib.kinds) kinds[name] = std::string(to_string(kind));
  json doc = {{"schema", 1}, {"kinds", kinds}, {"entries", lib.entries}, {"company_templates", lib.company_templates}};
  return doc.dump(2) + "\n";
}

ComponentLibrary load_library(std::string_view bytes) {
  ComponentLibrary lib;
  try {
    const json doc = json::parse(bytes);
    if (doc.at("schema").get<int>() != 1) throw Error(ErrorCode::CorruptLibrary, "unsupported schema");
    for (const auto& [name, kind] : doc.at("kinds").items()) {
      lib.kinds[name] = component_kind_from_string(kind.get<std::string>());
    }
    lib.entries = doc.at("entries").get<std::map<std::string, std::vector<std::string>>>();
    lib.company_templates = doc.at("company_templates").get<std::map<std::string, std::vector<std::string>>>();
    for (const auto* group : {&lib.entries, &lib.company_templates}) {
      for (const auto& [name, contents] : *group) {
        if (std::adjacent_find(contents.begin(), contents.end(), std::greater_equal<>()) != contents.end()) {
          throw Error(ErrorCode::CorruptLibrary, "content list '" + name + "' is not sorted and unique");
        }
      }
    }
    validate_library(lib);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptLibrary, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptLibrary) throw;
    throw Error(ErrorCode::CorruptLibrary, e.what());
  }
  return lib;
}

}  // namespace mailgen
