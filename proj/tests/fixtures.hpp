#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mailgen/cli.hpp"
#include "mailgen/template_parser.hpp"

namespace testing {

inline std::filesystem::path fixture_dir() { return MAILGEN_FIXTURE_DIR; }

inline std::vector<mailgen::AnnotatedTemplate> fixture_templates() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(fixture_dir() / "templates")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<mailgen::AnnotatedTemplate> out;
  for (const auto& f : files) out.push_back(mailgen::read_template_document(mailgen::cli::read_file(f), f.stem().string()));
  return out;
}

}  // namespace testing
