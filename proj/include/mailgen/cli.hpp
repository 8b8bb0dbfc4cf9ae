#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mailgen/composer.hpp"

namespace mailgen::cli {

enum class OutputFormat { Text, Json };

struct CliConfig {
  std::filesystem::path template_dir;
  std::filesystem::path registry_file;  // empty: built-in fixture registry
  std::filesystem::path library;
  std::filesystem::path taxonomy;
  std::filesystem::path config_file;  // empty: defaults
  std::filesystem::path output;       // empty: stdout (batch) / required (build-library)
  std::filesystem::path job_file;
  std::filesystem::path candidate_file;
  std::filesystem::path pairs_file;
  std::filesystem::path input_file;

  std::optional<std::uint64_t> seed;
  OutputFormat format = OutputFormat::Text;
  bool mark_fills = false;
  unsigned jobs = 1;

  // build-library
  bool skip_non_danish = false;
  double danish_threshold = 0.004;

  // eval
  std::string eval_mode;  // "bleu" or "study"
  int max_n = 4;
  bool corpus_bleu = false;
  bool no_smoothing = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_build_library(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_generate(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_batch(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_eval(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const CliConfig& cfg, std::ostream& out, std::ostream& err);

// Share of æ/ø/å among letters; templates below the threshold are skipped
// by build-library --skip-non-danish.
double danish_letter_share(std::string_view text);

// Generation config from --config plus command-line overrides.
GenerationConfig resolve_config(const CliConfig& cfg);

std::string read_file(const std::filesystem::path& path);

}  // namespace mailgen::cli
