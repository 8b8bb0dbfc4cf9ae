#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "mailgen/cli.hpp"

using mailgen::cli::CliConfig;
using mailgen::cli::OutputFormat;

namespace {

void add_generation_flags(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--library", cfg.library, "Component library (from build-library)")->required();
  cmd->add_option("--taxonomy", cfg.taxonomy, "Qualification taxonomy CSV (label,kind,lang,id)")->required();
  cmd->add_option("--config", cfg.config_file, "Generation config JSON");
  cmd->add_option("--seed", cfg.seed, "Random seed (overrides config)");
  cmd->add_flag("--mark-fills", cfg.mark_fills, "Wrap case-specific insertions in {}");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Template-based recruitment email generator"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto* build = app.add_subcommand("build-library", "Parse annotated templates into a component library");
  build->add_option("template_dir", cfg.template_dir, "Directory of .tmpl files")->required();
  build->add_option("-o,--output", cfg.output, "Library output path")->required();
  build->add_option("--registry", cfg.registry_file, "Component registry JSON (default: built-in)");
  build->add_flag("--skip-non-danish", cfg.skip_non_danish, "Skip templates with too few æ/ø/å letters");
  build->add_option("--danish-threshold", cfg.danish_threshold, "Minimum æ/ø/å share of letters");

  auto* gen = app.add_subcommand("generate", "Generate one email for a job/candidate pair");
  gen->add_option("job_file", cfg.job_file, "Job JSON")->required();
  gen->add_option("candidate_file", cfg.candidate_file, "Candidate JSON")->required();
  add_generation_flags(gen, cfg);
  gen->add_option("--format", cfg.format, "Output format: text or json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"text", OutputFormat::Text},
                                                                              {"json", OutputFormat::Json}}));

  auto* batch = app.add_subcommand("batch", "Generate emails for a JSONL file of pairs");
  batch->add_option("pairs_file", cfg.pairs_file, "JSONL with {\"job\":..,\"candidate\":..} per line")->required();
  add_generation_flags(batch, cfg);
  batch->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  batch->add_option("-o,--output", cfg.output, "Write results here instead of stdout");

  auto* eval = app.add_subcommand("eval", "Score BLEU or summarize study logs");
  eval->add_option("mode", cfg.eval_mode, "bleu or study")->required()->check(CLI::IsMember({"bleu", "study"}));
  eval->add_option("input_file", cfg.input_file, "JSONL input")->required();
  eval->add_option("--max-n", cfg.max_n, "Highest n-gram order")->check(CLI::PositiveNumber);
  eval->add_flag("--corpus", cfg.corpus_bleu, "Report corpus BLEU as the headline score");
  eval->add_flag("--no-smoothing", cfg.no_smoothing, "Disable add-one smoothing of sentence BLEU");

  auto* validate = app.add_subcommand("validate", "Check that fixture files load");
  validate->add_option("--templates", cfg.template_dir, "Template directory");
  validate->add_option("--registry", cfg.registry_file, "Component registry JSON");
  validate->add_option("--library", cfg.library, "Component library");
  validate->add_option("--taxonomy", cfg.taxonomy, "Taxonomy CSV");
  validate->add_option("--config", cfg.config_file, "Generation config JSON");
  validate->add_option("--pairs", cfg.pairs_file, "Pairs JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mailgen::cli::kExitUsage;
  }

  if (*build) return mailgen::cli::cmd_build_library(cfg, std::cout, std::cerr);
  if (*gen) return mailgen::cli::cmd_generate(cfg, std::cout, std::cerr);
  if (*batch) return mailgen::cli::cmd_batch(cfg, std::cout, std::cerr);
  if (*eval) return mailgen::cli::cmd_eval(cfg, std::cout, std::cerr);
  return mailgen::cli::cmd_validate(cfg, std::cout, std::cerr);
}
