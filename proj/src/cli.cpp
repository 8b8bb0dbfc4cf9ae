#include "mailgen/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mailgen/error.hpp"
#include "mailgen/evalkit/bleu.hpp"
#include "mailgen/evalkit/study_stats.hpp"
#include "mailgen/text.hpp"

namespace mailgen::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << bytes;
  if (!out.flush()) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

json parse_json_file(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, path.string() + ": " + e.what());
  }
}

ComponentRegistry load_registry(const CliConfig& cfg) {
  if (cfg.registry_file.empty()) return ComponentRegistry::fixture();
  return ComponentRegistry::from_json(parse_json_file(cfg.registry_file));
}

QualificationTaxonomy load_taxonomy(const CliConfig& cfg, const GenerationConfig& config) {
  if (cfg.taxonomy.empty()) throw Error(ErrorCode::Io, "--taxonomy is required");
  return ingest_taxonomy(read_taxonomy_csv(read_file(cfg.taxonomy)), config.default_language);
}

ComponentLibrary load_library_file(const CliConfig& cfg) {
  if (cfg.library.empty()) throw Error(ErrorCode::Io, "--library is required");
  return load_library(read_file(cfg.library));
}

std::vector<fs::path> template_files(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".tmpl" || ext == ".xml")) files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::Io, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  return files;
}

// Splits JSONL into (line number, content) for non-blank lines.
std::vector<std::pair<std::size_t, std::string>> jsonl_lines(const std::string& bytes) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::istringstream in(bytes);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!text::trim(line).empty()) lines.emplace_back(n, line);
  }
  return lines;
}

json email_json(const GeneratedEmail& email) {
  json doc = to_json(email);
  doc["schema"] = 1;
  return doc;
}

json error_json(const std::string& code, const std::string& message) {
  return {{"code", code}, {"message", message}};
}

}  // namespace

double danish_letter_share(std::string_view input) {
  std::size_t letters = 0;
  std::size_t danish = 0;
  for (std::size_t pos = 0; pos < input.size();) {
    const char32_t cp = text::next_code_point(input, pos);
    if (!text::is_letter(cp)) continue;
    ++letters;
    switch (cp) {
      case U'æ': case U'ø': case U'å': case U'Æ': case U'Ø': case U'Å': ++danish; break;
      default: break;
    }
  }
  return letters == 0 ? 0.0 : static_cast<double>(danish) / static_cast<double>(letters);
}

GenerationConfig resolve_config(const CliConfig& cfg) {
  GenerationConfig config;
  if (!cfg.config_file.empty()) config = GenerationConfig::from_json(parse_json_file(cfg.config_file));
  if (cfg.seed) config.seed = *cfg.seed;
  if (cfg.mark_fills) config.mark_fills = true;
  config.validate();
  return config;
}

int cmd_build_library(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  fs::path current;
  try {
    if (cfg.output.empty()) throw Error(ErrorCode::Io, "an output path is required");
    const auto registry = load_registry(cfg);
    const auto files = template_files(cfg.template_dir);
    if (files.empty()) throw Error(ErrorCode::Io, "no .tmpl/.xml files in " + cfg.template_dir.string());

    std::vector<AnnotatedTemplate> templates;
    std::size_t skipped = 0;
    for (const auto& file : files) {
      current = file;
      auto t = read_template_document(read_file(file), file.stem().string());
      if (cfg.skip_non_danish && danish_letter_share(t.markup) < cfg.danish_threshold) {
        ++skipped;
        continue;
      }
      parse_template(t, registry);
      templates.push_back(std::move(t));
    }
    current.clear();
    const auto lib = build_library(templates, registry);
    write_file(cfg.output, save_library(lib));

    for (const auto& [name, contents] : lib.entries) out << name << '\t' << contents.size() << '\n';
    std::size_t company = 0;
    for (const auto& [name, bodies] : lib.company_templates) company += bodies.size();
    out << "company_templates\t" << company << '\n';
    if (skipped > 0) out << "skipped_non_danish\t" << skipped << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << (current.empty() ? std::string() : current.string() + ": ") << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_generate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto config = resolve_config(cfg);
    const auto lib = load_library_file(cfg);
    const auto tax = load_taxonomy(cfg, config);
    const auto [job, cand] = load_pair(read_file(cfg.job_file), read_file(cfg.candidate_file));
    const auto email = generate(job, cand, lib, tax, config);
    if (cfg.format == OutputFormat::Json) {
      out << email_json(email).dump() << '\n';
    } else {
      out << email.body << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_batch(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> results;
  bool any_failed = false;
  try {
    const auto config = resolve_config(cfg);
    const auto lib = load_library_file(cfg);
    const auto tax = load_taxonomy(cfg, config);
    const auto lines = jsonl_lines(read_file(cfg.pairs_file));
    results.resize(lines.size());
    std::vector<char> failed(lines.size(), 0);

    auto run_one = [&](std::size_t i) {
      json result = {{"schema", 1}, {"index", i}, {"line", lines[i].first}};
      try {
        json doc;
        try {
          doc = json::parse(lines[i].second);
        } catch (const json::parse_error& e) {
          throw Error(ErrorCode::MalformedDocument, e.what());
        }
        if (!doc.is_object() || !doc.contains("job") || !doc.contains("candidate")) {
          throw Error(ErrorCode::MalformedDocument, "expected {\"job\": {...}, \"candidate\": {...}}");
        }
        const auto job = job_from_json(doc["job"]);
        const auto cand = candidate_from_json(doc["candidate"]);
        GenerationConfig item_config = config;
        item_config.seed = derive_seed(config.seed, i);
        result["ok"] = true;
        result["email"] = to_json(generate(job, cand, lib, tax, item_config));
      } catch (const Error& e) {
        result["ok"] = false;
        result["error"] = error_json(std::string(to_string(e.code())), e.what());
        failed[i] = 1;
      } catch (const std::exception& e) {
        result["ok"] = false;
        result["error"] = error_json("Internal", e.what());
        failed[i] = 1;
      }
      results[i] = result.dump();
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(lines.size())));
    if (workers <= 1) {
      for (std::size_t i = 0; i < lines.size(); ++i) run_one(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < lines.size(); i = next++) run_one(i);
        });
      }
    }
    any_failed = std::find(failed.begin(), failed.end(), 1) != failed.end();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  std::string joined;
  for (const auto& line : results) joined += line + '\n';
  try {
    if (cfg.output.empty()) {
      out << joined;
    } else {
      write_file(cfg.output, joined);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  if (any_failed) err << "error: one or more pairs failed\n";
  return any_failed ? kExitFailure : kExitOk;
}

int cmd_eval(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    json report = {{"schema", 1}, {"mode", cfg.eval_mode}};
    const std::string bytes = read_file(cfg.input_file);
    if (cfg.eval_mode == "bleu") {
      const auto corpus = evalkit::read_bleu_jsonl(bytes);
      const bool smoothing = !cfg.no_smoothing;
      const double corpus_score = evalkit::bleu(corpus, cfg.max_n);
      const double sentence_mean = evalkit::mean_sentence_bleu(corpus, cfg.max_n, smoothing);
      report["segments"] = corpus.size();
      report["max_n"] = cfg.max_n;
      report["smoothing"] = smoothing;
      report["corpus_bleu"] = corpus_score;
      report["sentence_bleu_mean"] = sentence_mean;
      report["bleu"] = cfg.corpus_bleu ? corpus_score : sentence_mean;
    } else if (cfg.eval_mode == "study") {
      const auto logs = evalkit::read_task_logs_jsonl(bytes);
      report["tasks"] = logs.size();
      report.update(evalkit::to_json(evalkit::summarize_study(logs)));
    } else {
      err << "error: unknown eval mode '" << cfg.eval_mode << "' (expected bleu or study)\n";
      return kExitUsage;
    }
    out << report.dump(2) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_validate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  int status = kExitOk;
  auto check = [&](const char* what, auto&& fn) {
    try {
      out << what << ": " << fn() << '\n';
    } catch (const Error& e) {
      err << "error: " << what << ": " << e.what() << '\n';
      status = kExitFailure;
    }
  };
  GenerationConfig config;
  check("config", [&] {
    config = resolve_config(cfg);
    return std::string("ok");
  });
  if (!cfg.registry_file.empty()) {
    check("registry", [&] { return std::to_string(load_registry(cfg).specs().size()) + " components"; });
  }
  if (!cfg.library.empty()) {
    check("library", [&] { return std::to_string(load_library_file(cfg).entries.size()) + " components"; });
  }
  if (!cfg.taxonomy.empty()) {
    check("taxonomy", [&] { return std::to_string(load_taxonomy(cfg, config).entries().size()) + " entries"; });
  }
  if (!cfg.template_dir.empty()) {
    check("templates", [&] {
      const auto registry = load_registry(cfg);
      std::size_t n = 0;
      for (const auto& file : template_files(cfg.template_dir)) {
        try {
          parse_template(read_template_document(read_file(file), file.stem().string()), registry);
        } catch (const Error& e) {
          throw Error(e.code(), file.string() + ": " + e.what());
        }
        ++n;
      }
      return std::to_string(n) + " parsed";
    });
  }
  if (!cfg.pairs_file.empty()) {
    check("pairs", [&] {
      std::size_t n = 0;
      for (const auto& [line_no, line] : jsonl_lines(read_file(cfg.pairs_file))) {
        try {
          const auto doc = json::parse(line);
          job_from_json(doc.at("job"));
          candidate_from_json(doc.at("candidate"));
        } catch (const json::exception& e) {
          throw Error(ErrorCode::MalformedDocument, "line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
          throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
        ++n;
      }
      return std::to_string(n) + " pairs";
    });
  }
  return status;
}

}  // namespace mailgen::cli
