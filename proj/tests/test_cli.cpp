#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "mailgen/cli.hpp"

using namespace mailgen;
using namespace mailgen::cli;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("mailgen_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::filesystem::path write(const std::string& name, const std::string& bytes) const {
    const auto p = path / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p;
  }
};

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

template <typename Fn>
Run run(Fn fn, const CliConfig& cfg) {
  std::ostringstream out, err;
  Run r;
  r.status = fn(cfg, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

CliConfig built(const TempDir& dir) {
  CliConfig cfg;
  cfg.template_dir = testing::fixture_dir() / "templates";
  cfg.registry_file = testing::fixture_dir() / "registry.json";
  cfg.output = dir.path / "library.json";
  REQUIRE(run(cmd_build_library, cfg).status == kExitOk);
  CliConfig gen;
  gen.library = cfg.output;
  gen.taxonomy = testing::fixture_dir() / "taxonomy.csv";
  gen.config_file = testing::fixture_dir() / "config.json";
  gen.job_file = testing::fixture_dir() / "job.json";
  gen.candidate_file = testing::fixture_dir() / "candidate.json";
  gen.pairs_file = testing::fixture_dir() / "pairs.jsonl";
  gen.seed = 7;
  return gen;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("build-library prints counts and is byte-stable") {
    TempDir dir;
    CliConfig cfg;
    cfg.template_dir = testing::fixture_dir() / "templates";
    cfg.output = dir.path / "a.json";
    const auto r = run(cmd_build_library, cfg);
    REQUIRE(r.status == kExitOk);
    CHECK(r.out.find("skeleton_follower\t") != std::string::npos);
    CHECK(r.out.find("skeleton_non_follower\t") != std::string::npos);
    CHECK(r.out.find("skeleton_follower\t0") == std::string::npos);
    cfg.output = dir.path / "b.json";
    cfg.registry_file = testing::fixture_dir() / "registry.json";
    REQUIRE(run(cmd_build_library, cfg).status == kExitOk);
    CHECK(read_file(dir.path / "a.json") == read_file(dir.path / "b.json"));
  }

  TEST_CASE("build-library names the malformed file") {
    TempDir dir;
    const auto tdir = dir.path / "templates";
    std::filesystem::create_directories(tdir);
    std::filesystem::copy(testing::fixture_dir() / "templates", tdir);
    std::ofstream(tdir / "t99_broken.tmpl") << "<template><greeting>Hej</template>";
    CliConfig cfg;
    cfg.template_dir = tdir;
    cfg.output = dir.path / "lib.json";
    const auto r = run(cmd_build_library, cfg);
    CHECK(r.status == kExitFailure);
    CHECK(r.err.find("t99_broken.tmpl") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(cfg.output));
  }

  TEST_CASE("build-library on an empty directory") {
    TempDir dir;
    CliConfig cfg;
    cfg.template_dir = dir.path;
    cfg.output = dir.path / "lib.json";
    CHECK(run(cmd_build_library, cfg).status == kExitFailure);
  }

  TEST_CASE("skip-non-danish drops English templates") {
    TempDir dir;
    const auto tdir = dir.path / "templates";
    std::filesystem::create_directories(tdir);
    std::filesystem::copy(testing::fixture_dir() / "templates", tdir);
    std::ofstream(tdir / "t98_english.tmpl") << "<template><greeting>Hello there, we saw your profile</greeting></template>";
    CliConfig cfg;
    cfg.template_dir = tdir;
    cfg.output = dir.path / "lib.json";
    cfg.skip_non_danish = true;
    const auto r = run(cmd_build_library, cfg);
    REQUIRE(r.status == kExitOk);
    CHECK(r.out.find("skipped_non_danish\t1") != std::string::npos);
    CHECK(read_file(cfg.output).find("Hello there") == std::string::npos);
    CHECK(danish_letter_share("abc") == 0.0);
    CHECK(danish_letter_share("æøå") == 1.0);
  }

  TEST_CASE("generate is stable and supports json") {
    TempDir dir;
    auto cfg = built(dir);
    const auto a = run(cmd_generate, cfg);
    const auto b = run(cmd_generate, cfg);
    REQUIRE(a.status == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.find("[%") == std::string::npos);
    cfg.format = OutputFormat::Json;
    const auto j = run(cmd_generate, cfg);
    REQUIRE(j.status == kExitOk);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["schema"] == 1);
    CHECK(doc["seed"] == 7);
    CHECK(doc["body"].get<std::string>() + "\n" == a.out);
    CHECK(doc["trace"].is_array());
    CHECK(doc["fills"].is_array());
  }

  TEST_CASE("mark-fills wraps skills") {
    TempDir dir;
    auto cfg = built(dir);
    cfg.mark_fills = true;
    bool saw = false;
    for (std::uint64_t seed = 0; seed < 30 && !saw; ++seed) {
      cfg.seed = seed;
      const auto r = run(cmd_generate, cfg);
      REQUIRE(r.status == kExitOk);
      saw = r.out.find("{python}") != std::string::npos;
    }
    CHECK(saw);
  }

  TEST_CASE("generate errors") {
    TempDir dir;
    auto cfg = built(dir);
    cfg.taxonomy = dir.path / "missing.csv";
    CHECK(run(cmd_generate, cfg).status == kExitFailure);
    cfg = built(dir);
    cfg.job_file = dir.write("bad.json", "{\"title\":\"x\"}");
    const auto r = run(cmd_generate, cfg);
    CHECK(r.status == kExitFailure);
    CHECK(r.err.find("MissingId") != std::string::npos);
  }

  TEST_CASE("batch keeps order and is parallel-safe") {
    TempDir dir;
    auto cfg = built(dir);
    const auto serial = run(cmd_batch, cfg);
    REQUIRE(serial.status == kExitOk);
    cfg.jobs = 4;
    const auto parallel = run(cmd_batch, cfg);
    CHECK(parallel.out == serial.out);
    std::istringstream lines(serial.out);
    std::string line;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
      const auto doc = nlohmann::json::parse(line);
      CHECK(doc["index"] == i);
      CHECK(doc["ok"] == true);
      ++i;
    }
    CHECK(i == 100);
  }

  TEST_CASE("batch reports a malformed line") {
    TempDir dir;
    auto cfg = built(dir);
    auto text = read_file(cfg.pairs_file);
    const auto cut = text.find('\n', text.size() / 2);
    text.insert(cut + 1, "{\"job\": {\"title\": \"uden id\"}, \"candidate\": {\"id\": \"c\"}}\n");
    const auto lines_before = std::count(text.begin(), text.end(), '\n');
    cfg.pairs_file = dir.write("pairs.jsonl", text);
    cfg.jobs = 3;
    const auto r = run(cmd_batch, cfg);
    CHECK(r.status == kExitFailure);
    std::istringstream lines(r.out);
    std::string line;
    int ok = 0, bad = 0;
    while (std::getline(lines, line)) (nlohmann::json::parse(line)["ok"] == true ? ok : bad)++;
    CHECK(ok == 100);
    CHECK(bad == 1);
    CHECK(ok + bad == lines_before);
  }

  TEST_CASE("eval bleu") {
    TempDir dir;
    CliConfig cfg;
    cfg.eval_mode = "bleu";
    cfg.input_file = dir.write("b.jsonl", "{\"hyp\":\"hej med dig\",\"refs\":[\"hej med dig\"]}\n");
    const auto r = run(cmd_eval, cfg);
    REQUIRE(r.status == kExitOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["bleu"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["corpus_bleu"].get<double>() == doctest::Approx(1.0));
    cfg.input_file = dir.write("empty.jsonl", "");
    CHECK(run(cmd_eval, cfg).status == kExitFailure);
  }

  TEST_CASE("eval study") {
    TempDir dir;
    CliConfig cfg;
    cfg.eval_mode = "study";
    std::string logs;
    for (auto [c, s] : {std::pair{"helped", 100}, {"helped", 120}, {"unhelped", 150}, {"unhelped", 170}}) {
      logs += R"({"recruiter_id":"R1","task_id":"t","condition":")" + std::string(c) + R"(","rating":3,"seconds":)" +
              std::to_string(s) + "}\n";
    }
    cfg.input_file = dir.write("s.jsonl", logs);
    const auto r = run(cmd_eval, cfg);
    REQUIRE(r.status == kExitOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["raw_time_delta"].get<double>() == doctest::Approx(50));
    CHECK(doc["zero_averaged_time_delta"].get<double>() == doctest::Approx(50));
  }

  TEST_CASE("validate fixtures") {
    TempDir dir;
    auto cfg = built(dir);
    cfg.template_dir = testing::fixture_dir() / "templates";
    cfg.registry_file = testing::fixture_dir() / "registry.json";
    const auto r = run(cmd_validate, cfg);
    CHECK(r.status == kExitOk);
    CHECK(r.err.empty());
    cfg.config_file = dir.write("cfg.json", "{\"nope\":1}");
    CHECK(run(cmd_validate, cfg).status == kExitFailure);
  }
}
