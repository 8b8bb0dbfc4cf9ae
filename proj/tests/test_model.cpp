#include <doctest.h>

#include "mailgen/error.hpp"
#include "mailgen/model.hpp"

using namespace mailgen;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

const char* kCandidate = R"({"id":"c1","name":"Kim","headline":"Udvikler","keywords":["Python"],
  "preferred_titles":["Udvikler"],"work_experience":[],"education":["DTU"],"resume":"cv","following":["Acme"]})";

}  // namespace

TEST_SUITE("core_model") {
  TEST_CASE("job fields are copied") {
    auto [job, cand] = load_pair(R"({"id":"j1","title":"Softwareudvikler","company":"Acme","description":"x"})", kCandidate);
    CHECK(job.title == "Softwareudvikler");
    CHECK(job.company == "Acme");
    CHECK(cand.keywords == std::vector<std::string>{"Python"});
    CHECK(cand.following == std::set<std::string>{"Acme"});
  }

  TEST_CASE("missing optional candidate fields default to empty") {
    auto [job, cand] = load_pair(R"({"id":"j1","title":"T","company":"C"})", R"({"id":"c1"})");
    CHECK(cand.following.empty());
    CHECK(cand.keywords.empty());
    CHECK(cand.name.empty());
    CHECK(job.description.empty());
  }

  TEST_CASE("missing id") {
    CHECK(code_of([] { load_pair(R"({"title":"T","company":"C"})", kCandidate); }) == ErrorCode::MissingId);
    CHECK(code_of([] { load_pair(R"({"id":"j","title":"T","company":"C"})", R"({"name":"x"})"); }) ==
          ErrorCode::MissingId);
  }

  TEST_CASE("schema violations are MalformedDocument") {
    CHECK(code_of([] { load_pair("{not json", kCandidate); }) == ErrorCode::MalformedDocument);
    CHECK(code_of([] { load_pair(R"({"id":"j","title":3,"company":"C"})", kCandidate); }) ==
          ErrorCode::MalformedDocument);
    CHECK(code_of([] { load_pair(R"({"id":"j","title":"T","company":"C"})", R"({"id":"c","keywords":"x"})"); }) ==
          ErrorCode::MalformedDocument);
    CHECK(code_of([] { load_pair(R"({"id":"j","title":"T","company":"C"})", R"({"id":"c","following":[""]})"); }) ==
          ErrorCode::MalformedDocument);
    CHECK(code_of([] { load_pair("[1]", kCandidate); }) == ErrorCode::MalformedDocument);
  }

  TEST_CASE("empty title needs the degenerate flag") {
    CHECK(code_of([] { load_pair(R"({"id":"j","company":"C"})", kCandidate); }) == ErrorCode::MalformedDocument);
    auto [job, cand] = load_pair(R"({"id":"j","company":"C","degenerate":true})", kCandidate);
    CHECK(job.degenerate);
    CHECK(job.title.empty());
  }

  TEST_CASE("unknown keys are ignored") {
    auto [job, cand] = load_pair(R"({"id":"j","title":"T","company":"C","salary":42})", R"({"id":"c","x":{"y":1}})");
    CHECK(job.id == "j");
    CHECK(cand.id == "c");
  }

  TEST_CASE("serialize then load reproduces every populated field") {
    auto [job, cand] = load_pair(R"({"id":"j","title":"T","company":"C","description":"d"})", kCandidate);
    CHECK(job_from_json(to_json(job)) == job);
    CHECK(candidate_from_json(to_json(cand)) == cand);
  }

  TEST_CASE("slot marker form") {
    CHECK(SlotMarker{"job_title"}.str() == "[% job_title %]");
    CHECK(is_component_name("job_title2"));
    CHECK_FALSE(is_component_name("Job"));
    CHECK_FALSE(is_component_name("2job"));
    CHECK_FALSE(is_component_name(""));
  }
}
