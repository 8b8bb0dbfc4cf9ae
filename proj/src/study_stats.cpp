#include "mailgen/evalkit/study_stats.hpp"

#include <map>

#include "mailgen/error.hpp"
#include "mailgen/text.hpp"

namespace mailgen::evalkit {

namespace {

struct Accumulator {
  double rating_sum = 0;
  double satisfactory = 0;
  double seconds_sum = 0;
  double adjusted_sum = 0;
  double n = 0;
};

}  // namespace

StudySummary summarize_study(std::span<const TaskLog> logs) {
  std::map<std::string, std::pair<double, double>> per_recruiter;  // sum, count
  for (const auto& log : logs) {
    auto& [sum, count] = per_recruiter[log.recruiter_id];
    sum += log.seconds;
    count += 1;
  }

  Accumulator helped;
  Accumulator unhelped;
  for (const auto& log : logs) {
    auto& acc = log.condition == Condition::Helped ? helped : unhelped;
    const auto& [sum, count] = per_recruiter[log.recruiter_id];
    acc.rating_sum += log.rating;
    acc.satisfactory += log.rating >= 3 ? 1 : 0;
    acc.seconds_sum += log.seconds;
    acc.adjusted_sum += log.seconds - sum / count;
    acc.n += 1;
  }
  if (helped.n == 0) throw Error(ErrorCode::MissingCondition, "no helped tasks");
  if (unhelped.n == 0) throw Error(ErrorCode::MissingCondition, "no unhelped tasks");

  StudySummary s;
  s.mean_rating_helped = helped.rating_sum / helped.n;
  s.mean_rating_unhelped = unhelped.rating_sum / unhelped.n;
  s.pct_satisfactory_helped = 100.0 * helped.satisfactory / helped.n;
  s.pct_satisfactory_unhelped = 100.0 * unhelped.satisfactory / unhelped.n;
  s.mean_seconds_helped = helped.seconds_sum / helped.n;
  s.mean_seconds_unhelped = unhelped.seconds_sum / unhelped.n;
  s.raw_time_delta = s.mean_seconds_unhelped - s.mean_seconds_helped;
  s.zero_averaged_time_delta = unhelped.adjusted_sum / unhelped.n - helped.adjusted_sum / helped.n;
  return s;
}

nlohmann::json to_json(const StudySummary& s) {
  return {{"mean_rating_helped", s.mean_rating_helped},
          {"mean_rating_unhelped", s.mean_rating_unhelped},
          {"pct_satisfactory_helped", s.pct_satisfactory_helped},
          {"pct_satisfactory_unhelped", s.pct_satisfactory_unhelped},
          {"mean_seconds_helped", s.mean_seconds_helped},
          {"mean_seconds_unhelped", s.mean_seconds_unhelped},
          {"raw_time_delta", s.raw_time_delta},
          {"zero_averaged_time_delta", s.zero_averaged_time_delta}};
}

std::vector<TaskLog> read_task_logs_jsonl(std::string_view jsonl) {
  std::vector<TaskLog> logs;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = text::trim(jsonl.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::MalformedDocument, "line " + std::to_string(line_no) + ": " + why);
    };
    try {
      const auto doc = nlohmann::json::parse(line);
      TaskLog log;
      log.recruiter_id = doc.at("recruiter_id").get<std::string>();
      log.task_id = doc.value("task_id", std::string());
      const auto condition = doc.at("condition").get<std::string>();
      if (condition == "helped") {
        log.condition = Condition::Helped;
      } else if (condition == "unhelped") {
        log.condition = Condition::Unhelped;
      } else {
        throw fail("condition must be helped or unhelped");
      }
      log.rating = doc.at("rating").get<int>();
      log.seconds = doc.at("seconds").get<double>();
      if (log.rating < 1 || log.rating > 4) throw fail("rating must be in 1..4");
      if (!(log.seconds >= 0)) throw fail("seconds must be non-negative");
      logs.push_back(std::move(log));
    } catch (const nlohmann::json::exception& e) {
      throw fail(e.what());
    }
  }
  return logs;
}

}  // namespace mailgen::evalkit
