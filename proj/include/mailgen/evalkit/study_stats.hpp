#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mailgen::evalkit {

enum class Condition { Helped, Unhelped };

struct TaskLog {
  std::string recruiter_id;
  std::string task_id;
  Condition condition = Condition::Helped;
  int rating = 1;  // 4 = perfect, 3 = minor revision, 2 = major revision, 1 = useless
  double seconds = 0;
};

struct StudySummary {
  double mean_rating_helped = 0;
  double mean_rating_unhelped = 0;
  double pct_satisfactory_helped = 0;  // share of ratings >= 3, in percent
  double pct_satisfactory_unhelped = 0;
  double mean_seconds_helped = 0;
  double mean_seconds_unhelped = 0;
  double raw_time_delta = 0;  // unhelped - helped
  double zero_averaged_time_delta = 0;
};

// Throws Error{MissingCondition} unless both conditions are present.
StudySummary summarize_study(std::span<const TaskLog> logs);

nlohmann::json to_json(const StudySummary& summary);

// JSONL, one TaskLog object per line. Throws Error{MalformedDocument}.
std::vector<TaskLog> read_task_logs_jsonl(std::string_view jsonl);

}  // namespace mailgen::evalkit
