#pragma once

// JSON reports written by the CLI. Schema "ccwb-report", version 1; see
// docs/report-schema.md.

#include <chrono>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccwb/error.hpp"

namespace ccwb {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "ccwb-report";
inline constexpr int kReportVersion = 1;

enum class Outcome3 { Pass, Fail, Budget };

inline const char* to_string(Outcome3 o) {
  switch (o) {
    case Outcome3::Pass: return "pass";
    case Outcome3::Fail: return "fail";
    case Outcome3::Budget: return "budget-exceeded";
  }
  return "?";
}

inline Outcome3 parse_outcome(const std::string& s) {
  if (s == "pass") return Outcome3::Pass;
  if (s == "fail") return Outcome3::Fail;
  if (s == "budget-exceeded") return Outcome3::Budget;
  throw FormatError("unknown result '" + s + "'");
}

struct ReportEntry {
  std::string task;
  std::string instance;
  Outcome3 result = Outcome3::Pass;
  nlohmann::json value;            // task-specific measured values
  std::string witness;             // file name or inline description, may be empty
  double runtime_ms = 0;
  std::string message;
};

struct Report {
  std::string command;
  std::vector<ReportEntry> entries;
  nlohmann::json summary = nlohmann::json::object();

  bool all_pass() const {
    for (const auto& e : entries) {
      if (e.result != Outcome3::Pass) return false;
    }
    return true;
  }
  // 0 all pass, 1 any failure, 2 budget exceeded without failures.
  int exit_code() const {
    bool budget = false;
    for (const auto& e : entries) {
      if (e.result == Outcome3::Fail) return 1;
      budget = budget || e.result == Outcome3::Budget;
    }
    return budget ? 2 : 0;
  }
};

inline nlohmann::json to_json(const ReportEntry& e) {
  return {{"task", e.task},         {"instance", e.instance},     {"result", to_string(e.result)},
          {"value", e.value},       {"witness", e.witness},       {"runtime_ms", e.runtime_ms},
          {"message", e.message},   {"tool_version", kToolVersion}};
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  return {{"schema", kReportSchema}, {"schema_version", kReportVersion}, {"tool_version", kToolVersion},
          {"command", r.command},    {"entries", entries},              {"summary", r.summary}};
}

inline Report report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema) throw FormatError("not a ccwb report");
    if (j.at("schema_version").get<int>() != kReportVersion) throw FormatError("unsupported report version");
    Report r;
    r.command = j.at("command").get<std::string>();
    r.summary = j.at("summary");
    for (const auto& e : j.at("entries")) {
      ReportEntry x;
      x.task = e.at("task").get<std::string>();
      x.instance = e.at("instance").get<std::string>();
      x.result = parse_outcome(e.at("result").get<std::string>());
      x.value = e.at("value");
      x.witness = e.at("witness").get<std::string>();
      x.runtime_ms = e.at("runtime_ms").get<double>();
      x.message = e.at("message").get<std::string>();
      r.entries.push_back(std::move(x));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

inline void save_report(const std::string& path, const Report& r) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  os << to_json(r).dump(2) << '\n';
}

// Wall-clock timer for report entries.
class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace ccwb
