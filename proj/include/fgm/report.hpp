#pragma once

// Configuration-driven runs of the verification tasks and their reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fgm/tower.hpp"

namespace fgm {

inline constexpr int kSchemaVersion = 1;

/// Task identifiers in dependency order.
const std::vector<std::string>& all_tasks();

struct RunConfig {
  std::string name = "run";
  u64 p = 0;
  std::vector<std::vector<i64>> type_a;   // a_1..a_r as coordinate vectors over K = Q_p
  std::vector<i64> type_pi{0};
  std::string logarithm = "canonical";    // canonical | multiplicative | lubin_tate_model
  std::vector<StepSpec> L_steps;
  int M_unramified_degree = 1;
  int precision = 12;
  std::optional<int> D;
  std::vector<std::string> tasks;
  u64 seed = 1;
  int roundtrips = 50;
};

/// Parses and validates a configuration; throws ConfigParseError with the
/// byte offset or JSON pointer of the problem.
RunConfig parse_config(const std::string& text);

struct TaskResult {
  std::string name;
  std::string status;  // PASS | FAIL | SKIPPED
  std::string detail;
  bool operator==(const TaskResult&) const = default;
};

struct InvariantRow {
  int level = 0;
  std::vector<int> computed, presented;
  bool operator==(const InvariantRow&) const = default;
};

struct Report {
  int schema_version = kSchemaVersion;
  std::string name;
  u64 p = 0;
  u64 seed = 0;
  std::string L, M;
  std::string group_type;
  std::string logarithm;
  int D = 0, N = 0, guard = 0;
  std::string hypothesis;  // "ok" or the failure reason
  int s = -1, n = -1, h = -1, m = -1;
  int dim_L = -1, dim_M = -1, kernel_dim = -1, independence_rank = -1;
  std::vector<InvariantRow> invariants;
  // point coordinates in the power basis of M, centered modulo p^N
  std::vector<std::vector<i64>> zeta, xi, omega, epsilon, theta;
  std::vector<TaskResult> tasks;
  bool operator==(const Report&) const = default;

  /// 0 all pass, 2 some task not applicable, 3 some task failed.
  int exit_code() const;
};

void to_json(nlohmann::json& j, const TaskResult& t);
void from_json(const nlohmann::json& j, TaskResult& t);
void to_json(nlohmann::json& j, const InvariantRow& r);
void from_json(const nlohmann::json& j, InvariantRow& r);
void to_json(nlohmann::json& j, const Report& r);
void from_json(const nlohmann::json& j, Report& r);

/// Executes the configured tasks; verification problems become FAIL
/// entries, the hypothesis gate produces SKIPPED entries.
Report run(const RunConfig& cfg);

/// Report as indented JSON or as a fixed-width text table.
std::string emit(const Report& r, const std::string& format);

/// Built-in fixture configurations.
RunConfig fixture_config(const std::string& name);

/// Runs the A1 and A2 fixtures; `exit_code` receives the worst exit code.
std::string selftest(std::optional<u64> seed, const std::string& format, int& exit_code);

}  // namespace fgm
