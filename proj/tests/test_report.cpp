#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fgm/report.hpp"

using namespace fgm;

TEST_CASE("config parsing") {
  auto c = fixture_config("A1");
  CHECK(c.p == 3);
  CHECK(c.tasks == all_tasks());
  CHECK(c.L_steps.size() == 1);
  CHECK_THROWS_AS(parse_config(R"({"p": 4})"), Error);
  CHECK_THROWS_AS(parse_config("{\"p\": 3,"), Error);
  try {
    parse_config(R"({"p": 3, "honda_type": {"pi": 3, "a": [-1]}, "M_unramified_degree": 2, "tasks": "all"})");
    FAIL("accepted M degree 2 over p = 3");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigParseError);
    CHECK(std::string(e.what()).find("/M_unramified_degree") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"p": 3, "honda_type": {"pi": 3, "a": [-1]}, "M_unramified_degree": 3,
                                   "tasks": []})"),
                  Error);
  CHECK_THROWS_AS(parse_config(R"({"p": 3, "honda_type": {"pi": 9, "a": [-1]}, "M_unramified_degree": 3,
                                   "tasks": "all"})"),
                  Error);
  CHECK_THROWS_AS(parse_config(R"({"p": 3, "honda_type": {"pi": 3, "a": [3]}, "M_unramified_degree": 3,
                                   "tasks": "all"})"),
                  Error);
  auto sub = parse_config(R"({"p": 3, "honda_type": {"pi": 3, "a": [-1]}, "M_unramified_degree": 3,
                              "tasks": ["presentation", "group_laws"]})");
  CHECK(sub.tasks == std::vector<std::string>{"group_laws", "presentation"});
}

TEST_CASE("A1 report") {
  Report r = run(fixture_config("A1"));
  CHECK(r.hypothesis == "ok");
  CHECK(r.s == 1);
  CHECK(r.n == 2);
  CHECK(r.h == 1);
  CHECK(r.dim_L == 3);
  CHECK(r.dim_M == 7);
  CHECK(r.kernel_dim == 1);
  CHECK(r.independence_rank == 7);
  for (const auto& t : r.tasks) CHECK_MESSAGE(t.status == "PASS", t.name << ": " << t.detail);
  CHECK(r.exit_code() == 0);
  nlohmann::json j = r;
  Report back = j.get<Report>();
  CHECK(back == r);
  CHECK(emit(back, "json") == emit(r, "json"));
  CHECK(emit(r, "text").find("presentation") != std::string::npos);
}

TEST_CASE("hypothesis failure skips") {
  Report r = run(fixture_config("no_torsion"));
  CHECK(r.hypothesis == "no-torsion");
  CHECK(r.exit_code() == 2);
  bool any_skipped = false;
  for (const auto& t : r.tasks) any_skipped |= t.status == "SKIPPED";
  CHECK(any_skipped);
}
