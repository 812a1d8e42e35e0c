#include <doctest.h>

#include "orqc/oracles.hpp"

TEST_CASE("every reference oracle passes") {
  const auto reports = orqc::oracle::run_all_oracles();
  CHECK(reports.size() >= 15);
  for (const auto& r : reports) {
    CAPTURE(r.name);
    CAPTURE(r.instance);
    CAPTURE(r.deviation);
    CHECK(r.passed);
    CHECK(r.deviation <= r.tolerance);
  }
  const std::string text = orqc::oracle::format_report(reports);
  CHECK(text.find("FAIL") == std::string::npos);
}
