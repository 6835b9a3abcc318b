#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "odegeom/report.hpp"

using namespace odegeom;

TEST_CASE("status is derived from residual and tolerance") {
  CheckReport r;
  r.add("b_check", 1e-10, 1e-9, 50, 1);
  r.add("a_check", 1e-8, 1e-9, 50, 1);
  r.add("c_equal", 1e-9, 1e-9, 50, 1);
  r.add("d_nan", std::nan(""), 1e-9, 50, 1);
  CHECK(r.find("b_check")->status == CheckStatus::pass);
  CHECK(r.find("a_check")->status == CheckStatus::fail);
  CHECK(r.find("c_equal")->status == CheckStatus::pass);
  CHECK(r.find("d_nan")->status == CheckStatus::error);
  CHECK(r.failures() == 2);
  CHECK_FALSE(r.all_pass());
  CHECK(r.find("missing") == nullptr);
}

TEST_CASE("JSON report keys, order and sorting") {
  CheckReport r;
  r.add("zeta", 0.5, 1.0, 3, 42, "note");
  r.add("alpha", std::nan(""), 1.0, 0, 42);
  const auto j = nlohmann::json::parse(r.to_json());
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["name"] == "alpha");
  CHECK(j[0]["max_residual"].is_null());
  CHECK(j[0]["status"] == "error");
  CHECK(j[1]["status"] == "pass");
  CHECK(j[1]["seed"] == 42);
  std::vector<std::string> keys;
  const auto o = nlohmann::ordered_json::parse(r.to_json());
  for (auto it = o[1].begin(); it != o[1].end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"name", "status", "max_residual", "tolerance", "samples", "seed", "notes"});
  CHECK(r.to_json() == r.to_json());
}

TEST_CASE("merge and table") {
  CheckReport a, b;
  a.add("one", 0, 1, 1, 0);
  b.add("two", 2, 1, 1, 0);
  a.merge(b);
  CHECK(a.records().size() == 2);
  const std::string t = a.to_table();
  CHECK(t.find("one") != std::string::npos);
  CHECK(t.find("fail") != std::string::npos);
  CHECK(t.find("2 checks, 1 failed") != std::string::npos);
}
