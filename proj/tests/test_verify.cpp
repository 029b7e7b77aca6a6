#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "mlab/verify.hpp"

using namespace mlab;

namespace {

std::string one_record(const std::string& body) { return "[" + body + "]"; }

}  // namespace

TEST_CASE("catalog: schema and ordering") {
  const auto& all = catalog();
  CHECK(all.size() >= 40);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& r = all[i];
    CHECK(ids.insert(r.id).second);
    if (i > 0) CHECK(all[i - 1].id < r.id);
    CHECK(r.tolerance > 0);
    CHECK_FALSE(r.tags.empty());
    if (!r.negative_control()) CHECK_FALSE(r.paper_ref.empty());
  }
  CHECK(list_identities("").size() == all.size());
  CHECK(list_identities("all").size() == all.size());
  int controls = 0;
  for (const auto& r : all) controls += r.negative_control();
  CHECK(controls == 2);
}

TEST_CASE("catalog: tag filters") {
  auto exact = list_identities("exact");
  CHECK(exact.size() >= 16);
  for (const auto& r : exact) CHECK(r.kind == IdentityKind::ExactSeries);
  auto c24 = list_identities("conductor24");
  auto has = [&](const char* id) {
    return std::any_of(c24.begin(), c24.end(), [&](const auto& r) { return r.id == id; });
  };
  CHECK(has("M8_M2_F23"));
  CHECK(has("TH_F23"));
  CHECK(has("G1_ELEMENTARY"));
  CHECK(list_identities("no-such-tag").empty());
}

TEST_CASE("catalog: every anchor is quoted verbatim from the reference text") {
#ifdef MLAB_REFERENCE_TEXT
  std::ifstream in(MLAB_REFERENCE_TEXT);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  auto squash = [](const std::string& s) { return std::regex_replace(s, std::regex("\\s+"), " "); };
  const std::string text = squash(ss.str());
  for (const auto& r : catalog()) {
    if (r.negative_control()) continue;
    auto bar = r.paper_ref.find(" | ");
    REQUIRE_MESSAGE(bar != std::string::npos, r.id);
    std::string anchor = squash(r.paper_ref.substr(bar + 3));
    CHECK_MESSAGE(text.find(anchor) != std::string::npos, r.id, ": ", anchor);
  }
#else
  MESSAGE("reference text not available; anchor check skipped");
#endif
}

TEST_CASE("catalog: parser rejects malformed records") {
  const std::string ok =
      R"({"id":"X","description":"d","paper_ref":"p | q","kind":"numeric",)"
      R"("params":{"evaluator":"t5a","p":0.7},"tolerance":1e-10,"tags":["t"]})";
  CHECK(parse_catalog(one_record(ok)).size() == 1);
  CHECK_THROWS_AS(parse_catalog("[" + ok + "," + ok + "]"), std::invalid_argument);
  std::string bad_ev = std::regex_replace(ok, std::regex("t5a"), "nope");
  CHECK_THROWS_AS(parse_catalog(one_record(bad_ev)), std::invalid_argument);
  std::string bad_tol = std::regex_replace(ok, std::regex("1e-10"), "0");
  CHECK_THROWS_AS(parse_catalog(one_record(bad_tol)), std::invalid_argument);
  std::string no_ref = std::regex_replace(ok, std::regex("p \\| q"), "");
  CHECK_THROWS_AS(parse_catalog(one_record(no_ref)), std::invalid_argument);
  std::string bad_kind = std::regex_replace(ok, std::regex("\"numeric\""), "\"symbolic\"");
  CHECK_THROWS_AS(parse_catalog(one_record(bad_kind)), std::invalid_argument);
}

TEST_CASE("run: single records") {
  auto g = run("G_HALF");
  CHECK(g.status == Status::Pass);
  CHECK(g.abs_err < 1e-7);
  CHECK(g.seconds >= 0);

  auto s = run("SOMOS_T36_9_39");
  CHECK(s.status == Status::Pass);
  CHECK(s.abs_err == 0);

  auto n = run("NEGCTRL_PHI_PSI");
  CHECK(n.status == Status::Fail);
  CHECK(n.negative_control);
  CHECK(n.message.find("first mismatch") != std::string::npos);

  auto p = run("NEGCTRL_G4_PERTURBED");
  CHECK(p.status == Status::Fail);

  CHECK_THROWS_AS(run("NO_SUCH_ID"), std::out_of_range);
}

TEST_CASE("run: evaluator failure is reported as an error") {
  auto recs = parse_catalog(one_record(
      R"({"id":"BAD","description":"d","paper_ref":"p | q","kind":"numeric",)"
      R"("params":{"evaluator":"t5","y":[9]},"tolerance":1e-9,"tags":["t"]})"));
  auto r = run_record(recs[0]);
  CHECK(r.status == Status::Error);
  CHECK_FALSE(r.message.empty());
}

TEST_CASE("run_all: boyd records and determinism across parallelism") {
  auto boyd = run_all("boyd", 2);
  REQUIRE(boyd.reports.size() == 2);
  CHECK(boyd.reports[0].id == "G4_N32_F15");
  CHECK(boyd.reports[1].id == "M8_M2_F23");
  for (const auto& r : boyd.reports) CHECK(r.status == Status::Pass);

  auto a = run_all("elliptic", 1);
  auto b = run_all("elliptic", 8);
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].id == b.reports[i].id);
    CHECK(a.reports[i].status == b.reports[i].status);
    CHECK(a.reports[i].abs_err == b.reports[i].abs_err);
  }
  CHECK(a.summary.pass == b.summary.pass);
  CHECK(a.summary.noncontrol_bad == 0);
}

TEST_CASE("summaries count controls separately") {
  std::vector<VerifyReport> v(3);
  v[0].status = Status::Pass;
  v[1].status = Status::Fail;
  v[1].negative_control = true;
  v[2].status = Status::Error;
  auto s = summarize(v);
  CHECK(s.pass == 1);
  CHECK(s.fail == 1);
  CHECK(s.error == 1);
  CHECK(s.control_fail == 1);
  CHECK(s.control_pass == 0);
  CHECK(s.noncontrol_bad == 1);
}

TEST_CASE("report JSON round trip and CSV layout") {
  VerifyReport r;
  r.id = "X";
  r.description = "a, \"quoted\" thing";
  r.paper_ref = "Eq. (1) | anchor";
  r.lhs = 0.1;
  r.rhs = 1.0 / 3;
  r.abs_err = 2.5e-17;
  r.tol = 1e-8;
  r.status = Status::Fail;
  r.seconds = 0.25;
  r.message = "m";
  auto back = report_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK(back.id == r.id);
  CHECK(back.description == r.description);
  CHECK(back.lhs == r.lhs);
  CHECK(back.rhs == r.rhs);
  CHECK(back.abs_err == r.abs_err);
  CHECK(back.status == r.status);
  CHECK(to_json(back) == to_json(r));

  r.abs_err = std::numeric_limits<double>::infinity();
  r.lhs = std::numeric_limits<double>::quiet_NaN();
  auto odd = report_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK(std::isinf(odd.abs_err));
  CHECK(std::isnan(odd.lhs));

  CHECK(csv_header() == "id,description,paper_ref,lhs,rhs,abs_err,tol,status,seconds");
  std::string row = to_csv(r);
  CHECK(row.rfind("X,\"a, \"\"quoted\"\" thing\",", 0) == 0);
}

TEST_CASE("default parallelism honours MLAB_PARALLELISM") {
  setenv("MLAB_PARALLELISM", "3", 1);
  CHECK(default_parallelism() == 3);
  setenv("MLAB_PARALLELISM", "zero", 1);
  CHECK(default_parallelism() >= 1);
  unsetenv("MLAB_PARALLELISM");
  CHECK(default_parallelism() >= 1);
}
