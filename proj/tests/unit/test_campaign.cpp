#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "reflbound/campaign.hpp"
#include "reflbound/cli.hpp"
#include "reflbound/report.hpp"

using namespace reflbound;
using namespace reflbound::campaign;

namespace {

int run_cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  args.insert(args.begin(), "reflbound");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int rc = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

std::int64_t max_final(const CampaignReport& r) {
  std::int64_t m = 0;
  for (const auto& f : r.families) {
    for (const auto& v : f.enumeration.verdicts) m = std::max(m, v.final_N.value_or(0));
    for (const auto& v : f.fallbacks) m = std::max(m, v.final_N.value_or(0));
  }
  return m;
}

}  // namespace

TEST_CASE("campaign specs") {
  auto s = default_spec("gamma64");
  CHECK(s.params.b2 == Rational(28 * 28));
  CHECK(s.target == 56);
  auto g15 = default_spec("gamma15");
  CHECK(g15.params.s0 == 6);
  REQUIRE(g15.fallback.has_value());
  CHECK(g15.fallback->ls == std::vector<std::int64_t>{3, 4, 5});
  CHECK(default_spec("gamma46").params.a1 == Rational(31, 10));
  CHECK_THROWS_AS(default_spec("gamma99"), DomainError);
}

TEST_CASE("gamma46 campaign") {
  auto r = run_gamma46();
  REQUIRE(r.families.size() == 1);
  const auto& f = r.families[0];
  CHECK(r.grand_bound == 99);
  CHECK(std::get<numthy::Single>(*r.achiever).l == 199);
  CHECK(*r.grand_bound == max_final(r));
  REQUIRE(f.superseded.size() == 3);
  CHECK(f.superseded[1].N_A == 153);
  CHECK(f.superseded[2].N_A == 172);
  REQUIRE(f.fallbacks.size() == 3);
  CHECK(f.fallbacks[0].final_N == 76);
  CHECK(f.fallbacks[1].final_N == 31);
  CHECK(f.fallbacks[2].final_N == 24);
  REQUIRE(f.envelope.has_value());
  CHECK(f.envelope->consistent);
  CHECK(f.envelope->max_value < 3.1);
}

TEST_CASE("gamma64 campaign") {
  auto r = run_gamma64();
  CHECK(r.grand_bound == 56);
  CHECK(*r.grand_bound == max_final(r));
  for (const auto& v : r.families[0].enumeration.verdicts) {
    if (v.final_N) CHECK(*v.final_N <= 56);
  }
  RunOptions low;
  low.target_override = 10;
  auto o = run_gamma64(low);
  CHECK(o.families[0].spec.target == 10);
}

TEST_CASE("report bodies are reproducible") {
  RunOptions one, four;
  one.workers = 1;
  four.workers = 4;
  auto a = run_gamma64(one), b = run_gamma64(four), c = run_gamma64(one);
  CHECK(report::body(a) == report::body(b));
  CHECK(report::body(a) == report::body(c));
  CHECK(report::body_hash(a) == report::body_hash(b));

  auto j = report::to_json(a);
  for (const char* key : {"campaign", "params", "constants", "exceptional_l", "exceptional_pairs", "candidates",
                          "fallbacks", "gram_envelopes", "grand_bound", "achiever", "seed",
                          "precision_escalations", "wall_ms"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["grand_bound"] == 56);
  CHECK(j["params"]["b2"] == 784.0);
  CHECK(j["params"]["exact"]["b2"] == "784");
  CHECK_FALSE(report::to_json(a, false).contains("wall_ms"));
}

TEST_CASE("cli subcommands") {
  std::string out, err;
  CHECK(run_cli({"numthy", "phi", "--l", "4249"}, &out) == cli::kOk);
  CHECK(out == "3636\n");
  CHECK(run_cli({"methodb", "case2", "--k", "607", "--s", "7", "--a1", "8", "--a2", "2", "--b1", "40", "--b2", "87808"},
            &out) == cli::kOk);
  CHECK(out.find("N=909") != std::string::npos);
  CHECK(run_cli({"methoda", "case1", "--l", "5", "--a1", "0", "--a2", "4", "--b1", "4", "--b2", "196"}, &out) ==
        cli::kOk);
  CHECK(out.find("N=24") != std::string::npos);
  CHECK(run_cli({"numthy", "phi", "--bogus", "1"}, &out, &err) == cli::kUsage);
  CHECK(run_cli({"numthy", "phi"}, &out, &err) == cli::kUsage);
  CHECK(run_cli({}, &out, &err) == cli::kUsage);
  CHECK(run_cli({"methodb", "case1", "--l", "5", "--a1", "x", "--a2", "4", "--b1", "4", "--b2", "196"}, &out, &err) ==
        cli::kUsage);
  CHECK(run_cli({"campaign", "gamma46", "--expect", "99"}, &out) == cli::kOk);
  CHECK(run_cli({"campaign", "gamma46", "--expect", "98"}, &out, &err) == cli::kExpectationMismatch);
  CHECK(run_cli({"campaign", "gamma64", "--workers", "0"}, &out, &err) == cli::kUsage);
}

TEST_CASE("cli report files") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "reflbound_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p1 = dir / "w1.json", p8 = dir / "w8.json";
  CHECK(run_cli({"campaign", "gamma64", "--workers", "1", "--out", p1.string()}) == cli::kOk);
  CHECK(run_cli({"campaign", "gamma64", "--workers", "8", "--out", p8.string()}) == cli::kOk);
  auto body = [](const fs::path& p) {
    std::ifstream in(p);
    auto j = report::Json::parse(in);
    j.erase("wall_ms");
    return j.dump();
  };
  CHECK(body(p1) == body(p8));

  auto bad = dir / "bad.json";
  CHECK(run_cli({"campaign", "gamma64", "--out", bad.string(), "--nope"}) == cli::kUsage);
  CHECK_FALSE(fs::exists(bad));
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 2);
  fs::remove_all(dir);
}
