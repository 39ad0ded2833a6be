#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "zsiglab/cli.hpp"
#include "zsiglab/report.hpp"

using namespace zsig;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> with(std::vector<std::string> base, std::initializer_list<std::string> extra) {
  base.insert(base.end(), extra);
  return base;
}

// Compares every CSV cell against the JSON rendering of the same report.
void check_equivalent(const std::string& csv, const std::string& json) {
  const auto records = parse_csv(csv);
  const auto j = nlohmann::ordered_json::parse(json);
  REQUIRE(!records.empty());
  const auto& header = records[0];
  REQUIRE(records.size() - 1 == j["rows"].size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& row = j["rows"][r - 1];
    REQUIRE(records[r].size() == header.size());
    for (std::size_t c = 0; c < header.size(); ++c) CHECK(records[r][c] == render_cell(row[header[c]]));
  }
  // config and summary lines carry the same objects
  const auto cfg = csv.substr(csv.find("# config: ") + 10, csv.find('\n') - 10);
  auto from_csv = nlohmann::ordered_json::parse(cfg), from_json = j["config"];
  // only the requested format differs
  CHECK(from_csv["format"] == "csv");
  CHECK(from_json["format"] == "json");
  from_csv.erase("format");
  from_json.erase("format");
  CHECK(from_csv == from_json);
  const auto sp = csv.rfind("# summary: ");
  CHECK(nlohmann::ordered_json::parse(csv.substr(sp + 11)) == j["summary"]);
}

const std::vector<std::vector<std::string>> kCommands{
    {"orbit", "--map", "2;0;1", "--n-max", "6"},
    {"zsigmondy", "--map", "2;0;1", "--n-max", "8"},
    {"zsigmondy", "--map", "2;0;1", "--shift", "26", "--alpha", "26", "--n-max", "6"},
    {"family-scan", "--family", "taunec", "--N", "2..6"},
    {"family-scan", "--family", "random", "--count", "5", "--n-max", "6", "--seed", "9"},
    {"abc", "--map", "2;0;3", "--n-max", "6"},
    {"galois", "--map", "2;0;1", "--n-max", "4"},
    {"galois", "--family", "example", "--i-max", "4"},
};

}  // namespace

TEST_CASE("every command succeeds and CSV matches JSON") {
  for (const auto& cmd : kCommands) {
    INFO(cmd[0] << " " << cmd.size());
    const Run csv = run(with(cmd, {"--format", "csv"}));
    const Run json = run(with(cmd, {"--format", "json"}));
    REQUIRE(csv.code == 0);
    REQUIRE(json.code == 0);
    check_equivalent(csv.out, json.out);
    const auto j = nlohmann::ordered_json::parse(json.out);
    CHECK(j["config"]["version"] == kVersion);
    CHECK(j["config"]["command"] == cmd[0]);
  }
}

TEST_CASE("reports are deterministic and independent of --jobs") {
  for (const auto& cmd : kCommands) {
    const Run a = run(with(cmd, {"--format", "json", "--jobs", "1"}));
    const Run b = run(with(cmd, {"--format", "json", "--jobs", "1"}));
    const Run c = run(with(cmd, {"--format", "json", "--jobs", "4"}));
    CHECK(a.out == b.out);
    auto ja = nlohmann::ordered_json::parse(a.out), jc = nlohmann::ordered_json::parse(c.out);
    ja["config"].erase("jobs");
    jc["config"].erase("jobs");
    CHECK(ja == jc);
  }
}

TEST_CASE("CSV layout") {
  const Run r = run({"orbit", "--map", "2;0;1", "--n-max", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# config: ", 0) == 0);
  CHECK(r.out.find("n,value,digits,height\r\n") != std::string::npos);
  CHECK(r.out.find("3,5,1,") != std::string::npos);
}

TEST_CASE("zsigmondy report content") {
  const Run r = run({"zsigmondy", "--map", "2;0;1", "--n-max", "8", "--format", "json"});
  const auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["summary"]["zsigmondy_set"].empty());
  CHECK(j["rows"][0]["mult_one_witness"] == "2");
  CHECK(j["rows"][3]["mult_one_witness"] == "677");

  const Run s = run({"zsigmondy", "--map", "2;0;1", "--shift", "26", "--alpha", "0", "--n-max", "6", "--format", "json"});
  REQUIRE(s.code == 0);
  const auto js = nlohmann::ordered_json::parse(s.out);
  CHECK(js["summary"]["zsigmondy_set"] == nlohmann::ordered_json::array({4}));
}

TEST_CASE("family scan content") {
  const Run r = run({"family-scan", "--N", "2..10", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  REQUIRE(j["rows"].size() == 9);
  for (const auto& row : j["rows"]) {
    CHECK(row["N_in_zsigmondy"] == true);
    CHECK(row["bound_margin"].get<double>() > 0);
  }
  const double slope = j["summary"]["slope"].get<double>();
  const double ref = j["summary"]["reference_slope"].get<double>();
  CHECK(slope >= 0.8 * ref);
  CHECK(slope <= 1.2 * ref);

  const Run one = run({"family-scan", "--N", "1..2", "--format", "json"});
  REQUIRE(one.code == 0);
  CHECK(nlohmann::ordered_json::parse(one.out)["rows"][0]["note"] == "c = 0, outside P_d");
}

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"orbit", "--field", "Q(-5)"}).code == 2);
  CHECK(run({"orbit", "--map", "2;0"}).code == 2);
  CHECK(run({"orbit", "--format", "xml"}).code == 2);
  CHECK(run({"family-scan", "--N", "5..3"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"zsigmondy", "--map", "2;0;-1"}).code == 4);   // preperiodic start
  CHECK(run({"galois", "--map", "2;0;-4"}).code == 4);      // reducible base
  CHECK(run({"abc", "--map", "2;0;1", "--n-max", "4", "--trial-bound", "2", "--rho-iters", "0"}).code == 0);

  const Run big = run({"orbit", "--map", "2;0;1", "--n-max", "40"});
  CHECK(big.code == 3);
  CHECK(big.out.find("overflow_at") != std::string::npos);
}

TEST_CASE("budget exhaustion marks abc rows partial") {
  const Run r = run({"abc", "--map", "2;0;1", "--n-max", "9", "--trial-bound", "2", "--rho-iters", "0", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  bool any_partial = false;
  for (const auto& row : j["rows"])
    if (row["status"].get<std::string>().rfind("partial", 0) == 0) any_partial = true;
  CHECK(any_partial);
}

TEST_CASE("binary writes --out files and reports exit codes") {
  const std::string path = "cli_test_out.json";
  const std::string cmd = std::string(ZSIGLAB_BIN) + " orbit --map '2;0;1' --n-max 4 --format json --out " + path;
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(nlohmann::ordered_json::parse(ss.str())["rows"].size() == 5);

  const int bad = std::system((std::string(ZSIGLAB_BIN) + " orbit --field 'Q(-5)' 2>/dev/null").c_str());
  REQUIRE(WIFEXITED(bad));
  CHECK(WEXITSTATUS(bad) == 2);
}
