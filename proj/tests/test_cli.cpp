#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pga/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pga-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = pga::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({"equilibrium"}).code == pga::kExitOk);
  CHECK(run({}).code == pga::kExitUsage);
  CHECK(run({"equilibrium", "--bogus"}).code == pga::kExitUsage);
  CHECK(run({"equilibrium", "--V", "1", "--g", "2"}).code == pga::kExitValidation);
  CHECK(run({"equilibrium", "--preset", "l1-priority-fee"}).code == pga::kExitValidation);
  CHECK(run({"equilibrium", "--preset", "l2-revert-protection", "--r1", "0.1"}).code ==
        pga::kExitUsage);
  CHECK(run({"sweep", "--target", "nope"}).code == pga::kExitUsage);
  const Run strict = run({"equilibrium", "--r1", "0", "--c", "0.5", "--strict"});
  CHECK(strict.code == pga::kExitVerification);
}

TEST_CASE("equilibrium json") {
  const Run r = run({"equilibrium", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["kind"] == "equilibrium");
  CHECK(j["abstain_prob"].get<double>() == doctest::Approx(0.788664982765905));
  CHECK(j["expected_bid"].get<double>() == doctest::Approx(4.640468508));
}

TEST_CASE("pure equilibrium under full revert protection") {
  const Run r = run({"equilibrium", "--preset", "l2-revert-protection", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["type"] == "pure");
  CHECK(j["top_bid"].get<double>() == 9.0);
  CHECK(j["representative"].size() == 20);
  CHECK(run({"equilibrium", "--r1", "0", "--r2", "0"}).out.find("top two bids = 9") !=
        std::string::npos);
}

TEST_CASE("sweep headers") {
  CHECK(first_line(run({"sweep", "--target", "cdf", "--vary", "r1=0.1,0.5", "--grid", "5"}).out) ==
        "r1,b,F");
  const Run ab = run({"sweep", "--target", "abstention", "--vary", "N=2:10:1"});
  CHECK(first_line(ab.out) == "N,p_star");
  CHECK(std::count(ab.out.begin(), ab.out.end(), '\n') == 10);
  CHECK(first_line(run({"sweep", "--target", "revenue", "--vary", "r1=0.1", "--vary",
                        "N=2:4:1"})
                       .out) == "r1,N,p_star,revenue,submitted");
  CHECK(first_line(run({"sweep", "--target", "submitted", "--vary", "N=2,3"}).out) ==
        "N,submitted,submitted_limit");
  CHECK(first_line(run({"sweep", "--target", "scheme_compare", "--vary", "c=0.1,0.2"}).out) ==
        "c,optimal_r1,scheme1_profit,scheme2_revenue,winner");
  CHECK(first_line(run({"sweep", "--target", "mev_tax", "--vary", "tau=0,1"}).out) ==
        "tau,expected_tax,upper_bound,asymptote");
}

TEST_CASE("sweep output does not depend on thread count") {
  const std::vector<std::string> args{"sweep", "--target", "revenue", "--vary", "N=2:60:1"};
  ::setenv("PGA_LAB_THREADS", "1", 1);
  const std::string a = run(args).out;
  ::setenv("PGA_LAB_THREADS", "8", 1);
  const std::string b = run(args).out;
  ::unsetenv("PGA_LAB_THREADS");
  CHECK(a == b);
}

TEST_CASE("config file precedence") {
  const auto cfg = temp_file("pga_cli_test_cfg.json", R"({"V": 20, "N": 2})");
  const auto j = nlohmann::json::parse(
      run({"equilibrium", "--config", cfg.string(), "--N", "3", "--json"}).out);
  CHECK(j["params"]["V"] == 20.0);
  CHECK(j["params"]["N"] == 3);
  const auto bad = temp_file("pga_cli_test_bad.json", R"({"W": 1})");
  CHECK(run({"equilibrium", "--config", bad.string()}).code == pga::kExitValidation);
  std::filesystem::remove(cfg);
  std::filesystem::remove(bad);
}

TEST_CASE("simulate writes events and is deterministic") {
  const auto events = std::filesystem::temp_directory_path() / "pga_cli_test_events.csv";
  const std::vector<std::string> args{"simulate", "--T", "0.05", "--seed", "4", "--json"};
  const Run a = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == run(args).out);
  auto with_events = args;
  with_events.insert(with_events.end(), {"--events", events.string()});
  REQUIRE(run(with_events).code == 0);
  std::ifstream in(events);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("block,true_price,onchain_before", 0) == 0);
  std::filesystem::remove(events);
  CHECK(run({"simulate", "--sigma", "-1"}).code == pga::kExitValidation);
}

TEST_CASE("verify quick battery") {
  const Run r = run({"verify", "--battery", "quick", "--check", "1", "--check", "4", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["checks"].size() == 2);
  CHECK(j["pass"] == true);
}
