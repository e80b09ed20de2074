#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "coboson/errors.hpp"

using namespace coboson;
using namespace coboson::cli;

namespace {

std::string stats_output(RunConfig config) {
  std::ostringstream out, err;
  run_stats(config, out, err);
  return out.str();
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << text;
  return path;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("N range parsing") {
  const NRange plain = parse_n_range("2..4");
  CHECK(plain.lo == 2);
  CHECK(plain.hi == 4);
  CHECK(plain.stride == 1);
  const NRange strided = parse_n_range("1..100:5");
  CHECK(strided.stride == 5);
  CHECK_THROWS_AS(parse_n_range("4..2"), ConfigError);
  CHECK_THROWS_AS(parse_n_range("0..2"), ConfigError);
  CHECK_THROWS_AS(parse_n_range("a..b"), ConfigError);
  CHECK_THROWS_AS(parse_n_range("17"), ConfigError);
}

TEST_CASE("rational stats sweep with blocked rows") {
  RunConfig config;
  config.profile_spec = "uniform:3";
  config.n_range = parse_n_range("2..5");
  const std::string csv = stats_output(config);
  CHECK(csv.find("# mode: rational") != std::string::npos);
  CHECK(csv.find("N,eta,mean_n,mean_n2,variance,Q,g2,") != std::string::npos);
  CHECK(csv.find("2,,4/3,16/9,0/1,-1/1,3/4,") != std::string::npos);
  CHECK(csv.find("4,,,,,,,,,,,,,blocked") != std::string::npos);
  CHECK(csv.find("5,,,,,,,,,,,,,blocked") != std::string::npos);
}

TEST_CASE("worked uniform four sweep") {
  RunConfig config;
  config.profile_spec = "uniform:4";
  config.n_range = parse_n_range("2..4");
  const std::string csv = stats_output(config);
  CHECK(csv.find("2,,3/2,9/4,0/1,-1/1,2/3,") != std::string::npos);
}

TEST_CASE("output is byte-for-byte deterministic") {
  RunConfig config;
  config.profile_spec = "uniform:4";
  config.n_range = parse_n_range("1..4");
  CHECK(stats_output(config) == stats_output(config));
  config.format = Format::json;
  CHECK(stats_output(config) == stats_output(config));
}

TEST_CASE("json stats document carries metadata and null cells") {
  RunConfig config;
  config.profile_spec = "uniform:3";
  config.n_range = parse_n_range("3..4");
  config.format = Format::json;
  const auto doc = nlohmann::json::parse(stats_output(config));
  CHECK(doc["meta"]["tool"] == "coboson");
  CHECK(doc["meta"]["profile"] == "uniform:3");
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["status"] == "ok");
  CHECK(doc["rows"][1]["status"] == "blocked");
  CHECK(doc["rows"][1]["mean_n"].is_null());
  CHECK(doc["rows"][0]["eta"].is_null());
}

TEST_CASE("hydrogenic sweeps carry eta and the profile-exponent note") {
  RunConfig config;
  config.profile_spec = "hydrogenic:0.1";
  config.n_range = parse_n_range("2..3");
  const std::string csv = stats_output(config);
  CHECK(csv.find("# mode: float") != std::string::npos);
  CHECK(csv.find("# hydrogenic_momentum_exponent: 4") != std::string::npos);
  // eta = 2 * (0.1)^3
  CHECK(csv.find("2,0.002") != std::string::npos);

  config.mode = Mode::rational;
  std::ostringstream out, err;
  CHECK_THROWS_AS(run_stats(config, out, err), ConfigError);
}

TEST_CASE("float cells use 17 significant digits") {
  RunConfig config;
  config.profile_spec = "hydrogenic:0.1";
  config.n_max = 3;
  std::ostringstream out, err;
  run_lambdas(config, out, err);
  CHECK(out.str().find("2,0.051836278784231596") != std::string::npos);
}

TEST_CASE("precision exhaustion is reported with the last reliable N") {
  RunConfig config;
  config.profile_spec = "hydrogenic:0.01";
  config.n_range = parse_n_range("2..3000");
  std::ostringstream out, err;
  const int code = run_stats(config, out, err);
  CHECK(code == kExitPrecision);
  CHECK(out.str().find("precision_loss") != std::string::npos);
  CHECK(out.str().find("# last_reliable_n: ") != std::string::npos);
  CHECK(err.str().find("last reliable N") != std::string::npos);
}

TEST_CASE("lambda cap is labeled in the metadata") {
  RunConfig config;
  config.profile_spec = "hydrogenic:0.1";
  config.n_range = parse_n_range("2..20");
  config.lambda_max = 8;
  const std::string csv = stats_output(config);
  CHECK(csv.find("# lambda_max: 8") != std::string::npos);

  config.profile_spec = "uniform:4";
  std::ostringstream out, err;
  CHECK_THROWS_AS(run_stats(config, out, err), ConfigError);
}

TEST_CASE("profile files feed the sweep") {
  const auto path = write_temp(
      "coboson_profile_ok.json",
      R"({"label":"mix","weights":["1/2","1/4","1/4"],"normalize":false})");
  RunConfig config;
  config.profile_spec = "file:" + path.string();
  config.n_range = parse_n_range("2..2");
  const std::string csv = stats_output(config);
  CHECK(csv.find("2,,13/10,17/10,1/100,-129/130,125/169,") != std::string::npos);

  const auto bad = write_temp("coboson_profile_bad.json", "{oops");
  config.profile_spec = "file:" + bad.string();
  std::ostringstream out, err;
  CHECK_THROWS_AS(run_stats(config, out, err), ProfileError);
}

TEST_CASE("verify emits the report schema and a zero exit") {
  RunConfig config;
  config.profile_spec = "uniform:4";
  config.format = Format::json;
  std::ostringstream out, err;
  const int code = run_verify(config, out, err);
  CHECK(code == kExitOk);
  const auto doc = nlohmann::json::parse(out.str());
  REQUIRE(doc.is_array());
  REQUIRE(!doc.empty());
  for (const auto& row : doc) {
    CHECK(row.contains("identity"));
    CHECK(row.contains("N"));
    CHECK(row["status"] == "pass");
    CHECK(row["residual"] == "0/1");
  }
  CHECK(err.str().find("0 failure(s)") != std::string::npos);
}

TEST_CASE("verify rejects unusable configurations") {
  std::ostringstream out, err;
  RunConfig config;
  config.profile_spec = "hydrogenic:0.01";
  CHECK_THROWS_AS(run_verify(config, out, err), ConfigError);

  config.profile_spec = "uniform:4";
  config.mode = Mode::floating;
  CHECK_THROWS_AS(run_verify(config, out, err), ConfigError);

  config.mode.reset();
  config.random_count = 3;
  CHECK_THROWS_AS(run_verify(config, out, err), ConfigError);  // both sources

  config.profile_spec.clear();
  config.random_modes = 30;
  CHECK_THROWS_AS(run_verify(config, out, err), ConfigError);
}

TEST_CASE("random verification batch is seeded") {
  RunConfig config;
  config.random_count = 3;
  config.random_modes = 4;
  config.seed = 42;
  std::ostringstream out1, out2, err;
  CHECK(run_verify(config, out1, err) == kExitOk);
  CHECK(run_verify(config, out2, err) == kExitOk);
  CHECK(out1.str() == out2.str());
  CHECK(out1.str().find("random:2/annihilation_ladder") != std::string::npos);
}

TEST_CASE("lambdas table in rational mode") {
  RunConfig config;
  config.profile_spec = "uniform:4";
  config.n_max = 3;
  std::ostringstream out, err;
  run_lambdas(config, out, err);
  CHECK(out.str().find("1,1/1") != std::string::npos);
  CHECK(out.str().find("2,1/4") != std::string::npos);
  CHECK(out.str().find("3,1/16") != std::string::npos);
}

TEST_SUITE_END();
