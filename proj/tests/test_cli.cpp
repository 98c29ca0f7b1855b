#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "linkobs/experiment.hpp"
#include "linkobs/serialize.hpp"

using namespace linkobs;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string capture = "cli_stdout.txt";
  const std::string cmd = std::string(LINKOBS_CLI) + " " + args + " > " + capture + " 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text_file(capture);
  return r;
}

}  // namespace

TEST_CASE("degree subcommand") {
  const Run r = cli("degree --pair hopf --samples 512");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["rounded"] == 1);
  CHECK(j["residual"].get<double>() < 1e-3);
  CHECK(cli("degree --pair hopf --expect 1").code == 0);
  CHECK(cli("degree --pair hopf-reflected --expect 1").code == 1);
  CHECK(cli("degree --pair sphere-point-inside --dim 4 --samples 600 --expect 1").code == 0);
}

TEST_CASE("exit codes") {
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("degree --samples banana").code == 2);
  CHECK(cli("degree --samples 2").code == 2);
  CHECK(cli("degree --pair no-such-pair").code == 2);
  CHECK(cli("flow --check nonsense").code == 2);
  CHECK(cli("flow --activation swish").code == 2);
  CHECK(cli("experiment --config missing.json").code == 2);
  CHECK(cli("--help").code == 0);
  // a diverging run is a numeric failure
  CHECK(cli("train --pair hopf --activation identity --width 64 --depth 8 --lr 1 --loss mse --momentum 0.99 "
            "--epochs 200 --out cli_div")
            .code == 3);
  // a pair file whose sides touch
  json p = builtin_pair("hopf", 16);
  p["side_b"]["points"][0] = p["side_a"]["points"][0];
  write_text_file("cli_touching.json", p.dump());
  CHECK(cli("degree --pair cli_touching.json").code == 3);
}

TEST_CASE("flow subcommand") {
  Run r = cli("flow --activation relu --check group-law");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["max_deviation"].get<double>() < 1e-6);
  r = cli("flow --activation relu --check relu-limit");
  CHECK(r.code == 0);
  CHECK(cli("flow --activation tanh --check relu-limit").code == 2);
  CHECK(cli("flow --activation sigmoid --tolerance 1e-30").code == 1);
}

TEST_CASE("separate and approx verdicts") {
  CHECK(cli("separate --pair hopf --random-linear 2 --seed 4 --expect not-separated").code == 0);
  CHECK(cli("separate --pair hopf --random-linear 1 --seed 4 --expect separated").code == 1);
  CHECK(cli("separate --pair far-separated --project 1 --expect separated").code == 0);
  CHECK(cli("separate --pair hopf --project 1 --random-linear 1").code == 2);
  CHECK(cli("approx --width 3 --depth 3 --seed 2 --expect bound-holds").code == 0);
}

TEST_CASE("generate then degree matches the in-memory numbers") {
  REQUIRE(cli("generate --pair hopf --samples 200 --out cli_pair.json --csv cli_pair").code == 0);
  const Run r = cli("degree --pair cli_pair.json");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["estimate"].get<double>() == pair_degree(builtin_pair("hopf", 200)).estimate);
  CHECK(cloud_from_csv(read_text_file("cli_pair_a.csv")).points == builtin_pair("hopf", 200).side_a.points);
}

TEST_CASE("train writes a net the other subcommands accept") {
  REQUIRE(cli("train --pair far-separated --samples 64 --width 2 --depth 2 --epochs 200 --seed 3 --out cli_train").code ==
          0);
  CHECK(fs::exists("cli_train/net.json"));
  CHECK(read_text_file("cli_train/loss.csv").rfind("epoch,loss\n", 0) == 0);
  CHECK(cli("separate --pair far-separated --samples 64 --net cli_train/net.json --expect separated").code == 0);
  CHECK(cli("approx --net cli_train/net.json --expect bound-holds").code == 0);
}

TEST_CASE("repeated invocations produce identical bytes") {
  const std::vector<std::string> commands = {
      "degree --pair hopf --samples 300 --out cli_det/degree.json",
      "flow --activation 'elu(1)' --seed 9 --out cli_det/flow.json",
      "separate --pair hopf --random-linear 2 --seed 7 --out cli_det/separate.json",
      "approx --width 3 --depth 4 --activation sigmoid --seed 5 --out cli_det/approx.json",
      "train --pair hopf --samples 64 --width 3 --depth 3 --epochs 100 --seed 11 --out cli_det/train",
      "generate --pair unlinked --samples 64 --out cli_det/pair.json --csv cli_det/pair",
  };
  const std::vector<std::string> files = {"degree.json",         "flow.json",          "separate.json",
                                          "approx.json",         "train/net.json",     "train/loss.csv",
                                          "train/separation.json", "pair.json",        "pair_a.csv",
                                          "pair_b.csv"};
  std::vector<std::string> first;
  for (int round = 0; round < 2; ++round) {
    fs::remove_all("cli_det");
    std::vector<std::string> outs;
    for (const auto& c : commands) {
      const Run r = cli(c);
      REQUIRE(r.code == 0);
      outs.push_back(r.out);
    }
    for (const auto& f : files) outs.push_back(read_text_file("cli_det/" + f));
    if (round == 0)
      first = outs;
    else
      for (std::size_t i = 0; i < outs.size(); ++i) CHECK(outs[i] == first[i]);
  }
}

TEST_CASE("experiment subcommand") {
  write_text_file("cli_exp.json",
                  R"({"experiment":"linear-obstruction","pair":"hopf","seeds":[0,1,2],"widths":[1,2],"samples":128})");
  fs::remove_all("cli_exp_a");
  fs::remove_all("cli_exp_b");
  REQUIRE(cli("experiment --config cli_exp.json --out-dir cli_exp_a").code == 0);
  REQUIRE(cli("experiment --config cli_exp.json --out-dir cli_exp_b").code == 0);
  const std::string csv = read_text_file("cli_exp_a/results.csv");
  CHECK(csv == read_text_file("cli_exp_b/results.csv"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv.find(",separated,") == std::string::npos);
  const json m = json::parse(read_text_file("cli_exp_a/manifest.json"));
  CHECK(m["artifacts"].size() == 7);
  write_text_file("cli_exp_bad.json", R"({"experiment":"linear-obstruction","samples":-3})");
  CHECK(cli("experiment --config cli_exp_bad.json").code == 2);
  write_text_file("cli_exp_bad.json", "{not json");
  CHECK(cli("experiment --config cli_exp_bad.json").code == 2);
}
