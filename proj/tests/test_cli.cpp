// Copyright 2026 The dpfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpfl/cli.hpp"

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "dpfl/io.hpp"
#include "dpfl/sweep.hpp"

using namespace dpfl;
namespace fs = std::filesystem;

namespace {

// Scratch directory for CLI artifacts, wiped per test run.
fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "dpfl_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const fs::path p = scratch() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

const char* kGoodJoint = R"({
  "card_x": 2,
  "card_y": 2,
  "joint": [[0.4, 0.1], [0.1, 0.4]]
})";

}  // namespace

TEST_CASE("check accepts a valid joint source") {
  const std::string path = write_temp("good_joint.json", kGoodJoint);
  CHECK(run_cli({"check", path}) == 0);
}

TEST_CASE("check accepts a generated gaussian model") {
  const std::string model_path = (scratch() / "model.json").string();
  CHECK(run_cli({"gen-model", "--nx", "3", "--ny", "2", "--coupling", "0.8",
                 "--seed", "5", "--out", model_path}) == 0);
  CHECK(run_cli({"check", model_path}) == 0);
  CHECK(run_cli({"check", model_path, "--bits"}) == 0);
}

TEST_CASE("check rejects a short-mass joint, citing the row") {
  const std::string path = write_temp("bad_joint.json", R"({
    "card_x": 2,
    "card_y": 2,
    "joint": [[0.45, 0.0], [0.45, 0.0]]
  })");
  CHECK(run_cli({"check", path}) == 1);
}

TEST_CASE("check rejects malformed JSON and missing files") {
  const std::string path = write_temp("broken.json", "{ not json");
  CHECK(run_cli({"check", path}) == 1);
  CHECK(run_cli({"check", (scratch() / "does_not_exist.json").string()}) == 1);
}

TEST_CASE("solve-discrete writes a result file") {
  const std::string src = write_temp("solve_src.json", kGoodJoint);
  const std::string out = (scratch() / "result.json").string();
  CHECK(run_cli({"solve-discrete", "--source", src, "--beta", "0.3",
                 "--lambda", "0.3", "--tol", "1e-9", "--seed", "3", "--out",
                 out, "--trace"}) == 0);
  const std::string text = read_file(out);
  CHECK(text.find("\"i_y_t1t2\"") != std::string::npos);
  CHECK(text.find("\"trace\"") != std::string::npos);
  CHECK(text.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("solve-discrete accepts a request file") {
  const std::string src = write_temp("req_src.json", kGoodJoint);
  const std::string req = write_temp("request.json", R"({
    "source": ")" + src + R"(",
    "card_t1": 2,
    "card_t2": 2,
    "beta": 0.4,
    "lambda": 0.4,
    "gamma": 0.1,
    "tol": 1e-9,
    "max_iter": 500,
    "seed": 9,
    "restarts": 2
  })");
  const std::string out = (scratch() / "req_result.json").string();
  CHECK(run_cli({"solve-discrete", "--request", req, "--out", out}) == 0);
  CHECK(read_file(out).find("\"functional\"") != std::string::npos);
}

TEST_CASE("solve-gaussian runs end to end in csv format") {
  const std::string model_path = (scratch() / "solve_model.json").string();
  REQUIRE(run_cli({"gen-model", "--nx", "3", "--ny", "3", "--seed", "7",
                   "--out", model_path}) == 0);
  const std::string out = (scratch() / "gauss.csv").string();
  CHECK(run_cli({"solve-gaussian", "--model", model_path, "--beta", "0.5",
                 "--lambda", "0.5", "--out", out, "--format", "csv"}) == 0);
  const std::string csv = read_file(out);
  CHECK(csv.find("beta,lambda,gamma,seed,") == 0);
}

TEST_CASE("sweep emits deterministic csv and an svg chart") {
  const std::string model_path = (scratch() / "sweep_model.json").string();
  REQUIRE(run_cli({"gen-model", "--nx", "3", "--ny", "3", "--seed", "11",
                   "--out", model_path}) == 0);
  const std::string cfg = write_temp("sweep_cfg.json", R"({
    "betas": [0.2, 0.6],
    "lambdas": [0.4],
    "gammas": [0.0, 0.2],
    "problem": ")" + model_path + R"(",
    "solver": "gaussian",
    "tol": 1e-9,
    "seed": 13
  })");
  const std::string out1 = (scratch() / "sweep1.csv").string();
  const std::string out2 = (scratch() / "sweep2.csv").string();
  CHECK(run_cli({"sweep", "--config", cfg, "--out", out1}) == 0);
  CHECK(run_cli({"sweep", "--config", cfg, "--out", out2}) == 0);
  CHECK(read_file(out1) == read_file(out2));
  CHECK(read_file(out1).find("beta,lambda,gamma,seed,") == 0);

  const std::string svg = (scratch() / "sweep.svg").string();
  CHECK(run_cli({"sweep", "--config", cfg, "--format", "svg", "--x", "i_x_t1",
                 "--y", "i_y_t1t2", "--out", svg}) == 0);
  const std::string svg_text = read_file(svg);
  CHECK(svg_text.find("<?xml") == 0);
  CHECK(svg_text.find("http://www.w3.org/2000/svg") != std::string::npos);
}

TEST_CASE("sweep rejects a bad config") {
  const std::string cfg = write_temp("bad_cfg.json", R"({
    "betas": [],
    "lambdas": [0.4],
    "gammas": [0.0],
    "problem": "x.json",
    "solver": "gaussian"
  })");
  CHECK(run_cli({"sweep", "--config", cfg, "--out",
                 (scratch() / "never.csv").string()}) == 1);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli({}) == 1);
  CHECK(run_cli({"solve-discrete"}) == 1);
  CHECK(run_cli({"no-such-command"}) == 1);
}
