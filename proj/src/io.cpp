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

#include "dpfl/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace dpfl {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ValidationError(what + ": malformed JSON");
  return j;
}

Eigen::Index require_positive_int(const json& j, const char* key,
                                  const std::string& what) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ValidationError(what + ": missing integer field '" + key + "'");
  const auto v = j[key].get<std::int64_t>();
  if (v < 1)
    throw ValidationError(what + ": field '" + key + "' must be >= 1");
  return static_cast<Eigen::Index>(v);
}

MatrixXd require_matrix(const json& j, const char* key, Eigen::Index rows,
                        Eigen::Index cols, const std::string& what) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValidationError(what + ": missing array field '" + key + "'");
  const json& m = j[key];
  if (static_cast<Eigen::Index>(m.size()) != rows)
    throw ValidationError(what + ": '" + key + "' must have " +
                          std::to_string(rows) + " rows (got " +
                          std::to_string(m.size()) + ")");
  MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = m[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError(what + ": '" + key + "' row " + std::to_string(i) +
                            " must have " + std::to_string(cols) + " entries");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number())
        throw ValidationError(what + ": '" + key + "'[" + std::to_string(i) +
                              "][" + std::to_string(k) + "] is not a number");
      out(i, k) = cell.get<double>();
    }
  }
  return out;
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

JointSource joint_source_from_json_text(const std::string& text) {
  const json j = parse_json(text, "joint source");
  const Eigen::Index cx = require_positive_int(j, "card_x", "joint source");
  const Eigen::Index cy = require_positive_int(j, "card_y", "joint source");
  MatrixXd joint = require_matrix(j, "joint", cx, cy, "joint source");
  return JointSource(std::move(joint));
}

JointSource load_joint_source(const std::string& path) {
  return joint_source_from_json_text(read_file(path));
}

std::string joint_source_to_json_text(const JointSource& source) {
  json j;
  j["card_x"] = source.card_x();
  j["card_y"] = source.card_y();
  j["joint"] = matrix_to_json(source.joint());
  return j.dump(2) + "\n";
}

GaussianModel gaussian_model_from_json_text(const std::string& text) {
  const json j = parse_json(text, "gaussian model");
  const Eigen::Index nx = require_positive_int(j, "n_x", "gaussian model");
  const Eigen::Index ny = require_positive_int(j, "n_y", "gaussian model");
  MatrixXd sx = require_matrix(j, "sigma_x", nx, nx, "gaussian model");
  MatrixXd sy = require_matrix(j, "sigma_y", ny, ny, "gaussian model");
  MatrixXd syx = require_matrix(j, "sigma_yx", ny, nx, "gaussian model");
  return GaussianModel(std::move(sx), std::move(sy), std::move(syx));
}

GaussianModel load_gaussian_model(const std::string& path) {
  return gaussian_model_from_json_text(read_file(path));
}

std::string gaussian_model_to_json_text(const GaussianModel& model) {
  json j;
  j["n_x"] = model.n_x();
  j["n_y"] = model.n_y();
  j["sigma_x"] = matrix_to_json(model.sigma_x());
  j["sigma_y"] = matrix_to_json(model.sigma_y());
  j["sigma_yx"] = matrix_to_json(model.sigma_yx());
  return j.dump(2) + "\n";
}

SolveRequest solve_request_from_json_text(const std::string& text) {
  const json j = parse_json(text, "solve request");
  SolveRequest req;
  if (j.contains("source")) req.source = j["source"].get<std::string>();
  if (j.contains("model")) req.model = j["model"].get<std::string>();
  if (req.source.empty() == req.model.empty())
    throw ValidationError(
        "solve request: exactly one of 'source' or 'model' is required");
  auto get_index = [&](const char* key, Eigen::Index& out) {
    if (j.contains(key)) out = j[key].get<Eigen::Index>();
  };
  get_index("card_t1", req.card_t1);
  get_index("card_t2", req.card_t2);
  get_index("d1", req.d1);
  get_index("d2", req.d2);
  if (j.contains("beta")) req.params.beta = j["beta"].get<double>();
  if (j.contains("lambda")) req.params.lambda = j["lambda"].get<double>();
  if (j.contains("gamma")) req.params.gamma = j["gamma"].get<double>();
  if (j.contains("tol")) req.tol = j["tol"].get<double>();
  if (j.contains("max_iter")) req.max_iter = j["max_iter"].get<int>();
  if (j.contains("seed")) req.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("restarts")) req.restarts = j["restarts"].get<int>();
  req.params.validate();
  return req;
}

SolveRequest load_solve_request(const std::string& path) {
  return solve_request_from_json_text(read_file(path));
}

std::string solve_result_to_json_text(const InfoReport& report, bool converged,
                                      int iterations,
                                      const std::vector<double>* trace) {
  json j;
  j["i_x_t1"] = report.i_x_t1;
  j["i_x_t2"] = report.i_x_t2;
  j["i_t1_t2"] = report.i_t1_t2;
  j["i_y_t1t2"] = report.i_y_t1t2;
  j["functional"] = report.functional_value;
  j["converged"] = converged;
  j["iterations"] = iterations;
  if (trace) j["trace"] = *trace;
  return j.dump(2) + "\n";
}

SweepConfig sweep_config_from_json_text(const std::string& text) {
  const json j = parse_json(text, "sweep config");
  SweepConfig cfg;
  auto get_axis = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty())
      throw ValidationError(std::string("sweep config: '") + key +
                            "' must be a nonempty array");
    return j[key].get<std::vector<double>>();
  };
  cfg.grid.betas = get_axis("betas");
  cfg.grid.lambdas = get_axis("lambdas");
  cfg.grid.gammas = get_axis("gammas");
  if (!j.contains("problem") || !j["problem"].is_string())
    throw ValidationError("sweep config: missing string field 'problem'");
  cfg.problem = j["problem"].get<std::string>();
  if (!j.contains("solver") || !j["solver"].is_string())
    throw ValidationError("sweep config: missing string field 'solver'");
  cfg.solver = j["solver"].get<std::string>();
  if (cfg.solver != "discrete" && cfg.solver != "gaussian")
    throw ValidationError(
        "sweep config: 'solver' must be \"discrete\" or \"gaussian\"");
  if (j.contains("restarts")) cfg.grid.restarts = j["restarts"].get<int>();
  if (j.contains("tol")) cfg.grid.tol = j["tol"].get<double>();
  if (j.contains("max_iter")) cfg.grid.max_iter = j["max_iter"].get<int>();
  if (j.contains("seed")) cfg.grid.base_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("card_t1")) cfg.grid.card_t1 = j["card_t1"].get<Eigen::Index>();
  if (j.contains("card_t2")) cfg.grid.card_t2 = j["card_t2"].get<Eigen::Index>();
  if (j.contains("d1")) cfg.grid.d1 = j["d1"].get<Eigen::Index>();
  if (j.contains("d2")) cfg.grid.d2 = j["d2"].get<Eigen::Index>();
  if (j.contains("keep_all")) cfg.grid.keep_all = j["keep_all"].get<bool>();
  cfg.grid.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  return sweep_config_from_json_text(read_file(path));
}

std::string records_to_json_text(const std::vector<TradeoffRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    json rec;
    rec["beta"] = r.beta;
    rec["lambda"] = r.lambda;
    rec["gamma"] = r.gamma;
    rec["seed"] = r.seed;
    rec["i_x_t1"] = r.report.i_x_t1;
    rec["i_x_t2"] = r.report.i_x_t2;
    rec["i_t1_t2"] = r.report.i_t1_t2;
    rec["i_y_t1t2"] = r.report.i_y_t1t2;
    rec["functional"] = r.report.functional_value;
    rec["iterations"] = r.iterations;
    rec["converged"] = r.converged;
    if (!r.error.empty()) rec["error"] = r.error;
    arr.push_back(std::move(rec));
  }
  return arr.dump(2) + "\n";
}

}  // namespace dpfl
