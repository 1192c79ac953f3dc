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
//
// JSON file formats: joint sources, Gaussian models, solve requests/results,
// sweep configurations. Parse failures surface as ValidationError with the
// offending field named.

#ifndef DPFL_IO_HPP_
#define DPFL_IO_HPP_

#include <optional>
#include <string>

#include "dpfl/discrete.hpp"
#include "dpfl/gaussian.hpp"
#include "dpfl/sweep.hpp"

namespace dpfl {

// {"card_x": int, "card_y": int, "joint": [[row-major reals]]}
JointSource load_joint_source(const std::string& path);
JointSource joint_source_from_json_text(const std::string& text);
std::string joint_source_to_json_text(const JointSource& source);

// {"n_x": int, "n_y": int, "sigma_x": [[..]], "sigma_y": [[..]],
//  "sigma_yx": [[..]]}
GaussianModel load_gaussian_model(const std::string& path);
GaussianModel gaussian_model_from_json_text(const std::string& text);
std::string gaussian_model_to_json_text(const GaussianModel& model);

// Solve request: problem file plus solver configuration. For discrete
// requests `source` and (card_t1, card_t2) apply; Gaussian requests use
// `model` and (d1, d2).
struct SolveRequest {
  std::string source;
  std::string model;
  Eigen::Index card_t1 = 0;  // 0 = default (|X| resp. N_X)
  Eigen::Index card_t2 = 0;
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;
  LagrangeParams params;
  double tol = 1e-8;
  int max_iter = 2000;
  std::uint64_t seed = 1;
  int restarts = 1;
};

SolveRequest solve_request_from_json_text(const std::string& text);
SolveRequest load_solve_request(const std::string& path);

// Result JSON: the InfoReport fields plus convergence metadata; the trace is
// included only when requested.
std::string solve_result_to_json_text(const InfoReport& report, bool converged,
                                      int iterations,
                                      const std::vector<double>* trace);

// Sweep configuration: grid axes, problem file, solver selector.
struct SweepConfig {
  SweepGrid grid;
  std::string problem;          // path to a joint source or Gaussian model
  std::string solver;           // "discrete" or "gaussian"
};

SweepConfig sweep_config_from_json_text(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

std::string records_to_json_text(const std::vector<TradeoffRecord>& records);

std::string read_file(const std::string& path);

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace dpfl

#endif  // DPFL_IO_HPP_
