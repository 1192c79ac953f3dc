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
// Multiplier-grid sweeps: run the solver over the Cartesian product of
// (beta, lambda, gamma) axes, collect achieved information quadruples, and
// reduce them to Pareto frontiers.

#ifndef DPFL_SWEEP_HPP_
#define DPFL_SWEEP_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dpfl/discrete.hpp"
#include "dpfl/gaussian.hpp"

namespace dpfl {

struct SweepGrid {
  std::vector<double> betas;
  std::vector<double> lambdas;
  std::vector<double> gammas;
  int restarts = 1;
  double tol = 1e-8;
  int max_iter = 2000;
  std::uint64_t base_seed = 1;
  // 0 selects the module default (|X| for discrete encoders, N_X for the
  // Gaussian representation dimensions).
  Eigen::Index card_t1 = 0;
  Eigen::Index card_t2 = 0;
  Eigen::Index d1 = 0;
  Eigen::Index d2 = 0;
  // Keep every restart's record instead of the per-point best.
  bool keep_all = false;

  void validate() const;
};

// One sweep point. `error` is empty on success; a failed point keeps NaN
// information fields and converged = false.
struct TradeoffRecord {
  double beta = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  InfoReport report;
  int iterations = 0;
  bool converged = false;
  std::string error;
};

// Information fields a frontier or chart can select.
enum class InfoField { IXT1, IXT2, IT1T2, IYT1T2, Functional };

InfoField parse_info_field(const std::string& name);
const char* info_field_name(InfoField field);
double info_field_value(const TradeoffRecord& record, InfoField field);

// Runs the full Cartesian grid, beta-major lexicographic order. Per-point
// seeds derive from base_seed and the grid indices, so any scheduling yields
// the same record list. Honors `threads` workers (<= 1 means sequential).
std::vector<TradeoffRecord> run_sweep(const SweepGrid& grid,
                                      const JointSource& source,
                                      int threads = 1);
std::vector<TradeoffRecord> run_sweep(const SweepGrid& grid,
                                      const GaussianModel& model,
                                      int threads = 1);

// Upper-envelope Pareto filter: bin x into `bins` equal-width bins, keep the
// max-y record per bin, then drop bins dominated by a lower-x bin. The
// result is nondecreasing in y. Records with NaN in either field are
// ignored; throws EmptyRecords when nothing usable remains.
std::vector<std::pair<double, double>> frontier(
    const std::vector<TradeoffRecord>& records, InfoField x_axis,
    InfoField y_axis, int bins = 50);

// Random SPD test model: the joint (X, Y) covariance is G G^T + 0.1 I for a
// seeded Gaussian factor G (entries scaled by 1/sqrt(n)), with the cross
// block scaled by coupling_strength in [0, 1].
GaussianModel gen_gaussian_model(Eigen::Index n_x, Eigen::Index n_y,
                                 double coupling_strength, std::uint64_t seed);

// CSV serialization: spec columns, information values at 12 significant
// digits, locale independent.
std::string records_to_csv(const std::vector<TradeoffRecord>& records);

// Spearman rank correlation with average ranks for ties. Returns 0 when
// either input is constant.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace dpfl

#endif  // DPFL_SWEEP_HPP_
