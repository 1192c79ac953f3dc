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

#include "dpfl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <utility>

#include "dpfl/util.hpp"

namespace dpfl {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct GridPoint {
  double beta, lambda, gamma;
  std::uint64_t seed;  // derived point seed, pre-restart
};

std::vector<GridPoint> enumerate_grid(const SweepGrid& grid) {
  std::vector<GridPoint> points;
  points.reserve(grid.betas.size() * grid.lambdas.size() * grid.gammas.size());
  for (std::size_t ib = 0; ib < grid.betas.size(); ++ib) {
    for (std::size_t il = 0; il < grid.lambdas.size(); ++il) {
      for (std::size_t ig = 0; ig < grid.gammas.size(); ++ig) {
        const std::uint64_t seed = derive_seed(
            derive_seed(derive_seed(grid.base_seed, ib), il), ig);
        points.push_back(
            {grid.betas[ib], grid.lambdas[il], grid.gammas[ig], seed});
      }
    }
  }
  return points;
}

TradeoffRecord failed_record(const GridPoint& pt, std::uint64_t seed,
                             const std::string& why) {
  TradeoffRecord rec;
  rec.beta = pt.beta;
  rec.lambda = pt.lambda;
  rec.gamma = pt.gamma;
  rec.seed = seed;
  rec.report = InfoReport{kNan, kNan, kNan, kNan, kNan};
  rec.error = why;
  return rec;
}

// Runs one grid point: `restarts` independent solver runs, returning either
// the best record or all of them.
template <typename SolveOne>
void run_point(const SweepGrid& grid, const GridPoint& pt, SolveOne&& solve_one,
               std::vector<TradeoffRecord>& out) {
  std::vector<TradeoffRecord> runs;
  runs.reserve(grid.restarts);
  for (int r = 0; r < grid.restarts; ++r) {
    const std::uint64_t seed =
        derive_seed(pt.seed, static_cast<std::uint64_t>(r));
    try {
      runs.push_back(solve_one(pt, seed));
    } catch (const Error& e) {
      runs.push_back(failed_record(pt, seed, e.what()));
    }
  }
  if (grid.keep_all) {
    out.insert(out.end(), runs.begin(), runs.end());
    return;
  }
  const TradeoffRecord* best = &runs.front();
  for (const TradeoffRecord& r : runs) {
    if (!r.error.empty()) continue;
    if (!best->error.empty() ||
        r.report.functional_value < best->report.functional_value) {
      best = &r;
    }
  }
  out.push_back(*best);
}

template <typename SolveOne>
std::vector<TradeoffRecord> run_grid(const SweepGrid& grid, int threads,
                                     SolveOne&& solve_one) {
  grid.validate();
  const std::vector<GridPoint> points = enumerate_grid(grid);
  std::vector<std::vector<TradeoffRecord>> slots(points.size());

  auto work = [&](std::size_t i) {
    run_point(grid, points[i], solve_one, slots[i]);
  };

  if (threads <= 1 || points.size() <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    const int n_workers =
        std::min<int>(threads, static_cast<int>(points.size()));
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < points.size();
             i = next.fetch_add(1)) {
          work(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<TradeoffRecord> records;
  for (auto& slot : slots)
    records.insert(records.end(), slot.begin(), slot.end());
  return records;
}

}  // namespace

void SweepGrid::validate() const {
  if (betas.empty() || lambdas.empty() || gammas.empty())
    throw ValidationError("sweep grid axes must be nonempty");
  for (double b : betas)
    if (!(b > 0.0)) throw ValidationError("all beta values must be > 0");
  for (double l : lambdas)
    if (!(l > 0.0)) throw ValidationError("all lambda values must be > 0");
  for (double g : gammas)
    if (!(g >= 0.0)) throw ValidationError("all gamma values must be >= 0");
  if (restarts < 1) throw ValidationError("restarts must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
}

InfoField parse_info_field(const std::string& name) {
  if (name == "i_x_t1") return InfoField::IXT1;
  if (name == "i_x_t2") return InfoField::IXT2;
  if (name == "i_t1_t2") return InfoField::IT1T2;
  if (name == "i_y_t1t2") return InfoField::IYT1T2;
  if (name == "functional") return InfoField::Functional;
  throw ValidationError("unknown information field '" + name +
                        "' (expected i_x_t1, i_x_t2, i_t1_t2, i_y_t1t2 or "
                        "functional)");
}

const char* info_field_name(InfoField field) {
  switch (field) {
    case InfoField::IXT1: return "i_x_t1";
    case InfoField::IXT2: return "i_x_t2";
    case InfoField::IT1T2: return "i_t1_t2";
    case InfoField::IYT1T2: return "i_y_t1t2";
    case InfoField::Functional: return "functional";
  }
  return "?";
}

double info_field_value(const TradeoffRecord& record, InfoField field) {
  switch (field) {
    case InfoField::IXT1: return record.report.i_x_t1;
    case InfoField::IXT2: return record.report.i_x_t2;
    case InfoField::IT1T2: return record.report.i_t1_t2;
    case InfoField::IYT1T2: return record.report.i_y_t1t2;
    case InfoField::Functional: return record.report.functional_value;
  }
  return kNan;
}

std::vector<TradeoffRecord> run_sweep(const SweepGrid& grid,
                                      const JointSource& source, int threads) {
  const Eigen::Index c1 = grid.card_t1 > 0 ? grid.card_t1 : source.card_x();
  const Eigen::Index c2 = grid.card_t2 > 0 ? grid.card_t2 : source.card_x();
  return run_grid(grid, threads,
                  [&](const GridPoint& pt, std::uint64_t seed) {
                    LagrangeParams params;
                    params.beta = pt.beta;
                    params.lambda = pt.lambda;
                    params.gamma = pt.gamma;
                    const SolveResult run = solve(source, c1, c2, params,
                                                  grid.tol, grid.max_iter, seed);
                    TradeoffRecord rec;
                    rec.beta = pt.beta;
                    rec.lambda = pt.lambda;
                    rec.gamma = pt.gamma;
                    rec.seed = seed;
                    rec.report = run.report;
                    rec.iterations = run.iterations;
                    rec.converged = run.converged;
                    return rec;
                  });
}

std::vector<TradeoffRecord> run_sweep(const SweepGrid& grid,
                                      const GaussianModel& model, int threads) {
  const Eigen::Index d1 = grid.d1 > 0 ? grid.d1 : model.n_x();
  const Eigen::Index d2 = grid.d2 > 0 ? grid.d2 : model.n_x();
  return run_grid(grid, threads,
                  [&](const GridPoint& pt, std::uint64_t seed) {
                    LagrangeParams params;
                    params.beta = pt.beta;
                    params.lambda = pt.lambda;
                    params.gamma = pt.gamma;
                    const GaussianSolveResult run = solve_gaussian(
                        model, d1, d2, params, grid.tol, grid.max_iter, seed);
                    TradeoffRecord rec;
                    rec.beta = pt.beta;
                    rec.lambda = pt.lambda;
                    rec.gamma = pt.gamma;
                    rec.seed = seed;
                    rec.report = run.report;
                    rec.iterations = run.iterations;
                    rec.converged = run.converged;
                    return rec;
                  });
}

std::vector<std::pair<double, double>> frontier(
    const std::vector<TradeoffRecord>& records, InfoField x_axis,
    InfoField y_axis, int bins) {
  if (bins < 1) throw ValidationError("frontier bins must be >= 1");
  std::vector<std::pair<double, double>> usable;
  for (const auto& r : records) {
    const double x = info_field_value(r, x_axis);
    const double y = info_field_value(r, y_axis);
    if (std::isfinite(x) && std::isfinite(y)) usable.emplace_back(x, y);
  }
  if (usable.empty())
    throw EmptyRecords("frontier: no usable records");

  double lo = usable.front().first, hi = usable.front().first;
  for (const auto& [x, y] : usable) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double width = hi - lo;

  // Max-y candidate per nonempty x-bin, keyed by bin index.
  std::vector<std::pair<double, double>> best_per_bin(
      bins, {kNan, -std::numeric_limits<double>::infinity()});
  std::vector<bool> occupied(bins, false);
  for (const auto& [x, y] : usable) {
    int idx = width > 0.0
                  ? std::min<int>(bins - 1,
                                  static_cast<int>((x - lo) / width *
                                                   static_cast<double>(bins)))
                  : 0;
    if (!occupied[idx] || y > best_per_bin[idx].second) {
      best_per_bin[idx] = {x, y};
      occupied[idx] = true;
    }
  }

  // Upper envelope: drop bins dominated by a lower-x bin.
  std::vector<std::pair<double, double>> out;
  double best_y = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < bins; ++i) {
    if (!occupied[i]) continue;
    if (best_per_bin[i].second >= best_y) {
      best_y = best_per_bin[i].second;
      out.push_back(best_per_bin[i]);
    }
  }
  return out;
}

GaussianModel gen_gaussian_model(Eigen::Index n_x, Eigen::Index n_y,
                                 double coupling_strength, std::uint64_t seed) {
  if (n_x < 1 || n_y < 1) throw ValidationError("model dimensions must be >= 1");
  if (!(coupling_strength >= 0.0 && coupling_strength <= 1.0))
    throw ValidationError("coupling_strength must lie in [0, 1]");
  const Eigen::Index n = n_x + n_y;
  std::mt19937_64 rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = scale * normal_unit(rng);
  MatrixXd full = g * g.transpose() + 0.1 * MatrixXd::Identity(n, n);
  return GaussianModel(full.topLeftCorner(n_x, n_x),
                       full.bottomRightCorner(n_y, n_y),
                       coupling_strength * full.bottomLeftCorner(n_y, n_x));
}

std::string records_to_csv(const std::vector<TradeoffRecord>& records) {
  std::string csv =
      "beta,lambda,gamma,seed,i_x_t1,i_x_t2,i_t1_t2,i_y_t1t2,functional,"
      "iterations,converged\n";
  for (const auto& r : records) {
    csv += format_significant(r.beta, 12);
    csv += ',';
    csv += format_significant(r.lambda, 12);
    csv += ',';
    csv += format_significant(r.gamma, 12);
    csv += ',';
    csv += std::to_string(r.seed);
    csv += ',';
    csv += format_significant(r.report.i_x_t1, 12);
    csv += ',';
    csv += format_significant(r.report.i_x_t2, 12);
    csv += ',';
    csv += format_significant(r.report.i_t1_t2, 12);
    csv += ',';
    csv += format_significant(r.report.i_y_t1t2, 12);
    csv += ',';
    csv += format_significant(r.report.functional_value, 12);
    csv += ',';
    csv += std::to_string(r.iterations);
    csv += ',';
    csv += r.converged ? '1' : '0';
    csv += '\n';
  }
  return csv;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw ValidationError("spearman: need two equal-length samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j));
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace dpfl
