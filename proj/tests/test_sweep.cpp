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

#include <cmath>

#include "doctest.h"
#include "dpfl/chart.hpp"

using namespace dpfl;

namespace {

SweepGrid small_grid() {
  SweepGrid g;
  g.betas = {0.2, 0.5, 1.0};
  g.lambdas = {0.5};
  g.gammas = {0.0, 0.3};
  g.tol = 1e-9;
  g.max_iter = 1000;
  g.base_seed = 7;
  return g;
}

TradeoffRecord rec_xy(double x, double y) {
  TradeoffRecord r;
  r.report.i_x_t1 = x;
  r.report.i_y_t1t2 = y;
  r.converged = true;
  return r;
}

}  // namespace

TEST_CASE("grid validation") {
  SweepGrid g = small_grid();
  g.betas.clear();
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = small_grid();
  g.betas = {0.0};
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = small_grid();
  g.gammas = {-0.1};
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = small_grid();
  g.restarts = 0;
  CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("single-point grid matches a direct solve") {
  const GaussianModel m = gen_gaussian_model(3, 3, 1.0, 3);
  SweepGrid g;
  g.betas = {0.4};
  g.lambdas = {0.6};
  g.gammas = {0.1};
  g.tol = 1e-10;
  g.base_seed = 11;
  const auto records = run_sweep(g, m);
  REQUIRE(records.size() == 1);
  CHECK(records[0].error.empty());

  LagrangeParams p;
  p.beta = 0.4;
  p.lambda = 0.6;
  p.gamma = 0.1;
  const GaussianSolveResult direct =
      solve_gaussian(m, 3, 3, p, 1e-10, 2000, records[0].seed);
  CHECK(records[0].report.functional_value == direct.report.functional_value);
  CHECK(records[0].iterations == direct.iterations);
}

TEST_CASE("sweeps are deterministic and scheduling independent") {
  const GaussianModel m = gen_gaussian_model(3, 3, 1.0, 5);
  const SweepGrid g = small_grid();
  const auto seq = run_sweep(g, m, 1);
  const auto par = run_sweep(g, m, 4);
  const std::string csv_seq = records_to_csv(seq);
  const std::string csv_par = records_to_csv(par);
  CHECK(csv_seq == csv_par);
  CHECK(seq.size() == 6);
  // Lexicographic order over (beta, lambda, gamma).
  CHECK(seq[0].beta == 0.2);
  CHECK(seq[0].gamma == 0.0);
  CHECK(seq[1].gamma == 0.3);
  CHECK(seq[2].beta == 0.5);
}

TEST_CASE("discrete sweeps work and keep_all retains restarts") {
  MatrixXd j(2, 2);
  j << 0.4, 0.1, 0.1, 0.4;
  const JointSource src(j);
  SweepGrid g;
  g.betas = {0.3};
  g.lambdas = {0.3};
  g.gammas = {0.0};
  g.restarts = 3;
  g.card_t1 = 2;
  g.card_t2 = 2;
  const auto best_only = run_sweep(g, src);
  CHECK(best_only.size() == 1);
  g.keep_all = true;
  const auto all = run_sweep(g, src);
  CHECK(all.size() == 3);
  double best = all[0].report.functional_value;
  for (const auto& r : all)
    best = std::min(best, r.report.functional_value);
  CHECK(best_only[0].report.functional_value == best);
}

TEST_CASE("compression decreases as beta grows") {
  // The beta axis stays inside the regime where agent 1 is active; once the
  // encoder collapses to zero the tail ties dilute the rank correlation.
  const GaussianModel m = gen_gaussian_model(4, 4, 1.0, 13);
  SweepGrid g;
  g.betas = {0.05, 0.1, 0.15, 0.22, 0.3};
  g.lambdas = {0.15};
  g.gammas = {0.1};
  g.tol = 1e-10;
  g.base_seed = 17;
  const auto records = run_sweep(g, m);
  REQUIRE(records.size() == 5);
  std::vector<double> betas, compressions;
  for (const auto& r : records) {
    REQUIRE(r.error.empty());
    betas.push_back(r.beta);
    compressions.push_back(r.report.i_x_t1);
  }
  CHECK(spearman(betas, compressions) <= -0.9);
}

TEST_CASE("frontier basics") {
  CHECK_THROWS_AS(frontier({}, InfoField::IXT1, InfoField::IYT1T2),
                  EmptyRecords);

  const auto single = frontier({rec_xy(1.0, 2.0)}, InfoField::IXT1,
                               InfoField::IYT1T2);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == std::pair<double, double>{1.0, 2.0});

  // Two records in the same bin: larger y survives.
  const auto same_bin = frontier({rec_xy(1.0, 2.0), rec_xy(1.0, 3.0)},
                                 InfoField::IXT1, InfoField::IYT1T2);
  REQUIRE(same_bin.size() == 1);
  CHECK(same_bin[0].second == 3.0);

  // Dominated bins are dropped; output nondecreasing in y.
  const auto env =
      frontier({rec_xy(0.0, 1.0), rec_xy(1.0, 0.5), rec_xy(2.0, 2.0)},
               InfoField::IXT1, InfoField::IYT1T2);
  REQUIRE(env.size() == 2);
  CHECK(env[0].second == 1.0);
  CHECK(env[1].second == 2.0);
  for (std::size_t i = 1; i < env.size(); ++i) {
    CHECK(env[i].first >= env[i - 1].first);
    CHECK(env[i].second >= env[i - 1].second);
  }
}

TEST_CASE("frontier on a sweep is nondecreasing") {
  const GaussianModel m = gen_gaussian_model(4, 4, 1.0, 19);
  SweepGrid g;
  g.betas = {0.1, 0.2, 0.5, 1.0};
  g.lambdas = {0.3, 0.8};
  g.gammas = {0.1};
  g.tol = 1e-9;
  g.base_seed = 23;
  const auto records = run_sweep(g, m);
  const auto front = frontier(records, InfoField::IXT1, InfoField::IYT1T2);
  for (std::size_t i = 1; i < front.size(); ++i) {
    CHECK(front[i].first >= front[i - 1].first);
    CHECK(front[i].second >= front[i - 1].second);
  }
}

TEST_CASE("info field parsing") {
  CHECK(parse_info_field("i_x_t1") == InfoField::IXT1);
  CHECK(parse_info_field("functional") == InfoField::Functional);
  CHECK_THROWS_AS(parse_info_field("nope"), ValidationError);
  CHECK(info_field_name(InfoField::IYT1T2) == std::string("i_y_t1t2"));
}

TEST_CASE("csv serialization is stable") {
  TradeoffRecord r = rec_xy(0.123456789012345, 1.0);
  r.beta = 0.25;
  r.lambda = 0.5;
  r.gamma = 0.0;
  r.seed = 42;
  r.iterations = 17;
  const std::string csv = records_to_csv({r});
  CHECK(csv.find("beta,lambda,gamma,seed,i_x_t1,i_x_t2,i_t1_t2,i_y_t1t2,"
                 "functional,iterations,converged\n") == 0);
  CHECK(csv.find("0.123456789012") != std::string::npos);
  CHECK(csv.find(",42,") != std::string::npos);
  CHECK(csv.find(",17,1\n") != std::string::npos);
}

TEST_CASE("spearman rank correlation") {
  CHECK(spearman({1, 2, 3, 4}, {2, 4, 6, 8}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {8, 6, 4, 2}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 3, 4}, {5, 5, 5, 5}) == 0.0);
  CHECK(std::abs(spearman({1, 2, 3, 4, 5, 6}, {3, 1, 4, 1, 5, 2})) < 1.0);
}

TEST_CASE("svg rendering") {
  std::vector<TradeoffRecord> records;
  for (int i = 0; i <= 10; ++i)
    records.push_back(rec_xy(0.2 * i, std::sqrt(0.2 * i)));
  const std::string svg =
      render_svg(records, InfoField::IXT1, InfoField::IYT1T2);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("i_x_t1 (nats)") != std::string::npos);
  CHECK(svg.find("i_y_t1t2 (nats)") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  // One marker per record.
  std::size_t markers = 0, pos = 0;
  while ((pos = svg.find("<circle", pos)) != std::string::npos) {
    ++markers;
    pos += 7;
  }
  CHECK(markers == records.size());
  // Ticks cover the data range [0, 2].
  CHECK(svg.find(">0<") != std::string::npos);
  CHECK(svg.find(">2<") != std::string::npos);

  const std::string one = render_svg({rec_xy(1.0, 1.0)}, InfoField::IXT1,
                                     InfoField::IYT1T2);
  markers = 0;
  pos = 0;
  while ((pos = one.find("<circle", pos)) != std::string::npos) {
    ++markers;
    pos += 7;
  }
  CHECK(markers == 1);

  CHECK_THROWS_AS(render_svg({}, InfoField::IXT1, InfoField::IYT1T2),
                  EmptyRecords);
}
