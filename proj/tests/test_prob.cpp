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

#include "dpfl/prob.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "support/generators.hpp"

using namespace dpfl;

namespace {

Distribution dist(std::initializer_list<double> v) {
  VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return Distribution(std::move(x));
}

}  // namespace

TEST_CASE("entropy basics") {
  CHECK(entropy(dist({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(entropy(dist({1.0, 0.0, 0.0})) == 0.0);
  // -0.25 ln 0.25 - 0.75 ln 0.75, evaluated independently to 9 digits.
  CHECK(entropy(dist({0.25, 0.75})) == doctest::Approx(0.562335145).epsilon(1e-8));
}

TEST_CASE("entropy bounded by log of support size") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto p = testsupport::random_distribution(rng, 1 + k % 8);
    CHECK(entropy(p) <= std::log(static_cast<double>(p.size())) + 1e-12);
    CHECK(entropy(p) >= 0.0);
  }
}

TEST_CASE("kl divergence basics") {
  CHECK(kl_divergence(dist({0.3, 0.7}), dist({0.3, 0.7})) == 0.0);
  CHECK(kl_divergence(dist({1.0, 0.0}), dist({0.5, 0.5})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(kl_divergence(dist({0.5, 0.5}), dist({1.0, 0.0})),
                  AbsoluteContinuityViolation);
  CHECK_THROWS_AS(kl_divergence(dist({0.5, 0.5}), dist({0.3, 0.3, 0.4})),
                  ValidationError);
}

TEST_CASE("kl divergence nonnegative, zero iff equal") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    const int n = 2 + k % 6;
    const auto p = testsupport::random_distribution(rng, n);
    const auto q = testsupport::random_distribution(rng, n);
    const double d = kl_divergence(p, q);
    CHECK(d >= 0.0);
    const double linf = (p.vec() - q.vec()).cwiseAbs().maxCoeff();
    if (d <= 1e-15) CHECK(linf < 1e-6);
    CHECK(kl_divergence(p, p) == 0.0);
  }
}

TEST_CASE("kl floored variant clamps zero denominators") {
  const Eigen::RowVectorXd p = (Eigen::RowVectorXd(2) << 0.5, 0.5).finished();
  const Eigen::RowVectorXd q = (Eigen::RowVectorXd(2) << 1.0, 0.0).finished();
  const double d = kl_divergence_floored(p, q);
  CHECK(std::isfinite(d));
  CHECK(d == doctest::Approx(0.5 * std::log(0.5 / 1.0) +
                             0.5 * std::log(0.5 / 1e-12)));
}

TEST_CASE("mutual information basics") {
  MatrixXd indep(2, 2);
  indep << 0.5 * 0.3, 0.5 * 0.7, 0.5 * 0.3, 0.5 * 0.7;
  CHECK(mutual_information(indep) == doctest::Approx(0.0).epsilon(1e-12));

  MatrixXd diag = MatrixXd::Zero(2, 2);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.5;
  CHECK(mutual_information(diag) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("mutual information matches entropy identity on random joints") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const MatrixXd joint = testsupport::random_joint(rng, 3, 3);
    const auto px = marginalize(joint, Axis::Rows);
    const auto py = marginalize(joint, Axis::Cols);
    // H(X) + H(Y) - H(X,Y) via a flattened distribution.
    VectorXd flat(joint.size());
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < joint.rows(); ++i)
      for (Eigen::Index j = 0; j < joint.cols(); ++j) flat(idx++) = joint(i, j);
    const double hxy = entropy(Distribution(flat));
    const double expected = entropy(px) + entropy(py) - hxy;
    CHECK(mutual_information(joint) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(mutual_information(joint) <=
          std::min(entropy(px), entropy(py)) + 1e-12);
  }
}

TEST_CASE("marginalize") {
  MatrixXd diag = MatrixXd::Zero(2, 2);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.5;
  CHECK(marginalize(diag, Axis::Rows).vec().isApprox(
      (VectorXd(2) << 0.5, 0.5).finished()));

  MatrixXd outer(2, 2);
  outer << 0.3, 0.7, 0.0, 0.0;
  CHECK(marginalize(outer, Axis::Rows).vec().isApprox(
      (VectorXd(2) << 1.0, 0.0).finished()));

  std::mt19937_64 rng(17);
  const MatrixXd joint = testsupport::random_joint(rng, 4, 3);
  CHECK(marginalize(joint, Axis::Cols).vec().sum() == doctest::Approx(1.0));
}

TEST_CASE("bayes_invert identity and constant conditionals") {
  const auto id = ConditionalTable::identity(3);
  const auto uniform = Distribution::uniform(3);
  const auto inv = bayes_invert(id, uniform);
  CHECK(inv.matrix().isApprox(MatrixXd::Identity(3, 3), 1e-12));

  MatrixXd constant(3, 2);
  constant << 0.4, 0.6, 0.4, 0.6, 0.4, 0.6;
  std::mt19937_64 rng(19);
  const auto prior = testsupport::random_distribution(rng, 3);
  const auto back = bayes_invert(ConditionalTable(constant), prior);
  for (Eigen::Index c = 0; c < 2; ++c)
    CHECK((back.row(c).transpose() - prior.vec()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bayes_invert round trip recovers the joint") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 50; ++k) {
    const auto prior = testsupport::random_distribution(rng, 3);
    const auto cond = testsupport::random_conditional(rng, 3, 4);
    const auto inv = bayes_invert(cond, prior);
    // p(col) p(row|col) must reproduce p(row) p(col|row) elementwise.
    const MatrixXd joint = prior.vec().asDiagonal() * cond.matrix();
    const VectorXd evidence = joint.colwise().sum();
    const MatrixXd rebuilt =
        (evidence.asDiagonal() * inv.matrix()).transpose();
    CHECK((rebuilt - joint).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("bayes_invert flags zero evidence") {
  MatrixXd cond(2, 2);
  cond << 1.0, 0.0, 1.0, 0.0;
  CHECK_THROWS_AS(bayes_invert(ConditionalTable(cond), Distribution::uniform(2)),
                  ZeroEvidence);
}

TEST_CASE("joint source validation") {
  MatrixXd ok(2, 2);
  ok << 0.2, 0.3, 0.1, 0.4;
  const JointSource src(ok);
  CHECK(src.card_x() == 2);
  CHECK(src.marginal_x()(0) == doctest::Approx(0.5));
  CHECK(src.y_given_x()(0, 1) == doctest::Approx(0.6));

  MatrixXd negative = ok;
  negative(1, 0) = -0.1;
  CHECK_THROWS_WITH_AS(JointSource{negative},
                       doctest::Contains("joint[1][0]"), ValidationError);

  MatrixXd short_mass(2, 2);
  short_mass << 0.45, 0.0, 0.45, 0.0;
  CHECK_THROWS_WITH_AS(JointSource{short_mass}, doctest::Contains("row 0"),
                       ValidationError);

  MatrixXd dead_row(2, 2);
  dead_row << 0.0, 0.0, 0.5, 0.5;
  CHECK_THROWS_WITH_AS(JointSource{dead_row},
                       doctest::Contains("zero marginal mass"),
                       ValidationError);
}

TEST_CASE("floored posterior handles zero mass") {
  const VectorXd zero = VectorXd::Zero(4);
  const VectorXd u = floored_posterior(zero);
  CHECK(u.isApprox(VectorXd::Constant(4, 0.25)));

  VectorXd mass(3);
  mass << 0.0, 2.0, 6.0;
  const VectorXd p = floored_posterior(mass);
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p(0) > 0.0);
  CHECK(p(2) == doctest::Approx(0.75));
}
