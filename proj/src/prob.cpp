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
#include <string>

namespace dpfl {

namespace {

void check_probability_vector(const VectorXd& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) >= 0.0)) {
      throw ValidationError(std::string(what) + "[" + std::to_string(i) +
                            "] = " + std::to_string(v(i)) +
                            " is not a valid probability");
    }
  }
  const double sum = v.sum();
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw ValidationError(std::string(what) + " must sum to 1 (got " +
                          std::to_string(sum) + ")");
  }
}

}  // namespace

Distribution::Distribution(VectorXd probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw ValidationError("distribution is empty");
  check_probability_vector(probs_, "probs");
}

Distribution Distribution::uniform(Eigen::Index n) {
  if (n < 1) throw ValidationError("support size must be >= 1");
  return Distribution(VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

ConditionalTable::ConditionalTable(MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.cols() == 0)
    throw ValidationError("conditional table is empty");
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows_.cols(); ++j) {
      if (!(rows_(i, j) >= 0.0)) {
        throw ValidationError("conditional[" + std::to_string(i) + "][" +
                              std::to_string(j) + "] = " +
                              std::to_string(rows_(i, j)) + " is negative");
      }
    }
    const double sum = rows_.row(i).sum();
    if (std::abs(sum - 1.0) > kMassTolerance) {
      throw ValidationError("conditional row " + std::to_string(i) +
                            " must sum to 1 (got " + std::to_string(sum) +
                            ")");
    }
  }
}

ConditionalTable ConditionalTable::identity(Eigen::Index n) {
  return ConditionalTable(MatrixXd::Identity(n, n));
}

JointSource::JointSource(MatrixXd joint)
    : joint_(std::move(joint)),
      px_(Distribution::uniform(1)),
      py_(Distribution::uniform(1)),
      y_given_x_(ConditionalTable(MatrixXd::Ones(1, 1))),
      mutual_info_(0.0) {
  if (joint_.rows() == 0 || joint_.cols() == 0)
    throw ValidationError("joint table is empty");
  for (Eigen::Index i = 0; i < joint_.rows(); ++i) {
    for (Eigen::Index j = 0; j < joint_.cols(); ++j) {
      if (!(joint_(i, j) >= 0.0)) {
        throw ValidationError("joint[" + std::to_string(i) + "][" +
                              std::to_string(j) + "] = " +
                              std::to_string(joint_(i, j)) + " is negative");
      }
    }
  }
  const double sum = joint_.sum();
  if (std::abs(sum - 1.0) > kMassTolerance) {
    Eigen::Index worst = 0;
    joint_.rowwise().sum().maxCoeff(&worst);
    throw ValidationError(
        "joint entries must sum to 1 (got " + std::to_string(sum) +
        "); row " + std::to_string(worst) + " sums to " +
        std::to_string(joint_.row(worst).sum()));
  }
  VectorXd px = joint_.rowwise().sum();
  for (Eigen::Index i = 0; i < px.size(); ++i) {
    if (!(px(i) > 0.0)) {
      throw ValidationError("joint row " + std::to_string(i) +
                            " has zero marginal mass; every x must satisfy "
                            "p(x) > 0");
    }
  }
  MatrixXd cond = joint_.array().colwise() / px.array();
  // Guard against row sums a few ulps off 1 before they hit the invariant.
  const VectorXd cond_sums = cond.rowwise().sum();
  cond.array().colwise() /= cond_sums.array();
  px /= px.sum();
  VectorXd py = joint_.colwise().sum();
  py /= py.sum();
  px_ = Distribution(std::move(px));
  py_ = Distribution(std::move(py));
  y_given_x_ = ConditionalTable(std::move(cond));
  mutual_info_ = mutual_information(joint_);
}

double entropy(const Distribution& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p(i);
    if (v > 0.0) h -= v * std::log(v);
  }
  return h < 0.0 ? 0.0 : h;
}

double kl_divergence(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size())
    throw ValidationError("kl_divergence: support sizes differ");
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p(i);
    if (pi <= 0.0) continue;
    const double qi = q(i);
    if (qi <= 0.0) {
      throw AbsoluteContinuityViolation(
          "kl_divergence: q[" + std::to_string(i) + "] = 0 while p[" +
          std::to_string(i) + "] > 0");
    }
    d += pi * std::log(pi / qi);
  }
  return d;
}

double kl_divergence_floored(const Eigen::Ref<const Eigen::RowVectorXd>& p,
                             const Eigen::Ref<const Eigen::RowVectorXd>& q,
                             double floor) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p(i);
    if (pi <= 0.0) continue;
    const double qi = q(i) > floor ? q(i) : floor;
    d += pi * std::log(pi / qi);
  }
  return d;
}

double mutual_information(const MatrixXd& joint) {
  const VectorXd px = joint.rowwise().sum();
  const VectorXd py = joint.colwise().sum();
  double mi = 0.0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const double v = joint(i, j);
      if (v > 0.0) mi += v * std::log(v / (px(i) * py(j)));
    }
  }
  return mi;
}

Distribution marginalize(const MatrixXd& joint, Axis axis) {
  VectorXd m = axis == Axis::Rows ? VectorXd(joint.rowwise().sum())
                                  : VectorXd(joint.colwise().sum());
  m /= m.sum();
  return Distribution(std::move(m));
}

ConditionalTable bayes_invert(const ConditionalTable& cond,
                              const Distribution& prior) {
  if (cond.row_size() != prior.size())
    throw ValidationError("bayes_invert: prior size does not match row count");
  // weighted(r, c) = p(c|r) p(r); evidence(c) = sum_r weighted(r, c).
  MatrixXd weighted = prior.vec().asDiagonal() * cond.matrix();
  VectorXd evidence = weighted.colwise().sum();
  MatrixXd out(cond.col_size(), cond.row_size());
  for (Eigen::Index c = 0; c < cond.col_size(); ++c) {
    if (!(evidence(c) > 0.0)) {
      throw ZeroEvidence("bayes_invert: column " + std::to_string(c) +
                         " has zero total mass");
    }
    out.row(c) = weighted.col(c).transpose() / evidence(c);
  }
  return ConditionalTable(std::move(out));
}

VectorXd floored_posterior(const VectorXd& u) {
  const double s = u.sum();
  VectorXd p;
  if (s > 0.0) {
    p = u / s;
    p = p.cwiseMax(kProbFloor);
    p /= p.sum();
  } else {
    p = VectorXd::Constant(u.size(), 1.0 / static_cast<double>(u.size()));
  }
  return p;
}

}  // namespace dpfl
