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
// Discrete probability containers and information measures. All information
// quantities are in nats. Types are immutable after construction and safe to
// share across threads.

#ifndef DPFL_PROB_HPP_
#define DPFL_PROB_HPP_

#include <Eigen/Dense>

#include "dpfl/errors.hpp"

namespace dpfl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Tolerance on probability mass conservation for user-supplied tables.
inline constexpr double kMassTolerance = 1e-12;

// Denominator clamp used inside solver inner loops where a hard
// absolute-continuity error would be counterproductive.
inline constexpr double kProbFloor = 1e-12;

// A probability mass function: nonnegative entries summing to 1.
class Distribution {
 public:
  explicit Distribution(VectorXd probs);

  static Distribution uniform(Eigen::Index n);

  Eigen::Index size() const { return probs_.size(); }
  double operator()(Eigen::Index i) const { return probs_(i); }
  const VectorXd& vec() const { return probs_; }

 private:
  VectorXd probs_;
};

// Row-stochastic table: entry (i, j) = p(column j | row i).
class ConditionalTable {
 public:
  explicit ConditionalTable(MatrixXd rows);

  static ConditionalTable identity(Eigen::Index n);

  Eigen::Index row_size() const { return rows_.rows(); }
  Eigen::Index col_size() const { return rows_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return rows_(i, j); }
  auto row(Eigen::Index i) const { return rows_.row(i); }
  const MatrixXd& matrix() const { return rows_; }

 private:
  MatrixXd rows_;
};

// Joint source table p(X = x, Y = y). Requires full support on the X
// marginal: conditionals p(Y|X=x) must exist for every x.
class JointSource {
 public:
  explicit JointSource(MatrixXd joint);

  Eigen::Index card_x() const { return joint_.rows(); }
  Eigen::Index card_y() const { return joint_.cols(); }
  const MatrixXd& joint() const { return joint_; }
  const Distribution& marginal_x() const { return px_; }
  const Distribution& marginal_y() const { return py_; }
  // p(Y|X): row x is the conditional distribution of Y given X = x.
  const ConditionalTable& y_given_x() const { return y_given_x_; }
  // I(X;Y) of the source, in nats.
  double mutual_info() const { return mutual_info_; }

 private:
  MatrixXd joint_;
  Distribution px_;
  Distribution py_;
  ConditionalTable y_given_x_;
  double mutual_info_;
};

enum class Axis { Rows, Cols };

// H(p) = -sum p ln p, with 0 ln 0 = 0.
double entropy(const Distribution& p);

// Strict KL divergence; throws AbsoluteContinuityViolation when q_i = 0 while
// p_i > 0.
double kl_divergence(const Distribution& p, const Distribution& q);

// KL divergence with the denominator clamped at `floor`; never throws for
// valid inputs. Raw-vector form for solver inner loops.
double kl_divergence_floored(const Eigen::Ref<const Eigen::RowVectorXd>& p,
                             const Eigen::Ref<const Eigen::RowVectorXd>& q,
                             double floor = kProbFloor);

// I of a joint table: sum p(x,y) ln[p(x,y) / (p(x)p(y))]. The table must be a
// valid joint (nonnegative, total mass 1).
double mutual_information(const MatrixXd& joint);

Distribution marginalize(const MatrixXd& joint, Axis axis);

// p(row | col) from p(col | row) and a prior over rows. Throws ZeroEvidence
// when some column has zero total mass under the prior.
ConditionalTable bayes_invert(const ConditionalTable& cond,
                              const Distribution& prior);

// Normalizes nonnegative mass `u` into a distribution, flooring entries at
// kProbFloor afterwards and renormalizing. Zero total mass yields uniform.
VectorXd floored_posterior(const VectorXd& u);

}  // namespace dpfl

#endif  // DPFL_PROB_HPP_
