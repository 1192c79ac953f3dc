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
// Closed-form iterative solver for jointly Gaussian (X, Y). The two agent
// representations are affine views T1 = A X + z1, T2 = B X + z2 with
// Gaussian noise; the iteration updates (A, Sigma_z1, B, Sigma_z2) in closed
// form and all information quantities are exact Gaussian log-determinant
// expressions.

#ifndef DPFL_GAUSSIAN_HPP_
#define DPFL_GAUSSIAN_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dpfl/params.hpp"
#include "dpfl/errors.hpp"

namespace dpfl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Zero-mean jointly Gaussian source: Cov([X; Y]) =
// [[sigma_x, sigma_yx^T], [sigma_yx, sigma_y]].
class GaussianModel {
 public:
  GaussianModel(MatrixXd sigma_x, MatrixXd sigma_y, MatrixXd sigma_yx);

  Eigen::Index n_x() const { return sigma_x_.rows(); }
  Eigen::Index n_y() const { return sigma_y_.rows(); }
  const MatrixXd& sigma_x() const { return sigma_x_; }
  const MatrixXd& sigma_y() const { return sigma_y_; }
  const MatrixXd& sigma_yx() const { return sigma_yx_; }
  // Sigma_{Y|X} = Sigma_Y - Theta Sigma_YX^T.
  const MatrixXd& sigma_y_given_x() const { return sigma_y_given_x_; }
  // I(X;Y) = 0.5 [lndet Sigma_Y - lndet Sigma_{Y|X}], in nats.
  double mutual_info() const { return mutual_info_; }

 private:
  MatrixXd sigma_x_;
  MatrixXd sigma_y_;
  MatrixXd sigma_yx_;
  MatrixXd sigma_y_given_x_;
  double mutual_info_;
};

// Theta = Sigma_YX Sigma_X^{-1}, computed by linear solve. Throws
// SingularCovariance when cond(Sigma_X) > 1e12.
MatrixXd compute_theta(const GaussianModel& model);

// Coupling matrices, noise covariances, and every induced covariance the
// update step consumes. refresh_covariances keeps the cache consistent.
struct GaussianState {
  MatrixXd a_mat;     // d1 x n_x
  MatrixXd b_mat;     // d2 x n_x
  MatrixXd sigma_z1;  // d1 x d1, SPD
  MatrixXd sigma_z2;  // d2 x d2, SPD

  MatrixXd theta;               // n_y x n_x
  MatrixXd sigma_t1;            // A Sigma_X A^T + Sigma_z1
  MatrixXd sigma_t2;
  MatrixXd xi1;                 // B Sigma_X A^T Sigma_T1^{-1}
  MatrixXd xi2;                 // A Sigma_X B^T Sigma_T2^{-1}
  MatrixXd psi1;                // n_y x d1
  MatrixXd psi2;                // n_y x d2
  MatrixXd sigma_x_given_t1;
  MatrixXd sigma_x_given_t2;
  MatrixXd sigma_t2_given_t1;   // B Sigma_{X|T1} B^T + Sigma_z2
  MatrixXd sigma_t1_given_t2;
  MatrixXd sigma_x_given_t1t2;
  MatrixXd sigma_y_given_t1t2;  // Theta Sigma_{X|T1,T2} Theta^T + Sigma_{Y|X}
  int iteration = 0;
};

struct GaussianSolveResult {
  GaussianState state;
  InfoReport report;
  std::vector<double> trace;
  bool converged = false;
  int iterations = 0;
  double max_trace_increase = 0.0;
};

// Recomputes every cached covariance from (A, B, Sigma_z1, Sigma_z2).
// Sigma_{X|T1} uses the inversion-lemma form
// (Sigma_X^{-1} + A^T Sigma_z1^{-1} A)^{-1}; products are symmetrized.
GaussianState refresh_covariances(GaussianState state,
                                  const GaussianModel& model);

// One pass of the four closed-form updates, in order: new Sigma_z1 precision,
// new A (using old B), new Sigma_z2 precision, new B (using the new A); then
// a covariance refresh.
GaussianState update_step(const GaussianState& state,
                          const GaussianModel& model,
                          const LagrangeParams& params);

// Exact Gaussian information quadruple of the current state.
InfoReport gaussian_info(const GaussianState& state, const GaussianModel& model,
                         const LagrangeParams& params);

// Seeded init (A, B entries at scale 0.1, unit noise covariances), then
// update steps until |dF| < tol or max_iter.
GaussianSolveResult solve_gaussian(const GaussianModel& model, Eigen::Index d1,
                                   Eigen::Index d2,
                                   const LagrangeParams& params,
                                   double tol = 1e-10, int max_iter = 2000,
                                   std::uint64_t seed = 1);

GaussianSolveResult solve_gaussian_best_of(const GaussianModel& model,
                                           Eigen::Index d1, Eigen::Index d2,
                                           const LagrangeParams& params,
                                           double tol, int max_iter,
                                           std::uint64_t seed, int restarts);

// Log-determinant of an SPD matrix via Cholesky; throws SingularCovariance
// when the factorization fails or the result is non-finite.
double spd_log_det(const MatrixXd& m, const char* what);

}  // namespace dpfl

#endif  // DPFL_GAUSSIAN_HPP_
