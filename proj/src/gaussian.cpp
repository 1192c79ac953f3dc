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

#include "dpfl/gaussian.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "dpfl/util.hpp"

namespace dpfl {

namespace {

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Cholesky with an escalating diagonal jitter ladder. The repair budget is
// 1e-6 of the trace; beyond that the matrix is treated as broken.
Eigen::LLT<MatrixXd> spd_factor(const MatrixXd& input, const char* what) {
  MatrixXd m = symmetrized(input);
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return llt;

  const double tr = m.trace();
  if (!(tr > 0.0)) {
    throw PSDRepairExceeded(std::string(what) +
                            ": nonpositive trace, cannot repair");
  }
  const double dim = static_cast<double>(m.rows());
  double jitter = 1e-10 * tr / dim;
  const double budget = 1e-6 * tr;
  while (jitter <= budget) {
    llt.compute(m + jitter * MatrixXd::Identity(m.rows(), m.cols()));
    if (llt.info() == Eigen::Success) return llt;
    jitter *= 10.0;
  }
  throw PSDRepairExceeded(std::string(what) +
                          ": jitter budget of 1e-6 * trace exceeded");
}

MatrixXd spd_inverse(const MatrixXd& m, const char* what) {
  const Eigen::LLT<MatrixXd> llt = spd_factor(m, what);
  return symmetrized(llt.solve(MatrixXd::Identity(m.rows(), m.cols())));
}

void check_symmetric(const MatrixXd& m, const char* what) {
  if (m.rows() != m.cols())
    throw ValidationError(std::string(what) + " must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError(std::string(what) + " is not symmetric");
}

}  // namespace

double spd_log_det(const MatrixXd& m, const char* what) {
  const Eigen::LLT<MatrixXd> llt = spd_factor(m, what);
  const VectorXd diag = MatrixXd(llt.matrixL()).diagonal();
  double ld = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) ld += std::log(diag(i));
  ld *= 2.0;
  if (!std::isfinite(ld))
    throw SingularCovariance(std::string(what) + ": log-determinant not finite");
  return ld;
}

GaussianModel::GaussianModel(MatrixXd sigma_x, MatrixXd sigma_y,
                             MatrixXd sigma_yx)
    : sigma_x_(std::move(sigma_x)),
      sigma_y_(std::move(sigma_y)),
      sigma_yx_(std::move(sigma_yx)) {
  check_symmetric(sigma_x_, "sigma_x");
  check_symmetric(sigma_y_, "sigma_y");
  if (sigma_yx_.rows() != sigma_y_.rows() || sigma_yx_.cols() != sigma_x_.rows())
    throw ValidationError("sigma_yx must be n_y x n_x");

  Eigen::SelfAdjointEigenSolver<MatrixXd> es_x(sigma_x_);
  if (es_x.eigenvalues().minCoeff() <= 0.0)
    throw ValidationError("sigma_x must be positive definite");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es_y(sigma_y_);
  if (es_y.eigenvalues().minCoeff() <= 0.0)
    throw ValidationError("sigma_y must be positive definite");

  const Eigen::Index n = n_x() + n_y();
  MatrixXd full(n, n);
  full.topLeftCorner(n_x(), n_x()) = sigma_x_;
  full.topRightCorner(n_x(), n_y()) = sigma_yx_.transpose();
  full.bottomLeftCorner(n_y(), n_x()) = sigma_yx_;
  full.bottomRightCorner(n_y(), n_y()) = sigma_y_;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es_full(full);
  const double scale = std::max(1.0, es_full.eigenvalues().cwiseAbs().maxCoeff());
  if (es_full.eigenvalues().minCoeff() < -1e-8 * scale)
    throw ValidationError("joint covariance of (X, Y) is not PSD");

  const MatrixXd theta = compute_theta(*this);
  sigma_y_given_x_ = symmetrized(sigma_y_ - theta * sigma_yx_.transpose());
  mutual_info_ = 0.5 * (spd_log_det(sigma_y_, "sigma_y") -
                        spd_log_det(sigma_y_given_x_, "sigma_y_given_x"));
}

MatrixXd compute_theta(const GaussianModel& model) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(model.sigma_x());
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw SingularCovariance(
        "sigma_x is numerically singular (condition > 1e12)");
  // Theta Sigma_X = Sigma_YX  =>  Sigma_X Theta^T = Sigma_YX^T.
  const Eigen::LLT<MatrixXd> llt(model.sigma_x());
  return llt.solve(model.sigma_yx().transpose()).transpose();
}

GaussianState refresh_covariances(GaussianState state,
                                  const GaussianModel& model) {
  const MatrixXd& sx = model.sigma_x();
  const MatrixXd& a = state.a_mat;
  const MatrixXd& b = state.b_mat;

  state.theta = compute_theta(model);

  state.sigma_t1 = symmetrized(a * sx * a.transpose() + state.sigma_z1);
  state.sigma_t2 = symmetrized(b * sx * b.transpose() + state.sigma_z2);
  const Eigen::LLT<MatrixXd> llt_t1 = spd_factor(state.sigma_t1, "sigma_t1");
  const Eigen::LLT<MatrixXd> llt_t2 = spd_factor(state.sigma_t2, "sigma_t2");

  // Posterior covariances of X given a single agent, inversion-lemma form.
  const MatrixXd sx_inv = spd_inverse(sx, "sigma_x");
  const MatrixXd z1_inv = spd_inverse(state.sigma_z1, "sigma_z1");
  const MatrixXd z2_inv = spd_inverse(state.sigma_z2, "sigma_z2");
  state.sigma_x_given_t1 =
      spd_inverse(sx_inv + a.transpose() * z1_inv * a, "sigma_x_given_t1");
  state.sigma_x_given_t2 =
      spd_inverse(sx_inv + b.transpose() * z2_inv * b, "sigma_x_given_t2");

  state.sigma_t2_given_t1 =
      symmetrized(b * state.sigma_x_given_t1 * b.transpose() + state.sigma_z2);
  state.sigma_t1_given_t2 =
      symmetrized(a * state.sigma_x_given_t2 * a.transpose() + state.sigma_z1);
  const Eigen::LLT<MatrixXd> llt_t2g1 =
      spd_factor(state.sigma_t2_given_t1, "sigma_t2_given_t1");
  const Eigen::LLT<MatrixXd> llt_t1g2 =
      spd_factor(state.sigma_t1_given_t2, "sigma_t1_given_t2");

  // Xi_1 = B Sigma_X A^T Sigma_T1^{-1}, Xi_2 = A Sigma_X B^T Sigma_T2^{-1}.
  const MatrixXd cross = a * sx * b.transpose();  // d1 x d2
  state.xi1 = llt_t1.solve(cross).transpose();
  state.xi2 = llt_t2.solve(cross.transpose()).transpose();

  const MatrixXd sxa = sx * a.transpose();  // n_x x d1
  const MatrixXd sxb = sx * b.transpose();  // n_x x d2
  const MatrixXd sxa_t1inv = llt_t1.solve(sxa.transpose()).transpose();
  const MatrixXd sxb_t2inv = llt_t2.solve(sxb.transpose()).transpose();
  const MatrixXd sxa_t1g2inv = llt_t1g2.solve(sxa.transpose()).transpose();
  const MatrixXd sxb_t2g1inv = llt_t2g1.solve(sxb.transpose()).transpose();

  // Psi_1 = Theta (Sigma_X A^T Sigma_{T1|T2}^{-1}
  //               - Sigma_X B^T Sigma_{T2|T1}^{-1} B Sigma_X A^T Sigma_T1^{-1})
  // and the mirror image for Psi_2.
  state.psi1 = state.theta * (sxa_t1g2inv - sxb_t2g1inv * b * sxa_t1inv);
  state.psi2 = state.theta * (sxb_t2g1inv - sxa_t1g2inv * a * sxb_t2inv);

  // Sigma_{X|T1,T2} through the blockwise expansion of the pair posterior.
  const MatrixXd t2inv_bsx = llt_t2.solve(b * sx);  // Sigma_T2^{-1} B Sigma_X
  const MatrixXd t1inv_asx = llt_t1.solve(a * sx);
  const MatrixXd term2 = sxa_t1g2inv * sxa.transpose();
  const MatrixXd term3 = sxa_t1g2inv * cross * t2inv_bsx;
  const MatrixXd term4 = sxb_t2g1inv * cross.transpose() * t1inv_asx;
  const MatrixXd term5 = sxb_t2g1inv * sxb.transpose();
  state.sigma_x_given_t1t2 = symmetrized(sx - term2 + term3 + term4 - term5);

  state.sigma_y_given_t1t2 = symmetrized(
      state.theta * state.sigma_x_given_t1t2 * state.theta.transpose() +
      model.sigma_y_given_x());
  return state;
}

GaussianState update_step(const GaussianState& state,
                          const GaussianModel& model,
                          const LagrangeParams& params) {
  params.validate();
  const MatrixXd& b = state.b_mat;
  const double gb = params.gamma / params.beta;
  const double gl = params.gamma / params.lambda;

  const Eigen::LLT<MatrixXd> llt_t2g1 =
      spd_factor(state.sigma_t2_given_t1, "sigma_t2_given_t1");
  const Eigen::LLT<MatrixXd> llt_t1g2 =
      spd_factor(state.sigma_t1_given_t2, "sigma_t1_given_t2");
  const Eigen::LLT<MatrixXd> llt_y12 =
      spd_factor(state.sigma_y_given_t1t2, "sigma_y_given_t1t2");

  // New precision of the first agent's noise, then the new coupling A using
  // the previous B.
  const MatrixXd prec1 =
      spd_inverse(state.sigma_t1, "sigma_t1") -
      gb * state.xi1.transpose() * llt_t2g1.solve(state.xi1) +
      (1.0 / params.beta) * state.psi1.transpose() * llt_y12.solve(state.psi1);
  const MatrixXd new_z1 = spd_inverse(prec1, "sigma_z1 precision");
  const MatrixXd new_a =
      new_z1 * (-gb * state.xi1.transpose() * llt_t2g1.solve(b) +
                (1.0 / params.beta) * state.psi1.transpose() *
                    llt_y12.solve(state.theta - state.psi2 * b));

  // Mirror updates for the second agent; B consumes the fresh A.
  const MatrixXd prec2 =
      spd_inverse(state.sigma_t2, "sigma_t2") -
      gl * state.xi2.transpose() * llt_t1g2.solve(state.xi2) +
      (1.0 / params.lambda) * state.psi2.transpose() * llt_y12.solve(state.psi2);
  const MatrixXd new_z2 = spd_inverse(prec2, "sigma_z2 precision");
  const MatrixXd new_b =
      new_z2 * (-gl * state.xi2.transpose() * llt_t1g2.solve(new_a) +
                (1.0 / params.lambda) * state.psi2.transpose() *
                    llt_y12.solve(state.theta - state.psi1 * new_a));

  GaussianState next = state;
  next.a_mat = new_a;
  next.b_mat = new_b;
  next.sigma_z1 = new_z1;
  next.sigma_z2 = new_z2;
  next.iteration = state.iteration + 1;
  return refresh_covariances(std::move(next), model);
}

InfoReport gaussian_info(const GaussianState& state, const GaussianModel& model,
                         const LagrangeParams& params) {
  InfoReport r;
  const double ld_t1 = spd_log_det(state.sigma_t1, "sigma_t1");
  const double ld_t2 = spd_log_det(state.sigma_t2, "sigma_t2");
  r.i_x_t1 = 0.5 * (ld_t1 - spd_log_det(state.sigma_z1, "sigma_z1"));
  r.i_x_t2 = 0.5 * (ld_t2 - spd_log_det(state.sigma_z2, "sigma_z2"));
  r.i_t1_t2 =
      0.5 * (ld_t2 - spd_log_det(state.sigma_t2_given_t1, "sigma_t2_given_t1"));
  r.i_y_t1t2 = 0.5 * (spd_log_det(model.sigma_y(), "sigma_y") -
                      spd_log_det(state.sigma_y_given_t1t2, "sigma_y_given_t1t2"));
  r.functional_value = functional_of(r, params);
  return r;
}

GaussianSolveResult solve_gaussian(const GaussianModel& model, Eigen::Index d1,
                                   Eigen::Index d2,
                                   const LagrangeParams& params, double tol,
                                   int max_iter, std::uint64_t seed) {
  params.validate();
  if (d1 < 1 || d2 < 1)
    throw ValidationError("representation dimensions must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");

  std::mt19937_64 rng(seed);
  GaussianState init;
  init.a_mat = MatrixXd::NullaryExpr(
      d1, model.n_x(), [&rng](Eigen::Index, Eigen::Index) {
        return 0.1 * normal_unit(rng);
      });
  init.b_mat = MatrixXd::NullaryExpr(
      d2, model.n_x(), [&rng](Eigen::Index, Eigen::Index) {
        return 0.1 * normal_unit(rng);
      });
  init.sigma_z1 = MatrixXd::Identity(d1, d1);
  init.sigma_z2 = MatrixXd::Identity(d2, d2);
  init.iteration = 0;

  GaussianSolveResult res{refresh_covariances(std::move(init), model),
                          InfoReport{},
                          {},
                          false,
                          0,
                          0.0};
  res.trace.push_back(
      gaussian_info(res.state, model, params).functional_value);
  for (int it = 0; it < max_iter; ++it) {
    res.state = update_step(res.state, model, params);
    res.trace.push_back(
        gaussian_info(res.state, model, params).functional_value);
    const double prev = res.trace[res.trace.size() - 2];
    const double curr = res.trace.back();
    if (curr - prev > res.max_trace_increase)
      res.max_trace_increase = curr - prev;
    if (std::abs(curr - prev) < tol) {
      res.converged = true;
      break;
    }
  }
  res.iterations = static_cast<int>(res.trace.size()) - 1;
  res.report = gaussian_info(res.state, model, params);
  return res;
}

GaussianSolveResult solve_gaussian_best_of(const GaussianModel& model,
                                           Eigen::Index d1, Eigen::Index d2,
                                           const LagrangeParams& params,
                                           double tol, int max_iter,
                                           std::uint64_t seed, int restarts) {
  if (restarts < 1) throw ValidationError("restarts must be >= 1");
  std::optional<GaussianSolveResult> best;
  for (int r = 0; r < restarts; ++r) {
    GaussianSolveResult run =
        solve_gaussian(model, d1, d2, params, tol, max_iter,
                       derive_seed(seed, static_cast<std::uint64_t>(r)));
    if (!best || run.report.functional_value < best->report.functional_value) {
      best = std::move(run);
    }
  }
  return std::move(*best);
}

}  // namespace dpfl
