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

#include "dpfl/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "dpfl/util.hpp"

namespace dpfl {

namespace {

// Uniform rows with multiplicative noise in [1 - delta, 1 + delta].
MatrixXd perturbed_uniform(Eigen::Index rows, Eigen::Index cols,
                           std::mt19937_64& rng, double delta) {
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = 1.0 + delta * (2.0 * uniform_unit(rng) - 1.0);
    }
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

double log_floored(double v) { return std::log(v > kProbFloor ? v : kProbFloor); }

// Normalizes log-space rows in place via max subtraction.
void softmax_rows(MatrixXd& logits) {
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    if (!std::isfinite(m)) {
      throw NonFiniteExponent("encoder update: non-finite exponent in row " +
                              std::to_string(i));
    }
    logits.row(i) = (logits.row(i).array() - m).exp();
    logits.row(i) /= logits.row(i).sum();
  }
}

}  // namespace

SolverState init_state(const JointSource& source, Eigen::Index card_t1,
                       Eigen::Index card_t2, std::uint64_t seed) {
  if (card_t1 < 1 || card_t2 < 1)
    throw ValidationError("encoder cardinalities must be >= 1");
  std::mt19937_64 rng(seed);
  const Eigen::Index nx = source.card_x();
  ConditionalTable enc1(perturbed_uniform(nx, card_t1, rng, 0.1));
  ConditionalTable enc2(perturbed_uniform(nx, card_t2, rng, 0.1));
  SolverState state{std::move(enc1),
                    std::move(enc2),
                    Distribution::uniform(card_t1),
                    Distribution::uniform(card_t2),
                    ConditionalTable(MatrixXd::Ones(card_t1, card_t2) /
                                     static_cast<double>(card_t2)),
                    ConditionalTable(MatrixXd::Ones(card_t2, card_t1) /
                                     static_cast<double>(card_t1)),
                    ConditionalTable(MatrixXd::Ones(card_t1 * card_t2, nx) /
                                     static_cast<double>(nx)),
                    ConditionalTable(MatrixXd::Ones(card_t1 * card_t2,
                                                    source.card_y()) /
                                     static_cast<double>(source.card_y())),
                    0};
  return refresh_induced(std::move(state), source);
}

SolverState refresh_induced(SolverState state, const JointSource& source) {
  const Eigen::Index nx = source.card_x();
  const Eigen::Index n1 = state.card_t1();
  const Eigen::Index n2 = state.card_t2();
  const VectorXd& px = source.marginal_x().vec();
  const MatrixXd& e1 = state.enc1.matrix();
  const MatrixXd& e2 = state.enc2.matrix();

  VectorXd m1 = e1.transpose() * px;
  m1 /= m1.sum();
  VectorXd m2 = e2.transpose() * px;
  m2 /= m2.sum();

  // p(x|t1) and p(x|t2) rows, floored so dead clusters stay usable.
  MatrixXd x_given_t1(n1, nx);
  for (Eigen::Index t1 = 0; t1 < n1; ++t1)
    x_given_t1.row(t1) = floored_posterior(px.cwiseProduct(e1.col(t1))).transpose();
  MatrixXd x_given_t2(n2, nx);
  for (Eigen::Index t2 = 0; t2 < n2; ++t2)
    x_given_t2.row(t2) = floored_posterior(px.cwiseProduct(e2.col(t2))).transpose();

  // p(t2|t1) = sum_x p(t2|x) p(x|t1) and the mirror table.
  MatrixXd c21 = x_given_t1 * e2;
  const VectorXd c21_sums = c21.rowwise().sum();
  c21.array().colwise() /= c21_sums.array();
  MatrixXd c12 = x_given_t2 * e1;
  const VectorXd c12_sums = c12.rowwise().sum();
  c12.array().colwise() /= c12_sums.array();

  // Bayes posterior p(x|t1,t2) with per-cell flooring, then the decoder
  // p(y|t1,t2) = sum_x p(y|x) p(x|t1,t2).
  MatrixXd post(n1 * n2, nx);
  for (Eigen::Index t1 = 0; t1 < n1; ++t1) {
    for (Eigen::Index t2 = 0; t2 < n2; ++t2) {
      const VectorXd cell = px.cwiseProduct(e1.col(t1)).cwiseProduct(e2.col(t2));
      post.row(t1 * n2 + t2) = floored_posterior(cell).transpose();
    }
  }
  MatrixXd dec = post * source.y_given_x().matrix();
  const VectorXd dec_sums = dec.rowwise().sum();
  dec.array().colwise() /= dec_sums.array();

  state.marg1 = Distribution(std::move(m1));
  state.marg2 = Distribution(std::move(m2));
  state.cond_21 = ConditionalTable(std::move(c21));
  state.cond_12 = ConditionalTable(std::move(c12));
  state.posterior = ConditionalTable(std::move(post));
  state.decoder = ConditionalTable(std::move(dec));
  return state;
}

ConditionalTable update_encoder_1(const SolverState& state,
                                  const JointSource& source,
                                  const LagrangeParams& params) {
  params.validate();
  const Eigen::Index nx = source.card_x();
  const Eigen::Index n1 = state.card_t1();
  const Eigen::Index n2 = state.card_t2();
  const MatrixXd& e2 = state.enc2.matrix();
  const MatrixXd& pyx = source.y_given_x().matrix();

  MatrixXd logits(nx, n1);
  for (Eigen::Index x = 0; x < nx; ++x) {
    for (Eigen::Index t1 = 0; t1 < n1; ++t1) {
      const double kl_corr =
          kl_divergence_floored(e2.row(x), state.cond_21.row(t1));
      double expected_kl = 0.0;
      for (Eigen::Index t2 = 0; t2 < n2; ++t2) {
        const double w = e2(x, t2);
        if (w <= 0.0) continue;
        expected_kl += w * kl_divergence_floored(
                               pyx.row(x),
                               state.decoder.row(state.pair_index(t1, t2)));
      }
      logits(x, t1) = log_floored(state.marg1(t1)) +
                      (params.gamma / params.beta) * kl_corr -
                      expected_kl / params.beta;
    }
  }
  softmax_rows(logits);
  return ConditionalTable(std::move(logits));
}

ConditionalTable update_encoder_2(const SolverState& state,
                                  const JointSource& source,
                                  const LagrangeParams& params) {
  params.validate();
  const Eigen::Index nx = source.card_x();
  const Eigen::Index n1 = state.card_t1();
  const Eigen::Index n2 = state.card_t2();
  const MatrixXd& e1 = state.enc1.matrix();
  const MatrixXd& pyx = source.y_given_x().matrix();

  MatrixXd logits(nx, n2);
  for (Eigen::Index x = 0; x < nx; ++x) {
    for (Eigen::Index t2 = 0; t2 < n2; ++t2) {
      const double kl_corr =
          kl_divergence_floored(e1.row(x), state.cond_12.row(t2));
      double expected_kl = 0.0;
      for (Eigen::Index t1 = 0; t1 < n1; ++t1) {
        const double w = e1(x, t1);
        if (w <= 0.0) continue;
        expected_kl += w * kl_divergence_floored(
                               pyx.row(x),
                               state.decoder.row(state.pair_index(t1, t2)));
      }
      logits(x, t2) = log_floored(state.marg2(t2)) +
                      (params.gamma / params.lambda) * kl_corr -
                      expected_kl / params.lambda;
    }
  }
  softmax_rows(logits);
  return ConditionalTable(std::move(logits));
}

InfoReport compute_info(const JointSource& source, const ConditionalTable& enc1,
                        const ConditionalTable& enc2,
                        const LagrangeParams& params) {
  const Eigen::Index nx = source.card_x();
  const Eigen::Index ny = source.card_y();
  const Eigen::Index n1 = enc1.col_size();
  const Eigen::Index n2 = enc2.col_size();
  const VectorXd& px = source.marginal_x().vec();
  const MatrixXd& e1 = enc1.matrix();
  const MatrixXd& e2 = enc2.matrix();

  InfoReport r;
  r.i_x_t1 = mutual_information(px.asDiagonal() * e1);
  r.i_x_t2 = mutual_information(px.asDiagonal() * e2);
  r.i_t1_t2 = mutual_information(e1.transpose() * px.asDiagonal() * e2);

  // Joint of ((t1,t2), y): sum_x p(x,y) p(t1|x) p(t2|x).
  MatrixXd pairs_y = MatrixXd::Zero(n1 * n2, ny);
  for (Eigen::Index x = 0; x < nx; ++x) {
    for (Eigen::Index t1 = 0; t1 < n1; ++t1) {
      const double w1 = px(x) * e1(x, t1);
      if (w1 <= 0.0) continue;
      for (Eigen::Index t2 = 0; t2 < n2; ++t2) {
        const double w = w1 * e2(x, t2);
        if (w <= 0.0) continue;
        pairs_y.row(t1 * n2 + t2) += w * source.y_given_x().row(x);
      }
    }
  }
  r.i_y_t1t2 = mutual_information(pairs_y);
  r.functional_value = functional_of(r, params);
  return r;
}

double evaluate_functional(const SolverState& state, const JointSource& source,
                           const LagrangeParams& params) {
  return compute_info(source, state.enc1, state.enc2, params).functional_value;
}

SolveResult solve(const JointSource& source, Eigen::Index card_t1,
                  Eigen::Index card_t2, const LagrangeParams& params,
                  double tol, int max_iter, std::uint64_t seed) {
  params.validate();
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");

  SolveResult res{init_state(source, card_t1, card_t2, seed),
                  InfoReport{},
                  {},
                  false,
                  0,
                  0.0};
  res.trace.push_back(evaluate_functional(res.state, source, params));
  for (int it = 0; it < max_iter; ++it) {
    res.state.enc1 = update_encoder_1(res.state, source, params);
    res.state.enc2 = update_encoder_2(res.state, source, params);
    res.state = refresh_induced(std::move(res.state), source);
    res.state.iteration = it + 1;
    res.trace.push_back(evaluate_functional(res.state, source, params));
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
  res.report = compute_info(source, res.state.enc1, res.state.enc2, params);
  return res;
}

SolveResult solve_best_of(const JointSource& source, Eigen::Index card_t1,
                          Eigen::Index card_t2, const LagrangeParams& params,
                          double tol, int max_iter, std::uint64_t seed,
                          int restarts) {
  if (restarts < 1) throw ValidationError("restarts must be >= 1");
  std::optional<SolveResult> best;
  for (int r = 0; r < restarts; ++r) {
    SolveResult run = solve(source, card_t1, card_t2, params, tol, max_iter,
                            derive_seed(seed, static_cast<std::uint64_t>(r)));
    if (!best || run.report.functional_value < best->report.functional_value) {
      best = std::move(run);
    }
  }
  return std::move(*best);
}

namespace {

// Analytic gradients of the three information terms with respect to the
// entries of enc1, modulo x-only additive offsets (the simplex-tangent
// contraction cancels those). All carry the common p(x) factor.
struct InfoGradients {
  MatrixXd i_t1_t2;   // p(x) { KL[p(T2|x)||p(T2)] - KL[p(T2|x)||p(T2|t1)] }
  MatrixXd i_x_t1;    // p(x) ln(p(t1|x)/p(t1))
  MatrixXd i_y_t1t2;  // p(x) E_{T2|x}{ KL[..||p(Y|t2)] - KL[..||p(Y|t1,t2)] }
};

InfoGradients analytic_gradients(const SolverState& state,
                                 const JointSource& source) {
  const Eigen::Index nx = source.card_x();
  const Eigen::Index n1 = state.card_t1();
  const Eigen::Index n2 = state.card_t2();
  const VectorXd& px = source.marginal_x().vec();
  const MatrixXd& e1 = state.enc1.matrix();
  const MatrixXd& e2 = state.enc2.matrix();
  const MatrixXd& pyx = source.y_given_x().matrix();

  // Exact induced quantities (no floors): p(t2), p(t2|t1), p(y|t2),
  // p(y|t1,t2).
  VectorXd m1 = e1.transpose() * px;
  VectorXd m2 = e2.transpose() * px;
  MatrixXd joint12 = e1.transpose() * px.asDiagonal() * e2;
  MatrixXd c21 = joint12.array().colwise() / m1.array();
  MatrixXd y_given_t2(n2, source.card_y());
  for (Eigen::Index t2 = 0; t2 < n2; ++t2) {
    VectorXd w = px.cwiseProduct(e2.col(t2));
    y_given_t2.row(t2) = floored_posterior(w).transpose() * pyx;
  }
  MatrixXd y_given_pair(n1 * n2, source.card_y());
  for (Eigen::Index t1 = 0; t1 < n1; ++t1) {
    for (Eigen::Index t2 = 0; t2 < n2; ++t2) {
      VectorXd w = px.cwiseProduct(e1.col(t1)).cwiseProduct(e2.col(t2));
      y_given_pair.row(t1 * n2 + t2) = floored_posterior(w).transpose() * pyx;
    }
  }

  InfoGradients g;
  g.i_t1_t2.resize(nx, n1);
  g.i_x_t1.resize(nx, n1);
  g.i_y_t1t2.resize(nx, n1);
  for (Eigen::Index x = 0; x < nx; ++x) {
    const double kl_t2_marg =
        kl_divergence_floored(e2.row(x), m2.transpose());
    double e_kl_y_t2 = 0.0;
    for (Eigen::Index t2 = 0; t2 < n2; ++t2) {
      if (e2(x, t2) <= 0.0) continue;
      e_kl_y_t2 +=
          e2(x, t2) * kl_divergence_floored(pyx.row(x), y_given_t2.row(t2));
    }
    for (Eigen::Index t1 = 0; t1 < n1; ++t1) {
      g.i_t1_t2(x, t1) =
          px(x) * (kl_t2_marg -
                   kl_divergence_floored(e2.row(x), c21.row(t1)));
      g.i_x_t1(x, t1) =
          px(x) * (std::log(std::max(e1(x, t1), kProbFloor)) -
                   log_floored(m1(t1)));
      double e_kl_y_pair = 0.0;
      for (Eigen::Index t2 = 0; t2 < n2; ++t2) {
        if (e2(x, t2) <= 0.0) continue;
        e_kl_y_pair += e2(x, t2) *
                       kl_divergence_floored(pyx.row(x),
                                             y_given_pair.row(t1 * n2 + t2));
      }
      g.i_y_t1t2(x, t1) = px(x) * (e_kl_y_t2 - e_kl_y_pair);
    }
  }
  return g;
}

// Tangent contraction <grad_row, e_t1 - row>: the directional derivative of
// the perturb-and-renormalize path at h = 0.
double tangent_component(const Eigen::RowVectorXd& grad_row,
                         const Eigen::RowVectorXd& enc_row, Eigen::Index t1) {
  return grad_row(t1) - grad_row.dot(enc_row);
}

}  // namespace

double check_derivative_identities(const SolverState& state,
                                   const JointSource& source,
                                   const LagrangeParams& params, double h) {
  if (!(h >= 1e-7 && h <= 1e-4))
    throw ValidationError("h must lie in [1e-7, 1e-4]");
  const Eigen::Index nx = source.card_x();
  const Eigen::Index n1 = state.card_t1();
  const InfoGradients g = analytic_gradients(state, source);

  // Numeric side: recompute each information term from the perturbed encoder
  // pair. Four probes per coordinate: three terms plus the functional.
  auto numeric = [&](Eigen::Index x, Eigen::Index t1) {
    MatrixXd plus = state.enc1.matrix();
    plus(x, t1) += h;
    plus.row(x) /= (1.0 + h);
    MatrixXd minus = state.enc1.matrix();
    minus(x, t1) -= h;
    minus.row(x) /= (1.0 - h);
    InfoReport rp = compute_info(source, ConditionalTable(std::move(plus)),
                                 state.enc2, params);
    InfoReport rm = compute_info(source, ConditionalTable(std::move(minus)),
                                 state.enc2, params);
    const double inv = 1.0 / (2.0 * h);
    return InfoReport{(rp.i_x_t1 - rm.i_x_t1) * inv,
                      0.0,
                      (rp.i_t1_t2 - rm.i_t1_t2) * inv,
                      (rp.i_y_t1t2 - rm.i_y_t1t2) * inv,
                      (rp.functional_value - rm.functional_value) * inv};
  };

  auto rel_err = [](double a, double n) {
    const double scale = std::max({std::abs(a), std::abs(n), 1e-6});
    return std::abs(a - n) / scale;
  };

  double worst = 0.0;
  for (Eigen::Index x = 0; x < nx; ++x) {
    for (Eigen::Index t1 = 0; t1 < n1; ++t1) {
      if (state.enc1(x, t1) <= 2.0 * h) continue;
      const InfoReport num = numeric(x, t1);
      const double a12 = tangent_component(g.i_t1_t2.row(x),
                                           state.enc1.row(x), t1);
      const double a1x = tangent_component(g.i_x_t1.row(x),
                                           state.enc1.row(x), t1);
      const double ay = tangent_component(g.i_y_t1t2.row(x),
                                          state.enc1.row(x), t1);
      const double af = -ay + params.beta * a1x + params.gamma * a12;
      worst = std::max(worst, rel_err(a12, num.i_t1_t2));
      worst = std::max(worst, rel_err(a1x, num.i_x_t1));
      worst = std::max(worst, rel_err(ay, num.i_y_t1t2));
      worst = std::max(worst, rel_err(af, num.functional_value));
    }
  }
  return worst;
}

}  // namespace dpfl
