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
// Alternating fixed-point solver for the two-agent compression/prediction
// trade-off on discrete alphabets. Each agent i holds a stochastic encoder
// p(T_i|X); the solver minimizes
//
//   F = -I(Y;T1,T2) + beta I(X;T1) + lambda I(X;T2) + gamma I(T1;T2)
//
// by alternating the two self-consistent encoder updates with a refresh of
// all induced distributions (marginals, cross-conditionals, Bayes posterior,
// decoder).

#ifndef DPFL_DISCRETE_HPP_
#define DPFL_DISCRETE_HPP_

#include <cstdint>
#include <vector>

#include "dpfl/params.hpp"
#include "dpfl/prob.hpp"

namespace dpfl {

// Everything the alternating updates need, kept mutually consistent by
// refresh_induced. Pair-indexed tables use row index t1 * card_t2 + t2.
struct SolverState {
  ConditionalTable enc1;       // p(t1|x), card_x x card_t1
  ConditionalTable enc2;       // p(t2|x), card_x x card_t2
  Distribution marg1;          // p(t1)
  Distribution marg2;          // p(t2)
  ConditionalTable cond_21;    // p(t2|t1), card_t1 x card_t2
  ConditionalTable cond_12;    // p(t1|t2), card_t2 x card_t1
  ConditionalTable posterior;  // p(x|t1,t2), pairs x card_x
  ConditionalTable decoder;    // p(y|t1,t2), pairs x card_y
  int iteration = 0;

  Eigen::Index card_t1() const { return enc1.col_size(); }
  Eigen::Index card_t2() const { return enc2.col_size(); }
  Eigen::Index pair_index(Eigen::Index t1, Eigen::Index t2) const {
    return t1 * card_t2() + t2;
  }
};

struct SolveResult {
  SolverState state;
  InfoReport report;
  std::vector<double> trace;  // functional value at iteration 0, 1, ...
  bool converged = false;
  int iterations = 0;
  // Largest positive jump observed in the trace; > 1e-9 means the
  // monotone-decrease guarantee was violated numerically (warning, not
  // fatal).
  double max_trace_increase = 0.0;
};

// Uniform encoder rows perturbed by seeded multiplicative noise in
// [1 - delta, 1 + delta] with delta = 0.1, renormalized, then refreshed.
SolverState init_state(const JointSource& source, Eigen::Index card_t1,
                       Eigen::Index card_t2, std::uint64_t seed);

// Recomputes all induced quantities from the encoders: marginals, the
// cross-conditionals p(T2|T1) and p(T1|T2), the posterior
// p(x|t1,t2) proportional to p(x) p(t1|x) p(t2|x), and the decoder
// p(y|t1,t2) = sum_x p(y|x) p(x|t1,t2). Zero-mass cells are handled by
// flooring the posterior at kProbFloor and renormalizing.
SolverState refresh_induced(SolverState state, const JointSource& source);

// Self-consistent update for agent 1, computed in log-space with per-row max
// subtraction:
//   p(t1|x) ∝ p(t1) exp{ (gamma/beta) KL[p(T2|x) || p(T2|t1)]
//                        - (1/beta) E_{T2|x} KL[p(Y|x) || p(Y|t1,t2)] }.
// Reads marg1, enc2, cond_21 and decoder from `state`.
ConditionalTable update_encoder_1(const SolverState& state,
                                  const JointSource& source,
                                  const LagrangeParams& params);

// Mirror update for agent 2. Consumes state.enc1 as the already-updated
// encoder of agent 1 while cond_12 and decoder still hold the previous
// iteration's values.
ConditionalTable update_encoder_2(const SolverState& state,
                                  const JointSource& source,
                                  const LagrangeParams& params);

// Exact information quadruple achieved by a pair of encoders, computed from
// the induced joints (no floors). functional_value is filled per `params`.
InfoReport compute_info(const JointSource& source, const ConditionalTable& enc1,
                        const ConditionalTable& enc2,
                        const LagrangeParams& params);

double evaluate_functional(const SolverState& state, const JointSource& source,
                           const LagrangeParams& params);

// Alternates [update 1 -> update 2 -> refresh] until |dF| < tol or max_iter.
SolveResult solve(const JointSource& source, Eigen::Index card_t1,
                  Eigen::Index card_t2, const LagrangeParams& params,
                  double tol = 1e-8, int max_iter = 2000,
                  std::uint64_t seed = 1);

// Best of `restarts` independent runs (seeds derived from `seed`), smallest
// final functional wins.
SolveResult solve_best_of(const JointSource& source, Eigen::Index card_t1,
                          Eigen::Index card_t2, const LagrangeParams& params,
                          double tol, int max_iter, std::uint64_t seed,
                          int restarts);

// Compares the analytic derivatives of I(T1;T2), I(X;T1), I(Y;T1,T2) and of
// the full functional with respect to p(t1|x) against central finite
// differences along simplex-tangent directions (perturb one entry, then
// renormalize the row). Returns the maximum relative discrepancy over all
// admissible coordinates. h must lie in [1e-7, 1e-4]; coordinates with
// p(t1|x) <= 2h are skipped so the perturbed row stays valid.
double check_derivative_identities(const SolverState& state,
                                   const JointSource& source,
                                   const LagrangeParams& params, double h);

}  // namespace dpfl

#endif  // DPFL_DISCRETE_HPP_
