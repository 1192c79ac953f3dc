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

#ifndef DPFL_PARAMS_HPP_
#define DPFL_PARAMS_HPP_

#include <optional>

#include "dpfl/errors.hpp"

namespace dpfl {

// Trade-off multipliers. beta prices I(X;T1), lambda prices I(X;T2), gamma
// prices the inter-agent correlation I(T1;T2). The optional targets (r1, r2,
// epsilon) are advisory bookkeeping for sweep post-processing; the solvers
// never read them.
struct LagrangeParams {
  double beta = 1.0;
  double lambda = 1.0;
  double gamma = 0.0;
  std::optional<double> r1;
  std::optional<double> r2;
  std::optional<double> epsilon;

  void validate() const {
    if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
    if (!(lambda > 0.0)) throw ValidationError("lambda must be > 0");
    if (!(gamma >= 0.0)) throw ValidationError("gamma must be >= 0");
    for (const auto& t : {r1, r2, epsilon}) {
      if (t && !(*t >= 0.0))
        throw ValidationError("advisory targets must be >= 0");
    }
  }
};

// Achieved information quadruple plus the functional value, all in nats.
struct InfoReport {
  double i_x_t1 = 0.0;
  double i_x_t2 = 0.0;
  double i_t1_t2 = 0.0;
  double i_y_t1t2 = 0.0;
  double functional_value = 0.0;
};

// Functional value for a given report: -I(Y;T1,T2) + beta I(X;T1)
// + lambda I(X;T2) + gamma I(T1;T2).
inline double functional_of(const InfoReport& r, const LagrangeParams& p) {
  return -r.i_y_t1t2 + p.beta * r.i_x_t1 + p.lambda * r.i_x_t2 +
         p.gamma * r.i_t1_t2;
}

}  // namespace dpfl

#endif  // DPFL_PARAMS_HPP_
