/**
 * Copyright (C) 2026 The sarid authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SARID_PTM_HPP
#define SARID_PTM_HPP

#include <cstdint>
#include <vector>

#include "sarid/decoder.hpp"
#include "sarid/model.hpp"

namespace sarid {

struct PtmEstimate {
  TransitionMatrix ptm;
  /// Rows (1-based) with zero counts and zero smoothing, set to uniform.
  std::vector<int> unvisited_rows;
  double smoothing = 0.0;
};

/// Closed-form maximizer of the Markov-chain likelihood
/// max prod P_ij^{n_ij} s.t. rows stochastic: the count ratio per row,
/// optionally Laplace-smoothed.
PtmEstimate estimate_ptm(const TransitionCounts& counts, double smoothing = 0.0);

/// ||estimate - truth||_F / ||truth||_F.
double normalized_frobenius(const TransitionMatrix& estimate,
                            const TransitionMatrix& truth);

/// sum_ij n_ij log P_ij with the 0 log 0 = 0 convention;
/// -inf when some visited transition has probability zero.
double transition_loglik(const TransitionCounts& counts, const TransitionMatrix& P);

/// Lightweight optimality oracle: true iff the candidate's log likelihood is
/// at least that of `trials` random feasible row-stochastic perturbations
/// (a mix of local moves and fresh simplex draws). Deterministic given seed.
bool verify_mle_optimality(const TransitionCounts& counts,
                           const TransitionMatrix& candidate, int trials,
                           std::uint64_t seed);

}  // namespace sarid

#endif  // SARID_PTM_HPP
