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
#ifndef SARID_SIMULATOR_HPP
#define SARID_SIMULATOR_HPP

#include <cstdint>
#include <vector>

#include "sarid/model.hpp"

namespace sarid {

enum class InputKind { kUniform, kPrbs };

struct SimOptions {
  std::int64_t N = 0;
  std::uint64_t seed = 0;
  InputKind input = InputKind::kUniform;
  double input_amplitude = 1.0;      ///< uniform on [-A, A], prbs in {-A, +A}
  double state_bound = 1e6;          ///< |x_k| above this aborts the run
  std::vector<double> init = {};     ///< mode-1..n initial law; empty = uniform
};

/// delta_1..N with delta_1 ~ init and delta_{k+1} | delta_k = i ~ row i of P.
/// Deterministic given seed; entries are modes 1..n.
std::vector<int> sample_markov_chain(const TransitionMatrix& P, std::int64_t N,
                                     const std::vector<double>& init,
                                     std::uint64_t seed);

/// Input sequence for indices first_index .. first_index + N - 1. The value
/// at index k depends only on (seed, k), so longer runs extend shorter ones.
IndexedSeries generate_input(InputKind kind, std::int64_t first_index,
                             std::int64_t N, std::uint64_t seed,
                             double amplitude = 1.0);

/// Simulate the switched AR recursion with Markov switching and additive
/// measurement noise. Initial states x_{-n_a+1..0} are zero; the full truth
/// (x, delta, eta, generators, seed) is stored in the returned dataset.
/// Throws std::runtime_error if |x_k| exceeds opts.state_bound.
Dataset simulate(const SarModel& model, const TransitionMatrix& P,
                 const NoiseSpec& noise, const SimOptions& opts);

/// Same, with a caller-supplied input sequence covering -n_c+1 .. N-1.
Dataset simulate(const SarModel& model, const TransitionMatrix& P,
                 const NoiseSpec& noise, const IndexedSeries& input,
                 const SimOptions& opts);

/// max|eta| / max|y| over the stored range; needs truth.
double noise_to_output_ratio(const Dataset& ds);

}  // namespace sarid

#endif  // SARID_SIMULATOR_HPP
