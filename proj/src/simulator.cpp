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
#include "sarid/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sarid/rng.hpp"

namespace sarid {

namespace {

// Stream tags for the independent random sources inside one simulation.
constexpr std::uint64_t kStreamInput = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamChain = 3;

int sample_from_row(const double* row, int n, double u) {
  double cdf = 0.0;
  for (int j = 0; j < n; ++j) {
    cdf += row[j];
    if (u < cdf) return j + 1;
  }
  return n;  // guard against cdf rounding just below 1
}

}  // namespace

std::vector<int> sample_markov_chain(const TransitionMatrix& P, std::int64_t N,
                                     const std::vector<double>& init,
                                     std::uint64_t seed) {
  const int n = P.order();
  std::vector<double> init_law = init;
  if (init_law.empty()) {
    init_law.assign(n, 1.0 / static_cast<double>(n));
  }
  if (static_cast<int>(init_law.size()) != n) {
    throw std::invalid_argument("sample_markov_chain: init has wrong length");
  }
  double total = 0.0;
  for (double p : init_law) total += p;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("sample_markov_chain: init does not sum to 1");
  }

  CounterRng rng(seed, kStreamChain);
  std::vector<int> delta(static_cast<std::size_t>(N));
  if (N == 0) return delta;
  delta[0] = sample_from_row(init_law.data(), n, rng.uniform01(0));
  // Row-major view of P for the walk.
  const Eigen::MatrixXd& m = P.matrix();
  std::vector<double> rows(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i * n + j] = m(i, j);
  for (std::int64_t k = 1; k < N; ++k) {
    int prev = delta[static_cast<std::size_t>(k - 1)];
    delta[static_cast<std::size_t>(k)] = sample_from_row(
        &rows[(prev - 1) * n], n, rng.uniform01(static_cast<std::uint64_t>(k)));
  }
  return delta;
}

IndexedSeries generate_input(InputKind kind, std::int64_t first_index,
                             std::int64_t N, std::uint64_t seed,
                             double amplitude) {
  if (N < 0) throw std::invalid_argument("generate_input: N must be >= 0");
  CounterRng rng(seed, kStreamInput);
  std::vector<double> v(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) {
    // Counter is the absolute index shifted to zero, so the value at a given
    // time does not depend on how long the record is.
    auto ctr = static_cast<std::uint64_t>(i);
    double u01 = rng.uniform01(ctr);
    switch (kind) {
      case InputKind::kUniform:
        v[static_cast<std::size_t>(i)] = amplitude * (2.0 * u01 - 1.0);
        break;
      case InputKind::kPrbs:
        v[static_cast<std::size_t>(i)] = u01 < 0.5 ? -amplitude : amplitude;
        break;
    }
  }
  return IndexedSeries(first_index, std::move(v));
}

Dataset simulate(const SarModel& model, const TransitionMatrix& P,
                 const NoiseSpec& noise, const SimOptions& opts) {
  IndexedSeries input = generate_input(opts.input, -model.input_order() + 1,
                                       opts.N - 1 + model.input_order(),
                                       opts.seed, opts.input_amplitude);
  return simulate(model, P, noise, input, opts);
}

Dataset simulate(const SarModel& model, const TransitionMatrix& P,
                 const NoiseSpec& noise, const IndexedSeries& input,
                 const SimOptions& opts) {
  if (opts.N < 1) throw std::invalid_argument("simulate: N must be >= 1");
  if (!(opts.state_bound > 0)) {
    throw std::invalid_argument("simulate: state bound must be positive");
  }
  if (model.mode_count() != P.order()) {
    throw std::invalid_argument("simulate: model and P disagree on n");
  }
  const int n_a = model.ar_order();
  const int n_c = model.input_order();
  const std::int64_t N = opts.N;
  if (input.first() != -n_c + 1 || input.last() < N - 1) {
    throw std::invalid_argument("simulate: input must cover -n_c+1 .. N-1");
  }

  std::vector<int> delta = sample_markov_chain(P, N, opts.init, opts.seed);

  const double sigma = noise.sigma();
  CounterRng noise_rng(opts.seed, kStreamNoise);

  IndexedSeries x(-n_a + 1, std::vector<double>(static_cast<std::size_t>(N + n_a), 0.0));
  IndexedSeries eta(-n_a + 1, std::vector<double>(static_cast<std::size_t>(N + n_a), 0.0));
  IndexedSeries y = eta;

  for (std::int64_t k = -n_a + 1; k <= N; ++k) {
    if (k >= 1) {
      const SubsystemParams& s = model.subsystem(delta[static_cast<std::size_t>(k - 1)]);
      double xk = 0.0;
      for (int j = 1; j <= n_a; ++j) xk += s.a[j - 1] * x.at(k - j);
      for (int j = 1; j <= n_c; ++j) xk += s.c[j - 1] * input.at(k - j);
      if (!(std::abs(xk) <= opts.state_bound)) {
        throw std::runtime_error(
            "simulate: |x_" + std::to_string(k) + "| = " + std::to_string(xk) +
            " exceeds the state bound; the mode mix is unstable");
      }
      x.at(k) = xk;
    }
    double e = sigma == 0.0
                   ? 0.0
                   : sigma * noise_rng.normal(static_cast<std::uint64_t>(k + n_a - 1));
    eta.at(k) = e;
    y.at(k) = x.at(k) + e;
  }

  Dataset ds;
  ds.n_a = n_a;
  ds.n_c = n_c;
  ds.N = N;
  ds.u = input.last() == N - 1 ? input : input.prefix(N - 1);
  ds.y = std::move(y);
  ds.truth = DatasetTruth{std::move(x), std::move(eta), std::move(delta),
                          model, P, noise, opts.seed};
  return ds;
}

double noise_to_output_ratio(const Dataset& ds) {
  if (!ds.truth) {
    throw std::invalid_argument("noise_to_output_ratio: dataset carries no truth");
  }
  double max_eta = 0.0, max_y = 0.0;
  for (std::int64_t k = ds.y.first(); k <= ds.y.last(); ++k) {
    max_eta = std::max(max_eta, std::abs(ds.truth->eta.at(k)));
    max_y = std::max(max_y, std::abs(ds.y.at(k)));
  }
  if (max_y == 0.0) return max_eta == 0.0 ? 0.0 : 1.0;
  return max_eta / max_y;
}

}  // namespace sarid
