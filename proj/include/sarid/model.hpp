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
#ifndef SARID_MODEL_HPP
#define SARID_MODEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "sarid/series.hpp"

namespace sarid {

/// Coefficients of one AR subsystem: x_k = sum_j a_j x_{k-j} + sum_j c_j u_{k-j}.
struct SubsystemParams {
  std::vector<double> a;  ///< AR coefficients, length n_a
  std::vector<double> c;  ///< input coefficients, length n_c
};

/// Switched AR model with n subsystems sharing orders (n_a, n_c).
/// Modes are numbered 1..n throughout the library and in every file format.
class SarModel {
 public:
  SarModel(int n_a, int n_c, std::vector<SubsystemParams> subsystems);

  int mode_count() const { return static_cast<int>(subsystems_.size()); }
  int ar_order() const { return n_a_; }
  int input_order() const { return n_c_; }
  int regressor_dim() const { return n_a_ + n_c_ + 1; }

  const SubsystemParams& subsystem(int mode) const;
  const std::vector<SubsystemParams>& subsystems() const { return subsystems_; }

 private:
  int n_a_;
  int n_c_;
  std::vector<SubsystemParams> subsystems_;
};

/// Row-stochastic matrix of mode-switch probabilities,
/// entry (i, j) = P{ delta_{k+1} = j | delta_k = i } with modes 1..n.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(Eigen::MatrixXd p);

  int order() const { return static_cast<int>(p_.rows()); }
  double prob(int from_mode, int to_mode) const {
    return p_(from_mode - 1, to_mode - 1);
  }
  const Eigen::MatrixXd& matrix() const { return p_; }

  static TransitionMatrix identity(int n);

 private:
  Eigen::MatrixXd p_;
};

enum class NoiseFamily { kNormal };

/// Measurement-noise description. Only the zero-mean Normal family ships;
/// everything downstream consumes it through moment(d), so another symmetric
/// family with known moments would slot in without touching the callers.
class NoiseSpec {
 public:
  static NoiseSpec normal(double variance);

  NoiseFamily family() const { return family_; }
  double variance() const { return variance_; }
  double sigma() const;

  /// d-th raw moment: 0 for odd d, sigma^d (d-1)!! for even d.
  double moment(int d) const;

 private:
  explicit NoiseSpec(double variance)
      : family_(NoiseFamily::kNormal), variance_(variance) {}
  NoiseFamily family_;
  double variance_;
};

/// d-th moment of a zero-mean Normal with standard deviation sigma.
double normal_moment(int d, double sigma);

/// Ground truth carried by synthetic datasets: the clean state, the mode
/// sequence, the noise draws, and what generated them.
struct DatasetTruth {
  IndexedSeries x;           ///< clean output, indices -n_a+1 .. N
  IndexedSeries eta;         ///< noise draws, same index range as y
  std::vector<int> delta;    ///< active mode at k = 1..N (1-based modes)
  std::optional<SarModel> model;
  std::optional<TransitionMatrix> ptm;
  std::optional<NoiseSpec> noise;
  std::optional<std::uint64_t> seed;

  int mode_at(std::int64_t k) const;  ///< delta_k, k in 1..N
};

/// One identification record: input u_k for k = -n_c+1 .. N-1 and noisy
/// output y_k for k = -n_a+1 .. N, plus optional truth.
struct Dataset {
  int n_a = 1;
  int n_c = 1;
  std::int64_t N = 0;
  IndexedSeries u;
  IndexedSeries y;
  std::optional<DatasetTruth> truth;

  /// Throws std::invalid_argument when index ranges are inconsistent or
  /// truth is present but y != x + eta somewhere.
  void validate() const;

  /// Restriction to the first N samples; truth is sliced along.
  Dataset prefix(std::int64_t new_N) const;
};

/// b = [-1, a_1..a_{n_a}, c_1..c_{n_c}] so that b . r = 0 on noiseless
/// trajectories of this subsystem.
Eigen::VectorXd coefficient_vector(const SubsystemParams& s);

/// Regressor [x_k, x_{k-1}, .., x_{k-n_a}, u_{k-1}, .., u_{k-n_c}] built from
/// the clean state when use_truth is set, otherwise with y in place of x.
/// Valid for k = 1..N; throws std::out_of_range otherwise.
Eigen::VectorXd regressor(const Dataset& ds, std::int64_t k, bool use_truth);

}  // namespace sarid

#endif  // SARID_MODEL_HPP
