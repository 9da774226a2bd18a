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
#include "sarid/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sarid {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kDistinctnessTolerance = 1e-9;

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

SarModel::SarModel(int n_a, int n_c, std::vector<SubsystemParams> subsystems)
    : n_a_(n_a), n_c_(n_c), subsystems_(std::move(subsystems)) {
  if (n_a_ < 1) throw std::invalid_argument("SarModel: n_a must be >= 1");
  if (n_c_ < 0) throw std::invalid_argument("SarModel: n_c must be >= 0");
  if (subsystems_.empty()) {
    throw std::invalid_argument("SarModel: need at least one subsystem");
  }
  for (const auto& s : subsystems_) {
    if (static_cast<int>(s.a.size()) != n_a_ ||
        static_cast<int>(s.c.size()) != n_c_) {
      throw std::invalid_argument(
          "SarModel: subsystem coefficient lengths disagree with (n_a, n_c)");
    }
    if (!all_finite(s.a) || !all_finite(s.c)) {
      throw std::invalid_argument("SarModel: non-finite coefficient");
    }
  }
  // Identical subsystems make the decoupling polynomial degenerate.
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    for (std::size_t j = i + 1; j < subsystems_.size(); ++j) {
      double d2 = 0.0;
      for (int t = 0; t < n_a_; ++t) {
        double d = subsystems_[i].a[t] - subsystems_[j].a[t];
        d2 += d * d;
      }
      for (int t = 0; t < n_c_; ++t) {
        double d = subsystems_[i].c[t] - subsystems_[j].c[t];
        d2 += d * d;
      }
      if (std::sqrt(d2) <= kDistinctnessTolerance) {
        throw std::invalid_argument("SarModel: subsystems " +
                                    std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " coincide");
      }
    }
  }
}

const SubsystemParams& SarModel::subsystem(int mode) const {
  if (mode < 1 || mode > mode_count()) {
    throw std::out_of_range("SarModel: mode " + std::to_string(mode) +
                            " outside 1.." + std::to_string(mode_count()));
  }
  return subsystems_[static_cast<std::size_t>(mode - 1)];
}

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd p) : p_(std::move(p)) {
  if (p_.rows() != p_.cols() || p_.rows() < 1) {
    throw std::invalid_argument("TransitionMatrix: must be square, n >= 1");
  }
  for (Eigen::Index i = 0; i < p_.rows(); ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < p_.cols(); ++j) {
      double v = p_(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("TransitionMatrix: entry outside [0, 1]");
      }
      row_sum += v;
    }
    if (std::abs(row_sum - 1.0) > kRowSumTolerance) {
      throw std::invalid_argument("TransitionMatrix: row " + std::to_string(i + 1) +
                                  " sums to " + std::to_string(row_sum));
    }
  }
}

TransitionMatrix TransitionMatrix::identity(int n) {
  return TransitionMatrix(Eigen::MatrixXd::Identity(n, n));
}

NoiseSpec NoiseSpec::normal(double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("NoiseSpec: variance must be finite and >= 0");
  }
  return NoiseSpec(variance);
}

double NoiseSpec::sigma() const { return std::sqrt(variance_); }

double NoiseSpec::moment(int d) const {
  if (d < 0) throw std::invalid_argument("NoiseSpec::moment: d must be >= 0");
  if (d == 0) return 1.0;
  if (d % 2 == 1) return 0.0;
  // sigma^d (d-1)!!
  double m = 1.0;
  for (int t = 1; t < d; t += 2) {
    m *= static_cast<double>(t) * variance_;
  }
  return m;
}

double normal_moment(int d, double sigma) {
  return NoiseSpec::normal(sigma * sigma).moment(d);
}

int DatasetTruth::mode_at(std::int64_t k) const {
  if (k < 1 || k > static_cast<std::int64_t>(delta.size())) {
    throw std::out_of_range("DatasetTruth: delta index outside 1..N");
  }
  return delta[static_cast<std::size_t>(k - 1)];
}

void Dataset::validate() const {
  if (n_a < 1 || n_c < 0 || N < 1) {
    throw std::invalid_argument("Dataset: need n_a >= 1, n_c >= 0, N >= 1");
  }
  if (y.first() != -n_a + 1 || y.last() != N) {
    throw std::invalid_argument("Dataset: y must cover -n_a+1 .. N");
  }
  if (u.first() != -n_c + 1 || u.last() != N - 1) {
    throw std::invalid_argument("Dataset: u must cover -n_c+1 .. N-1");
  }
  if (truth) {
    if (truth->x.first() != y.first() || truth->x.last() != y.last() ||
        truth->eta.first() != y.first() || truth->eta.last() != y.last()) {
      throw std::invalid_argument("Dataset: truth x/eta range must match y");
    }
    if (static_cast<std::int64_t>(truth->delta.size()) != N) {
      throw std::invalid_argument("Dataset: truth delta must have length N");
    }
    for (std::int64_t k = y.first(); k <= y.last(); ++k) {
      if (y.at(k) != truth->x.at(k) + truth->eta.at(k)) {
        throw std::invalid_argument("Dataset: y != x + eta at k = " +
                                    std::to_string(k));
      }
    }
  }
}

Dataset Dataset::prefix(std::int64_t new_N) const {
  if (new_N < 1 || new_N > N) {
    throw std::invalid_argument("Dataset::prefix: new_N outside 1..N");
  }
  Dataset out;
  out.n_a = n_a;
  out.n_c = n_c;
  out.N = new_N;
  out.u = u.prefix(new_N - 1);
  out.y = y.prefix(new_N);
  if (truth) {
    DatasetTruth t{truth->x.prefix(new_N),
                   truth->eta.prefix(new_N),
                   std::vector<int>(truth->delta.begin(),
                                    truth->delta.begin() + new_N),
                   truth->model,
                   truth->ptm,
                   truth->noise,
                   truth->seed};
    out.truth = std::move(t);
  }
  return out;
}

Eigen::VectorXd coefficient_vector(const SubsystemParams& s) {
  Eigen::VectorXd b(1 + s.a.size() + s.c.size());
  b(0) = -1.0;
  for (std::size_t j = 0; j < s.a.size(); ++j) b(1 + j) = s.a[j];
  for (std::size_t j = 0; j < s.c.size(); ++j) b(1 + s.a.size() + j) = s.c[j];
  return b;
}

Eigen::VectorXd regressor(const Dataset& ds, std::int64_t k, bool use_truth) {
  if (k < 1 || k > ds.N) {
    throw std::out_of_range("regressor: k outside 1..N");
  }
  if (use_truth && !ds.truth) {
    throw std::invalid_argument("regressor: dataset carries no truth");
  }
  const IndexedSeries& src = use_truth ? ds.truth->x : ds.y;
  Eigen::VectorXd r(ds.n_a + ds.n_c + 1);
  for (int j = 0; j <= ds.n_a; ++j) r(j) = src.at(k - j);
  for (int j = 1; j <= ds.n_c; ++j) r(ds.n_a + j) = ds.u.at(k - j);
  return r;
}

}  // namespace sarid
