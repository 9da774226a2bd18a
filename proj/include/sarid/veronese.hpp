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
#ifndef SARID_VERONESE_HPP
#define SARID_VERONESE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "sarid/model.hpp"

namespace sarid {

/// Exact binomial coefficient as a double (arguments stay tiny here).
double binomial(int n, int k);

/// Monomial bookkeeping for the degree-n polynomial embedding of an
/// s-dimensional regressor. Exponent vectors are listed in lexicographic
/// order, descending in the first variable, e.g. for n = 2, s = 2:
/// (2,0), (1,1), (0,2). Every module takes the same instance so nothing can
/// disagree about which coefficient belongs to which monomial.
class VeroneseSpec {
 public:
  VeroneseSpec(int degree, int dims);

  int degree() const { return degree_; }
  int dims() const { return dims_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(exponents_.size()); }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }
  const std::vector<int>& exponent(Eigen::Index i) const {
    return exponents_[static_cast<std::size_t>(i)];
  }

  /// Position of an exponent vector; throws if it is not a degree-n monomial.
  Eigen::Index index_of(const std::vector<int>& exponent) const;

 private:
  int degree_;
  int dims_;
  std::vector<std::vector<int>> exponents_;
  std::map<std::vector<int>, Eigen::Index> lookup_;
};

/// All degree-n monomials of v, ordered per VeroneseSpec(n, v.size()).
Eigen::VectorXd veronese_map(const Eigen::VectorXd& v, int degree);
Eigen::VectorXd veronese_map(const Eigen::VectorXd& v, const VeroneseSpec& spec);

/// Coefficients c_n of the product of linear forms: for every r,
/// c_n . veronese_map(r) = prod_i b_i . r. The b_i need not be normalized.
Eigen::VectorXd decoupling_coefficients(const std::vector<Eigen::VectorXd>& b_list,
                                        const VeroneseSpec& spec);

/// Bias-corrected power H_h: a polynomial in the noisy observation y with
/// E[H_h(x + eta)] = x^h when eta has the given moments and is independent
/// of x. Defined by H_0 = 1 and
///   H_h(y) = y^h - sum_{d=1..h} C(h,d) m_d H_{h-d}(y).
double unbiased_power(double y, int h, const NoiseSpec& noise);

/// Coefficient table for H_0..H_hmax: row h holds the coefficients of H_h in
/// powers of y (index p = coefficient of y^p). Only powers with h-p even are
/// nonzero for symmetric noise.
std::vector<std::vector<double>> unbiased_power_coefficients(int h_max,
                                                             const NoiseSpec& noise);

/// Symmetric D x D accumulator with running-mean semantics: merging keeps
/// (sum, count) so accumulating the same sample twice leaves the mean exact.
class CorrectedMatrix {
 public:
  explicit CorrectedMatrix(Eigen::Index dim);
  CorrectedMatrix(Eigen::MatrixXd sum, std::int64_t count);

  void add(const Eigen::MatrixXd& sample);
  void merge(const CorrectedMatrix& other);

  Eigen::Index dim() const { return sum_.rows(); }
  std::int64_t count() const { return count_; }
  Eigen::MatrixXd mean() const;

 private:
  Eigen::MatrixXd sum_;
  std::int64_t count_;
};

/// The moment-corrected outer product for one sample: entry (i, j) is the
/// monomial nu_i(r_k) nu_j(r_k) with every unobservable power x_{k-t}^h
/// replaced by H_h(y_{k-t}); input powers are exact. Cross-time noise
/// independence makes each entry an unbiased estimate of the clean monomial.
Eigen::MatrixXd corrected_sample_matrix(const Dataset& ds, std::int64_t k,
                                        const VeroneseSpec& spec,
                                        const NoiseSpec& noise);

struct MomentStatsOptions {
  bool prescale = false;  ///< divide y, u by their max before accumulating
};

/// One pass over the data collecting the raw output/input moment averages
/// that the corrected matrix needs. The noise correction is affine in the
/// noise moments, so the expensive N-sample pass happens once and the matrix
/// for any sigma is a cheap recombination of these statistics.
///
/// Summation is chunked (fixed 8192-sample blocks) with compensated merging
/// of block totals, so the result is bit-stable and does not degrade at
/// N = 10^6 with degree-2n monomials.
class MomentStats {
 public:
  MomentStats(const Dataset& ds, const VeroneseSpec& spec,
              const MomentStatsOptions& opts = {});

  const VeroneseSpec& spec() const { return spec_; }
  std::int64_t count() const { return count_; }
  double y_std() const;  ///< sample standard deviation of the stored y range

  /// Corrected matrix for the given noise law, count = N.
  CorrectedMatrix combine(const NoiseSpec& noise) const;

  /// Per-monomial basis scale D_ii = prod scale^exponent (ones when
  /// prescaling is off). A null vector v of the scaled matrix maps back to
  /// the unscaled basis as D^{-1} v (up to normalization).
  Eigen::VectorXd monomial_scales() const;
  double sigma_scale() const { return y_scale_; }

 private:
  VeroneseSpec spec_;  // stored by value; callers may pass temporaries
  int n_a_;
  int n_c_;
  std::int64_t count_ = 0;
  double y_scale_ = 1.0;
  double u_scale_ = 1.0;
  double y_sum_ = 0.0;
  double y_sq_sum_ = 0.0;
  std::int64_t y_count_ = 0;

  // Raw patterns: powers of (y_k..y_{k-n_a}, u_{k-1}..u_{k-n_c}).
  std::vector<std::vector<int>> patterns_;
  std::vector<double> pattern_means_;

  // Per upper-triangle entry: list of (pattern index, per-lag (h, p) pairs)
  // whose combination coefficient is prod_t coeff[h_t][p_t].
  struct Term {
    std::size_t pattern;
    std::vector<std::pair<int, int>> hp;  // (full power h_t, kept power p_t)
  };
  struct Entry {
    Eigen::Index i, j;
    std::vector<Term> terms;
  };
  std::vector<Entry> entries_;
};

/// Running mean of corrected_sample_matrix over k = 1..N. Warns on stderr
/// when N is below the matrix dimension.
CorrectedMatrix accumulate(const Dataset& ds, const VeroneseSpec& spec,
                           const NoiseSpec& noise);

}  // namespace sarid

#endif  // SARID_VERONESE_HPP
