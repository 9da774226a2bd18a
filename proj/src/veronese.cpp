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
#include "sarid/veronese.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace sarid {

namespace {

constexpr std::int64_t kChunkSize = 8192;

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void enumerate_exponents(int degree, int dims, std::vector<int>& current,
                         std::vector<std::vector<int>>& out) {
  int pos = static_cast<int>(current.size());
  if (pos == dims - 1) {
    current.push_back(degree);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current.push_back(e);
    enumerate_exponents(degree - e, dims, current, out);
    current.pop_back();
  }
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

VeroneseSpec::VeroneseSpec(int degree, int dims) : degree_(degree), dims_(dims) {
  if (degree < 1) throw std::invalid_argument("VeroneseSpec: degree must be >= 1");
  if (dims < 1) throw std::invalid_argument("VeroneseSpec: dims must be >= 1");
  std::vector<int> current;
  enumerate_exponents(degree, dims, current, exponents_);
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    lookup_.emplace(exponents_[i], static_cast<Eigen::Index>(i));
  }
}

Eigen::Index VeroneseSpec::index_of(const std::vector<int>& exponent) const {
  auto it = lookup_.find(exponent);
  if (it == lookup_.end()) {
    throw std::invalid_argument("VeroneseSpec: not a degree-n monomial");
  }
  return it->second;
}

Eigen::VectorXd veronese_map(const Eigen::VectorXd& v, const VeroneseSpec& spec) {
  if (v.size() != spec.dims()) {
    throw std::invalid_argument("veronese_map: dimension mismatch");
  }
  Eigen::VectorXd out(spec.size());
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    const auto& e = spec.exponent(i);
    double m = 1.0;
    for (int t = 0; t < spec.dims(); ++t) m *= ipow(v(t), e[t]);
    out(i) = m;
  }
  return out;
}

Eigen::VectorXd veronese_map(const Eigen::VectorXd& v, int degree) {
  return veronese_map(v, VeroneseSpec(degree, static_cast<int>(v.size())));
}

Eigen::VectorXd decoupling_coefficients(const std::vector<Eigen::VectorXd>& b_list,
                                        const VeroneseSpec& spec) {
  if (static_cast<int>(b_list.size()) != spec.degree()) {
    throw std::invalid_argument(
        "decoupling_coefficients: need one linear form per degree");
  }
  const int s = spec.dims();
  // Expand the product of linear forms one factor at a time, keyed by
  // exponent vector.
  std::map<std::vector<int>, double> poly;
  poly.emplace(std::vector<int>(s, 0), 1.0);
  for (const auto& b : b_list) {
    if (b.size() != s) {
      throw std::invalid_argument("decoupling_coefficients: bad form length");
    }
    std::map<std::vector<int>, double> next;
    for (const auto& [e, coef] : poly) {
      for (int j = 0; j < s; ++j) {
        if (b(j) == 0.0) continue;
        std::vector<int> e2 = e;
        ++e2[j];
        next[e2] += coef * b(j);
      }
    }
    poly = std::move(next);
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(spec.size());
  for (const auto& [e, coef] : poly) {
    c(spec.index_of(e)) = coef;
  }
  return c;
}

std::vector<std::vector<double>> unbiased_power_coefficients(int h_max,
                                                             const NoiseSpec& noise) {
  if (h_max < 0) throw std::invalid_argument("unbiased_power_coefficients: h_max < 0");
  std::vector<std::vector<double>> coef(static_cast<std::size_t>(h_max) + 1);
  coef[0] = {1.0};
  for (int h = 1; h <= h_max; ++h) {
    std::vector<double> c(static_cast<std::size_t>(h) + 1, 0.0);
    c[static_cast<std::size_t>(h)] = 1.0;
    for (int d = 1; d <= h; ++d) {
      const double w = binomial(h, d) * noise.moment(d);
      if (w == 0.0) continue;
      const auto& lower = coef[static_cast<std::size_t>(h - d)];
      for (std::size_t p = 0; p < lower.size(); ++p) c[p] -= w * lower[p];
    }
    coef[static_cast<std::size_t>(h)] = std::move(c);
  }
  return coef;
}

double unbiased_power(double y, int h, const NoiseSpec& noise) {
  if (h < 0) throw std::invalid_argument("unbiased_power: h must be >= 0");
  // Evaluate the recursion directly; h is tiny (<= 2n).
  std::vector<double> H(static_cast<std::size_t>(h) + 1);
  H[0] = 1.0;
  for (int t = 1; t <= h; ++t) {
    double v = ipow(y, t);
    for (int d = 1; d <= t; ++d) {
      v -= binomial(t, d) * noise.moment(d) * H[static_cast<std::size_t>(t - d)];
    }
    H[static_cast<std::size_t>(t)] = v;
  }
  return H[static_cast<std::size_t>(h)];
}

CorrectedMatrix::CorrectedMatrix(Eigen::Index dim)
    : sum_(Eigen::MatrixXd::Zero(dim, dim)), count_(0) {}

CorrectedMatrix::CorrectedMatrix(Eigen::MatrixXd sum, std::int64_t count)
    : sum_(std::move(sum)), count_(count) {}

void CorrectedMatrix::add(const Eigen::MatrixXd& sample) {
  sum_ += sample;
  ++count_;
}

void CorrectedMatrix::merge(const CorrectedMatrix& other) {
  if (other.dim() != dim()) {
    throw std::invalid_argument("CorrectedMatrix::merge: dimension mismatch");
  }
  sum_ += other.sum_;
  count_ += other.count_;
}

Eigen::MatrixXd CorrectedMatrix::mean() const {
  if (count_ == 0) return sum_;
  return sum_ / static_cast<double>(count_);
}

Eigen::MatrixXd corrected_sample_matrix(const Dataset& ds, std::int64_t k,
                                        const VeroneseSpec& spec,
                                        const NoiseSpec& noise) {
  if (k < 1 || k > ds.N) throw std::out_of_range("corrected_sample_matrix: k outside 1..N");
  if (spec.dims() != ds.n_a + ds.n_c + 1) {
    throw std::invalid_argument("corrected_sample_matrix: spec dims mismatch");
  }
  const int n_a = ds.n_a;
  const int n_c = ds.n_c;
  const int two_n = 2 * spec.degree();
  const auto coef = unbiased_power_coefficients(two_n, noise);

  // H_h(y_{k-t}) for every lag and power, then input powers.
  std::vector<std::vector<double>> hval(static_cast<std::size_t>(n_a) + 1);
  for (int t = 0; t <= n_a; ++t) {
    const double yv = ds.y.at(k - t);
    auto& row = hval[static_cast<std::size_t>(t)];
    row.resize(static_cast<std::size_t>(two_n) + 1);
    for (int h = 0; h <= two_n; ++h) {
      double v = 0.0;
      for (std::size_t p = 0; p < coef[static_cast<std::size_t>(h)].size(); ++p) {
        v += coef[static_cast<std::size_t>(h)][p] * ipow(yv, static_cast<int>(p));
      }
      row[static_cast<std::size_t>(h)] = v;
    }
  }
  std::vector<std::vector<double>> upow(static_cast<std::size_t>(n_c));
  for (int j = 1; j <= n_c; ++j) {
    const double uv = ds.u.at(k - j);
    auto& row = upow[static_cast<std::size_t>(j - 1)];
    row.resize(static_cast<std::size_t>(two_n) + 1);
    row[0] = 1.0;
    for (int g = 1; g <= two_n; ++g) row[static_cast<std::size_t>(g)] = row[static_cast<std::size_t>(g - 1)] * uv;
  }

  const Eigen::Index D = spec.size();
  Eigen::MatrixXd M(D, D);
  for (Eigen::Index i = 0; i < D; ++i) {
    for (Eigen::Index j = i; j < D; ++j) {
      const auto& ei = spec.exponent(i);
      const auto& ej = spec.exponent(j);
      double v = 1.0;
      for (int t = 0; t <= n_a; ++t) {
        v *= hval[static_cast<std::size_t>(t)][static_cast<std::size_t>(ei[t] + ej[t])];
      }
      for (int t = 0; t < n_c; ++t) {
        v *= upow[static_cast<std::size_t>(t)]
                 [static_cast<std::size_t>(ei[n_a + 1 + t] + ej[n_a + 1 + t])];
      }
      M(i, j) = v;
      M(j, i) = v;
    }
  }
  return M;
}

MomentStats::MomentStats(const Dataset& ds, const VeroneseSpec& spec,
                         const MomentStatsOptions& opts)
    : spec_(spec), n_a_(ds.n_a), n_c_(ds.n_c), count_(ds.N) {
  if (spec.dims() != ds.n_a + ds.n_c + 1) {
    throw std::invalid_argument("MomentStats: spec dims mismatch");
  }
  const int two_n = 2 * spec.degree();

  for (std::int64_t k = ds.y.first(); k <= ds.y.last(); ++k) {
    const double yv = ds.y.at(k);
    y_sum_ += yv;
    y_sq_sum_ += yv * yv;
    ++y_count_;
  }
  if (opts.prescale) {
    double ymax = 0.0, umax = 0.0;
    for (std::int64_t k = ds.y.first(); k <= ds.y.last(); ++k) {
      ymax = std::max(ymax, std::abs(ds.y.at(k)));
    }
    for (std::int64_t k = ds.u.first(); k <= ds.u.last(); ++k) {
      umax = std::max(umax, std::abs(ds.u.at(k)));
    }
    y_scale_ = ymax > 0.0 ? ymax : 1.0;
    u_scale_ = umax > 0.0 ? umax : 1.0;
  }

  // Every matrix entry expands into raw monomials of (y lags, u lags); a
  // shared pattern table keeps the data pass proportional to the number of
  // distinct monomials rather than entries x terms.
  std::map<std::vector<int>, std::size_t> pattern_ids;
  const Eigen::Index D = spec.size();
  for (Eigen::Index i = 0; i < D; ++i) {
    for (Eigen::Index j = i; j < D; ++j) {
      Entry entry;
      entry.i = i;
      entry.j = j;
      const auto& ei = spec.exponent(i);
      const auto& ej = spec.exponent(j);
      std::vector<int> h(static_cast<std::size_t>(n_a_) + 1);
      for (int t = 0; t <= n_a_; ++t) h[static_cast<std::size_t>(t)] = ei[t] + ej[t];
      std::vector<int> g(static_cast<std::size_t>(n_c_));
      for (int t = 0; t < n_c_; ++t) {
        g[static_cast<std::size_t>(t)] = ei[n_a_ + 1 + t] + ej[n_a_ + 1 + t];
      }
      // Cartesian product of kept powers p_t <= h_t.
      std::vector<int> p(h.size(), 0);
      while (true) {
        std::vector<int> pattern;
        pattern.reserve(h.size() + g.size());
        pattern.insert(pattern.end(), p.begin(), p.end());
        pattern.insert(pattern.end(), g.begin(), g.end());
        auto [it, inserted] = pattern_ids.emplace(pattern, patterns_.size());
        if (inserted) patterns_.push_back(pattern);
        Term term;
        term.pattern = it->second;
        for (std::size_t t = 0; t < h.size(); ++t) {
          term.hp.emplace_back(h[t], p[t]);
        }
        entry.terms.push_back(std::move(term));
        // odometer over p
        std::size_t pos = 0;
        while (pos < p.size()) {
          if (p[pos] < h[pos]) {
            ++p[pos];
            break;
          }
          p[pos] = 0;
          ++pos;
        }
        if (pos == p.size()) break;
      }
      entries_.push_back(std::move(entry));
    }
  }

  // Single data pass with block-compensated accumulation.
  const std::size_t P = patterns_.size();
  std::vector<double> total(P, 0.0), comp(P, 0.0), chunk(P, 0.0);
  std::vector<std::vector<double>> ypow(static_cast<std::size_t>(n_a_) + 1,
                                        std::vector<double>(static_cast<std::size_t>(two_n) + 1));
  std::vector<std::vector<double>> upow(static_cast<std::size_t>(n_c_),
                                        std::vector<double>(static_cast<std::size_t>(two_n) + 1));
  std::int64_t in_chunk = 0;
  auto flush = [&]() {
    for (std::size_t pi = 0; pi < P; ++pi) {
      // Kahan merge of the block total.
      double v = chunk[pi] - comp[pi];
      double t = total[pi] + v;
      comp[pi] = (t - total[pi]) - v;
      total[pi] = t;
      chunk[pi] = 0.0;
    }
    in_chunk = 0;
  };
  for (std::int64_t k = 1; k <= ds.N; ++k) {
    for (int t = 0; t <= n_a_; ++t) {
      const double v = ds.y.at(k - t) / y_scale_;
      auto& row = ypow[static_cast<std::size_t>(t)];
      row[0] = 1.0;
      for (int q = 1; q <= two_n; ++q) row[static_cast<std::size_t>(q)] = row[static_cast<std::size_t>(q - 1)] * v;
    }
    for (int j = 1; j <= n_c_; ++j) {
      const double v = ds.u.at(k - j) / u_scale_;
      auto& row = upow[static_cast<std::size_t>(j - 1)];
      row[0] = 1.0;
      for (int q = 1; q <= two_n; ++q) row[static_cast<std::size_t>(q)] = row[static_cast<std::size_t>(q - 1)] * v;
    }
    for (std::size_t pi = 0; pi < P; ++pi) {
      const auto& pat = patterns_[pi];
      double prod = 1.0;
      for (int t = 0; t <= n_a_; ++t) {
        prod *= ypow[static_cast<std::size_t>(t)][static_cast<std::size_t>(pat[static_cast<std::size_t>(t)])];
      }
      for (int t = 0; t < n_c_; ++t) {
        prod *= upow[static_cast<std::size_t>(t)]
                    [static_cast<std::size_t>(pat[static_cast<std::size_t>(n_a_ + 1 + t)])];
      }
      chunk[pi] += prod;
    }
    if (++in_chunk == kChunkSize) flush();
  }
  if (in_chunk > 0) flush();

  pattern_means_.resize(P);
  for (std::size_t pi = 0; pi < P; ++pi) {
    pattern_means_[pi] = total[pi] / static_cast<double>(count_);
  }
}

double MomentStats::y_std() const {
  if (y_count_ < 2) return 0.0;
  const double mean = y_sum_ / static_cast<double>(y_count_);
  const double var = y_sq_sum_ / static_cast<double>(y_count_) - mean * mean;
  return std::sqrt(std::max(0.0, var));
}

CorrectedMatrix MomentStats::combine(const NoiseSpec& noise) const {
  const int two_n = 2 * spec_.degree();
  const double s = noise.sigma() / y_scale_;
  const auto coef = unbiased_power_coefficients(two_n, NoiseSpec::normal(s * s));

  const Eigen::Index D = spec_.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(D, D);
  for (const auto& entry : entries_) {
    double v = 0.0;
    for (const auto& term : entry.terms) {
      double w = 1.0;
      for (const auto& [h, p] : term.hp) {
        const auto& row = coef[static_cast<std::size_t>(h)];
        const double c = static_cast<std::size_t>(p) < row.size()
                             ? row[static_cast<std::size_t>(p)]
                             : 0.0;
        if (c == 0.0) {
          w = 0.0;
          break;
        }
        w *= c;
      }
      if (w != 0.0) v += w * pattern_means_[term.pattern];
    }
    M(entry.i, entry.j) = v;
    M(entry.j, entry.i) = v;
  }
  return CorrectedMatrix(M * static_cast<double>(count_), count_);
}

Eigen::VectorXd MomentStats::monomial_scales() const {
  Eigen::VectorXd d(spec_.size());
  for (Eigen::Index i = 0; i < spec_.size(); ++i) {
    const auto& e = spec_.exponent(i);
    double s = 1.0;
    for (int t = 0; t <= n_a_; ++t) s *= ipow(y_scale_, e[t]);
    for (int t = 0; t < n_c_; ++t) s *= ipow(u_scale_, e[n_a_ + 1 + t]);
    d(i) = s;
  }
  return d;
}

CorrectedMatrix accumulate(const Dataset& ds, const VeroneseSpec& spec,
                           const NoiseSpec& noise) {
  if (ds.N < spec.size()) {
    std::cerr << "sarid: warning: accumulating " << ds.N
              << " samples into a " << spec.size() << "-dimensional matrix; "
              << "the null space is underdetermined\n";
  }
  return MomentStats(ds, spec).combine(noise);
}

}  // namespace sarid
