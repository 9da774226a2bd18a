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
#ifndef SARID_SERIES_HPP
#define SARID_SERIES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sarid {

/// Real sequence with an explicit (possibly negative) start index. Input and
/// output records start before time 1 (u from -n_c+1, y from -n_a+1); storing
/// the offset keeps those conventions intact instead of shifting everything
/// to zero-based and hoping nobody drops a +1.
class IndexedSeries {
 public:
  IndexedSeries() : first_(0) {}
  IndexedSeries(std::int64_t first, std::vector<double> values)
      : first_(first), values_(std::move(values)) {}

  std::int64_t first() const { return first_; }
  std::int64_t last() const {
    return first_ + static_cast<std::int64_t>(values_.size()) - 1;
  }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  bool empty() const { return values_.empty(); }

  bool contains(std::int64_t k) const { return k >= first() && k <= last(); }

  double at(std::int64_t k) const {
    check(k);
    return values_[static_cast<std::size_t>(k - first_)];
  }

  double& at(std::int64_t k) {
    check(k);
    return values_[static_cast<std::size_t>(k - first_)];
  }

  /// Restrict to indices <= last_index (start is unchanged).
  IndexedSeries prefix(std::int64_t last_index) const {
    if (last_index < first_ - 1) {
      throw std::out_of_range("IndexedSeries::prefix before start");
    }
    std::int64_t count = std::min<std::int64_t>(last_index - first_ + 1, size());
    return IndexedSeries(
        first_, std::vector<double>(values_.begin(), values_.begin() + count));
  }

  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const IndexedSeries&, const IndexedSeries&) = default;

 private:
  void check(std::int64_t k) const {
    if (!contains(k)) {
      throw std::out_of_range("IndexedSeries: index " + std::to_string(k) +
                              " outside [" + std::to_string(first()) + ", " +
                              std::to_string(last()) + "]");
    }
  }

  std::int64_t first_;
  std::vector<double> values_;
};

}  // namespace sarid

#endif  // SARID_SERIES_HPP
