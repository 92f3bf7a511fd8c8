#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace zrplab {

/// Binary indexed tree over non-negative per-site weights, supporting
/// O(log n) point assignment and O(log n) sampling proportional to weight.
///
/// The stored values are kept alongside the tree; the tree is rebuilt from
/// them periodically so floating-point drift from incremental updates cannot
/// accumulate over long event sequences.
class PrefixSumTree {
public:
  explicit PrefixSumTree(std::size_t n) : n_(n), tree_(n + 1, 0.0), values_(n, 0.0) {
    rebuild();
  }

  explicit PrefixSumTree(std::span<const double> values)
      : PrefixSumTree(values.size()) {
    assign(values);
  }

  std::size_t size() const { return n_; }

  void assign(std::span<const double> values) {
    for (std::size_t i = 0; i < n_; ++i) values_[i] = values[i];
    rebuild();
  }

  double value(std::size_t i) const { return values_[i]; }

  void set(std::size_t i, double v) {
    double delta = v - values_[i];
    values_[i] = v;
    total_ += delta;
    for (std::size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] += delta;
    if (++updates_since_rebuild_ >= kRebuildInterval) rebuild();
  }

  /// Sum of values_[0..i).
  double prefix(std::size_t i) const {
    double s = 0.0;
    for (std::size_t j = i; j > 0; j -= j & (~j + 1)) s += tree_[j];
    return s;
  }

  double total() const { return total_; }

  /// Index i selected with probability value(i)/total(), given u in [0,1).
  /// Skips zero-weight sites by construction.
  std::size_t sample(double u) const {
    double target = u * total_;
    std::size_t pos = 0;
    std::size_t step = top_bit_;
    while (step > 0) {
      std::size_t next = pos + step;
      if (next <= n_ && tree_[next] < target) {
        target -= tree_[next];
        pos = next;
      }
      step >>= 1;
    }
    // pos is the count of leading sites whose cumulative weight is < target.
    if (pos >= n_) pos = n_ - 1;
    // Guard against landing on a zero-weight site through rounding.
    while (pos + 1 < n_ && values_[pos] <= 0.0) ++pos;
    while (pos > 0 && values_[pos] <= 0.0) --pos;
    return pos;
  }

  void rebuild() {
    updates_since_rebuild_ = 0;
    std::size_t bit = 1;
    while (bit * 2 <= n_) bit *= 2;
    top_bit_ = bit;
    for (std::size_t j = 0; j <= n_; ++j) tree_[j] = 0.0;
    total_ = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      total_ += values_[i];
      std::size_t j = i + 1;
      tree_[j] += values_[i];
      std::size_t parent = j + (j & (~j + 1));
      if (parent <= n_) tree_[parent] += tree_[j];
    }
  }

private:
  static constexpr std::size_t kRebuildInterval = std::size_t(1) << 22;

  std::size_t n_;
  std::size_t top_bit_ = 0;
  std::size_t updates_since_rebuild_ = 0;
  double total_ = 0.0;
  std::vector<double> tree_;
  std::vector<double> values_;
};

}  // namespace zrplab
