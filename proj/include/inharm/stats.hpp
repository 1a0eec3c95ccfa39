#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace inharm {

/// Lower weighted median: the smallest value at which the cumulative weight
/// (values taken in ascending order) reaches half of the total weight.
/// Non-positive total weight falls back to equal weights.
template <typename DerivedV, typename DerivedW>
typename DerivedV::Scalar weighted_median(const Eigen::DenseBase<DerivedV>& values,
                                          const Eigen::DenseBase<DerivedW>& weights) {
  using Scalar = typename DerivedV::Scalar;
  const Eigen::Index n = values.size();
  if (n == 0) throw std::invalid_argument("weighted_median: empty input");
  if (weights.size() != n) throw std::invalid_argument("weighted_median: size mismatch");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) < values(b); });

  Scalar total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights(i) < 0) throw std::invalid_argument("weighted_median: negative weight");
    total += static_cast<Scalar>(weights(i));
  }
  const bool uniform = !(total > Scalar(0));
  if (uniform) total = static_cast<Scalar>(n);

  Scalar cumulative = 0;
  for (Eigen::Index idx : order) {
    cumulative += uniform ? Scalar(1) : static_cast<Scalar>(weights(idx));
    if (cumulative >= total / Scalar(2)) return values(idx);
  }
  return values(order.back());
}

template <typename DerivedV, typename DerivedW>
typename DerivedV::Scalar weighted_mean(const Eigen::DenseBase<DerivedV>& values,
                                        const Eigen::DenseBase<DerivedW>& weights) {
  using Scalar = typename DerivedV::Scalar;
  if (values.size() == 0) throw std::invalid_argument("weighted_mean: empty input");
  const Scalar total = weights.sum();
  if (!(total > Scalar(0))) return values.mean();
  return (values.derived().array() * weights.derived().array()).sum() / total;
}

/// Conventional median (mean of the two central values for even sizes).
template <typename Derived>
typename Derived::Scalar median(const Eigen::DenseBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = values.size();
  if (n == 0) throw std::invalid_argument("median: empty input");
  std::vector<Scalar> v(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = values(i);
  const auto mid = static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const Scalar upper = v[static_cast<std::size_t>(mid)];
  if (n % 2 == 1) return upper;
  const Scalar lower = *std::max_element(v.begin(), v.begin() + mid);
  return (lower + upper) / Scalar(2);
}

}  // namespace inharm
