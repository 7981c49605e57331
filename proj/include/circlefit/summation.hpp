#pragma once

#include <Eigen/Core>

namespace circlefit {

namespace detail {

template <typename Derived>
typename Derived::Scalar pairwise_sum_range(const Eigen::DenseBase<Derived>& v,
                                             Eigen::Index begin, Eigen::Index end) {
  using Scalar = typename Derived::Scalar;
  constexpr Eigen::Index kBlock = 8;
  if (end - begin <= kBlock) {
    Scalar s(0);
    for (Eigen::Index i = begin; i < end; ++i) s += v(i);
    return s;
  }
  const Eigen::Index mid = begin + (end - begin) / 2;
  return pairwise_sum_range(v, begin, mid) + pairwise_sum_range(v, mid, end);
}

}  // namespace detail

/// Cascade summation; error grows as O(log n) eps instead of O(n) eps.
template <typename Derived>
typename Derived::Scalar pairwise_sum(const Eigen::DenseBase<Derived>& v) {
  return detail::pairwise_sum_range(v, 0, v.size());
}

template <typename Derived>
typename Derived::Scalar pairwise_mean(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  return pairwise_sum(v) / Scalar(static_cast<double>(v.size()));
}

}  // namespace circlefit
