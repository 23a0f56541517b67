#ifndef KOTHE_MTILDE_TABLE_HPP
#define KOTHE_MTILDE_TABLE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "kothe/core.hpp"

namespace kothe::detail {

inline constexpr long long kMtildeBranches = 1LL << 17;

struct MtildeTable {
  std::vector<double> log_b;  // log((n+1)/(2 n!)), index n
  std::vector<double> log_v;  // log(n/(n!)^2), the value at b_n
  MtildeTable() : log_b(kMtildeBranches + 2), log_v(kMtildeBranches + 2) {
    for (long long n = 1; n <= kMtildeBranches + 1; ++n) {
      double d = static_cast<double>(n);
      double L = std::lgamma(d + 1.0);
      log_b[n] = std::log(d + 1.0) - std::log(2.0) - L;
      log_v[n] = std::log(d) - 2.0 * L;
    }
  }
};

inline const MtildeTable& mtilde_table() {
  static const MtildeTable t;
  return t;
}

inline double mtilde_log_b(long long n) { return mtilde_table().log_b[static_cast<std::size_t>(n)]; }

// Branch n with log b_{n+1} <= x < log b_n.
inline long long mtilde_branch(double x) {
  const auto& b = mtilde_table().log_b;
  if (x < b[kMtildeBranches + 1]) raise(ErrorKind::BranchOverflow, "argument below the tabulated branches");
  // log_b is decreasing in n; first n >= 1 with b[n+1] <= x
  long long lo = 1, hi = kMtildeBranches;
  while (lo < hi) {
    long long mid = lo + (hi - lo) / 2;
    if (b[static_cast<std::size_t>(mid + 1)] <= x)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// Branch n with log v_{n+1} <= lu < log v_n.
inline long long mtilde_value_branch(double lu) {
  const auto& v = mtilde_table().log_v;
  if (lu < v[kMtildeBranches + 1]) raise(ErrorKind::BranchOverflow, "value below the tabulated branches");
  long long lo = 1, hi = kMtildeBranches;
  while (lo < hi) {
    long long mid = lo + (hi - lo) / 2;
    if (v[static_cast<std::size_t>(mid + 1)] <= lu)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace kothe::detail

#endif
