#pragma once

#include <algorithm>
#include <vector>

namespace hodgelab::detail {

/// All (p+1)-element subsets of {0..n}, lexicographic. Valid for 0 <= p <= n <= 3.
inline const std::vector<std::vector<int>>& local_subsets(int n, int p) {
  static const auto table = [] {
    std::vector<std::vector<std::vector<std::vector<int>>>> t(4);
    for (int nn = 0; nn <= 3; ++nn) {
      t[nn].resize(nn + 1);
      const int count = nn + 1;
      for (int mask = 1; mask < (1 << count); ++mask) {
        std::vector<int> s;
        for (int k = 0; k < count; ++k)
          if (mask & (1 << k)) s.push_back(k);
        t[nn][s.size() - 1].push_back(s);
      }
      for (auto& bucket : t[nn]) std::sort(bucket.begin(), bucket.end());
    }
    return t;
  }();
  return table[n][p];
}

}  // namespace hodgelab::detail
