#pragma once

#include <algorithm>
#include <vector>

namespace rgbdt {

/// Median by value; even-sized inputs average the two middle elements.
inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    m = 0.5 * (lo + m);
  }
  return m;
}

}  // namespace rgbdt
