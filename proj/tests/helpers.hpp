#ifndef DPCHECK_TESTS_HELPERS_HPP
#define DPCHECK_TESTS_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace testutil {

// Annual maximum daily rainfall series used throughout the extreme-value tests.
inline const std::vector<double> rainfall = {
    86.8,  78.5,  93.1,  95.5,  78.1, 89.9,  109.5, 161.6, 187.6, 89.9,
    73.4,  78.1,  73.3,  130.1, 188.3, 113.9, 42.5,  80.0,  142.6, 42.9,
    60.2,  100.0, 129.0, 98.0,  116.4, 37.9,  60.7,  48.7,  39.7,  80.3,
    30.7,  120.0, 160.0, 64.3,  80.0};

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace testutil

#endif
