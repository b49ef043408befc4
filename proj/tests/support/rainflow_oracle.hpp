// Test-only oracle: exhaustive four-point rainflow pairing by repeated
// scan-and-extract over the turning points, independent of the library's
// stack-based implementation.
#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace oracle {

inline std::vector<double> turningPointsBrute(const std::vector<double>& s) {
  std::vector<double> d;
  for (double v : s)
    if (d.empty() || v != d.back()) d.push_back(v);
  if (d.size() < 3) return d;
  std::vector<double> out;
  out.push_back(d.front());
  for (size_t i = 1; i + 1 < d.size(); ++i)
    if ((d[i] - out.back()) * (d[i + 1] - d[i]) < 0) out.push_back(d[i]);
  out.push_back(d.back());
  return out;
}

// returns (depth, weight) pairs, depths normalized by capacity
inline std::vector<std::pair<double, double>> rainflowBrute(
    const std::vector<double>& series, double capacity) {
  std::vector<double> p = turningPointsBrute(series);
  std::vector<std::pair<double, double>> out;
  bool found = true;
  while (found && p.size() >= 4) {
    found = false;
    for (size_t i = 0; i + 3 < p.size(); ++i) {
      double outer1 = std::fabs(p[i + 1] - p[i]);
      double inner = std::fabs(p[i + 2] - p[i + 1]);
      double outer2 = std::fabs(p[i + 3] - p[i + 2]);
      if (inner <= outer1 && inner <= outer2) {
        out.push_back({inner / capacity, 1.0});
        p.erase(p.begin() + i + 1, p.begin() + i + 3);
        found = true;
        break;
      }
    }
  }
  const double eps = 1e-9 * capacity;
  size_t i = 0;
  while (i + 1 < p.size()) {
    double r1 = std::fabs(p[i + 1] - p[i]);
    if (i + 2 < p.size()) {
      double r2 = std::fabs(p[i + 2] - p[i + 1]);
      if (std::fabs(r1 - r2) <= eps) {
        out.push_back({r1 / capacity, 1.0});
        i += 2;
        continue;
      }
    }
    out.push_back({r1 / capacity, 0.5});
    ++i;
  }
  return out;
}

}  // namespace oracle
