// Rainflow cycle counting over SOC trajectories, the cycle-depth stress
// function anchored at the battery's rated life point, and the convex
// piecewise-linear per-segment cost model embedded in the optimization.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bessbid/model.hpp"

namespace bessbid {

struct CycleLifeCurve {
  double refCycles = 6000;
  double refDepth = 0.8;
  double exponent = 2.0;  // k >= 1 keeps cumulative stress convex

  static CycleLifeCurve forBattery(const BatteryUnit& b, double k = 2.0) {
    return {b.cycleLifeRef, b.cycleDepthRef, k};
  }

  // life fraction consumed by one full cycle of the given depth
  double stress(double depth) const {
    if (depth <= 0) return 0;
    return std::pow(depth, exponent) /
           (refCycles * std::pow(refDepth, exponent));
  }
};

struct HalfCycle {
  double depth;   // fraction of energyCapacity
  double weight;  // 1.0 full cycle, 0.5 residual half cycle
};

// Turning points of a series: endpoints plus strict local extrema.
inline std::vector<double> turningPoints(const std::vector<double>& s) {
  std::vector<double> tp;
  for (double v : s) {
    if (!tp.empty() && v == tp.back()) continue;
    while (tp.size() >= 2) {
      double a = tp[tp.size() - 2], b = tp.back();
      if ((b - a > 0 && v >= b) || (b - a < 0 && v <= b))
        tp.pop_back();  // b is not an extremum
      else
        break;
    }
    tp.push_back(v);
  }
  return tp;
}

// Standard four-point rainflow pairing with residual alternations counted as
// half cycles; equal-range adjacent residue pairs merge into one full cycle.
inline std::vector<HalfCycle> rainflowCount(const std::vector<double>& soc,
                                            double energyCapacity) {
  if (energyCapacity <= 0) throw std::invalid_argument("capacity must be > 0");
  std::vector<HalfCycle> out;
  if (soc.size() < 2) return out;
  std::vector<double> stack;
  stack.reserve(soc.size());
  const std::vector<double> tp = turningPoints(soc);
  if (tp.size() < 2) return out;  // constant series

  for (double v : tp) {
    stack.push_back(v);
    while (stack.size() >= 4) {
      size_t n = stack.size();
      double outer1 = std::fabs(stack[n - 3] - stack[n - 4]);
      double inner = std::fabs(stack[n - 2] - stack[n - 3]);
      double outer2 = std::fabs(stack[n - 1] - stack[n - 2]);
      if (inner <= outer1 && inner <= outer2) {
        out.push_back({inner / energyCapacity, 1.0});
        stack.erase(stack.end() - 3, stack.end() - 1);
      } else {
        break;
      }
    }
  }
  // residue
  const double eps = 1e-9 * energyCapacity;
  size_t i = 0;
  while (i + 1 < stack.size()) {
    double r1 = std::fabs(stack[i + 1] - stack[i]);
    if (i + 2 < stack.size()) {
      double r2 = std::fabs(stack[i + 2] - stack[i + 1]);
      if (std::fabs(r1 - r2) <= eps) {
        out.push_back({r1 / energyCapacity, 1.0});
        i += 2;
        continue;
      }
    }
    out.push_back({r1 / energyCapacity, 0.5});
    ++i;
  }
  return out;
}

// cost in $ of one (half) cycle of the given depth
inline double cycleCost(double depth, double weight, const BatteryUnit& b,
                        const CycleLifeCurve& curve) {
  if (depth < 0 || depth > 1 + 1e-9)
    throw std::invalid_argument("cycle depth outside [0,1]: " + std::to_string(depth));
  return weight * b.replacementCost * b.energyCapacity * curve.stress(std::min(depth, 1.0));
}

inline double trajectoryCost(const std::vector<double>& soc, const BatteryUnit& b,
                             const CycleLifeCurve& curve) {
  double total = 0;
  for (const HalfCycle& h : rainflowCount(soc, b.energyCapacity))
    total += cycleCost(h.depth, h.weight, b, curve);
  return total;
}

// Marginal cost per MWh discharged from each depth segment; nondecreasing in
// the segment index because the stress function is convex.
struct PWLSegments {
  int count = 10;
  double segmentMwh = 0;             // delta * energyCapacity
  std::vector<double> costPerMwh;    // c_j, j = 0..count-1 (shallowest first)

  static PWLSegments build(const BatteryUnit& b, const CycleLifeCurve& curve,
                           int segments = 10) {
    if (segments < 1) throw std::invalid_argument("segment count must be >= 1");
    PWLSegments p;
    p.count = segments;
    double delta = 1.0 / segments;
    p.segmentMwh = delta * b.energyCapacity;
    p.costPerMwh.resize(segments);
    for (int j = 1; j <= segments; ++j)
      p.costPerMwh[j - 1] = b.replacementCost *
                            (curve.stress(j * delta) - curve.stress((j - 1) * delta)) /
                            delta;
    return p;
  }

  // cost of one interval's discharge split across segments
  double cost(const std::vector<double>& dischargeMwhBySegment) const {
    if (static_cast<int>(dischargeMwhBySegment.size()) != count)
      throw std::invalid_argument("segment vector size mismatch");
    double total = 0;
    for (int j = 0; j < count; ++j) {
      double e = dischargeMwhBySegment[j];
      if (e < -1e-9) throw std::invalid_argument("negative segment energy");
      if (e > segmentMwh + 1e-6)
        throw std::invalid_argument("segment energy exceeds segment size");
      total += costPerMwh[j] * e;
    }
    return total;
  }

  // fill a one-shot discharge from the shallow end; handy for oracles/tests
  std::vector<double> shallowFill(double totalMwh) const {
    std::vector<double> e(count, 0.0);
    for (int j = 0; j < count && totalMwh > 0; ++j) {
      e[j] = std::min(totalMwh, segmentMwh);
      totalMwh -= e[j];
    }
    return e;
  }
};

struct DegradationResult {
  std::vector<double> costPerInterval;  // DegCost_t in $
  std::vector<HalfCycle> cycles;        // oracle inventory of the trajectory
  double totalCost() const {
    double s = 0;
    for (double c : costPerInterval) s += c;
    return s;
  }
};

struct LinearizationAudit {
  double pwlCost = 0;      // linearized model's cost, $
  double oracleCost = 0;   // exact rainflow cost of the realized trajectory, $
  double absError = 0;
  double relError = 0;     // relative to max(oracle, 1e-9)
  bool flagged = false;
};

// Compares the optimizer's segment-based degradation cost with the rainflow
// oracle on the realized SOC trajectory.
inline LinearizationAudit auditLinearization(
    const BatteryUnit& b, const CycleLifeCurve& curve,
    const std::vector<std::vector<double>>& segDischargeByInterval,
    const std::vector<double>& socTrajectory, int numIntervals,
    double relBound = 0.10) {
  if (static_cast<int>(segDischargeByInterval.size()) != numIntervals)
    throw std::invalid_argument("segment solution length does not match horizon");
  LinearizationAudit a;
  if (!segDischargeByInterval.empty()) {
    PWLSegments p = PWLSegments::build(
        b, curve, static_cast<int>(segDischargeByInterval.front().size()));
    for (const auto& seg : segDischargeByInterval) a.pwlCost += p.cost(seg);
  }
  a.oracleCost = trajectoryCost(socTrajectory, b, curve);
  a.absError = std::fabs(a.pwlCost - a.oracleCost);
  a.relError = a.absError / std::max(a.oracleCost, 1e-9);
  a.flagged = a.relError > relBound && a.absError > 1.0;
  return a;
}

}  // namespace bessbid
