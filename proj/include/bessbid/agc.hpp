// System-level AGC signal synthesis (zero-mean per interval, total variation
// pinned to the mileage requirement), participation-factor dispatch of the
// signal to regulating units, and intra-interval SOC simulation.
#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bessbid/model.hpp"

namespace bessbid {

struct AgcTrace {
  int stepsPerInterval = 45;
  int numIntervals = 0;
  std::vector<double> setpoints;  // MW, length numIntervals * stepsPerInterval

  double at(int t, int k) const { return setpoints[t * stepsPerInterval + k]; }

  double intervalMean(int t) const {
    double s = 0;
    for (int k = 0; k < stepsPerInterval; ++k) s += at(t, k);
    return s / stepsPerInterval;
  }
  // total variation of the setpoint sequence within interval t, MW
  double intervalMileage(int t) const {
    double s = 0;
    for (int k = 1; k < stepsPerInterval; ++k)
      s += std::fabs(at(t, k) - at(t, k - 1));
    return s;
  }
};

struct AgcAudit {
  double maxAbsMean = 0;        // must be < 1e-9 MW
  double maxMileageError = 0;   // must be < 1e-6 MW
  bool ok(double meanTol = 1e-9, double mileageTol = 1e-6) const {
    return maxAbsMean <= meanTol && maxMileageError <= mileageTol;
  }
};

inline AgcAudit auditTrace(const AgcTrace& tr, const std::vector<double>& mileageReq) {
  AgcAudit a;
  for (int t = 0; t < tr.numIntervals; ++t) {
    a.maxAbsMean = std::max(a.maxAbsMean, std::fabs(tr.intervalMean(t)));
    a.maxMileageError =
        std::max(a.maxMileageError, std::fabs(tr.intervalMileage(t) - mileageReq[t]));
  }
  return a;
}

// Reproducible stand-in for an ISO AGC sample: a bounded random walk.
inline std::vector<double> makeSeedWalk(const Horizon& h, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> step(-1.0, 1.0);
  const int n = h.numIntervals * h.agcStepsPerInterval;
  std::vector<double> s(n);
  double v = 0;
  for (int i = 0; i < n; ++i) {
    v += step(rng);
    if (v > 5.0) v = 5.0;
    if (v < -5.0) v = -5.0;
    s[i] = v;
  }
  return s;
}

// Per interval: de-mean, rescale the total variation to the mileage
// requirement, clamp to the regulation capacity requirement, and iterate
// until both trace invariants hold.
inline AgcTrace synthesizeAgc(const std::vector<double>& seedSeries,
                              const std::vector<double>& regCapReq,
                              const std::vector<double>& regMileageReq,
                              const Horizon& h) {
  const int K = h.agcStepsPerInterval, T = h.numIntervals;
  if (static_cast<int>(seedSeries.size()) != T * K)
    throw std::invalid_argument("seed series length does not match horizon");
  AgcTrace tr;
  tr.stepsPerInterval = K;
  tr.numIntervals = T;
  tr.setpoints.resize(T * K);

  for (int t = 0; t < T; ++t) {
    std::vector<double> x(seedSeries.begin() + t * K, seedSeries.begin() + (t + 1) * K);
    const double cap = regCapReq[t], target = regMileageReq[t];
    bool done = false;
    for (int iter = 0; iter < 100 && !done; ++iter) {
      double mean = 0;
      for (double v : x) mean += v;
      mean /= K;
      for (double& v : x) v -= mean;
      double tv = 0;
      for (int k = 1; k < K; ++k) tv += std::fabs(x[k] - x[k - 1]);
      if (tv <= 1e-12)
        throw std::invalid_argument("cannot scale zero-variation signal in interval " +
                                    std::to_string(t));
      double scale = target / tv;
      for (double& v : x) v *= scale;
      bool clamped = false;
      for (double& v : x) {
        if (v > cap) v = cap, clamped = true;
        if (v < -cap) v = -cap, clamped = true;
      }
      if (!clamped) {
        // mean is zero up to rounding and TV was scaled exactly
        double m2 = 0;
        for (double v : x) m2 += v;
        m2 /= K;
        double tv2 = 0;
        for (int k = 1; k < K; ++k) tv2 += std::fabs(x[k] - x[k - 1]);
        done = std::fabs(m2) <= 1e-9 && std::fabs(tv2 - target) <= 1e-6;
        if (!done && iter == 99) break;
      }
    }
    if (!done)
      throw std::runtime_error("AGC synthesis did not converge in interval " +
                               std::to_string(t));
    for (int k = 0; k < K; ++k) tr.setpoints[t * K + k] = x[k];
  }
  return tr;
}

// Participation of regulating units (batteries first, then generators) in the
// system trace, proportional to scheduled regulation capacity.
struct ParticipationDispatch {
  std::vector<std::vector<double>> battFactor;  // [battery][t] in [0,1]
  std::vector<std::vector<double>> genFactor;   // [gen][t]
  std::vector<std::vector<double>> battSetpoint;  // [battery][t*K+k] MW
  std::vector<std::vector<double>> battAssignedMileage;  // [battery][t] MW
};

inline ParticipationDispatch dispatchAgc(const AgcTrace& tr,
                                         const ClearingResult& clearing,
                                         const SystemModel& m) {
  const int T = tr.numIntervals, K = tr.stepsPerInterval;
  ParticipationDispatch d;
  d.battFactor.assign(m.batteries.size(), std::vector<double>(T, 0.0));
  d.genFactor.assign(m.generators.size(), std::vector<double>(T, 0.0));
  d.battSetpoint.assign(m.batteries.size(), std::vector<double>(T * K, 0.0));
  d.battAssignedMileage.assign(m.batteries.size(), std::vector<double>(T, 0.0));

  for (int t = 0; t < T; ++t) {
    double totalCap = 0;
    for (size_t b = 0; b < m.batteries.size(); ++b)
      totalCap += clearing.battSchedule[b][kRegCap][t];
    for (size_t g = 0; g < m.generators.size(); ++g)
      totalCap += clearing.genSchedule[g][kGenRegCap][t];
    double traceMagnitude = 0;
    for (int k = 0; k < K; ++k) traceMagnitude += std::fabs(tr.at(t, k));
    if (totalCap <= 1e-9) {
      if (traceMagnitude > 1e-9)
        throw std::runtime_error("undeliverable AGC: no regulation capacity in interval " +
                                 std::to_string(t));
      continue;
    }
    double sysMileage = tr.intervalMileage(t);
    for (size_t b = 0; b < m.batteries.size(); ++b) {
      double f = clearing.battSchedule[b][kRegCap][t] / totalCap;
      d.battFactor[b][t] = f;
      d.battAssignedMileage[b][t] = f * sysMileage;
      for (int k = 0; k < K; ++k) d.battSetpoint[b][t * K + k] = f * tr.at(t, k);
    }
    for (size_t g = 0; g < m.generators.size(); ++g)
      d.genFactor[g][t] = clearing.genSchedule[g][kGenRegCap][t] / totalCap;
  }
  return d;
}

struct SocTrajectory {
  std::vector<double> soc;  // MWh at AGC resolution, soc[0] = socInitial
  int boundViolations = 0;
  double maxExcursion = 0;  // MWh beyond [socMin, socMax]
};

// Step-wise SOC integration of the battery's AGC setpoints superimposed on
// its cleared energy-market base power (positive = discharge).
inline SocTrajectory socTrajectory(const std::vector<double>& battSetpoints,
                                   const BatteryUnit& b,
                                   const std::vector<double>& baseNetDischargeMw,
                                   const Horizon& h) {
  const int T = h.numIntervals, K = h.agcStepsPerInterval;
  if (static_cast<int>(battSetpoints.size()) != T * K)
    throw std::invalid_argument("setpoint series length does not match horizon");
  if (static_cast<int>(baseNetDischargeMw.size()) != T)
    throw std::invalid_argument("base schedule length does not match horizon");
  const double stepH = h.stepHours();
  SocTrajectory out;
  out.soc.resize(T * K + 1);
  double soc = b.socInitial;
  out.soc[0] = soc;
  for (int t = 0; t < T; ++t)
    for (int k = 0; k < K; ++k) {
      double p = baseNetDischargeMw[t] + battSetpoints[t * K + k];
      if (p >= 0)
        soc -= p * stepH / b.efficiencyDischarge;
      else
        soc += -p * stepH * b.efficiencyCharge;
      out.soc[t * K + k + 1] = soc;
      if (soc < b.socMin - 1e-9 || soc > b.socMax + 1e-9) {
        ++out.boundViolations;
        out.maxExcursion = std::max(
            out.maxExcursion, std::max(b.socMin - soc, soc - b.socMax));
      }
    }
  return out;
}

}  // namespace bessbid
