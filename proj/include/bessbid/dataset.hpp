// Bundled synthetic test systems. The full instance mirrors the third area of
// the RTS-GMLC network (25 buses, 39 lines, 26 generators, one battery on bus
// 13, summer-shaped load between 1285 and 2345 MW peaking in hours 11-18 with
// the valley in hours 1-6). The reduced instance is a 6-bus aggregated
// equivalent on hourly intervals that preserves the load shape and the
// battery's relative size; it is the default for embedded bilevel runs.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bessbid/model.hpp"

namespace bessbid {

// Hourly system load anchors (MW), hours 1..24.
inline const std::vector<double>& hourlyLoadShape() {
  static const std::vector<double> shape = {
      1285, 1285, 1285, 1285, 1285, 1285,  // valley, hours 1-6
      1550, 1720, 1950, 2150,              // morning ramp
      2345, 2345, 2345, 2345, 2345, 2345, 2345, 2345,  // peak, hours 11-18
      2150, 1950, 1820, 1650, 1480, 1380};             // evening decline
  return shape;
}

inline std::vector<double> expandHourly(const std::vector<double>& hourly,
                                        int numIntervals) {
  std::vector<double> out(numIntervals);
  for (int t = 0; t < numIntervals; ++t) {
    double hour = (t + 0.5) * 24.0 / numIntervals;
    int h = std::min(23, static_cast<int>(hour));
    out[t] = hourly[h];
  }
  return out;
}

inline BatteryUnit tableOneBattery(const std::string& bus) {
  BatteryUnit b;
  b.id = "bess1";
  b.bus = bus;
  b.chargeLimit = 50;
  b.dischargeLimit = 50;
  b.energyCapacity = 200;
  b.socMin = 20;
  b.socMax = 180;
  b.socInitial = 90;
  b.efficiencyCharge = 0.95;
  b.efficiencyDischarge = 0.95;
  b.cycleLifeRef = 6000;
  b.cycleDepthRef = 0.8;
  b.replacementCost = 200000;
  b.perfScore = 0.95;
  return b;
}

// 25-bus / 39-line / 26-generator synthetic area with the battery on bus 13.
inline SystemModel makeRtsArea3System() {
  SystemModel m;
  m.name = "rts-area3-synthetic";
  m.horizon = {96, 0.25, 45};
  const int T = m.horizon.numIntervals;
  std::vector<double> total = expandHourly(hourlyLoadShape(), T);

  // bus load weights: deterministic, uneven, normalized
  std::vector<double> w(25);
  double wsum = 0;
  for (int i = 0; i < 25; ++i) {
    w[i] = 1.0 + ((i * 7) % 13) / 13.0;
    wsum += w[i];
  }
  for (int i = 0; i < 25; ++i) {
    Bus b;
    b.id = "b" + std::to_string(i + 1);
    b.loadProfile.resize(T);
    for (int t = 0; t < T; ++t) b.loadProfile[t] = total[t] * w[i] / wsum;
    m.buses.push_back(std::move(b));
  }

  // ring plus chords: 25 + 14 = 39 lines
  auto addLine = [&](int f, int t, double x, double cap) {
    TransmissionLine l;
    l.id = "l" + std::to_string(m.lines.size() + 1);
    l.fromBus = "b" + std::to_string(f);
    l.toBus = "b" + std::to_string(t);
    l.reactance = x;
    l.thermalLimit = cap;
    m.lines.push_back(std::move(l));
  };
  for (int i = 1; i <= 25; ++i)
    addLine(i, i % 25 + 1, 0.04 + 0.008 * ((i * 3) % 5), 620);
  const int chords[14][2] = {{1, 6},   {3, 9},   {5, 13},  {7, 15},  {9, 18},
                             {11, 20}, {13, 22}, {15, 24}, {17, 25}, {2, 14},
                             {4, 17},  {6, 19},  {8, 21},  {10, 23}};
  for (int k = 0; k < 14; ++k)
    addLine(chords[k][0], chords[k][1], 0.08 + 0.01 * (k % 4), 430);

  // 26 generators in a merit-order ladder
  struct GSpec {
    double pMax, price, rampFrac;
    bool rs, rg;
  };
  const GSpec ladder[] = {
      {400, 8, 0.3, false, false},  {400, 10, 0.3, false, false},
      {300, 14, 0.3, false, false}, {300, 16, 0.3, false, false},
      {250, 20, 0.5, true, false},  {250, 22, 0.5, true, false},
      {200, 26, 0.5, true, true},   {200, 28, 0.5, true, true},
      {200, 30, 0.5, true, true},   {155, 36, 0.6, true, true},
      {155, 40, 0.6, true, true},   {155, 44, 0.6, true, true},
      {100, 52, 0.8, true, true},   {100, 56, 0.8, true, true},
      {100, 60, 0.8, true, true},   {100, 64, 0.8, true, true},
      {76, 72, 1.0, true, false},   {76, 76, 1.0, true, false},
      {76, 80, 1.0, true, false},   {76, 85, 1.0, true, false},
      {50, 95, 1.0, true, false},   {50, 100, 1.0, true, false},
      {50, 105, 1.0, true, false},  {50, 110, 1.0, true, false},
      {20, 130, 1.0, false, false}, {20, 140, 1.0, false, false}};
  for (int i = 0; i < 26; ++i) {
    Generator g;
    g.id = "g" + std::to_string(i + 1);
    g.bus = "b" + std::to_string((i * 5) % 25 + 1);
    g.pMin = 0;
    g.pMax = ladder[i].pMax;
    g.rampLimit = ladder[i].rampFrac * ladder[i].pMax;
    g.energyPriceOffer.assign(T, ladder[i].price);
    g.perfScore = 0.95;
    g.providesReserve = ladder[i].rs;
    g.providesRegulation = ladder[i].rg;
    m.generators.push_back(std::move(g));
  }

  m.batteries.push_back(tableOneBattery("b13"));

  m.requirements.reserveReq.resize(T);
  for (int t = 0; t < T; ++t) m.requirements.reserveReq[t] = 0.04 * total[t];
  m.requirements.regCapReq.assign(T, 60.0);
  m.requirements.regMileageReq.assign(T, 90.0);  // 1.5 x regulation capacity
  applyDefaultOffers(m, {});
  return m;
}

// 6-bus aggregated equivalent on 24 hourly intervals; total load, requirement
// levels, and the battery are unchanged so the battery keeps its relative
// size. Line limits are sized to stay uncongested.
inline SystemModel makeReducedSystem() {
  SystemModel m;
  m.name = "rts-area3-reduced";
  m.horizon = {24, 1.0, 180};
  const int T = m.horizon.numIntervals;
  std::vector<double> total = expandHourly(hourlyLoadShape(), T);

  const double w[6] = {0.10, 0.15, 0.20, 0.25, 0.20, 0.10};
  for (int i = 0; i < 6; ++i) {
    Bus b;
    b.id = "r" + std::to_string(i + 1);
    b.loadProfile.resize(T);
    for (int t = 0; t < T; ++t) b.loadProfile[t] = total[t] * w[i];
    m.buses.push_back(std::move(b));
  }
  auto addLine = [&](int f, int t, double x) {
    TransmissionLine l;
    l.id = "rl" + std::to_string(m.lines.size() + 1);
    l.fromBus = "r" + std::to_string(f);
    l.toBus = "r" + std::to_string(t);
    l.reactance = x;
    l.thermalLimit = 3000;
    m.lines.push_back(std::move(l));
  };
  addLine(1, 2, 0.06);
  addLine(2, 3, 0.05);
  addLine(3, 4, 0.06);
  addLine(4, 5, 0.05);
  addLine(5, 6, 0.06);
  addLine(6, 1, 0.07);
  addLine(2, 5, 0.09);

  struct GSpec {
    double pMax, price;
    int bus;
    bool rs, rg;
  };
  const GSpec ladder[] = {{600, 12, 1, false, false}, {500, 18, 2, false, false},
                          {400, 26, 3, true, false},  {300, 34, 5, true, true},
                          {250, 38, 6, true, true},   {200, 44, 1, true, true},
                          {180, 48, 3, true, false},  {150, 50, 5, false, false}};
  for (int i = 0; i < 8; ++i) {
    Generator g;
    g.id = "rg" + std::to_string(i + 1);
    g.bus = "r" + std::to_string(ladder[i].bus);
    g.pMin = 0;
    g.pMax = ladder[i].pMax;
    g.rampLimit = ladder[i].pMax;  // nonbinding: intervals decouple in the LLP
    g.energyPriceOffer.assign(T, ladder[i].price);
    g.perfScore = 0.95;
    g.providesReserve = ladder[i].rs;
    g.providesRegulation = ladder[i].rg;
    m.generators.push_back(std::move(g));
  }

  m.batteries.push_back(tableOneBattery("r4"));

  m.requirements.reserveReq.assign(T, 60.0);
  m.requirements.regCapReq.assign(T, 60.0);
  m.requirements.regMileageReq.assign(T, 90.0);
  applyDefaultOffers(m, {});
  return m;
}

}  // namespace bessbid
