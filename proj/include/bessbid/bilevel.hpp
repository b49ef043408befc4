// Bi-level program of a price-maker storage owner over the joint market
// clearing, reformulated to a single-level MILP via the lower level's KKT
// conditions. Complementarity is linearized with per-pair big-M rows and one
// binary each; the bilinear revenue terms (prices x schedules) are replaced
// through the lower-level strong-duality identity, which leaves the objective
// linear in duals, generator schedules, and data only.
//
// Owner-side constraints (offer coupling, day-end SOC, and the segmented
// degradation bookkeeping in the degradation-aware variant) are appended as
// plain rows: they never enter the lower level's stationarity.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bessbid/agc.hpp"
#include "bessbid/clearing.hpp"
#include "bessbid/degradation.hpp"
#include "bessbid/lp.hpp"
#include "bessbid/mip.hpp"
#include "bessbid/model.hpp"
#include "bessbid/simplex.hpp"

namespace bessbid {

struct UlpSpec {
  bool energy = true;
  bool reserve = false;
  bool regulation = false;  // capacity and mileage together
  bool degradationEnabled = false;
  bool dayEndEquality = true;
  int pwlSegments = 10;
  double lifeExponent = 2.0;
  double priceCapFactor = 2.0;  // offer cap = factor x max generator energy offer
  double dualMFactor = 5.0;     // dual big-M = factor x price cap (x dt)

  bool productEnabled(int p) const {
    switch (p) {
      case kEnergyCharge:
      case kEnergyDischarge: return energy;
      case kReserve: return reserve;
      case kRegCap:
      case kRegMileage: return regulation;
    }
    return false;
  }
  bool anyEnabled() const { return energy || reserve || regulation; }

  static UlpSpec forCase(int caseId, bool degradation) {
    UlpSpec s;
    s.energy = true;
    s.reserve = caseId == 2 || caseId == 4;
    s.regulation = caseId == 3 || caseId == 4;
    s.degradationEnabled = degradation;
    return s;
  }
};

struct MilpProgram {
  LinearProgram lp;  // maximize owner profit
  std::vector<int> binaries;

  struct ComplPair {
    int zCol = -1;      // binary; -1 when presolve fixed the pair
    int slackCol = -1;  // explicit slack (row pairs) or -1 (bound pairs)
    int dualCol = -1;
    int srcRow = -1;  // LLP row for row pairs
    int srcCol = -1;  // LLP column for bound pairs
    bool lowerSide = false;
    double bigMslack = 0, bigMdual = 0;
    bool fixedSlack = false;  // presolve: never binding, dual fixed to zero
  };
  std::vector<ComplPair> pairs;

  ClearingLP skel;  // keeps all index maps of the embedded clearing problem
  std::vector<int> rowDualCol;               // per LLP row, -1 if fixed zero
  std::vector<int> colLoDualCol, colUpDualCol;  // per LLP col, -1 if none
  std::vector<std::array<std::vector<int>, kNumProducts>> priceCol;  // [b][p][t]

  // degradation bookkeeping columns, [battery][segment][t]
  std::vector<std::vector<std::vector<int>>> bucketCol, chgPartCol, disPartCol,
      agcDisCol;
  std::vector<PWLSegments> segments;  // per battery

  double dualM = 0;
  double tieBreakEps = 1e-6;
  int presolvedPairs = 0;
  UlpSpec spec;
};

namespace detail {

// interval-arithmetic activity bounds of an LLP row, using implied upper
// bounds where plain bounds are infinite
inline void rowActivityBounds(const ClearingLP& skel, int r, double* lo, double* hi) {
  const LinearProgram& lp = skel.lp;
  *lo = 0;
  *hi = 0;
  for (int k = lp.rowStart[r]; k < lp.rowStart[r + 1]; ++k) {
    int j = lp.rowCol[k];
    double a = lp.rowVal[k];
    double cl = lp.colLower[j];
    double cu = std::min(lp.colUpper[j], skel.colImpliedUpper[j]);
    if (a > 0) {
      *lo += (cl == -kInf) ? -kInf : a * cl;
      *hi += (cu == kInf) ? kInf : a * cu;
    } else {
      *lo += (cu == kInf) ? -kInf : a * cu;
      *hi += (cl == -kInf) ? kInf : a * cl;
    }
  }
}

// Max/min flow over one interval's balance + flow-definition polytope; used
// to prove line-limit slackness so those complementarity pairs can be fixed.
inline void flowRangeLp(const SystemModel& m, int t, std::vector<double>* fmin,
                        std::vector<double>* fmax) {
  LinearProgram lp;
  std::vector<int> gcol(m.generators.size()), bcol(m.batteries.size());
  std::vector<int> acol(m.buses.size()), fcol(m.lines.size());
  for (size_t g = 0; g < m.generators.size(); ++g)
    gcol[g] = lp.addColumn("g" + std::to_string(g), 0, m.generators[g].pMax, 0);
  for (size_t b = 0; b < m.batteries.size(); ++b)
    bcol[b] = lp.addColumn("b" + std::to_string(b), -m.batteries[b].chargeLimit,
                           m.batteries[b].dischargeLimit, 0);
  for (size_t n = 0; n < m.buses.size(); ++n)
    acol[n] = lp.addColumn("a" + std::to_string(n), n ? -kInf : 0, n ? kInf : 0, 0);
  for (size_t l = 0; l < m.lines.size(); ++l)
    fcol[l] = lp.addColumn("f" + std::to_string(l), -m.lines[l].thermalLimit,
                           m.lines[l].thermalLimit, 0);
  for (size_t n = 0; n < m.buses.size(); ++n) {
    std::vector<std::pair<int, double>> ents;
    for (size_t g = 0; g < m.generators.size(); ++g)
      if (m.busIndex(m.generators[g].bus) == static_cast<int>(n))
        ents.push_back({gcol[g], 1.0});
    for (size_t b = 0; b < m.batteries.size(); ++b)
      if (m.busIndex(m.batteries[b].bus) == static_cast<int>(n))
        ents.push_back({bcol[b], 1.0});
    for (size_t l = 0; l < m.lines.size(); ++l) {
      if (m.busIndex(m.lines[l].fromBus) == static_cast<int>(n))
        ents.push_back({fcol[l], -1.0});
      if (m.busIndex(m.lines[l].toBus) == static_cast<int>(n))
        ents.push_back({fcol[l], 1.0});
    }
    lp.addRow("bal" + std::to_string(n), RowSense::EQ, m.buses[n].loadProfile[t], ents);
  }
  for (size_t l = 0; l < m.lines.size(); ++l) {
    int from = m.busIndex(m.lines[l].fromBus), to = m.busIndex(m.lines[l].toBus);
    double bsus = 1.0 / m.lines[l].reactance;
    lp.addRow("fd" + std::to_string(l), RowSense::EQ, 0.0,
              {{fcol[l], 1.0}, {acol[from], -bsus}, {acol[to], bsus}});
  }
  fmin->assign(m.lines.size(), -kInf);
  fmax->assign(m.lines.size(), kInf);
  SimplexOptions so;
  so.maxIterations = 20000;
  for (size_t l = 0; l < m.lines.size(); ++l) {
    for (int dir = 0; dir < 2; ++dir) {
      for (auto& v : lp.objCoef) v = 0;
      lp.objCoef[fcol[l]] = dir ? -1.0 : 1.0;  // min then max
      lp.sense = ObjSense::Minimize;
      SimplexSolver s;
      auto sol = s.solve(lp, so);
      if (sol.status != SolveStatus::Optimal) return;  // keep infinite range
      if (dir)
        (*fmax)[l] = -sol.objective;
      else
        (*fmin)[l] = sol.objective;
    }
  }
}

}  // namespace detail

// Assembles the single-level MILP for the given market participation spec.
inline MilpProgram reformulateKkt(const SystemModel& m, const UlpSpec& spec) {
  if (!spec.anyEnabled())
    throw std::invalid_argument("no market enabled in the upper-level spec");
  MilpProgram mp;
  mp.spec = spec;
  mp.skel = buildClearingSkeleton(m);
  ClearingLP& skel = mp.skel;
  const int T = skel.numIntervals;
  const double dt = skel.dt;
  const int nLlpRows = skel.lp.numRows();
  const int nLlpCols = skel.lp.numCols();

  double maxGenOffer = 0;
  for (const auto& g : m.generators)
    for (double p : g.energyPriceOffer) maxGenOffer = std::max(maxGenOffer, p);
  const double priceCap = spec.priceCapFactor * maxGenOffer;
  mp.dualM = spec.dualMFactor * priceCap * std::max(dt, 1.0);

  // disabled products: offers and schedules pinned to zero
  for (size_t b = 0; b < skel.battCol.size(); ++b)
    for (int p = 0; p < kNumProducts; ++p)
      if (!spec.productEnabled(p))
        for (int t = 0; t < T; ++t) {
          int xc = skel.battCol[b][p][t], qc = skel.qtyCol[b][p][t];
          skel.lp.colLower[xc] = skel.lp.colUpper[xc] = 0;
          skel.lp.colLower[qc] = skel.lp.colUpper[qc] = 0;
        }

  LinearProgram& lp = mp.lp;
  lp.sense = ObjSense::Maximize;

  // 1) copy LLP columns (indices preserved)
  for (int j = 0; j < nLlpCols; ++j)
    lp.addColumn(skel.lp.colName[j], skel.lp.colLower[j], skel.lp.colUpper[j], 0.0);

  // battery price-offer variables
  mp.priceCol.resize(skel.battCol.size());
  for (size_t b = 0; b < skel.battCol.size(); ++b)
    for (int p = 0; p < kNumProducts; ++p) {
      mp.priceCol[b][p].assign(T, -1);
      if (!spec.productEnabled(p)) continue;
      for (int t = 0; t < T; ++t)
        mp.priceCol[b][p][t] = lp.addColumn(
            "price_" + m.batteries[b].id + "_" + productName(p) + "_" + std::to_string(t),
            0, priceCap, 0.0);
    }

  // 2) primal feasibility rows (inequalities get explicit slacks) and the
  //    complementarity bookkeeping
  auto isLlpVar = [&](int j) {
    return !skel.colIsParam[j] && skel.lp.colLower[j] != skel.lp.colUpper[j];
  };

  mp.rowDualCol.assign(nLlpRows, -1);
  std::vector<int> rowSlackCol(nLlpRows, -1);
  std::vector<char> rowNeverBinding(nLlpRows, 0);
  for (int r = 0; r < nLlpRows; ++r) {
    if (skel.lp.rowSense[r] == RowSense::EQ) continue;
    double lo, hi;
    detail::rowActivityBounds(skel, r, &lo, &hi);
    if (skel.lp.rowSense[r] == RowSense::LE && hi < skel.lp.rhs[r] - 1e-7)
      rowNeverBinding[r] = 1;
    if (skel.lp.rowSense[r] == RowSense::GE && lo > skel.lp.rhs[r] + 1e-7)
      rowNeverBinding[r] = 1;
    // rows over fixed columns only (e.g. a disabled product's offer caps)
    // hold as data identities; their duals are unconstrained, so zero works
    bool allFixed = true;
    for (int k = skel.lp.rowStart[r]; k < skel.lp.rowStart[r + 1] && allFixed; ++k) {
      int j = skel.lp.rowCol[k];
      allFixed = skel.lp.colLower[j] == skel.lp.colUpper[j];
    }
    if (allFixed) rowNeverBinding[r] = 1;
  }

  // flow-range tightening proves most line-limit pairs slack
  std::vector<char> flowPairSlack;
  {
    flowPairSlack.assign(m.lines.size() * T, 0);
    std::vector<double> fmin, fmax;
    for (int t = 0; t < T; ++t) {
      detail::flowRangeLp(m, t, &fmin, &fmax);
      for (size_t l = 0; l < m.lines.size(); ++l)
        if (fmin[l] > -m.lines[l].thermalLimit + 1e-6 &&
            fmax[l] < m.lines[l].thermalLimit - 1e-6)
          flowPairSlack[l * T + t] = 1;
    }
  }

  for (int r = 0; r < nLlpRows; ++r) {
    std::vector<std::pair<int, double>> ents;
    for (int k = skel.lp.rowStart[r]; k < skel.lp.rowStart[r + 1]; ++k)
      ents.push_back({skel.lp.rowCol[k], skel.lp.rowVal[k]});
    RowSense sense = skel.lp.rowSense[r];
    if (sense == RowSense::EQ) {
      lp.addRow(skel.lp.rowName[r], RowSense::EQ, skel.lp.rhs[r], ents);
      continue;
    }
    double lo, hi;
    detail::rowActivityBounds(skel, r, &lo, &hi);
    double ms = sense == RowSense::LE ? skel.lp.rhs[r] - lo : hi - skel.lp.rhs[r];
    if (ms == kInf || ms != ms) ms = 1e5;
    ms = std::max(ms, 1.0);
    int slack = lp.addColumn("s_" + skel.lp.rowName[r], 0, ms, 0.0);
    rowSlackCol[r] = slack;
    ents.push_back({slack, sense == RowSense::LE ? 1.0 : -1.0});
    lp.addRow(skel.lp.rowName[r], RowSense::EQ, skel.lp.rhs[r], ents);
  }

  // 3) dual variables
  for (int r = 0; r < nLlpRows; ++r) {
    if (rowNeverBinding[r]) continue;  // dual provably zero
    double dm = mp.dualM;
    switch (skel.lp.rowSense[r]) {
      case RowSense::GE:
        mp.rowDualCol[r] = lp.addColumn("y_" + skel.lp.rowName[r], 0, dm, 0.0);
        break;
      case RowSense::LE:
        mp.rowDualCol[r] = lp.addColumn("y_" + skel.lp.rowName[r], -dm, 0, 0.0);
        break;
      case RowSense::EQ:
        mp.rowDualCol[r] = lp.addColumn("y_" + skel.lp.rowName[r], -dm, dm, 0.0);
        break;
    }
  }
  mp.colLoDualCol.assign(nLlpCols, -1);
  mp.colUpDualCol.assign(nLlpCols, -1);
  for (int j = 0; j < nLlpCols; ++j) {
    if (!isLlpVar(j)) continue;
    bool flowSkip = false;
    for (size_t l = 0; l < skel.flowCol.size() && !flowSkip; ++l)
      for (int t = 0; t < T; ++t)
        if (skel.flowCol[l][t] == j && flowPairSlack[l * T + t]) {
          flowSkip = true;
          break;
        }
    if (flowSkip) continue;  // interior flows: both bound duals provably zero
    if (skel.lp.colLower[j] > -kInf)
      mp.colLoDualCol[j] = lp.addColumn("dlo_" + skel.lp.colName[j], 0, mp.dualM, 0.0);
    if (skel.lp.colUpper[j] < kInf)
      mp.colUpDualCol[j] = lp.addColumn("dup_" + skel.lp.colName[j], 0, mp.dualM, 0.0);
  }

  // 4) stationarity rows: c_j - sum_r a_rj y_r - dlo_j + dup_j = 0 for every
  //    LLP variable; battery offer prices appear as variables in c_j
  {
    // column-wise view of the LLP matrix
    std::vector<std::vector<std::pair<int, double>>> colRows(nLlpCols);
    for (int r = 0; r < nLlpRows; ++r)
      for (int k = skel.lp.rowStart[r]; k < skel.lp.rowStart[r + 1]; ++k)
        colRows[skel.lp.rowCol[k]].push_back({r, skel.lp.rowVal[k]});

    std::vector<int> battProduct(nLlpCols, -1), battIndex(nLlpCols, -1);
    for (size_t b = 0; b < skel.battCol.size(); ++b)
      for (int p = 0; p < kNumProducts; ++p)
        for (int t = 0; t < T; ++t) {
          battProduct[skel.battCol[b][p][t]] = p;
          battIndex[skel.battCol[b][p][t]] = static_cast<int>(b);
        }

    for (int j = 0; j < nLlpCols; ++j) {
      if (!isLlpVar(j)) continue;
      std::vector<std::pair<int, double>> ents;
      double rhs = -skel.lp.objCoef[j];  // -c_const
      if (battProduct[j] >= 0) {
        int p = battProduct[j];
        int t = -1;
        for (int tt = 0; tt < T; ++tt)
          if (skel.battCol[battIndex[j]][p][tt] == j) {
            t = tt;
            break;
          }
        int pc = mp.priceCol[battIndex[j]][p][t];
        if (pc >= 0) ents.push_back({pc, p == kEnergyCharge ? -dt : dt});
        rhs = 0;  // battery objective coefficient is entirely the price var
      }
      for (auto& [r, a] : colRows[j])
        if (mp.rowDualCol[r] >= 0) ents.push_back({mp.rowDualCol[r], -a});
      if (mp.colLoDualCol[j] >= 0) ents.push_back({mp.colLoDualCol[j], -1.0});
      if (mp.colUpDualCol[j] >= 0) ents.push_back({mp.colUpDualCol[j], 1.0});
      lp.addRow("stat_" + skel.lp.colName[j], RowSense::EQ, rhs, ents);
    }
  }

  // 5) big-M complementarity pairs
  auto addRowPair = [&](int r) {
    MilpProgram::ComplPair pr;
    pr.srcRow = r;
    pr.slackCol = rowSlackCol[r];
    pr.dualCol = mp.rowDualCol[r];
    if (rowNeverBinding[r] || pr.dualCol < 0) {
      pr.fixedSlack = true;
      ++mp.presolvedPairs;
      mp.pairs.push_back(pr);
      return;
    }
    double ms = lp.colUpper[pr.slackCol];
    pr.bigMslack = ms;
    pr.bigMdual = mp.dualM;
    pr.zCol = lp.addColumn("z_" + skel.lp.rowName[r], 0, 1, 0.0);
    mp.binaries.push_back(pr.zCol);
    // slack <= ms * (1 - z)
    lp.addRow("cmpS_" + skel.lp.rowName[r], RowSense::LE, ms,
              {{pr.slackCol, 1.0}, {pr.zCol, ms}});
    double sgn = skel.lp.rowSense[r] == RowSense::LE ? -1.0 : 1.0;
    lp.addRow("cmpD_" + skel.lp.rowName[r], RowSense::LE, 0.0,
              {{pr.dualCol, sgn}, {pr.zCol, -mp.dualM}});
    mp.pairs.push_back(pr);
  };
  auto addBoundPair = [&](int j, bool lower) {
    double bnd = lower ? skel.lp.colLower[j] : skel.lp.colUpper[j];
    if (lower ? bnd == -kInf : bnd == kInf) return;  // no constraint
    int dcol = lower ? mp.colLoDualCol[j] : mp.colUpDualCol[j];
    if (dcol < 0) {
      // interior by the flow-range presolve: dual fixed at zero
      MilpProgram::ComplPair pr;
      pr.srcCol = j;
      pr.lowerSide = lower;
      pr.fixedSlack = true;
      ++mp.presolvedPairs;
      mp.pairs.push_back(pr);
      return;
    }
    MilpProgram::ComplPair pr;
    pr.srcCol = j;
    pr.lowerSide = lower;
    pr.dualCol = dcol;
    double lb = skel.lp.colLower[j];
    double ub = std::min(skel.lp.colUpper[j], skel.colImpliedUpper[j]);
    double range = (ub < kInf && lb > -kInf) ? ub - lb : 1e5;
    range = std::max(range, 1e-3);
    pr.bigMslack = range;
    pr.bigMdual = mp.dualM;
    pr.zCol = lp.addColumn(
        std::string(lower ? "zlo_" : "zup_") + skel.lp.colName[j], 0, 1, 0.0);
    mp.binaries.push_back(pr.zCol);
    if (lower)  // (x - lb) + range * z <= range
      lp.addRow("cmpS_lo_" + skel.lp.colName[j], RowSense::LE, range + lb,
                {{j, 1.0}, {pr.zCol, range}});
    else  // (ub - x) + range z <= range  <=>  -x + range z <= range - ub
      lp.addRow("cmpS_up_" + skel.lp.colName[j], RowSense::LE, range - skel.lp.colUpper[j],
                {{j, -1.0}, {pr.zCol, range}});
    lp.addRow("cmpD_" + skel.lp.colName[j], RowSense::LE, 0.0,
              {{dcol, 1.0}, {pr.zCol, -mp.dualM}});
    mp.pairs.push_back(pr);
  };
  for (int r = 0; r < nLlpRows; ++r)
    if (skel.lp.rowSense[r] != RowSense::EQ) addRowPair(r);
  for (int j = 0; j < nLlpCols; ++j) {
    if (!isLlpVar(j)) continue;
    addBoundPair(j, true);
    addBoundPair(j, false);
  }

  // 6) owner-side rows: offer coupling and day-end SOC
  for (size_t b = 0; b < skel.battCol.size(); ++b) {
    const BatteryUnit& bat = m.batteries[b];
    for (int t = 0; t < T; ++t) {
      std::vector<std::pair<int, double>> dis = {
          {skel.qtyCol[b][kEnergyDischarge][t], 1.0},
          {skel.qtyCol[b][kReserve][t], 1.0},
          {skel.qtyCol[b][kRegCap][t], 1.0}};
      lp.addRow("offer_dis_" + bat.id + "_" + std::to_string(t), RowSense::LE,
                bat.dischargeLimit, dis);
      lp.addRow("offer_chg_" + bat.id + "_" + std::to_string(t), RowSense::LE,
                bat.chargeLimit,
                {{skel.qtyCol[b][kEnergyCharge][t], 1.0},
                 {skel.qtyCol[b][kRegCap][t], 1.0}});
      lp.addRow("offer_mil_" + bat.id + "_" + std::to_string(t), RowSense::LE, 0.0,
                {{skel.qtyCol[b][kRegMileage][t], 1.0},
                 {skel.qtyCol[b][kRegCap][t], -m.mileageMultiplier * bat.perfScore}});
    }
  }

  // 7) degradation bookkeeping (segmented SOC buckets, charged on discharge)
  if (spec.degradationEnabled) {
    const int J = spec.pwlSegments;
    mp.bucketCol.resize(skel.battCol.size());
    mp.chgPartCol.resize(skel.battCol.size());
    mp.disPartCol.resize(skel.battCol.size());
    mp.agcDisCol.resize(skel.battCol.size());
    for (size_t b = 0; b < skel.battCol.size(); ++b) {
      const BatteryUnit& bat = m.batteries[b];
      CycleLifeCurve curve = CycleLifeCurve::forBattery(bat, spec.lifeExponent);
      PWLSegments seg = PWLSegments::build(bat, curve, J);
      mp.segments.push_back(seg);
      const double segMwh = seg.segmentMwh;
      auto& buckets = mp.bucketCol[b];
      auto& chg = mp.chgPartCol[b];
      auto& dis = mp.disPartCol[b];
      auto& agc = mp.agcDisCol[b];
      buckets.assign(J, std::vector<int>(T, -1));
      chg.assign(J, std::vector<int>(T, -1));
      dis.assign(J, std::vector<int>(T, -1));
      agc.assign(J, std::vector<int>(T, -1));
      // depth band j (1-based from the top of the full range): stored energy
      // between capacity*(1-j/J) and capacity*(1-(j-1)/J)
      auto bandLow = [&](int j1) { return bat.energyCapacity - j1 * segMwh; };
      for (int j = 0; j < J; ++j) {
        int j1 = j + 1;
        double lo = std::min(segMwh, std::max(0.0, bat.socMin - bandLow(j1)));
        double hi = std::max(0.0, std::min(segMwh, bat.socMax - bandLow(j1)));
        for (int t = 0; t < T; ++t) {
          buckets[j][t] = lp.addColumn(
              "seg_" + bat.id + "_" + std::to_string(j) + "_" + std::to_string(t), lo,
              hi, 0.0);
          chg[j][t] = lp.addColumn(
              "segchg_" + bat.id + "_" + std::to_string(j) + "_" + std::to_string(t), 0,
              kInf, 0.0);
          dis[j][t] = lp.addColumn(
              "segdis_" + bat.id + "_" + std::to_string(j) + "_" + std::to_string(t), 0,
              kInf, -seg.costPerMwh[j]);
          agc[j][t] = lp.addColumn(
              "segagc_" + bat.id + "_" + std::to_string(j) + "_" + std::to_string(t), 0,
              kInf, -seg.costPerMwh[j]);
        }
      }
      const double drainFrac = 1.0 - bat.efficiencyCharge * bat.efficiencyDischarge;
      const double agcPerMileage =
          spec.regulation
              ? 0.25 * m.horizon.stepHours() / (bat.efficiencyDischarge * bat.perfScore)
              : 0.0;
      for (int t = 0; t < T; ++t) {
        // ties to the cleared schedule (SOC-side energies)
        std::vector<std::pair<int, double>> tieC, tieD, tieA;
        for (int j = 0; j < J; ++j) {
          tieC.push_back({chg[j][t], 1.0});
          tieD.push_back({dis[j][t], 1.0});
          tieA.push_back({agc[j][t], 1.0});
        }
        tieC.push_back({skel.battCol[b][kEnergyCharge][t], -bat.efficiencyCharge * dt});
        tieD.push_back(
            {skel.battCol[b][kEnergyDischarge][t], -dt / bat.efficiencyDischarge});
        lp.addRow("tiechg_" + bat.id + "_" + std::to_string(t), RowSense::EQ, 0, tieC);
        lp.addRow("tiedis_" + bat.id + "_" + std::to_string(t), RowSense::EQ, 0, tieD);
        // AGC micro-cycle throughput, proportional to credited mileage
        tieA.push_back({skel.battCol[b][kRegMileage][t], -agcPerMileage});
        lp.addRow("tieagc_" + bat.id + "_" + std::to_string(t), RowSense::EQ, 0, tieA);

        for (int j = 0; j < J; ++j) {
          // bucket recursion with the AGC efficiency drain
          std::vector<std::pair<int, double>> rec = {{buckets[j][t], 1.0},
                                                     {chg[j][t], -1.0},
                                                     {dis[j][t], 1.0},
                                                     {agc[j][t], drainFrac}};
          double rhs = 0;
          if (t == 0) {
            double init = std::clamp(bat.socInitial - bandLow(j + 1), 0.0, segMwh);
            rhs = init;
          } else {
            rec.push_back({buckets[j][t - 1], -1.0});
          }
          lp.addRow("segrec_" + bat.id + "_" + std::to_string(j) + "_" +
                        std::to_string(t),
                    RowSense::EQ, rhs, rec);
          // micro-cycles only churn energy the band actually holds
          lp.addRow("segagccap_" + bat.id + "_" + std::to_string(j) + "_" +
                        std::to_string(t),
                    RowSense::LE, 0.0, {{agc[j][t], 1.0}, {buckets[j][t], -1.0}});
        }
        // physical SOC stays within its limits
        std::vector<std::pair<int, double>> sum;
        for (int j = 0; j < J; ++j) sum.push_back({buckets[j][t], 1.0});
        lp.addRow("physoc_lo_" + bat.id + "_" + std::to_string(t), RowSense::GE,
                  bat.socMin, sum);
        lp.addRow("physoc_hi_" + bat.id + "_" + std::to_string(t), RowSense::LE,
                  bat.socMax, sum);
      }
      if (spec.dayEndEquality) {
        std::vector<std::pair<int, double>> sum;
        for (int j = 0; j < J; ++j) sum.push_back({buckets[j][T - 1], 1.0});
        lp.addRow("dayend_" + bat.id, RowSense::EQ, bat.socInitial, sum);
      }
    }
  } else if (spec.dayEndEquality) {
    for (size_t b = 0; b < skel.battCol.size(); ++b)
      lp.addRow("dayend_" + m.batteries[b].id, RowSense::EQ,
                m.batteries[b].socInitial, {{skel.socCol[b][T - 1], 1.0}});
  }

  // 8) objective: strong-duality revenue substitution. All battery-item dual
  //    terms cancel, leaving non-battery duals x RHS, non-battery bound-dual
  //    terms, minus generator offer costs; then degradation cost and a tiny
  //    total-offered-quantity penalty for reproducible tie-breaking.
  for (int r = 0; r < nLlpRows; ++r) {
    if (skel.rowBatteryOnly[r]) continue;
    if (mp.rowDualCol[r] < 0) continue;
    lp.objCoef[mp.rowDualCol[r]] += skel.lp.rhs[r];
  }
  for (int j = 0; j < nLlpCols; ++j) {
    if (!isLlpVar(j) || skel.colIsBattery[j]) continue;
    if (mp.colLoDualCol[j] >= 0 && skel.lp.colLower[j] != 0)
      lp.objCoef[mp.colLoDualCol[j]] += skel.lp.colLower[j];
    if (mp.colUpDualCol[j] >= 0)
      lp.objCoef[mp.colUpDualCol[j]] -= skel.lp.colUpper[j];
    if (skel.colIsGen[j]) lp.objCoef[j] -= skel.lp.objCoef[j];
  }
  for (size_t b = 0; b < skel.battCol.size(); ++b)
    for (int p = 0; p < kNumProducts; ++p)
      if (spec.productEnabled(p))
        for (int t = 0; t < T; ++t)
          lp.objCoef[skel.qtyCol[b][p][t]] -= mp.tieBreakEps;

  return mp;
}

}  // namespace bessbid
