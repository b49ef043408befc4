// Joint market clearing: builds the ISO's cost-minimizing LP over energy,
// reserve, regulation capacity, and regulation mileage, solves it, and reads
// prices off the duals (LMPs from nodal balance, MCPs from the system
// requirement rows).
//
// Battery quantity offers are parameter columns (fixed bounds) and battery
// price offers are objective coefficients, so the same build serves both the
// standalone market simulator and the bilevel reformulation, which frees the
// parameters and attaches price variables through the recorded maps.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "bessbid/lp.hpp"
#include "bessbid/model.hpp"
#include "bessbid/simplex.hpp"

namespace bessbid {

// Constraint groups of the clearing problem, used for tagging and error
// attribution: 1 battery operational limits, 2 other participants' limits,
// 3 regulation performance model, 4 system-wide requirements (pricing),
// 5 nodal power balance (pricing), 6 network model.
enum class RowGroup : char {
  BatteryLimits = 1,
  GeneratorLimits = 2,
  RegulationPerformance = 3,
  Requirements = 4,
  PowerBalance = 5,
  Network = 6,
};

struct ClearingLP {
  LinearProgram lp;

  // column maps
  std::vector<std::array<std::vector<int>, kNumProducts>> battCol;  // [b][prod][t]
  std::vector<std::vector<int>> socCol;                             // [b][t]
  std::vector<std::array<std::vector<int>, 4>> genCol;  // [g][GenProduct][t], -1 absent
  std::vector<std::vector<int>> angleCol;               // [bus][t]
  std::vector<std::vector<int>> flowCol;                // [line][t]
  std::vector<std::array<std::vector<int>, kNumProducts>> qtyCol;  // offer params

  // row maps
  std::vector<std::vector<int>> balanceRow;  // [bus][t]
  std::vector<int> reserveReqRow, regCapReqRow, regMileageReqRow;  // [t]

  // per-row and per-column metadata
  std::vector<RowGroup> rowGroup;    // parallel to lp rows
  std::vector<char> rowBatteryOnly;  // row support within battery/param cols
  std::vector<char> rowPricing;      // balance or requirement row
  std::vector<char> colIsParam;      // battery quantity offer columns
  std::vector<char> colIsBattery;    // battery scheduled power / SOC columns
  std::vector<char> colIsGen;        // generator scheduled power columns
  std::vector<double> colImpliedUpper;  // finite activity bound for big-M work

  int numIntervals = 0;
  double dt = 0.25;
};

// Builds the clearing LP skeleton. Offer quantities enter as parameter
// columns bounded [0, physical limit]; call bindOffers to fix them.
inline ClearingLP buildClearingSkeleton(const SystemModel& m) {
  ClearingLP c;
  const int T = m.horizon.numIntervals;
  const double dt = m.horizon.intervalLength;
  for (const Generator& g : m.generators) {
    if (static_cast<int>(g.energyPriceOffer.size()) != T)
      throw std::invalid_argument("generator " + g.id + ": missing energy offers");
    if (g.providesReserve && static_cast<int>(g.reservePriceOffer.size()) != T)
      throw std::invalid_argument("generator " + g.id + ": missing reserve offers");
    if (g.providesRegulation &&
        (static_cast<int>(g.regCapPriceOffer.size()) != T ||
         static_cast<int>(g.regMileagePriceOffer.size()) != T))
      throw std::invalid_argument("generator " + g.id + ": missing regulation offers");
  }
  c.numIntervals = T;
  c.dt = dt;
  LinearProgram& lp = c.lp;
  lp.sense = ObjSense::Minimize;

  auto markCol = [&](int col, bool bat, bool gen, bool param, double implied) {
    if (static_cast<int>(c.colIsParam.size()) <= col) {
      c.colIsParam.resize(col + 1, 0);
      c.colIsBattery.resize(col + 1, 0);
      c.colIsGen.resize(col + 1, 0);
      c.colImpliedUpper.resize(col + 1, kInf);
    }
    c.colIsParam[col] = param;
    c.colIsBattery[col] = bat;
    c.colIsGen[col] = gen;
    c.colImpliedUpper[col] = implied;
  };

  // ---- columns ----
  c.battCol.resize(m.batteries.size());
  c.socCol.resize(m.batteries.size());
  c.qtyCol.resize(m.batteries.size());
  for (size_t b = 0; b < m.batteries.size(); ++b) {
    const BatteryUnit& bat = m.batteries[b];
    for (int p = 0; p < kNumProducts; ++p) {
      c.battCol[b][p].resize(T);
      c.qtyCol[b][p].resize(T);
      double lim = (p == kEnergyCharge) ? bat.chargeLimit
                   : (p == kRegCap)
                       ? std::min(bat.chargeLimit, bat.dischargeLimit)
                       : bat.dischargeLimit;
      if (p == kRegMileage)
        lim = m.mileageMultiplier * bat.perfScore *
              std::min(bat.chargeLimit, bat.dischargeLimit);
      for (int t = 0; t < T; ++t) {
        int col = lp.addColumn(
            bat.id + "_" + productName(p) + "_" + std::to_string(t), 0, kInf, 0.0);
        c.battCol[b][p][t] = col;
        markCol(col, true, false, false, lim);
        int qcol = lp.addColumn(
            "q_" + bat.id + "_" + productName(p) + "_" + std::to_string(t), 0, lim, 0.0);
        c.qtyCol[b][p][t] = qcol;
        markCol(qcol, false, false, true, lim);
      }
    }
    c.socCol[b].resize(T);
    for (int t = 0; t < T; ++t) {
      int col = lp.addColumn(bat.id + "_soc_" + std::to_string(t), bat.socMin,
                             bat.socMax, 0.0);
      c.socCol[b][t] = col;
      markCol(col, true, false, false, bat.socMax);
    }
  }

  c.genCol.resize(m.generators.size());
  for (size_t g = 0; g < m.generators.size(); ++g) {
    const Generator& gen = m.generators[g];
    bool anc = gen.providesReserve || gen.providesRegulation;
    for (int p = 0; p < 4; ++p) c.genCol[g][p].assign(T, -1);
    for (int t = 0; t < T; ++t) {
      // energy-only units keep pMax as a plain bound; units with ancillary
      // products get coupling rows instead
      double eUp = anc ? kInf : gen.pMax;
      double eLo = anc ? 0.0 : gen.pMin;
      int e = lp.addColumn(gen.id + "_energy_" + std::to_string(t), eLo, eUp,
                           dt * gen.energyPriceOffer[t]);
      c.genCol[g][kGenEnergy][t] = e;
      markCol(e, false, true, false, gen.pMax);
      if (gen.providesReserve) {
        int r = lp.addColumn(gen.id + "_reserve_" + std::to_string(t), 0, kInf,
                             dt * gen.reservePriceOffer[t]);
        c.genCol[g][kGenReserve][t] = r;
        markCol(r, false, true, false, gen.pMax);
      }
      if (gen.providesRegulation) {
        int rc = lp.addColumn(gen.id + "_regcap_" + std::to_string(t), 0, kInf,
                              dt * gen.regCapPriceOffer[t]);
        c.genCol[g][kGenRegCap][t] = rc;
        markCol(rc, false, true, false, gen.pMax);
        int rm = lp.addColumn(gen.id + "_regmileage_" + std::to_string(t), 0, kInf,
                              dt * gen.regMileagePriceOffer[t]);
        c.genCol[g][kGenRegMileage][t] = rm;
        markCol(rm, false, true, false,
                m.mileageMultiplier * gen.perfScore * gen.pMax);
      }
    }
  }

  c.angleCol.resize(m.buses.size());
  for (size_t n = 0; n < m.buses.size(); ++n) {
    c.angleCol[n].resize(T);
    for (int t = 0; t < T; ++t) {
      double lo = n == 0 ? 0.0 : -kInf;  // first bus is the angle reference
      double up = n == 0 ? 0.0 : kInf;
      int col = lp.addColumn("theta_" + m.buses[n].id + "_" + std::to_string(t),
                             lo, up, 0.0);
      c.angleCol[n][t] = col;
      markCol(col, false, false, false, kInf);
    }
  }
  c.flowCol.resize(m.lines.size());
  for (size_t l = 0; l < m.lines.size(); ++l) {
    c.flowCol[l].resize(T);
    for (int t = 0; t < T; ++t) {
      int col = lp.addColumn("flow_" + m.lines[l].id + "_" + std::to_string(t),
                             -m.lines[l].thermalLimit, m.lines[l].thermalLimit, 0.0);
      c.flowCol[l][t] = col;
      markCol(col, false, false, false, m.lines[l].thermalLimit);
    }
  }

  // ---- rows ----
  auto tagRow = [&](int row, RowGroup grp, bool batteryOnly, bool pricing) {
    if (static_cast<int>(c.rowGroup.size()) <= row) {
      c.rowGroup.resize(row + 1, RowGroup::Network);
      c.rowBatteryOnly.resize(row + 1, 0);
      c.rowPricing.resize(row + 1, 0);
    }
    c.rowGroup[row] = grp;
    c.rowBatteryOnly[row] = batteryOnly;
    c.rowPricing[row] = pricing;
  };

  // group 1: battery operational limits
  for (size_t b = 0; b < m.batteries.size(); ++b) {
    const BatteryUnit& bat = m.batteries[b];
    for (int t = 0; t < T; ++t) {
      for (int p = 0; p < kNumProducts; ++p) {
        int r = lp.addRow(
            "cap_" + bat.id + "_" + productName(p) + "_" + std::to_string(t),
            RowSense::LE, 0.0,
            {{c.battCol[b][p][t], 1.0}, {c.qtyCol[b][p][t], -1.0}});
        tagRow(r, RowGroup::BatteryLimits, true, false);
      }
      int hd = lp.addRow(
          "headroom_dis_" + bat.id + "_" + std::to_string(t), RowSense::LE,
          bat.dischargeLimit,
          {{c.battCol[b][kEnergyDischarge][t], 1.0},
           {c.battCol[b][kEnergyCharge][t], -1.0},
           {c.battCol[b][kReserve][t], 1.0},
           {c.battCol[b][kRegCap][t], 1.0}});
      tagRow(hd, RowGroup::BatteryLimits, true, false);
      int hc = lp.addRow(
          "headroom_chg_" + bat.id + "_" + std::to_string(t), RowSense::LE,
          bat.chargeLimit,
          {{c.battCol[b][kEnergyCharge][t], 1.0},
           {c.battCol[b][kEnergyDischarge][t], -1.0},
           {c.battCol[b][kRegCap][t], 1.0}});
      tagRow(hc, RowGroup::BatteryLimits, true, false);

      // cleared-SOC recursion (end-of-interval SOC)
      std::vector<std::pair<int, double>> rec = {
          {c.socCol[b][t], 1.0},
          {c.battCol[b][kEnergyCharge][t], -bat.efficiencyCharge * dt},
          {c.battCol[b][kEnergyDischarge][t], dt / bat.efficiencyDischarge}};
      double rhs = t == 0 ? bat.socInitial : 0.0;
      if (t > 0) rec.push_back({c.socCol[b][t - 1], -1.0});
      int rr = lp.addRow("socrec_" + bat.id + "_" + std::to_string(t),
                         RowSense::EQ, rhs, rec);
      tagRow(rr, RowGroup::BatteryLimits, true, false);

      // enough stored energy to sustain awarded reserve + regulation for one
      // interval, and enough headroom to absorb regulation charging
      int sl = lp.addRow(
          "socsuff_lo_" + bat.id + "_" + std::to_string(t), RowSense::GE, bat.socMin,
          {{c.socCol[b][t], 1.0},
           {c.battCol[b][kReserve][t], -dt / bat.efficiencyDischarge},
           {c.battCol[b][kRegCap][t], -dt / bat.efficiencyDischarge}});
      tagRow(sl, RowGroup::BatteryLimits, true, false);
      int su = lp.addRow(
          "socsuff_hi_" + bat.id + "_" + std::to_string(t), RowSense::LE, bat.socMax,
          {{c.socCol[b][t], 1.0},
           {c.battCol[b][kRegCap][t], dt * bat.efficiencyCharge}});
      tagRow(su, RowGroup::BatteryLimits, true, false);

      // group 3 for the battery: credited mileage within multiplier * regcap
      int mc = lp.addRow(
          "mileagecap_" + bat.id + "_" + std::to_string(t), RowSense::LE, 0.0,
          {{c.battCol[b][kRegMileage][t], 1.0},
           {c.battCol[b][kRegCap][t], -m.mileageMultiplier * bat.perfScore}});
      tagRow(mc, RowGroup::RegulationPerformance, true, false);
    }
  }

  // group 2/3: generator limits, ramping, mileage crediting
  for (size_t g = 0; g < m.generators.size(); ++g) {
    const Generator& gen = m.generators[g];
    bool anc = gen.providesReserve || gen.providesRegulation;
    for (int t = 0; t < T; ++t) {
      if (anc) {
        std::vector<std::pair<int, double>> up = {{c.genCol[g][kGenEnergy][t], 1.0}};
        std::vector<std::pair<int, double>> lo = {{c.genCol[g][kGenEnergy][t], 1.0}};
        if (gen.providesReserve) {
          up.push_back({c.genCol[g][kGenReserve][t], 1.0});
          lo.push_back({c.genCol[g][kGenReserve][t], -1.0});
        }
        if (gen.providesRegulation) {
          up.push_back({c.genCol[g][kGenRegCap][t], 1.0});
          lo.push_back({c.genCol[g][kGenRegCap][t], -1.0});
        }
        int ru = lp.addRow("gmax_" + gen.id + "_" + std::to_string(t), RowSense::LE,
                           gen.pMax, up);
        tagRow(ru, RowGroup::GeneratorLimits, false, false);
        int rl = lp.addRow("gmin_" + gen.id + "_" + std::to_string(t), RowSense::GE,
                           gen.pMin, lo);
        tagRow(rl, RowGroup::GeneratorLimits, false, false);
      }
      if (gen.providesRegulation) {
        int mr = lp.addRow(
            "gmileage_" + gen.id + "_" + std::to_string(t), RowSense::LE, 0.0,
            {{c.genCol[g][kGenRegMileage][t], 1.0},
             {c.genCol[g][kGenRegCap][t], -m.mileageMultiplier * gen.perfScore}});
        tagRow(mr, RowGroup::RegulationPerformance, false, false);
      }
      // ramp rows only when the limit can actually bind
      if (t > 0 && gen.rampLimit < gen.pMax - gen.pMin) {
        int r1 = lp.addRow("rampup_" + gen.id + "_" + std::to_string(t),
                           RowSense::LE, gen.rampLimit,
                           {{c.genCol[g][kGenEnergy][t], 1.0},
                            {c.genCol[g][kGenEnergy][t - 1], -1.0}});
        tagRow(r1, RowGroup::GeneratorLimits, false, false);
        int r2 = lp.addRow("rampdn_" + gen.id + "_" + std::to_string(t),
                           RowSense::LE, gen.rampLimit,
                           {{c.genCol[g][kGenEnergy][t - 1], 1.0},
                            {c.genCol[g][kGenEnergy][t], -1.0}});
        tagRow(r2, RowGroup::GeneratorLimits, false, false);
      }
    }
  }

  // group 4: system-wide requirements (duals are the ancillary MCPs)
  c.reserveReqRow.resize(T);
  c.regCapReqRow.resize(T);
  c.regMileageReqRow.resize(T);
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> rs, rc, rm;
    for (size_t b = 0; b < m.batteries.size(); ++b) {
      rs.push_back({c.battCol[b][kReserve][t], 1.0});
      rc.push_back({c.battCol[b][kRegCap][t], 1.0});
      rm.push_back({c.battCol[b][kRegMileage][t], 1.0});
    }
    for (size_t g = 0; g < m.generators.size(); ++g) {
      if (m.generators[g].providesReserve)
        rs.push_back({c.genCol[g][kGenReserve][t], 1.0});
      if (m.generators[g].providesRegulation) {
        rc.push_back({c.genCol[g][kGenRegCap][t], 1.0});
        rm.push_back({c.genCol[g][kGenRegMileage][t], 1.0});
      }
    }
    c.reserveReqRow[t] = lp.addRow("req_reserve_" + std::to_string(t), RowSense::GE,
                                   m.requirements.reserveReq[t], rs);
    tagRow(c.reserveReqRow[t], RowGroup::Requirements, false, true);
    c.regCapReqRow[t] = lp.addRow("req_regcap_" + std::to_string(t), RowSense::GE,
                                  m.requirements.regCapReq[t], rc);
    tagRow(c.regCapReqRow[t], RowGroup::Requirements, false, true);
    c.regMileageReqRow[t] = lp.addRow("req_regmileage_" + std::to_string(t),
                                      RowSense::GE, m.requirements.regMileageReq[t], rm);
    tagRow(c.regMileageReqRow[t], RowGroup::Requirements, false, true);
  }

  // group 5: nodal balance (duals are the LMPs)
  c.balanceRow.resize(m.buses.size());
  for (size_t n = 0; n < m.buses.size(); ++n) c.balanceRow[n].resize(T);
  for (int t = 0; t < T; ++t)
    for (size_t n = 0; n < m.buses.size(); ++n) {
      std::vector<std::pair<int, double>> ents;
      for (size_t g = 0; g < m.generators.size(); ++g)
        if (m.busIndex(m.generators[g].bus) == static_cast<int>(n))
          ents.push_back({c.genCol[g][kGenEnergy][t], 1.0});
      for (size_t b = 0; b < m.batteries.size(); ++b)
        if (m.busIndex(m.batteries[b].bus) == static_cast<int>(n)) {
          ents.push_back({c.battCol[b][kEnergyDischarge][t], 1.0});
          ents.push_back({c.battCol[b][kEnergyCharge][t], -1.0});
        }
      for (size_t l = 0; l < m.lines.size(); ++l) {
        if (m.busIndex(m.lines[l].fromBus) == static_cast<int>(n))
          ents.push_back({c.flowCol[l][t], -1.0});
        if (m.busIndex(m.lines[l].toBus) == static_cast<int>(n))
          ents.push_back({c.flowCol[l][t], 1.0});
      }
      c.balanceRow[n][t] = lp.addRow(
          "balance_" + m.buses[n].id + "_" + std::to_string(t), RowSense::EQ,
          m.buses[n].loadProfile[t], ents);
      tagRow(c.balanceRow[n][t], RowGroup::PowerBalance, false, true);
    }

  // group 6: DC power flow definition (flow bounds live on the columns)
  for (int t = 0; t < T; ++t)
    for (size_t l = 0; l < m.lines.size(); ++l) {
      int from = m.busIndex(m.lines[l].fromBus);
      int to = m.busIndex(m.lines[l].toBus);
      double bsus = 1.0 / m.lines[l].reactance;
      int r = lp.addRow("flowdef_" + m.lines[l].id + "_" + std::to_string(t),
                        RowSense::EQ, 0.0,
                        {{c.flowCol[l][t], 1.0},
                         {c.angleCol[from][t], -bsus},
                         {c.angleCol[to][t], bsus}});
      tagRow(r, RowGroup::Network, false, false);
    }
  return c;
}

// Fix offer parameters and battery objective coefficients from an OfferSet.
inline void bindOffers(ClearingLP& c, const SystemModel& m, const OfferSet& offers) {
  const double dt = c.dt;
  for (size_t b = 0; b < c.battCol.size(); ++b)
    for (int p = 0; p < kNumProducts; ++p)
      for (int t = 0; t < c.numIntervals; ++t) {
        int qc = c.qtyCol[b][p][t];
        // parameters stay within physical limits
        double lim = c.colImpliedUpper[c.battCol[b][p][t]];
        double q = std::min(offers.perBattery[b].quantity[p][t], lim);
        c.lp.colLower[qc] = q;
        c.lp.colUpper[qc] = q;
        double price = offers.perBattery[b].price[p][t];
        c.lp.objCoef[c.battCol[b][p][t]] =
            (p == kEnergyCharge ? -1.0 : 1.0) * dt * price;
      }
  (void)m;
}

struct ClearingOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  ClearingResult result;
  std::string failure;
  std::vector<RowGroup> offendingGroups;
  LpSolution raw;  // duals and reduced costs for downstream consumers
};

// Reads schedules, SOC, prices, flows, and objective terms from a primal/dual
// vector pair; also used by the bilevel layer on its embedded solution.
inline ClearingResult extractClearingResult(const ClearingLP& c,
                                            const std::vector<double>& x,
                                            const std::vector<double>& rowDual) {
  const int T = c.numIntervals;
  const double dt = c.dt;
  ClearingResult res;
  res.numIntervals = T;

  res.battSchedule.resize(c.battCol.size());
  res.batterySoc.resize(c.battCol.size());
  for (size_t b = 0; b < c.battCol.size(); ++b) {
    for (int p = 0; p < kNumProducts; ++p) {
      res.battSchedule[b][p].resize(T);
      for (int t = 0; t < T; ++t) res.battSchedule[b][p][t] = x[c.battCol[b][p][t]];
    }
    res.batterySoc[b].resize(T);
    for (int t = 0; t < T; ++t) res.batterySoc[b][t] = x[c.socCol[b][t]];
  }
  res.genSchedule.resize(c.genCol.size());
  for (size_t g = 0; g < c.genCol.size(); ++g)
    for (int p = 0; p < 4; ++p) {
      res.genSchedule[g][p].assign(T, 0.0);
      for (int t = 0; t < T; ++t)
        if (c.genCol[g][p][t] >= 0) res.genSchedule[g][p][t] = x[c.genCol[g][p][t]];
    }
  res.lmp.resize(c.balanceRow.size());
  for (size_t n = 0; n < c.balanceRow.size(); ++n) {
    res.lmp[n].resize(T);
    for (int t = 0; t < T; ++t) res.lmp[n][t] = rowDual[c.balanceRow[n][t]] / dt;
  }
  res.mcpReserve.resize(T);
  res.mcpRegCap.resize(T);
  res.mcpRegMileage.resize(T);
  for (int t = 0; t < T; ++t) {
    res.mcpReserve[t] = rowDual[c.reserveReqRow[t]] / dt;
    res.mcpRegCap[t] = rowDual[c.regCapReqRow[t]] / dt;
    res.mcpRegMileage[t] = rowDual[c.regMileageReqRow[t]] / dt;
  }
  res.lineFlow.resize(c.flowCol.size());
  for (size_t l = 0; l < c.flowCol.size(); ++l) {
    res.lineFlow[l].resize(T);
    for (int t = 0; t < T; ++t) res.lineFlow[l][t] = x[c.flowCol[l][t]];
  }

  ObjectiveTerms& ot = res.objectiveTerms;
  for (size_t b = 0; b < c.battCol.size(); ++b)
    for (int t = 0; t < T; ++t) {
      ot.battEnergy += c.lp.objCoef[c.battCol[b][kEnergyDischarge][t]] *
                           x[c.battCol[b][kEnergyDischarge][t]] +
                       c.lp.objCoef[c.battCol[b][kEnergyCharge][t]] *
                           x[c.battCol[b][kEnergyCharge][t]];
      ot.battReserve +=
          c.lp.objCoef[c.battCol[b][kReserve][t]] * x[c.battCol[b][kReserve][t]];
      ot.battRegCap +=
          c.lp.objCoef[c.battCol[b][kRegCap][t]] * x[c.battCol[b][kRegCap][t]];
      ot.battRegMileage += c.lp.objCoef[c.battCol[b][kRegMileage][t]] *
                           x[c.battCol[b][kRegMileage][t]];
    }
  for (size_t g = 0; g < c.genCol.size(); ++g)
    for (int t = 0; t < T; ++t) {
      auto term = [&](int p) {
        int col = c.genCol[g][p][t];
        return col >= 0 ? c.lp.objCoef[col] * x[col] : 0.0;
      };
      ot.genEnergy += term(kGenEnergy);
      ot.genReserve += term(kGenReserve);
      ot.genRegCap += term(kGenRegCap);
      ot.genRegMileage += term(kGenRegMileage);
    }
  return res;
}

inline ClearingOutcome solveClearing(const ClearingLP& c, const SystemModel& m,
                                     const SimplexOptions& opts = {}) {
  ClearingOutcome out;
  SimplexSolver solver;
  LpSolution sol = solver.solve(c.lp, opts);
  out.status = sol.status;
  if (sol.status != SolveStatus::Optimal) {
    out.failure = std::string("clearing LP ") + toString(sol.status);
    for (int r : sol.infeasibleRows) {
      RowGroup g = c.rowGroup[r];
      bool seen = false;
      for (RowGroup have : out.offendingGroups) seen = seen || have == g;
      if (!seen) out.offendingGroups.push_back(g);
    }
    out.raw = std::move(sol);
    return out;
  }

  out.result = extractClearingResult(c, sol.x, sol.rowDual);
  ClearingResult& res = out.result;
  res.iterations = sol.iterations;
  res.degenerate = sol.degenerate;
  res.objective = sol.objective;

  LpCertificate cert = certify(c.lp, sol);
  res.dualityGapRel = cert.dualityGapRel;
  (void)m;
  out.raw = std::move(sol);
  return out;
}

// Builds and binds in one step (the standalone market-simulator path).
inline ClearingLP buildClearingLP(const SystemModel& m, const OfferSet& offers) {
  ClearingLP c = buildClearingSkeleton(m);
  bindOffers(c, m, offers);
  return c;
}

// Battery revenue per interval from the clearing prices and schedule.
// Energy revenue is signed (negative while buying); the degradation stream is
// filled by the degradation-aware pipeline, zero here.
inline RevenueBreakdown computeRevenue(const ClearingResult& res,
                                       const SystemModel& m,
                                       const std::string& batteryId) {
  int b = m.batteryIndex(batteryId);
  if (b < 0) throw std::invalid_argument("unknown battery id: " + batteryId);
  int bus = m.busIndex(m.batteries[b].bus);
  const int T = res.numIntervals;
  const double dt = m.horizon.intervalLength;
  RevenueBreakdown r;
  r.energy.resize(T);
  r.reserve.resize(T);
  r.regCap.resize(T);
  r.regMileage.resize(T);
  r.degradation.assign(T, 0.0);
  for (int t = 0; t < T; ++t) {
    double net = res.battSchedule[b][kEnergyDischarge][t] -
                 res.battSchedule[b][kEnergyCharge][t];
    r.energy[t] = res.lmp[bus][t] * net * dt;
    r.reserve[t] = res.mcpReserve[t] * res.battSchedule[b][kReserve][t] * dt;
    r.regCap[t] = res.mcpRegCap[t] * res.battSchedule[b][kRegCap][t] * dt;
    r.regMileage[t] = res.mcpRegMileage[t] * res.battSchedule[b][kRegMileage][t] * dt;
  }
  return r;
}

}  // namespace bessbid
