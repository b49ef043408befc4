// Solves the single-level MILP: price-taker response iterations seed strong
// incumbents (one per enabled-market subset), branch and bound tightens and
// bounds them, and the incumbent is audited (complementarity residuals, big-M
// slack with escalation, round-trip against a standalone re-clearing, and the
// objective decomposition identity).
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bessbid/bilevel.hpp"

namespace bessbid {

struct BilevelOptions {
  double gapTarget = 1e-4;
  long nodeLimit = 100000;
  long simplexIterationBudget = 2000000;
  int heuristicRounds = 2;
  int maxMEscalations = 3;
  std::vector<OfferSet> warmOffers;  // e.g. incumbents from smaller-market runs
};

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  OfferSet offers;
  ClearingResult clearing;  // standalone re-clearing at the optimal offers
  std::vector<RevenueBreakdown> revenues;  // per battery, degradation included
  double objective = 0;  // owner profit at the incumbent ($)
  double bestBound = 0;
  double gap = kInf;
  long nodes = 0;
  long simplexIterations = 0;
  int binaryCount = 0;
  int presolvedPairs = 0;

  // audits
  double complementarityResidual = 0;  // max over pairs of min(slack, |dual|)
  bool bigMBindingDetected = false;
  int mEscalations = 0;
  double roundTripScheduleDelta = 0;  // embedded vs re-cleared battery schedule
  double roundTripPriceDelta = 0;
  double objectiveDecompositionError = 0;  // relative
  bool degenerateClearing = false;
  std::string failure;

  std::vector<std::vector<std::vector<double>>> segDischarge;  // [b][t][j]
  double totalDegradationCost = 0;

  double profit() const { return objective; }
};

namespace detail {

struct ResponseResult {
  OfferSet offers;
  bool ok = false;
};

// Battery best response against fixed prices; mirrors the owner-side
// constraint block of the MILP. Offer quantities are the scheduled amounts;
// sell offers are priced at zero and buy bids at the price cap so the
// schedule clears whenever it is physically deliverable.
inline ResponseResult batteryResponse(const SystemModel& m, const UlpSpec& spec,
                                      const ClearingResult& prices,
                                      double priceCap) {
  const int T = m.horizon.numIntervals;
  const double dt = m.horizon.intervalLength;
  ResponseResult rr;
  rr.offers = OfferSet::zeros(m);
  LinearProgram lp;
  lp.sense = ObjSense::Maximize;

  struct Cols {
    std::array<std::vector<int>, kNumProducts> sched;
    std::vector<int> soc;
    std::vector<std::vector<int>> bucket, chg, dis, agc;  // [j][t]
  };
  std::vector<Cols> cols(m.batteries.size());

  for (size_t b = 0; b < m.batteries.size(); ++b) {
    const BatteryUnit& bat = m.batteries[b];
    int bus = m.busIndex(bat.bus);
    Cols& cb = cols[b];
    double lim[kNumProducts] = {
        bat.chargeLimit, bat.dischargeLimit, bat.dischargeLimit,
        std::min(bat.chargeLimit, bat.dischargeLimit),
        m.mileageMultiplier * bat.perfScore *
            std::min(bat.chargeLimit, bat.dischargeLimit)};
    for (int p = 0; p < kNumProducts; ++p) {
      cb.sched[p].resize(T);
      for (int t = 0; t < T; ++t) {
        double up = spec.productEnabled(p) ? lim[p] : 0.0;
        double obj = 0;
        switch (p) {
          case kEnergyCharge: obj = -dt * prices.lmp[bus][t]; break;
          case kEnergyDischarge: obj = dt * prices.lmp[bus][t]; break;
          case kReserve: obj = dt * prices.mcpReserve[t]; break;
          case kRegCap: obj = dt * prices.mcpRegCap[t]; break;
          case kRegMileage: obj = dt * prices.mcpRegMileage[t]; break;
        }
        cb.sched[p][t] = lp.addColumn(
            bat.id + "_" + productName(p) + "_" + std::to_string(t), 0, up, obj);
      }
    }
    cb.soc.resize(T);
    for (int t = 0; t < T; ++t)
      cb.soc[t] =
          lp.addColumn(bat.id + "_soc_" + std::to_string(t), bat.socMin, bat.socMax, 0);

    for (int t = 0; t < T; ++t) {
      lp.addRow("hd_" + std::to_string(t), RowSense::LE, bat.dischargeLimit,
                {{cb.sched[kEnergyDischarge][t], 1.0},
                 {cb.sched[kEnergyCharge][t], -1.0},
                 {cb.sched[kReserve][t], 1.0},
                 {cb.sched[kRegCap][t], 1.0}});
      lp.addRow("hc_" + std::to_string(t), RowSense::LE, bat.chargeLimit,
                {{cb.sched[kEnergyCharge][t], 1.0},
                 {cb.sched[kEnergyDischarge][t], -1.0},
                 {cb.sched[kRegCap][t], 1.0}});
      lp.addRow("mc_" + std::to_string(t), RowSense::LE, 0.0,
                {{cb.sched[kRegMileage][t], 1.0},
                 {cb.sched[kRegCap][t], -m.mileageMultiplier * bat.perfScore}});
      std::vector<std::pair<int, double>> rec = {
          {cb.soc[t], 1.0},
          {cb.sched[kEnergyCharge][t], -bat.efficiencyCharge * dt},
          {cb.sched[kEnergyDischarge][t], dt / bat.efficiencyDischarge}};
      if (t > 0) rec.push_back({cb.soc[t - 1], -1.0});
      lp.addRow("rec_" + std::to_string(t), RowSense::EQ,
                t == 0 ? bat.socInitial : 0.0, rec);
      lp.addRow("sl_" + std::to_string(t), RowSense::GE, bat.socMin,
                {{cb.soc[t], 1.0},
                 {cb.sched[kReserve][t], -dt / bat.efficiencyDischarge},
                 {cb.sched[kRegCap][t], -dt / bat.efficiencyDischarge}});
      lp.addRow("sh_" + std::to_string(t), RowSense::LE, bat.socMax,
                {{cb.soc[t], 1.0}, {cb.sched[kRegCap][t], dt * bat.efficiencyCharge}});
    }

    if (spec.degradationEnabled) {
      const int J = spec.pwlSegments;
      CycleLifeCurve curve = CycleLifeCurve::forBattery(bat, spec.lifeExponent);
      PWLSegments seg = PWLSegments::build(bat, curve, J);
      const double segMwh = seg.segmentMwh;
      auto bandLow = [&](int j1) { return bat.energyCapacity - j1 * segMwh; };
      cb.bucket.assign(J, std::vector<int>(T));
      cb.chg.assign(J, std::vector<int>(T));
      cb.dis.assign(J, std::vector<int>(T));
      cb.agc.assign(J, std::vector<int>(T));
      for (int j = 0; j < J; ++j) {
        double lo = std::min(segMwh, std::max(0.0, bat.socMin - bandLow(j + 1)));
        double hi = std::max(0.0, std::min(segMwh, bat.socMax - bandLow(j + 1)));
        for (int t = 0; t < T; ++t) {
          cb.bucket[j][t] = lp.addColumn("s" + std::to_string(j) + "_" + std::to_string(t),
                                         lo, hi, 0);
          cb.chg[j][t] = lp.addColumn("c" + std::to_string(j) + "_" + std::to_string(t),
                                      0, kInf, 0);
          cb.dis[j][t] = lp.addColumn("d" + std::to_string(j) + "_" + std::to_string(t),
                                      0, kInf, -seg.costPerMwh[j]);
          cb.agc[j][t] = lp.addColumn("a" + std::to_string(j) + "_" + std::to_string(t),
                                      0, kInf, -seg.costPerMwh[j]);
        }
      }
      const double drainFrac = 1.0 - bat.efficiencyCharge * bat.efficiencyDischarge;
      const double agcPerMileage =
          spec.regulation
              ? 0.25 * m.horizon.stepHours() / (bat.efficiencyDischarge * bat.perfScore)
              : 0.0;
      for (int t = 0; t < T; ++t) {
        std::vector<std::pair<int, double>> tc, td, ta, sum;
        for (int j = 0; j < J; ++j) {
          tc.push_back({cb.chg[j][t], 1.0});
          td.push_back({cb.dis[j][t], 1.0});
          ta.push_back({cb.agc[j][t], 1.0});
          sum.push_back({cb.bucket[j][t], 1.0});
        }
        tc.push_back({cb.sched[kEnergyCharge][t], -bat.efficiencyCharge * dt});
        td.push_back({cb.sched[kEnergyDischarge][t], -dt / bat.efficiencyDischarge});
        ta.push_back({cb.sched[kRegMileage][t], -agcPerMileage});
        lp.addRow("tc" + std::to_string(t), RowSense::EQ, 0, tc);
        lp.addRow("td" + std::to_string(t), RowSense::EQ, 0, td);
        lp.addRow("ta" + std::to_string(t), RowSense::EQ, 0, ta);
        for (int j = 0; j < J; ++j) {
          std::vector<std::pair<int, double>> rec = {{cb.bucket[j][t], 1.0},
                                                     {cb.chg[j][t], -1.0},
                                                     {cb.dis[j][t], 1.0},
                                                     {cb.agc[j][t], drainFrac}};
          double rhs = 0;
          if (t == 0)
            rhs = std::clamp(bat.socInitial - bandLow(j + 1), 0.0, segMwh);
          else
            rec.push_back({cb.bucket[j][t - 1], -1.0});
          lp.addRow("sr" + std::to_string(j) + "_" + std::to_string(t), RowSense::EQ,
                    rhs, rec);
          lp.addRow("sa" + std::to_string(j) + "_" + std::to_string(t), RowSense::LE,
                    0.0, {{cb.agc[j][t], 1.0}, {cb.bucket[j][t], -1.0}});
        }
        lp.addRow("pl" + std::to_string(t), RowSense::GE, bat.socMin, sum);
        lp.addRow("ph" + std::to_string(t), RowSense::LE, bat.socMax, sum);
      }
      if (spec.dayEndEquality) {
        std::vector<std::pair<int, double>> sum;
        for (int j = 0; j < J; ++j) sum.push_back({cb.bucket[j][T - 1], 1.0});
        lp.addRow("de", RowSense::EQ, bat.socInitial, sum);
      }
    } else if (spec.dayEndEquality) {
      lp.addRow("de", RowSense::EQ, bat.socInitial, {{cb.soc[T - 1], 1.0}});
    }
  }

  SimplexSolver solver;
  SimplexOptions so;
  auto sol = solver.solve(lp, so);
  if (sol.status != SolveStatus::Optimal) return rr;
  for (size_t b = 0; b < m.batteries.size(); ++b)
    for (int p = 0; p < kNumProducts; ++p)
      for (int t = 0; t < T; ++t) {
        double q = sol.x[cols[b].sched[p][t]];
        if (q < 1e-9) q = 0;
        rr.offers.perBattery[b].quantity[p][t] = q;
        rr.offers.perBattery[b].price[p][t] = p == kEnergyCharge ? priceCap : 0.0;
      }
  rr.ok = true;
  return rr;
}

struct BucketRepair {
  bool ok = false;
  double cost = 0;
  std::vector<std::vector<double>> segDis;  // [t][j], dis + agc throughput
  std::vector<double> segValues;            // flattened LP solution for embedding
  std::vector<double> chgValues, agcValues;
};

// Cost-minimal segment bookkeeping for a fixed cleared schedule.
inline BucketRepair bucketRepair(const SystemModel& m, const UlpSpec& spec, int b,
                                 const ClearingResult& clr) {
  const int T = m.horizon.numIntervals;
  const double dt = m.horizon.intervalLength;
  const BatteryUnit& bat = m.batteries[b];
  const int J = spec.pwlSegments;
  CycleLifeCurve curve = CycleLifeCurve::forBattery(bat, spec.lifeExponent);
  PWLSegments seg = PWLSegments::build(bat, curve, J);
  const double segMwh = seg.segmentMwh;
  auto bandLow = [&](int j1) { return bat.energyCapacity - j1 * segMwh; };

  LinearProgram lp;
  lp.sense = ObjSense::Minimize;
  std::vector<std::vector<int>> s(J, std::vector<int>(T)), ch = s, di = s, ag = s;
  for (int j = 0; j < J; ++j) {
    double lo = std::min(segMwh, std::max(0.0, bat.socMin - bandLow(j + 1)));
    double hi = std::max(0.0, std::min(segMwh, bat.socMax - bandLow(j + 1)));
    for (int t = 0; t < T; ++t) {
      s[j][t] = lp.addColumn("s", lo, hi, 0);
      ch[j][t] = lp.addColumn("c", 0, kInf, 0);
      di[j][t] = lp.addColumn("d", 0, kInf, seg.costPerMwh[j]);
      ag[j][t] = lp.addColumn("a", 0, kInf, seg.costPerMwh[j]);
    }
  }
  const double drainFrac = 1.0 - bat.efficiencyCharge * bat.efficiencyDischarge;
  const double agcPerMileage =
      spec.regulation
          ? 0.25 * m.horizon.stepHours() / (bat.efficiencyDischarge * bat.perfScore)
          : 0.0;
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> tc, td, ta, sum;
    for (int j = 0; j < J; ++j) {
      tc.push_back({ch[j][t], 1.0});
      td.push_back({di[j][t], 1.0});
      ta.push_back({ag[j][t], 1.0});
      sum.push_back({s[j][t], 1.0});
    }
    lp.addRow("tc", RowSense::EQ,
              bat.efficiencyCharge * dt * clr.battSchedule[b][kEnergyCharge][t], tc);
    lp.addRow("td", RowSense::EQ,
              dt / bat.efficiencyDischarge * clr.battSchedule[b][kEnergyDischarge][t],
              td);
    lp.addRow("ta", RowSense::EQ,
              agcPerMileage * clr.battSchedule[b][kRegMileage][t], ta);
    for (int j = 0; j < J; ++j) {
      std::vector<std::pair<int, double>> rec = {
          {s[j][t], 1.0}, {ch[j][t], -1.0}, {di[j][t], 1.0}, {ag[j][t], drainFrac}};
      double rhs = 0;
      if (t == 0)
        rhs = std::clamp(bat.socInitial - bandLow(j + 1), 0.0, segMwh);
      else
        rec.push_back({s[j][t - 1], -1.0});
      lp.addRow("sr", RowSense::EQ, rhs, rec);
      lp.addRow("sa", RowSense::LE, 0.0, {{ag[j][t], 1.0}, {s[j][t], -1.0}});
    }
    lp.addRow("pl", RowSense::GE, bat.socMin, sum);
    lp.addRow("ph", RowSense::LE, bat.socMax, sum);
  }
  if (spec.dayEndEquality) {
    std::vector<std::pair<int, double>> sum;
    for (int j = 0; j < J; ++j) sum.push_back({s[j][T - 1], 1.0});
    lp.addRow("de", RowSense::EQ, bat.socInitial, sum);
  }

  BucketRepair out;
  SimplexSolver solver;
  auto sol = solver.solve(lp);
  if (sol.status != SolveStatus::Optimal) return out;
  out.ok = true;
  out.cost = sol.objective;
  out.segDis.assign(T, std::vector<double>(J, 0.0));
  out.segValues.resize(J * T);
  out.chgValues.resize(J * T);
  out.agcValues.resize(J * T);
  for (int j = 0; j < J; ++j)
    for (int t = 0; t < T; ++t) {
      out.segDis[t][j] = sol.x[di[j][t]] + sol.x[ag[j][t]];
      out.segValues[j * T + t] = sol.x[s[j][t]];
      out.chgValues[j * T + t] = sol.x[ch[j][t]];
      out.agcValues[j * T + t] = sol.x[ag[j][t]];
    }
  // stash raw dis values in segDis minus agc for embedding
  for (int j = 0; j < J; ++j)
    for (int t = 0; t < T; ++t) out.segDis[t][j] = sol.x[di[j][t]] + sol.x[ag[j][t]];
  return out;
}

// Full MILP variable assignment consistent with a standalone clearing at the
// given offers; empty when the KKT/owner rows cannot be satisfied.
inline std::vector<double> assembleCandidate(const MilpProgram& mp,
                                             const SystemModel& m,
                                             const OfferSet& offers,
                                             const ClearingOutcome& out) {
  if (out.status != SolveStatus::Optimal) return {};
  const ClearingLP& skel = mp.skel;
  const int T = skel.numIntervals;
  std::vector<double> x(mp.lp.numCols(), 0.0);
  const int nLlpCols = skel.lp.numCols();
  for (int j = 0; j < nLlpCols; ++j) x[j] = out.raw.x[j];
  for (size_t b = 0; b < skel.battCol.size(); ++b)
    for (int p = 0; p < kNumProducts; ++p)
      for (int t = 0; t < T; ++t) {
        x[skel.qtyCol[b][p][t]] =
            mp.spec.productEnabled(p) ? offers.perBattery[b].quantity[p][t] : 0.0;
        int pc = mp.priceCol[b][p][t];
        if (pc >= 0) x[pc] = offers.perBattery[b].price[p][t];
      }
  // duals, slacks, and pair binaries from the clearing solution
  for (const auto& pr : mp.pairs) {
    if (pr.srcRow >= 0) {
      int r = pr.srcRow;
      double act = skel.lp.rowActivity(r, out.raw.x);
      double slack = skel.lp.rowSense[r] == RowSense::LE ? skel.lp.rhs[r] - act
                                                         : act - skel.lp.rhs[r];
      slack = std::max(0.0, slack);
      if (pr.slackCol >= 0) x[pr.slackCol] = std::min(slack, mp.lp.colUpper[pr.slackCol]);
      double y = out.raw.rowDual[r];
      if (pr.fixedSlack) {
        if (std::fabs(y) > 1e-6 && slack > 1e-6) return {};  // presolve contradicted
        continue;
      }
      x[pr.dualCol] = y;
      x[pr.zCol] = slack <= 1e-6 ? 1.0 : 0.0;
      if (slack > 1e-6 && std::fabs(y) > 1e-5) return {};
      if (slack > 1e-6) x[pr.dualCol] = 0.0;
    } else {
      int j = pr.srcCol;
      double d = out.raw.colReducedCost[j];
      double dlo = std::max(0.0, d), dup = std::max(0.0, -d);
      double gapLo = out.raw.x[j] - skel.lp.colLower[j];
      double gapUp = skel.lp.colUpper[j] - out.raw.x[j];
      if (pr.zCol < 0) {  // presolve-fixed: the bound cannot be active
        if ((pr.lowerSide ? dlo : dup) > 1e-5) return {};
        continue;
      }
      if (pr.lowerSide) {
        x[pr.dualCol] = gapLo <= 1e-6 ? dlo : 0.0;
        x[pr.zCol] = gapLo <= 1e-6 ? 1.0 : 0.0;
        if (gapLo > 1e-6 && dlo > 1e-5) return {};
      } else {
        x[pr.dualCol] = gapUp <= 1e-6 ? dup : 0.0;
        x[pr.zCol] = gapUp <= 1e-6 ? 1.0 : 0.0;
        if (gapUp > 1e-6 && dup > 1e-5) return {};
      }
    }
  }
  // equality-row duals (no pairs)
  for (int r = 0; r < skel.lp.numRows(); ++r)
    if (skel.lp.rowSense[r] == RowSense::EQ && mp.rowDualCol[r] >= 0)
      x[mp.rowDualCol[r]] = out.raw.rowDual[r];
  // dual magnitudes must respect the big-M variable bounds
  for (int r = 0; r < skel.lp.numRows(); ++r)
    if (mp.rowDualCol[r] >= 0 && std::fabs(x[mp.rowDualCol[r]]) > mp.dualM) return {};

  if (mp.spec.degradationEnabled) {
    ClearingResult clr = extractClearingResult(skel, out.raw.x, out.raw.rowDual);
    for (size_t b = 0; b < skel.battCol.size(); ++b) {
      BucketRepair br = bucketRepair(m, mp.spec, static_cast<int>(b), clr);
      if (!br.ok) return {};
      const int J = mp.spec.pwlSegments;
      for (int j = 0; j < J; ++j)
        for (int t = 0; t < T; ++t) {
          x[mp.bucketCol[b][j][t]] = br.segValues[j * T + t];
          x[mp.chgPartCol[b][j][t]] = br.chgValues[j * T + t];
          x[mp.agcDisCol[b][j][t]] = br.agcValues[j * T + t];
          x[mp.disPartCol[b][j][t]] =
              br.segDis[t][j] - br.agcValues[j * T + t];
        }
    }
  }
  return x;
}

inline OfferSet offersFromIncumbent(const MilpProgram& mp, const SystemModel& m,
                                    const std::vector<double>& x) {
  OfferSet offers = OfferSet::zeros(m);
  const int T = mp.skel.numIntervals;
  for (size_t b = 0; b < mp.skel.battCol.size(); ++b)
    for (int p = 0; p < kNumProducts; ++p)
      for (int t = 0; t < T; ++t) {
        double q = x[mp.skel.qtyCol[b][p][t]];
        offers.perBattery[b].quantity[p][t] = q < 1e-9 ? 0.0 : q;
        int pc = mp.priceCol[b][p][t];
        offers.perBattery[b].price[p][t] = pc >= 0 ? std::max(0.0, x[pc]) : 0.0;
      }
  return offers;
}

}  // namespace detail

inline SolveReport solveBilevel(const SystemModel& m, const UlpSpec& spec,
                                const BilevelOptions& opts = {}) {
  SolveReport rep;
  const int T = m.horizon.numIntervals;
  const double dt = m.horizon.intervalLength;

  double maxGenOffer = 0;
  for (const auto& g : m.generators)
    for (double p : g.energyPriceOffer) maxGenOffer = std::max(maxGenOffer, p);
  const double priceCap = spec.priceCapFactor * maxGenOffer;

  // candidate offer sets: zero offers, external warm starts, and price-taker
  // responses for every subset of the enabled markets
  std::vector<OfferSet> candidateOffers;
  candidateOffers.push_back(OfferSet::zeros(m));
  for (const auto& w : opts.warmOffers) candidateOffers.push_back(w);

  ClearingOutcome base = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
  if (base.status != SolveStatus::Optimal) {
    rep.status = base.status;
    rep.failure = "base market clearing failed: " + base.failure;
    return rep;
  }

  ClearingResult priceView = base.result;
  for (int round = 0; round < std::max(1, opts.heuristicRounds); ++round) {
    double bestProfit = -kInf;
    ClearingResult nextPrices = priceView;
    for (int se = spec.energy ? 1 : 0; se >= 0; --se)
      for (int sr = spec.reserve ? 1 : 0; sr >= 0; --sr)
        for (int sg = spec.regulation ? 1 : 0; sg >= 0; --sg) {
          if (!se && !sr && !sg) continue;
          UlpSpec sub = spec;
          sub.energy = se;
          sub.reserve = sr;
          sub.regulation = sg;
          auto resp = detail::batteryResponse(m, sub, priceView, priceCap);
          if (!resp.ok) continue;
          candidateOffers.push_back(resp.offers);
          auto out = solveClearing(buildClearingLP(m, resp.offers), m);
          if (out.status != SolveStatus::Optimal) continue;
          double profit = 0;
          for (size_t b = 0; b < m.batteries.size(); ++b)
            profit += computeRevenue(out.result, m, m.batteries[b].id).profit();
          if (spec.degradationEnabled)
            for (size_t b = 0; b < m.batteries.size(); ++b) {
              auto br =
                  detail::bucketRepair(m, spec, static_cast<int>(b), out.result);
              profit -= br.ok ? br.cost : kInf;
            }
          if (profit > bestProfit) {
            bestProfit = profit;
            nextPrices = out.result;
          }
        }
    priceView = nextPrices;
  }

  // dual big-M calibration from the heuristics' observed duals
  double maxObservedDual = 0;
  for (double v : base.raw.rowDual) maxObservedDual = std::max(maxObservedDual, std::fabs(v));

  MilpProgram mp = reformulateKkt(m, spec);
  if (mp.dualM < 2 * maxObservedDual) {
    UlpSpec widened = spec;
    widened.dualMFactor =
        2.5 * maxObservedDual / (priceCap * std::max(dt, 1.0));
    mp = reformulateKkt(m, widened);
  }

  MipResult mipRes;
  for (int esc = 0;; ++esc) {
    BranchAndBound bnb(mp.lp, mp.binaries);
    int installed = 0;
    for (const auto& offers : candidateOffers) {
      auto out = solveClearing(buildClearingLP(m, offers), m);
      auto x = detail::assembleCandidate(mp, m, offers, out);
      if (!x.empty()) {
        bnb.addWarmSolution(x);
        ++installed;
      }
    }
    if (!rep.offers.perBattery.empty()) {
      // escalation path: previous incumbent re-checked under the wider Ms
      auto out = solveClearing(buildClearingLP(m, rep.offers), m);
      auto x = detail::assembleCandidate(mp, m, rep.offers, out);
      if (!x.empty()) bnb.addWarmSolution(x);
    }
    (void)installed;

    MipOptions mo;
    mo.gapTarget = opts.gapTarget;
    mo.nodeLimit = opts.nodeLimit;
    mo.simplexIterationBudget = opts.simplexIterationBudget;
    mipRes = bnb.solve(mo);
    rep.nodes += mipRes.nodes;
    rep.simplexIterations += mipRes.simplexIterations;
    if (!mipRes.hasIncumbent) {
      rep.status = mipRes.status;
      rep.failure = "MILP search found no feasible point";
      return rep;
    }
    rep.offers = detail::offersFromIncumbent(mp, m, mipRes.x);

    // big-M audit at the incumbent: escalate when a dual presses its cap
    bool binding = false;
    for (const auto& pr : mp.pairs)
      if (pr.zCol >= 0 && mipRes.x[pr.zCol] > 0.5 &&
          std::fabs(mipRes.x[pr.dualCol]) > 0.999 * pr.bigMdual)
        binding = true;
    rep.bigMBindingDetected = binding;
    if (!binding || esc >= opts.maxMEscalations) break;
    ++rep.mEscalations;
    UlpSpec widened = spec;
    widened.dualMFactor = mp.dualM * 10.0 / (priceCap * std::max(dt, 1.0));
    mp = reformulateKkt(m, widened);
  }

  rep.status = mipRes.status;
  rep.objective = mipRes.objective;
  rep.bestBound = mipRes.bestBound;
  rep.gap = mipRes.gap;
  rep.binaryCount = static_cast<int>(mp.binaries.size());
  rep.presolvedPairs = mp.presolvedPairs;

  // complementarity audit
  for (const auto& pr : mp.pairs) {
    if (pr.zCol < 0) continue;
    double slack;
    if (pr.slackCol >= 0)
      slack = mipRes.x[pr.slackCol];
    else if (pr.lowerSide)
      slack = mipRes.x[pr.srcCol] - mp.lp.colLower[pr.srcCol];
    else
      slack = mp.skel.lp.colUpper[pr.srcCol] - mipRes.x[pr.srcCol];
    rep.complementarityResidual = std::max(
        rep.complementarityResidual,
        std::min(std::fabs(slack), std::fabs(mipRes.x[pr.dualCol])));
  }

  // embedded clearing view and the tie-break penalty
  std::vector<double> embDual(mp.skel.lp.numRows(), 0.0);
  for (int r = 0; r < mp.skel.lp.numRows(); ++r)
    if (mp.rowDualCol[r] >= 0) embDual[r] = mipRes.x[mp.rowDualCol[r]];
  std::vector<double> embX(mipRes.x.begin(), mipRes.x.begin() + mp.skel.lp.numCols());
  ClearingResult embedded = extractClearingResult(mp.skel, embX, embDual);

  double tiePenalty = 0;
  for (size_t b = 0; b < mp.skel.battCol.size(); ++b)
    for (int p = 0; p < kNumProducts; ++p)
      if (spec.productEnabled(p))
        for (int t = 0; t < T; ++t)
          tiePenalty += mp.tieBreakEps * mipRes.x[mp.skel.qtyCol[b][p][t]];

  // degradation cost and segment solution at the incumbent
  rep.totalDegradationCost = 0;
  if (spec.degradationEnabled) {
    rep.segDischarge.resize(m.batteries.size());
    for (size_t b = 0; b < m.batteries.size(); ++b) {
      const int J = spec.pwlSegments;
      rep.segDischarge[b].assign(T, std::vector<double>(J, 0.0));
      for (int t = 0; t < T; ++t)
        for (int j = 0; j < J; ++j) {
          double e = mipRes.x[mp.disPartCol[b][j][t]] + mipRes.x[mp.agcDisCol[b][j][t]];
          rep.segDischarge[b][t][j] = e;
          rep.totalDegradationCost += mp.segments[b].costPerMwh[j] * e;
        }
    }
  }

  // objective decomposition: incumbent objective must equal revenue minus
  // degradation minus the tie penalty, with revenue priced at the embedded duals
  double revenueSum = 0;
  rep.revenues.resize(m.batteries.size());
  for (size_t b = 0; b < m.batteries.size(); ++b) {
    rep.revenues[b] = computeRevenue(embedded, m, m.batteries[b].id);
    revenueSum += rep.revenues[b].profit();
  }
  double decomposed = revenueSum - rep.totalDegradationCost - tiePenalty;
  rep.objectiveDecompositionError =
      std::fabs(mipRes.objective - decomposed) / std::max(1.0, std::fabs(decomposed));

  // round trip: standalone clearing at the incumbent offers
  auto reclear = solveClearing(buildClearingLP(m, rep.offers), m);
  if (reclear.status == SolveStatus::Optimal) {
    rep.clearing = reclear.result;
    rep.degenerateClearing = reclear.result.degenerate;
    for (size_t b = 0; b < m.batteries.size(); ++b)
      for (int p = 0; p < kNumProducts; ++p)
        for (int t = 0; t < T; ++t)
          rep.roundTripScheduleDelta = std::max(
              rep.roundTripScheduleDelta,
              std::fabs(reclear.result.battSchedule[b][p][t] -
                        embedded.battSchedule[b][p][t]));
    for (size_t n = 0; n < m.buses.size(); ++n)
      for (int t = 0; t < T; ++t)
        rep.roundTripPriceDelta =
            std::max(rep.roundTripPriceDelta,
                     std::fabs(reclear.result.lmp[n][t] - embedded.lmp[n][t]));
    // report revenues against the canonical re-cleared prices
    double p2 = 0;
    std::vector<RevenueBreakdown> rev2(m.batteries.size());
    for (size_t b = 0; b < m.batteries.size(); ++b) {
      rev2[b] = computeRevenue(reclear.result, m, m.batteries[b].id);
      p2 += rev2[b].profit();
    }
    if (spec.degradationEnabled)
      for (size_t b = 0; b < m.batteries.size(); ++b) {
        auto br = detail::bucketRepair(m, spec, static_cast<int>(b), reclear.result);
        if (br.ok) {
          rev2[b].degradation.assign(T, 0.0);
          for (int t = 0; t < T; ++t)
            for (int j = 0; j < spec.pwlSegments; ++j)
              rev2[b].degradation[t] +=
                  mp.segments[b].costPerMwh[j] * br.segDis[t][j];
        }
      }
    rep.revenues = rev2;
  } else {
    rep.failure = "re-clearing at incumbent offers failed";
    rep.clearing = embedded;
  }
  // per-interval degradation stream for the embedded view
  if (spec.degradationEnabled && !rep.revenues.empty())
    for (size_t b = 0; b < m.batteries.size(); ++b)
      if (rep.revenues[b].degradation.empty())
        rep.revenues[b].degradation.assign(T, 0.0);

  return rep;
}

}  // namespace bessbid
