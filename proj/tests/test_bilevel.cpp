#include <catch2/catch_amalgamated.hpp>

#include "bessbid/bilevel_solve.hpp"
#include "bessbid/dataset.hpp"

using namespace bessbid;

namespace {

// single bus, one generator, one (small) battery
SystemModel toySystem(double load, double genCap, double genPrice,
                      double reserveReq = 0.0, int T = 1) {
  SystemModel m;
  m.name = "toy";
  m.horizon = {T, 1.0, 4};
  Bus b;
  b.id = "b1";
  b.loadProfile.assign(T, load);
  m.buses.push_back(b);
  Generator g;
  g.id = "g1";
  g.bus = "b1";
  g.pMax = genCap;
  g.rampLimit = genCap;
  g.energyPriceOffer.assign(T, genPrice);
  g.reservePriceOffer.assign(T, 0.15 * genPrice);
  g.regCapPriceOffer.assign(T, 0.4 * genPrice);
  g.regMileagePriceOffer.assign(T, 0.07 * genPrice);
  g.perfScore = 0.95;
  m.generators.push_back(g);
  BatteryUnit bat;
  bat.id = "bess1";
  bat.bus = "b1";
  bat.chargeLimit = 30;
  bat.dischargeLimit = 30;
  bat.energyCapacity = 120;
  bat.socMin = 10;
  bat.socMax = 110;
  bat.socInitial = 60;
  bat.efficiencyCharge = 0.95;
  bat.efficiencyDischarge = 0.95;
  bat.perfScore = 0.95;
  m.batteries.push_back(bat);
  m.requirements.reserveReq.assign(T, reserveReq);
  m.requirements.regCapReq.assign(T, 0.0);
  m.requirements.regMileageReq.assign(T, 0.0);
  return m;
}

double gridProfit(const SystemModel& m, const OfferSet& offers) {
  auto out = solveClearing(buildClearingLP(m, offers), m);
  if (out.status != SolveStatus::Optimal) return -1e18;
  double p = 0;
  for (size_t b = 0; b < m.batteries.size(); ++b)
    p += computeRevenue(out.result, m, m.batteries[b].id).profit();
  return p;
}

// exhaustive search over quantity/price grids for one product at interval 0
double gridOracle(const SystemModel& m, int product, double qMax, double pMax,
                  double qStep, double pStep) {
  double best = 0;  // zero offers are always available
  for (double q = 0; q <= qMax + 1e-9; q += qStep)
    for (double p = 0; p <= pMax + 1e-9; p += pStep) {
      OfferSet o = OfferSet::zeros(m);
      o.perBattery[0].quantity[product][0] = q;
      o.perBattery[0].price[product][0] = p;
      best = std::max(best, gridProfit(m, o));
    }
  return best;
}

}  // namespace

TEST_CASE("toy bilevel matches the offer-grid oracle: energy withholding",
          "[bilevel]") {
  // load below the battery's discharge limit: the strategic battery can set
  // the price; continuous optimum prices at the generator's offer
  SystemModel m = toySystem(/*load=*/25, /*genCap=*/100, /*genPrice=*/10);
  UlpSpec spec;
  spec.energy = true;
  spec.dayEndEquality = false;
  double oracle = gridOracle(m, kEnergyDischarge, 30, 20, 1.0, 1.0);
  auto rep = solveBilevel(m, spec);
  REQUIRE(rep.status == SolveStatus::Optimal);
  double cellRes = 1.0 * 25 + 1.0 * 20;  // price step x qty + qty step x price
  REQUIRE(rep.objective >= oracle - 1e-4);
  REQUIRE(rep.objective <= oracle + cellRes + 1e-4);
  // known closed form here: sell the whole load at the marginal unit's price
  REQUIRE(rep.objective == Catch::Approx(250.0).margin(1e-3));
  REQUIRE(rep.complementarityResidual <= 1e-6);
  REQUIRE(rep.objectiveDecompositionError <= 1e-6);
}

TEST_CASE("toy bilevel matches the offer-grid oracle: reserve pricing",
          "[bilevel]") {
  SystemModel m = toySystem(/*load=*/50, /*genCap=*/200, /*genPrice=*/20,
                            /*reserveReq=*/10);
  UlpSpec spec;
  spec.energy = false;
  spec.reserve = true;
  spec.dayEndEquality = false;
  double oracle = gridOracle(m, kReserve, 30, 10, 1.0, 0.5);
  auto rep = solveBilevel(m, spec);
  REQUIRE(rep.status == SolveStatus::Optimal);
  double cellRes = 0.5 * 10 + 1.0 * 10;
  REQUIRE(rep.objective >= oracle - 1e-4);
  REQUIRE(rep.objective <= oracle + cellRes + 1e-4);
  // undercuts the generator's 3 $/MWh reserve offer while marginal
  REQUIRE(rep.objective == Catch::Approx(30.0).margin(1e-3));
}

TEST_CASE("day-end equality kills single-interval arbitrage", "[bilevel]") {
  SystemModel m = toySystem(40, 100, 15);
  UlpSpec spec;
  spec.energy = true;
  spec.dayEndEquality = true;
  auto rep = solveBilevel(m, spec);
  REQUIRE(rep.status == SolveStatus::Optimal);
  REQUIRE(rep.objective <= 1e-6);
  REQUIRE(rep.objective >= -1e-6);
}

TEST_CASE("fixing incumbent offers reproduces the embedded clearing",
          "[bilevel]") {
  SystemModel m = toySystem(25, 100, 10, 0.0, 2);
  m.buses[0].loadProfile[1] = 60.0;
  UlpSpec spec;
  spec.energy = true;
  spec.dayEndEquality = false;
  auto rep = solveBilevel(m, spec);
  REQUIRE(rep.status == SolveStatus::Optimal);
  if (!rep.degenerateClearing) {
    REQUIRE(rep.roundTripScheduleDelta <= 1e-6);
    REQUIRE(rep.roundTripPriceDelta <= 1e-6);
  }
  REQUIRE(rep.objectiveDecompositionError <= 1e-6);
}

TEST_CASE("price-taker limit: a negligible battery cannot move prices",
          "[bilevel]") {
  SystemModel m = toySystem(80, 200, 12, 0.0, 2);
  m.buses[0].loadProfile[1] = 120.0;
  Generator g2 = m.generators[0];
  g2.id = "g2";
  g2.pMax = 100;
  g2.energyPriceOffer.assign(2, 30.0);
  g2.reservePriceOffer.assign(2, 4.5);
  g2.regCapPriceOffer.assign(2, 12.0);
  g2.regMileagePriceOffer.assign(2, 2.1);
  m.generators.push_back(g2);
  m.batteries[0].chargeLimit = 0.5;
  m.batteries[0].dischargeLimit = 0.5;
  m.batteries[0].energyCapacity = 2;
  m.batteries[0].socMin = 0.2;
  m.batteries[0].socMax = 1.8;
  m.batteries[0].socInitial = 1.0;

  UlpSpec spec;
  spec.energy = true;
  spec.dayEndEquality = false;

  // oracle: price-taker LP against the zero-offer prices
  auto base = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
  REQUIRE(base.status == SolveStatus::Optimal);
  double cap = 2.0 * 30.0;
  auto resp = detail::batteryResponse(m, spec, base.result, cap);
  REQUIRE(resp.ok);
  double oracleProfit = gridProfit(m, resp.offers);

  auto rep = solveBilevel(m, spec);
  REQUIRE(rep.status == SolveStatus::Optimal);
  REQUIRE(rep.objective == Catch::Approx(oracleProfit).margin(1e-3));
}

TEST_CASE("market monotonicity and degradation dominance on a toy horizon",
          "[bilevel]") {
  SystemModel m = toySystem(60, 200, 10, 5.0, 4);
  // a price spread across intervals so arbitrage has value
  m.generators[0].energyPriceOffer = {10, 10, 40, 40};
  applyDefaultOffers(m, {}, false);
  m.buses[0].loadProfile = {60, 60, 90, 90};

  UlpSpec eOnly;
  eOnly.energy = true;
  auto repE = solveBilevel(m, eOnly);
  REQUIRE(repE.status == SolveStatus::Optimal);

  UlpSpec eRs = eOnly;
  eRs.reserve = true;
  BilevelOptions seed;
  seed.warmOffers.push_back(repE.offers);
  auto repERs = solveBilevel(m, eRs, seed);
  REQUIRE(repERs.status == SolveStatus::Optimal);
  REQUIRE(repERs.objective >= repE.objective - 1e-6);

  UlpSpec eDeg = eOnly;
  eDeg.degradationEnabled = true;
  auto repDeg = solveBilevel(m, eDeg);
  REQUIRE(repDeg.status == SolveStatus::Optimal);
  REQUIRE(repDeg.objective <= repE.objective + 1e-6);
  REQUIRE(repDeg.totalDegradationCost >= -1e-9);
}

TEST_CASE("degenerate battery with zero capacity stays idle", "[bilevel]") {
  SystemModel m = toySystem(40, 100, 15);
  m.batteries[0].chargeLimit = 1e-3;
  m.batteries[0].dischargeLimit = 1e-3;
  m.batteries[0].energyCapacity = 1e-3;
  m.batteries[0].socMin = 0;
  m.batteries[0].socMax = 1e-3;
  m.batteries[0].socInitial = 5e-4;
  UlpSpec spec;
  spec.energy = true;
  spec.dayEndEquality = false;
  auto rep = solveBilevel(m, spec);
  REQUIRE(rep.status == SolveStatus::Optimal);
  REQUIRE(std::fabs(rep.objective) <= 0.1);
}

TEST_CASE("empty market spec is rejected", "[bilevel]") {
  SystemModel m = toySystem(40, 100, 15);
  UlpSpec spec;
  spec.energy = false;
  REQUIRE_THROWS_AS(reformulateKkt(m, spec), std::invalid_argument);
}

TEST_CASE("MILP export lists binaries", "[bilevel]") {
  SystemModel m = toySystem(25, 100, 10);
  UlpSpec spec;
  spec.dayEndEquality = false;
  MilpProgram mp = reformulateKkt(m, spec);
  REQUIRE(!mp.binaries.empty());
  REQUIRE(mp.pairs.size() >= mp.binaries.size());
  std::ostringstream os;
  mp.lp.writeLpText(os, &mp.binaries);
  REQUIRE(os.str().find("Binary") != std::string::npos);
}
