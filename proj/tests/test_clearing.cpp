#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bessbid/clearing.hpp"
#include "bessbid/dataset.hpp"

using namespace bessbid;

namespace {

SystemModel singleBus(double load, int T = 1, double dt = 1.0) {
  SystemModel m;
  m.name = "toy";
  m.horizon = {T, dt, 4};
  Bus b;
  b.id = "b1";
  b.loadProfile.assign(T, load);
  m.buses.push_back(b);
  m.requirements.reserveReq.assign(T, 0.0);
  m.requirements.regCapReq.assign(T, 0.0);
  m.requirements.regMileageReq.assign(T, 0.0);
  return m;
}

Generator makeGen(const std::string& id, const std::string& bus, double pMax,
                  double price, int T, bool anc = false) {
  Generator g;
  g.id = id;
  g.bus = bus;
  g.pMax = pMax;
  g.rampLimit = pMax;
  g.energyPriceOffer.assign(T, price);
  g.reservePriceOffer.assign(T, 0.15 * price);
  g.regCapPriceOffer.assign(T, 0.4 * price);
  g.regMileagePriceOffer.assign(T, 0.07 * price);
  g.perfScore = 0.95;
  g.providesReserve = anc;
  g.providesRegulation = anc;
  return g;
}

}  // namespace

TEST_CASE("single marginal unit sets the LMP", "[clearing]") {
  SystemModel m = singleBus(50.0);
  m.generators.push_back(makeGen("g1", "b1", 100, 10, 1));
  auto lp = buildClearingLP(m, OfferSet::zeros(m));
  auto out = solveClearing(lp, m);
  REQUIRE(out.status == SolveStatus::Optimal);
  REQUIRE(out.result.genSchedule[0][kGenEnergy][0] == Catch::Approx(50.0));
  REQUIRE(out.result.lmp[0][0] == Catch::Approx(10.0));
  REQUIRE(out.result.dualityGapRel < 1e-6);
}

TEST_CASE("merit order: expensive unit marginal when cheap unit exhausted",
          "[clearing]") {
  SystemModel m = singleBus(150.0);
  m.generators.push_back(makeGen("cheap", "b1", 100, 10, 1));
  m.generators.push_back(makeGen("dear", "b1", 100, 20, 1));
  auto out = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
  REQUIRE(out.status == SolveStatus::Optimal);
  REQUIRE(out.result.genSchedule[0][kGenEnergy][0] == Catch::Approx(100.0));
  REQUIRE(out.result.genSchedule[1][kGenEnergy][0] == Catch::Approx(50.0));
  REQUIRE(out.result.lmp[0][0] == Catch::Approx(20.0));
}

TEST_CASE("congested line separates locational prices", "[clearing]") {
  SystemModel m = singleBus(0.0);
  m.buses[0].loadProfile[0] = 0.0;
  Bus b2;
  b2.id = "b2";
  b2.loadProfile.assign(1, 50.0);
  m.buses.push_back(b2);
  TransmissionLine l;
  l.id = "l1";
  l.fromBus = "b1";
  l.toBus = "b2";
  l.reactance = 0.1;
  l.thermalLimit = 10.0;
  m.lines.push_back(l);
  m.generators.push_back(makeGen("cheap", "b1", 100, 10, 1));
  m.generators.push_back(makeGen("local", "b2", 100, 30, 1));
  auto out = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
  REQUIRE(out.status == SolveStatus::Optimal);
  REQUIRE(out.result.lineFlow[0][0] == Catch::Approx(10.0));
  REQUIRE(out.result.lmp[0][0] == Catch::Approx(10.0));
  REQUIRE(out.result.lmp[1][0] == Catch::Approx(30.0));
  REQUIRE(out.result.genSchedule[1][kGenEnergy][0] == Catch::Approx(40.0));
}

TEST_CASE("single reserve provider sets the reserve MCP from its offer",
          "[clearing]") {
  SystemModel m = singleBus(50.0);
  m.requirements.reserveReq[0] = 10.0;
  m.generators.push_back(makeGen("g1", "b1", 200, 20, 1, /*anc=*/true));
  auto out = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
  REQUIRE(out.status == SolveStatus::Optimal);
  REQUIRE(out.result.genSchedule[0][kGenReserve][0] == Catch::Approx(10.0));
  REQUIRE(out.result.mcpReserve[0] == Catch::Approx(3.0));  // 0.15 x 20
}

TEST_CASE("battery revenue signs follow the buy/sell direction", "[clearing]") {
  SystemModel m = singleBus(100.0, 1, 0.25);
  m.generators.push_back(makeGen("g1", "b1", 400, 40, 1));
  m.batteries.push_back(tableOneBattery("b1"));
  OfferSet offers = OfferSet::zeros(m);
  offers.perBattery[0].quantity[kEnergyCharge][0] = 50.0;
  offers.perBattery[0].price[kEnergyCharge][0] = 99.0;  // buys at any price
  auto out = solveClearing(buildClearingLP(m, m.batteries.empty() ? offers : offers), m);
  REQUIRE(out.status == SolveStatus::Optimal);
  REQUIRE(out.result.battSchedule[0][kEnergyCharge][0] == Catch::Approx(50.0));
  REQUIRE(out.result.lmp[0][0] == Catch::Approx(40.0));
  RevenueBreakdown rev = computeRevenue(out.result, m, "bess1");
  REQUIRE(rev.energy[0] == Catch::Approx(-500.0));  // buying 50 MW for 15 min at 40

  // discharge direction: sell 50 MW at the LMP
  OfferSet sell = OfferSet::zeros(m);
  sell.perBattery[0].quantity[kEnergyDischarge][0] = 50.0;
  sell.perBattery[0].price[kEnergyDischarge][0] = 0.0;
  auto out2 = solveClearing(buildClearingLP(m, sell), m);
  REQUIRE(out2.status == SolveStatus::Optimal);
  RevenueBreakdown rev2 = computeRevenue(out2.result, m, "bess1");
  REQUIRE(rev2.energy[0] == Catch::Approx(500.0));
}

TEST_CASE("battery regulation capacity revenue", "[clearing]") {
  SystemModel m = singleBus(50.0, 1, 0.25);
  m.generators.push_back(makeGen("g1", "b1", 200, 20, 1, true));
  m.batteries.push_back(tableOneBattery("b1"));
  m.requirements.regCapReq[0] = 50.0;
  m.requirements.regMileageReq[0] = 0.0;
  OfferSet offers = OfferSet::zeros(m);
  offers.perBattery[0].quantity[kRegCap][0] = 50.0;
  offers.perBattery[0].price[kRegCap][0] = 8.0;
  auto out = solveClearing(buildClearingLP(m, offers), m);
  REQUIRE(out.status == SolveStatus::Optimal);
  REQUIRE(out.result.battSchedule[0][kRegCap][0] == Catch::Approx(50.0));
  REQUIRE(out.result.mcpRegCap[0] == Catch::Approx(8.0));
  RevenueBreakdown rev = computeRevenue(out.result, m, "bess1");
  REQUIRE(rev.regCap[0] == Catch::Approx(100.0));
}

TEST_CASE("no simultaneous limit violation and SOC tracking", "[clearing]") {
  SystemModel m = singleBus(100.0, 4, 0.25);
  m.generators.push_back(makeGen("g1", "b1", 400, 30, 4, true));
  m.batteries.push_back(tableOneBattery("b1"));
  m.requirements.reserveReq.assign(4, 20.0);
  OfferSet offers = OfferSet::zeros(m);
  for (int t = 0; t < 4; ++t) {
    offers.perBattery[0].quantity[kEnergyDischarge][t] = 50.0;
    offers.perBattery[0].quantity[kReserve][t] = 50.0;
    offers.perBattery[0].price[kEnergyDischarge][t] = 0.0;
    offers.perBattery[0].price[kReserve][t] = 0.0;
  }
  auto out = solveClearing(buildClearingLP(m, offers), m);
  REQUIRE(out.status == SolveStatus::Optimal);
  for (int t = 0; t < 4; ++t) {
    double dis = out.result.battSchedule[0][kEnergyDischarge][t];
    double chg = out.result.battSchedule[0][kEnergyCharge][t];
    double rs = out.result.battSchedule[0][kReserve][t];
    REQUIRE(dis - chg + rs <= 50.0 + 1e-6);
    // SOC recursion holds
    double prev = t == 0 ? 90.0 : out.result.batterySoc[0][t - 1];
    double expect = prev + 0.95 * 0.25 * chg - 0.25 / 0.95 * dis;
    REQUIRE(out.result.batterySoc[0][t] == Catch::Approx(expect).margin(1e-6));
  }
}

TEST_CASE("infeasible requirements report the offending group", "[clearing]") {
  SystemModel m = singleBus(50.0);
  m.generators.push_back(makeGen("g1", "b1", 100, 10, 1));  // no ancillary
  m.requirements.reserveReq[0] = 10.0;                      // nobody can supply
  auto out = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
  REQUIRE(out.status == SolveStatus::Infeasible);
  bool reqGroup = false;
  for (RowGroup g : out.offendingGroups)
    reqGroup = reqGroup || g == RowGroup::Requirements;
  REQUIRE(reqGroup);
}

TEST_CASE("merit order forms a prefix on a single bus", "[clearing]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int nGen = 3 + static_cast<int>(rng() % 6);
    SystemModel m = singleBus(0.0);
    double totalCap = 0;
    for (int g = 0; g < nGen; ++g) {
      double cap = 20 + static_cast<double>(rng() % 100);
      double price = 5 + static_cast<double>(rng() % 200) / 3.0;
      m.generators.push_back(makeGen("g" + std::to_string(g), "b1", cap, price, 1));
      totalCap += cap;
    }
    m.buses[0].loadProfile[0] = totalCap * 0.6;
    auto out = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
    REQUIRE(out.status == SolveStatus::Optimal);
    std::vector<int> order(nGen);
    for (int g = 0; g < nGen; ++g) order[g] = g;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return m.generators[a].energyPriceOffer[0] < m.generators[b].energyPriceOffer[0];
    });
    bool partialSeen = false;
    for (int g : order) {
      double x = out.result.genSchedule[g][kGenEnergy][0];
      double cap = m.generators[g].pMax;
      if (partialSeen) {
        REQUIRE(x <= 1e-6);
      } else if (x < cap - 1e-6) {
        partialSeen = true;
      }
    }
  }
}

TEST_CASE("strong duality and LMP perturbation on random instances",
          "[clearing]") {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    int T = 4;
    SystemModel m = singleBus(0.0, T, 0.25);
    Bus b2;
    b2.id = "b2";
    b2.loadProfile.assign(T, 0.0);
    m.buses.push_back(b2);
    TransmissionLine l;
    l.id = "l1";
    l.fromBus = "b1";
    l.toBus = "b2";
    l.reactance = 0.08;
    l.thermalLimit = 300;
    m.lines.push_back(l);
    int nGen = 4 + static_cast<int>(rng() % 4);
    double cap = 0;
    for (int g = 0; g < nGen; ++g) {
      double pmax = 50 + static_cast<double>(rng() % 150);
      double price = 8 + static_cast<double>(rng() % 300) / 4.0;
      m.generators.push_back(makeGen("g" + std::to_string(g),
                                     g % 2 ? "b2" : "b1", pmax, price, T, g < 3));
      cap += pmax;
    }
    for (int t = 0; t < T; ++t) {
      double load = cap * (0.3 + 0.4 * (static_cast<double>(rng() % 100) / 100.0));
      m.buses[0].loadProfile[t] = 0.6 * load;
      m.buses[1].loadProfile[t] = 0.4 * load;
      m.requirements.reserveReq[t] = 0.05 * load;
    }
    auto out = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
    REQUIRE(out.status == SolveStatus::Optimal);
    REQUIRE(out.result.dualityGapRel <= 1e-6);

    // two-sided perturbation of the load at bus 1, interval 2; assert only
    // where the directional derivatives agree (non-degenerate optimum)
    const double eps = 1e-3;
    SystemModel mp = m, mm = m;
    mp.buses[0].loadProfile[2] += eps;
    mm.buses[0].loadProfile[2] -= eps;
    auto outP = solveClearing(buildClearingLP(mp, OfferSet::zeros(mp)), mp);
    auto outM = solveClearing(buildClearingLP(mm, OfferSet::zeros(mm)), mm);
    REQUIRE(outP.status == SolveStatus::Optimal);
    REQUIRE(outM.status == SolveStatus::Optimal);
    double fdPlus = (outP.result.objective - out.result.objective) / eps;
    double fdMinus = (out.result.objective - outM.result.objective) / eps;
    if (std::fabs(fdPlus - fdMinus) > 1e-6) continue;  // kink: degenerate here
    double dual = out.result.lmp[0][2] * 0.25;  // row dual = LMP x interval length
    REQUIRE(std::fabs(fdPlus - dual) <= 1e-3);
    ++checked;
  }
  REQUIRE(checked >= 3);
}

TEST_CASE("reduced bundled system clears with zero battery offers",
          "[clearing]") {
  SystemModel m = makeReducedSystem();
  auto out = solveClearing(buildClearingLP(m, OfferSet::zeros(m)), m);
  REQUIRE(out.status == SolveStatus::Optimal);
  REQUIRE(out.result.dualityGapRel < 1e-6);
  // valley and peak price levels follow the merit-order ladder (the peak
  // marginal unit is set by energy plus ancillary commitment)
  REQUIRE(out.result.lmp[0][2] == Catch::Approx(26.0).margin(1e-4));
  REQUIRE(out.result.lmp[0][13] == Catch::Approx(50.0).margin(1e-4));
}

TEST_CASE("LP export emits CPLEX LP text", "[clearing]") {
  SystemModel m = singleBus(50.0);
  m.generators.push_back(makeGen("g1", "b1", 100, 10, 1));
  auto lp = buildClearingLP(m, OfferSet::zeros(m));
  std::ostringstream os;
  lp.lp.writeLpText(os);
  std::string text = os.str();
  REQUIRE(text.find("Minimize") != std::string::npos);
  REQUIRE(text.find("balance_b1_0") != std::string::npos);
  REQUIRE(text.find("End") != std::string::npos);
}
