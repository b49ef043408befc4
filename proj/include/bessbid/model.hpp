// Domain types for the market simulation: network, participants, offers, and
// clearing outcomes, plus whole-model validation.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bessbid {

// Market products a battery can offer. Energy is split into separate charge
// (buy) and discharge (sell) offers; regulation pays capacity and mileage
// separately (pay-as-performance).
enum Product : int {
  kEnergyCharge = 0,
  kEnergyDischarge = 1,
  kReserve = 2,
  kRegCap = 3,
  kRegMileage = 4,
};
constexpr int kNumProducts = 5;
inline const char* productName(int p) {
  static const char* names[] = {"energy_charge", "energy_discharge", "reserve",
                                "reg_capacity", "reg_mileage"};
  return names[p];
}

struct Horizon {
  int numIntervals = 96;
  double intervalLength = 0.25;   // hours per market clearing interval
  int agcStepsPerInterval = 45;   // 20 s steps inside a 15 min interval

  double totalHours() const { return numIntervals * intervalLength; }
  double stepHours() const { return intervalLength / agcStepsPerInterval; }
  // market intervals covering clock hour h (1-based)
  int firstIntervalOfHour(int h) const {
    return static_cast<int>((h - 1) / intervalLength);
  }
};

struct Bus {
  std::string id;
  std::vector<double> loadProfile;  // MW per interval
};

struct TransmissionLine {
  std::string id;
  std::string fromBus, toBus;
  double reactance = 0.1;     // per-unit
  double thermalLimit = 100;  // MW
};

struct Generator {
  std::string id;
  std::string bus;
  double pMin = 0, pMax = 0;   // MW
  double rampLimit = 0;        // MW per interval
  std::vector<double> energyPriceOffer;      // $/MWh per interval
  std::vector<double> reservePriceOffer;     // empty -> derived on ingest
  std::vector<double> regCapPriceOffer;
  std::vector<double> regMileagePriceOffer;
  double perfScore = 1.0;      // historical regulation performance, [0,1]
  bool providesReserve = true;
  bool providesRegulation = true;
};

struct BatteryUnit {
  std::string id;
  std::string bus;
  double chargeLimit = 50, dischargeLimit = 50;  // MW
  double energyCapacity = 200;                   // MWh
  double socMin = 20, socMax = 180, socInitial = 90;  // MWh
  double efficiencyCharge = 0.95, efficiencyDischarge = 0.95;
  double cycleLifeRef = 6000;   // cycles at the reference depth
  double cycleDepthRef = 0.8;   // fraction of capacity
  double replacementCost = 200000;  // $ per MWh of capacity
  double perfScore = 0.95;
};

struct SystemRequirements {
  std::vector<double> reserveReq;     // MW per interval
  std::vector<double> regCapReq;      // MW per interval
  std::vector<double> regMileageReq;  // MW of setpoint travel per interval
};

struct SystemModel {
  std::string name;
  Horizon horizon;
  std::vector<Bus> buses;
  std::vector<TransmissionLine> lines;
  std::vector<Generator> generators;
  std::vector<BatteryUnit> batteries;
  SystemRequirements requirements;
  double mileageMultiplier = 1.5;  // assigned mileage cap per MW of reg capacity

  int busIndex(const std::string& id) const {
    for (size_t i = 0; i < buses.size(); ++i)
      if (buses[i].id == id) return static_cast<int>(i);
    return -1;
  }
  int batteryIndex(const std::string& id) const {
    for (size_t i = 0; i < batteries.size(); ++i)
      if (batteries[i].id == id) return static_cast<int>(i);
    return -1;
  }
  double totalLoad(int t) const {
    double s = 0;
    for (const auto& b : buses) s += b.loadProfile[t];
    return s;
  }
};

// Quantity and price offers of every battery for every product and interval.
struct BatteryOffers {
  std::array<std::vector<double>, kNumProducts> quantity;  // MW per interval
  std::array<std::vector<double>, kNumProducts> price;     // $/MWh per interval
};

struct OfferSet {
  std::vector<BatteryOffers> perBattery;

  static OfferSet zeros(const SystemModel& m) {
    OfferSet o;
    o.perBattery.resize(m.batteries.size());
    for (auto& b : o.perBattery)
      for (int p = 0; p < kNumProducts; ++p) {
        b.quantity[p].assign(m.horizon.numIntervals, 0.0);
        b.price[p].assign(m.horizon.numIntervals, 0.0);
      }
    return o;
  }
};

// Cost components of the clearing objective, split by participant class and
// product (battery vs. other generating units).
struct ObjectiveTerms {
  double battEnergy = 0, battReserve = 0, battRegCap = 0, battRegMileage = 0;
  double genEnergy = 0, genReserve = 0, genRegCap = 0, genRegMileage = 0;
  double total() const {
    return battEnergy + battReserve + battRegCap + battRegMileage + genEnergy +
           genReserve + genRegCap + genRegMileage;
  }
};

// Generator schedule rows: energy, reserve, reg capacity, credited mileage.
enum GenProduct : int { kGenEnergy = 0, kGenReserve = 1, kGenRegCap = 2, kGenRegMileage = 3 };

struct ClearingResult {
  int numIntervals = 0;
  std::vector<std::array<std::vector<double>, 4>> genSchedule;   // [gen][prod][t]
  std::vector<std::array<std::vector<double>, 5>> battSchedule;  // [batt][Product][t]
  std::vector<std::vector<double>> batterySoc;                   // [batt][t], end of t
  std::vector<std::vector<double>> lmp;                          // [bus][t] $/MWh
  std::vector<double> mcpReserve, mcpRegCap, mcpRegMileage;      // [t] $/MWh
  std::vector<std::vector<double>> lineFlow;                     // [line][t] MW
  ObjectiveTerms objectiveTerms;
  double objective = 0;
  double dualityGapRel = 0;
  bool degenerate = false;
  long iterations = 0;
};

struct RevenueBreakdown {
  std::vector<double> energy, reserve, regCap, regMileage, degradation;  // $ per interval

  double total(const std::vector<double>& v) const {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  double totalEnergy() const { return total(energy); }
  double totalReserve() const { return total(reserve); }
  double totalRegCap() const { return total(regCap); }
  double totalRegMileage() const { return total(regMileage); }
  double totalDegradation() const { return total(degradation); }
  double profit() const {
    return totalEnergy() + totalReserve() + totalRegCap() + totalRegMileage() -
           totalDegradation();
  }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationReport validateSystem(const SystemModel& m) {
  ValidationReport rep;
  auto bad = [&](const std::string& s) { rep.violations.push_back(s); };
  const int T = m.horizon.numIntervals;

  if (T < 1) bad("horizon numIntervals must be >= 1");
  if (!(m.horizon.intervalLength > 0)) bad("horizon intervalLength must be > 0");
  if (m.horizon.agcStepsPerInterval < 1) bad("horizon agcStepsPerInterval must be >= 1");
  double days = m.horizon.totalHours() / 24.0;
  if (std::fabs(days - std::round(days)) > 1e-9)
    bad("horizon does not cover a whole number of days (day-end SOC equality)");

  if (m.buses.empty()) bad("no buses");
  for (size_t i = 0; i < m.buses.size(); ++i) {
    const Bus& b = m.buses[i];
    if (static_cast<int>(b.loadProfile.size()) != T)
      bad("bus " + b.id + ": load profile length mismatch");
    for (double v : b.loadProfile)
      if (v < 0) {
        bad("bus " + b.id + ": negative load");
        break;
      }
    for (size_t k = i + 1; k < m.buses.size(); ++k)
      if (m.buses[k].id == b.id) bad("duplicate bus id " + b.id);
  }

  for (const auto& l : m.lines) {
    if (l.reactance <= 0) bad("line " + l.id + ": reactance must be > 0");
    if (l.thermalLimit <= 0) bad("line " + l.id + ": thermalLimit must be > 0");
    if (l.fromBus == l.toBus) bad("line " + l.id + ": fromBus equals toBus");
    if (m.busIndex(l.fromBus) < 0) bad("line " + l.id + ": unknown fromBus");
    if (m.busIndex(l.toBus) < 0) bad("line " + l.id + ": unknown toBus");
  }

  // connectivity (needed by the B-theta network model)
  if (!m.buses.empty()) {
    std::vector<char> seen(m.buses.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (const auto& l : m.lines) {
        int f = m.busIndex(l.fromBus), t = m.busIndex(l.toBus);
        if (f == b && t >= 0 && !seen[t]) seen[t] = 1, stack.push_back(t);
        if (t == b && f >= 0 && !seen[f]) seen[f] = 1, stack.push_back(f);
      }
    }
    for (size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) {
        bad("network is not connected (bus " + m.buses[i].id + " unreachable)");
        break;
      }
  }

  for (const auto& g : m.generators) {
    if (m.busIndex(g.bus) < 0) bad("generator " + g.id + ": unknown bus");
    if (g.pMin < 0 || g.pMin > g.pMax) bad("generator " + g.id + ": need 0 <= pMin <= pMax");
    if (g.rampLimit <= 0) bad("generator " + g.id + ": rampLimit must be > 0");
    if (g.perfScore < 0 || g.perfScore > 1) bad("generator " + g.id + ": perfScore outside [0,1]");
    auto checkOffers = [&](const std::vector<double>& v, const char* what, bool required) {
      if (v.empty() && !required) return;
      if (static_cast<int>(v.size()) != T) {
        bad("generator " + g.id + ": " + what + " offer length mismatch");
        return;
      }
      for (double x : v)
        if (x < 0) {
          bad("generator " + g.id + ": negative " + what + " offer");
          break;
        }
    };
    checkOffers(g.energyPriceOffer, "energy", true);
    checkOffers(g.reservePriceOffer, "reserve", false);
    checkOffers(g.regCapPriceOffer, "regCap", false);
    checkOffers(g.regMileagePriceOffer, "regMileage", false);
  }

  for (const auto& b : m.batteries) {
    if (m.busIndex(b.bus) < 0) bad("battery " + b.id + ": unknown bus");
    if (b.chargeLimit <= 0 || b.dischargeLimit <= 0)
      bad("battery " + b.id + ": charge/discharge limits must be > 0");
    if (b.socInitial < b.socMin) bad("battery " + b.id + ": socInitial below socMin");
    if (b.socInitial > b.socMax) bad("battery " + b.id + ": socInitial above socMax");
    if (b.socMin > b.socMax) bad("battery " + b.id + ": socMin above socMax");
    if (b.socMax > b.energyCapacity) bad("battery " + b.id + ": socMax above energyCapacity");
    if (!(b.efficiencyCharge > 0 && b.efficiencyCharge <= 1))
      bad("battery " + b.id + ": efficiencyCharge outside (0,1]");
    if (!(b.efficiencyDischarge > 0 && b.efficiencyDischarge <= 1))
      bad("battery " + b.id + ": efficiencyDischarge outside (0,1]");
    if (!(b.cycleLifeRef > 0)) bad("battery " + b.id + ": cycleLifeRef must be > 0");
    if (!(b.cycleDepthRef > 0 && b.cycleDepthRef <= 1))
      bad("battery " + b.id + ": cycleDepthRef outside (0,1]");
    if (b.perfScore < 0 || b.perfScore > 1) bad("battery " + b.id + ": perfScore outside [0,1]");
  }

  auto checkReq = [&](const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != T) {
      bad(std::string(what) + " requirement length mismatch");
      return;
    }
    for (double x : v)
      if (x < 0) {
        bad(std::string("negative ") + what + " requirement");
        break;
      }
  };
  checkReq(m.requirements.reserveReq, "reserve");
  checkReq(m.requirements.regCapReq, "regCap");
  checkReq(m.requirements.regMileageReq, "regMileage");
  if (m.mileageMultiplier <= 0) bad("mileageMultiplier must be > 0");
  return rep;
}

struct OfferMultipliers {
  double reserve = 0.15;
  double regCap = 0.4;
  double regMileage = 0.07;
};

// Derive generator ancillary price offers from their energy offers. With
// onlyMissing, series already present in the input are kept.
inline void applyDefaultOffers(SystemModel& m, const OfferMultipliers& mult,
                               bool onlyMissing = true) {
  if (mult.reserve < 0 || mult.regCap < 0 || mult.regMileage < 0)
    throw std::invalid_argument("offer multipliers must be nonnegative");
  for (auto& g : m.generators) {
    auto derive = [&](std::vector<double>& dst, double f) {
      if (onlyMissing && !dst.empty()) return;
      dst.resize(g.energyPriceOffer.size());
      for (size_t t = 0; t < dst.size(); ++t) dst[t] = f * g.energyPriceOffer[t];
    };
    derive(g.reservePriceOffer, mult.reserve);
    derive(g.regCapPriceOffer, mult.regCap);
    derive(g.regMileagePriceOffer, mult.regMileage);
  }
}

}  // namespace bessbid
