// System definition file ingestion and emission (JSON document whose field
// names mirror the model types), with field-level diagnostics.
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bessbid/model.hpp"

namespace bessbid {

using nlohmann::json;

struct IngestError : std::runtime_error {
  explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

inline json toJson(const SystemModel& m) {
  json j;
  j["name"] = m.name;
  j["horizon"] = {{"numIntervals", m.horizon.numIntervals},
                  {"intervalLength", m.horizon.intervalLength},
                  {"agcStepsPerInterval", m.horizon.agcStepsPerInterval}};
  j["mileageMultiplier"] = m.mileageMultiplier;
  j["buses"] = json::array();
  for (const auto& b : m.buses)
    j["buses"].push_back({{"id", b.id}, {"loadProfile", b.loadProfile}});
  j["lines"] = json::array();
  for (const auto& l : m.lines)
    j["lines"].push_back({{"id", l.id},
                          {"fromBus", l.fromBus},
                          {"toBus", l.toBus},
                          {"reactance", l.reactance},
                          {"thermalLimit", l.thermalLimit}});
  j["generators"] = json::array();
  for (const auto& g : m.generators) {
    json je = {{"id", g.id},
               {"bus", g.bus},
               {"pMin", g.pMin},
               {"pMax", g.pMax},
               {"rampLimit", g.rampLimit},
               {"energyPriceOffer", g.energyPriceOffer},
               {"perfScore", g.perfScore},
               {"providesReserve", g.providesReserve},
               {"providesRegulation", g.providesRegulation}};
    if (!g.reservePriceOffer.empty()) je["reservePriceOffer"] = g.reservePriceOffer;
    if (!g.regCapPriceOffer.empty()) je["regCapPriceOffer"] = g.regCapPriceOffer;
    if (!g.regMileagePriceOffer.empty())
      je["regMileagePriceOffer"] = g.regMileagePriceOffer;
    j["generators"].push_back(je);
  }
  j["batteries"] = json::array();
  for (const auto& b : m.batteries)
    j["batteries"].push_back({{"id", b.id},
                              {"bus", b.bus},
                              {"chargeLimit", b.chargeLimit},
                              {"dischargeLimit", b.dischargeLimit},
                              {"energyCapacity", b.energyCapacity},
                              {"socMin", b.socMin},
                              {"socMax", b.socMax},
                              {"socInitial", b.socInitial},
                              {"efficiencyCharge", b.efficiencyCharge},
                              {"efficiencyDischarge", b.efficiencyDischarge},
                              {"cycleLifeRef", b.cycleLifeRef},
                              {"cycleDepthRef", b.cycleDepthRef},
                              {"replacementCost", b.replacementCost},
                              {"perfScore", b.perfScore}});
  j["requirements"] = {{"reserveReq", m.requirements.reserveReq},
                       {"regCapReq", m.requirements.regCapReq},
                       {"regMileageReq", m.requirements.regMileageReq}};
  return j;
}

inline SystemModel modelFromJson(const json& j) {
  SystemModel m;
  try {
    m.name = j.value("name", "unnamed");
    const auto& h = j.at("horizon");
    m.horizon.numIntervals = h.at("numIntervals").get<int>();
    m.horizon.intervalLength = h.at("intervalLength").get<double>();
    m.horizon.agcStepsPerInterval = h.value("agcStepsPerInterval", 45);
    m.mileageMultiplier = j.value("mileageMultiplier", 1.5);
    for (const auto& jb : j.at("buses")) {
      Bus b;
      b.id = jb.at("id").get<std::string>();
      b.loadProfile = jb.at("loadProfile").get<std::vector<double>>();
      m.buses.push_back(std::move(b));
    }
    for (const auto& jl : j.value("lines", json::array())) {
      TransmissionLine l;
      l.id = jl.at("id").get<std::string>();
      l.fromBus = jl.at("fromBus").get<std::string>();
      l.toBus = jl.at("toBus").get<std::string>();
      l.reactance = jl.at("reactance").get<double>();
      l.thermalLimit = jl.at("thermalLimit").get<double>();
      m.lines.push_back(std::move(l));
    }
    for (const auto& jg : j.at("generators")) {
      Generator g;
      g.id = jg.at("id").get<std::string>();
      g.bus = jg.at("bus").get<std::string>();
      g.pMin = jg.value("pMin", 0.0);
      g.pMax = jg.at("pMax").get<double>();
      g.rampLimit = jg.value("rampLimit", g.pMax);
      g.energyPriceOffer = jg.at("energyPriceOffer").get<std::vector<double>>();
      if (jg.contains("reservePriceOffer"))
        g.reservePriceOffer = jg["reservePriceOffer"].get<std::vector<double>>();
      if (jg.contains("regCapPriceOffer"))
        g.regCapPriceOffer = jg["regCapPriceOffer"].get<std::vector<double>>();
      if (jg.contains("regMileagePriceOffer"))
        g.regMileagePriceOffer = jg["regMileagePriceOffer"].get<std::vector<double>>();
      g.perfScore = jg.value("perfScore", 1.0);
      g.providesReserve = jg.value("providesReserve", true);
      g.providesRegulation = jg.value("providesRegulation", true);
      m.generators.push_back(std::move(g));
    }
    for (const auto& jb : j.value("batteries", json::array())) {
      BatteryUnit b;
      b.id = jb.at("id").get<std::string>();
      b.bus = jb.at("bus").get<std::string>();
      b.chargeLimit = jb.at("chargeLimit").get<double>();
      b.dischargeLimit = jb.at("dischargeLimit").get<double>();
      b.energyCapacity = jb.at("energyCapacity").get<double>();
      b.socMin = jb.at("socMin").get<double>();
      b.socMax = jb.at("socMax").get<double>();
      b.socInitial = jb.at("socInitial").get<double>();
      b.efficiencyCharge = jb.at("efficiencyCharge").get<double>();
      b.efficiencyDischarge = jb.at("efficiencyDischarge").get<double>();
      b.cycleLifeRef = jb.value("cycleLifeRef", 6000.0);
      b.cycleDepthRef = jb.value("cycleDepthRef", 0.8);
      b.replacementCost = jb.value("replacementCost", 200000.0);
      b.perfScore = jb.value("perfScore", 0.95);
      m.batteries.push_back(std::move(b));
    }
    const auto& jr = j.at("requirements");
    m.requirements.reserveReq = jr.at("reserveReq").get<std::vector<double>>();
    m.requirements.regCapReq = jr.at("regCapReq").get<std::vector<double>>();
    m.requirements.regMileageReq = jr.at("regMileageReq").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw IngestError(std::string("system file schema violation: ") + e.what());
  }
  return m;
}

// Load, derive missing ancillary offers, and validate. Throws IngestError
// with the offending fields on any schema or invariant violation.
inline SystemModel ingestSystem(const std::string& path,
                                const OfferMultipliers& mult = {}) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open system file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IngestError("parse error in " + path + ": " + e.what());
  }
  SystemModel m = modelFromJson(j);
  if (m.batteries.empty()) throw IngestError(path + ": no battery units");
  applyDefaultOffers(m, mult, /*onlyMissing=*/true);
  ValidationReport rep = validateSystem(m);
  if (!rep.ok()) {
    std::string msg = path + ": invalid system:";
    for (const auto& v : rep.violations) msg += "\n  - " + v;
    throw IngestError(msg);
  }
  return m;
}

inline void writeSystem(const SystemModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << toJson(m).dump(1) << '\n';
}

}  // namespace bessbid
