#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "jcir/chf.hpp"
#include "jcir/levy.hpp"

namespace jcir::scenario {

using json = nlohmann::json;

inline json jumps_to_json(const levy::LevyModel& m) {
  struct Visitor {
    json operator()(const levy::Zero&) const {
      return json{{"type", "zero"}};
    }
    json operator()(const levy::CompoundPoisson& cp) const {
      json law;
      if (const auto* pm = std::get_if<levy::PointMass>(&cp.law))
        law = {{"type", "point_mass"}, {"z0", pm->z0}};
      else if (const auto* e = std::get_if<levy::ExponentialLaw>(&cp.law))
        law = {{"type", "exponential"}, {"mean", e->mean}};
      else if (const auto* p = std::get_if<levy::ParetoLaw>(&cp.law))
        law = {{"type", "pareto"}, {"a", p->a}, {"z_min", p->z_min}};
      return json{{"type", "compound_poisson"},
                  {"rate", cp.rate},
                  {"law", law}};
    }
    json operator()(const levy::GammaDensity& g) const {
      return json{{"type", "gamma_density"}, {"c", g.c}, {"lambda", g.lambda}};
    }
    json operator()(const levy::ParetoTail& p) const {
      return json{{"type", "pareto_tail"}, {"a", p.a}};
    }
  };
  return std::visit(Visitor{}, m);
}

inline levy::LevyModel jumps_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") return levy::Zero{};
  if (type == "compound_poisson") {
    const json& lj = j.at("law");
    const std::string lt = lj.at("type").get<std::string>();
    levy::JumpLaw law;
    if (lt == "point_mass")
      law = levy::PointMass{lj.at("z0").get<double>()};
    else if (lt == "exponential")
      law = levy::ExponentialLaw{lj.at("mean").get<double>()};
    else if (lt == "pareto")
      law = levy::ParetoLaw{lj.at("a").get<double>(),
                            lj.value("z_min", 1.0)};
    else
      throw std::invalid_argument("unknown jump law type: " + lt);
    return levy::CompoundPoisson{j.at("rate").get<double>(), law};
  }
  if (type == "gamma_density")
    return levy::GammaDensity{j.at("c").get<double>(),
                              j.at("lambda").get<double>()};
  if (type == "pareto_tail") return levy::ParetoTail{j.at("a").get<double>()};
  throw std::invalid_argument("unknown jump measure type: " + type);
}

inline json params_to_json(const chf::ModelParams& p) {
  return json{
      {"a", p.a}, {"b", p.b}, {"sigma", p.sigma}, {"jumps", jumps_to_json(p.jumps)}};
}

inline chf::ModelParams params_from_json(const json& j) {
  chf::ModelParams p{j.at("a").get<double>(), j.at("b").get<double>(),
                     j.at("sigma").get<double>(),
                     j.contains("jumps") ? jumps_from_json(j.at("jumps"))
                                         : levy::LevyModel{levy::Zero{}}};
  chf::validate(p);
  return p;
}

inline chf::ModelParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  return params_from_json(j);
}

/// FNV-1a over the canonical (key-sorted) dump; stable fingerprint for
/// reproducibility records.
inline std::uint64_t config_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace jcir::scenario
