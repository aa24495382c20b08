#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyi/burg.hpp"
#include "renyi/entropy.hpp"
#include "renyi/errors.hpp"
#include "renyi/grid_density.hpp"

namespace renyi {

// Stable key order everywhere so reports are byte-identical across runs.
using Json = nlohmann::ordered_json;

inline Json to_json(const GridDensity& f) {
  Json j;
  j["lo"] = f.lo();
  j["hi"] = f.hi();
  j["weights"] = std::vector<double>(f.values().begin(), f.values().end());
  return j;
}

inline GridDensity grid_from_json(const Json& j) {
  if (!j.contains("lo") || !j.contains("hi") || !j.contains("weights"))
    throw ValidationError("density JSON needs {lo, hi, weights}");
  return GridDensity(j.at("lo").get<double>(), j.at("hi").get<double>(),
                     j.at("weights").get<std::vector<double>>());
}

inline Json to_json(const EntropyValue& e) {
  Json j;
  j["alpha"] = e.alpha;
  j["nats"] = e.nats;
  return j;
}

inline Json to_json(const ARModel& m) {
  Json j;
  j["a"] = m.a;
  j["sigma2"] = m.sigma2;
  j["Kp"] = m.Kp;
  Json atoms = Json::array();
  for (const auto& atom : m.spectral) {
    Json a;
    a["q"] = atom.q;
    a["w"] = atom.w;
    atoms.push_back(a);
  }
  j["spectral"] = atoms;
  return j;
}

inline ARModel armodel_from_json(const Json& j) {
  ARModel m;
  m.a = j.at("a").get<std::vector<double>>();
  m.sigma2 = j.at("sigma2").get<double>();
  if (j.contains("Kp"))
    m.Kp = j.at("Kp").get<std::vector<std::vector<double>>>();
  if (j.contains("spectral")) {
    for (const auto& a : j.at("spectral")) {
      SpectralAtom atom;
      atom.q = a.at("q").get<double>();
      atom.w = a.at("w").get<std::vector<double>>();
      m.spectral.push_back(std::move(atom));
    }
  }
  return m;
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace renyi
