// Copyright 2026 The nmrqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file molecule_io.hpp
 * @brief JSON molecule description.
 *
 *     {
 *       "name": "demo",                        optional
 *       "field_tesla": 11.74,
 *       "temperature_k": 300,                  optional, default 300
 *       "nuclei": [{"species": "X", "gamma": 1e8}],   optional extra species
 *       "spins": [{"species": "H1", "offset_hz": 100, "t1_s": 5, "t2_s": 1}],
 *       "couplings": [{"i": 0, "j": 1, "j_hz": 7.143, "d_hz": 0}]
 *     }
 *
 * Missing or null relaxation times mean no relaxation.
 */
#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "nmrqc/errors.hpp"
#include "nmrqc/spin_model.hpp"

namespace nmrqc {

struct Molecule {
  std::string name;
  SpinSystem system;
  double temperature_k = 300.0;
};

namespace detail {

inline double json_number(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

inline double json_time(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return kNoRelaxation;
  return json_number(obj, key, where);
}

}  // namespace detail

inline Molecule molecule_from_json(const nlohmann::json& j, NucleusRegistry registry = NucleusRegistry::standard()) {
  if (!j.is_object()) throw ParseError("molecule: top level must be an object");
  const double field = detail::json_number(j, "field_tesla", "molecule");
  const double temperature = j.contains("temperature_k") ? detail::json_number(j, "temperature_k", "molecule") : 300.0;
  if (!(temperature > 0.0)) throw ParseError("molecule: temperature_k must be positive");

  if (j.contains("nuclei")) {
    for (const auto& nuc : j.at("nuclei")) {
      if (!nuc.contains("species") || !nuc.at("species").is_string()) throw ParseError("nuclei: missing species");
      registry.add({nuc.at("species").get<std::string>(), detail::json_number(nuc, "gamma", "nuclei")});
    }
  }

  if (!j.contains("spins") || !j.at("spins").is_array()) throw ParseError("molecule: 'spins' must be an array");
  std::vector<Spin> spins;
  for (std::size_t idx = 0; idx < j.at("spins").size(); ++idx) {
    const auto& s = j.at("spins")[idx];
    const std::string where = "spins[" + std::to_string(idx) + "]";
    if (!s.contains("species") || !s.at("species").is_string()) throw ParseError(where + ": missing species");
    Spin spin;
    spin.nucleus = registry.at(s.at("species").get<std::string>());
    spin.offset_hz = s.contains("offset_hz") ? detail::json_number(s, "offset_hz", where) : 0.0;
    spin.t1_s = detail::json_time(s, "t1_s", where);
    spin.t2_s = detail::json_time(s, "t2_s", where);
    spins.push_back(spin);
  }
  if (spins.empty()) throw ParseError("molecule: no spins");
  const int n = static_cast<int>(spins.size());

  CouplingTable table(n);
  std::set<std::pair<int, int>> seen;
  if (j.contains("couplings")) {
    for (std::size_t idx = 0; idx < j.at("couplings").size(); ++idx) {
      const auto& c = j.at("couplings")[idx];
      const std::string where = "couplings[" + std::to_string(idx) + "]";
      const double ci = detail::json_number(c, "i", where);
      const double ck = detail::json_number(c, "j", where);
      const int i = static_cast<int>(ci);
      const int k = static_cast<int>(ck);
      if (ci != i || ck != k || i < 0 || k < 0 || i >= n || k >= n || i == k) {
        throw ParseError(where + ": invalid spin indices");
      }
      const double jhz = detail::json_number(c, "j_hz", where);
      const double dhz = c.contains("d_hz") ? detail::json_number(c, "d_hz", where) : 0.0;
      const auto key = std::minmax(i, k);
      if (seen.contains(key)) {
        if (table.j(i, k) != jhz || table.d(i, k) != dhz) throw ParseError(where + ": conflicting duplicate coupling");
        continue;
      }
      seen.insert(key);
      table.set(i, k, jhz, dhz);
    }
  }
  return {j.value("name", std::string{}), SpinSystem(std::move(spins), std::move(table), field), temperature};
}

inline Molecule molecule_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("molecule: ") + e.what());
  }
  return molecule_from_json(j);
}

inline Molecule read_molecule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open molecule file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return molecule_from_string(buf.str());
}

inline nlohmann::json molecule_to_json(const Molecule& m) {
  nlohmann::json spins = nlohmann::json::array();
  for (const auto& s : m.system.spins()) {
    nlohmann::json e{{"species", s.nucleus.species}, {"offset_hz", s.offset_hz}};
    e["t1_s"] = std::isfinite(s.t1_s) ? nlohmann::json(s.t1_s) : nlohmann::json(nullptr);
    e["t2_s"] = std::isfinite(s.t2_s) ? nlohmann::json(s.t2_s) : nlohmann::json(nullptr);
    spins.push_back(e);
  }
  nlohmann::json nuclei = nlohmann::json::array();
  const auto standard = NucleusRegistry::standard();
  std::set<std::string> custom;
  for (const auto& s : m.system.spins())
    if (!standard.contains(s.nucleus.species) && custom.insert(s.nucleus.species).second)
      nuclei.push_back({{"species", s.nucleus.species}, {"gamma", s.nucleus.gamma}});
  nlohmann::json couplings = nlohmann::json::array();
  const auto& c = m.system.couplings();
  for (int i = 0; i < m.system.size(); ++i)
    for (int k = i + 1; k < m.system.size(); ++k)
      if (c.j(i, k) != 0.0 || c.d(i, k) != 0.0)
        couplings.push_back({{"i", i}, {"j", k}, {"j_hz", c.j(i, k)}, {"d_hz", c.d(i, k)}});
  nlohmann::json out{{"name", m.name},
                     {"field_tesla", m.system.field_tesla()},
                     {"temperature_k", m.temperature_k},
                     {"spins", spins},
                     {"couplings", couplings}};
  if (!nuclei.empty()) out["nuclei"] = nuclei;
  return out;
}

}  // namespace nmrqc
