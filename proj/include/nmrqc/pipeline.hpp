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
 * @file pipeline.hpp
 * @brief End-to-end run: load molecule, prepare, compile, simulate, read out.
 *
 * Every output is produced in memory first and written only after the whole
 * run has succeeded, so a failing run leaves no partial files behind.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>

#include <nlohmann/json.hpp>

#include "nmrqc/circuit.hpp"
#include "nmrqc/compiler.hpp"
#include "nmrqc/demos.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/init.hpp"
#include "nmrqc/molecule_io.hpp"
#include "nmrqc/product_operators.hpp"
#include "nmrqc/readout.hpp"
#include "nmrqc/sequence_sim.hpp"

namespace nmrqc {

enum ExitCode : int { kExitOk = 0, kExitParse = 2, kExitCompile = 3, kExitPhysics = 4, kExitIo = 5 };

/// Maps a library exception to its process exit code.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const CompileError*>(&e)) return kExitCompile;
  if (dynamic_cast<const PhysicsError*>(&e)) return kExitPhysics;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  return 1;
}

enum class Preparation { thermal, pseudopure_spatial, pseudopure_temporal, override_epsilon, pure };

inline const char* preparation_name(Preparation p) {
  switch (p) {
    case Preparation::thermal: return "thermal";
    case Preparation::pseudopure_spatial: return "pseudopure_spatial";
    case Preparation::pseudopure_temporal: return "pseudopure_temporal";
    case Preparation::override_epsilon: return "override";
    case Preparation::pure: return "pure";
  }
  return "?";
}

inline Preparation parse_preparation(const std::string& s) {
  for (auto p : {Preparation::thermal, Preparation::pseudopure_spatial, Preparation::pseudopure_temporal,
                 Preparation::override_epsilon, Preparation::pure})
    if (s == preparation_name(p)) return p;
  throw ParseError("unknown preparation '" + s + "'");
}

struct RunConfig {
  std::optional<std::string> molecule_path;  // unset: built-in demo molecule
  std::optional<std::string> circuit_path;
  std::optional<Circuit> circuit;  // used when no circuit path is given
  Preparation preparation = Preparation::pseudopure_temporal;
  double epsilon = 1.0;  // for Preparation::override_epsilon
  bool relaxation = false;
  CrushMode crush = CrushMode::physical;
  FrameMode frame = FrameMode::explicit_rotation;
  std::optional<std::uint64_t> seed;
  double noise_sigma = 0.0;
  double dwell_s = 1e-3;
  std::size_t points = 1024;
  CompilerOptions compiler;
};

struct PipelineResult {
  Molecule molecule;
  DensityMatrix prepared;
  DensityMatrix final_state;
  Compilation compilation;
  QubitReadout readout;
  Fid fid;
  Spectrum spectrum;
  nlohmann::json report;
  std::map<std::string, std::string> artifacts;  // file name -> contents
};

// ---------------------------------------------------------------------------
// State serialization

inline constexpr const char* kStateFormat = "nmrqc-state";

inline nlohmann::json state_to_json(const DensityMatrix& rho) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index a = 0; a < rho.dim(); ++a) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ii = nlohmann::json::array();
    for (Eigen::Index b = 0; b < rho.dim(); ++b) {
      rr.push_back(rho(a, b).real());
      ii.push_back(rho(a, b).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& t : po_decompose(rho).nonzero(1e-15)) terms[t.label] = t.coefficient;
  return {{"format", kStateFormat}, {"spins", rho.num_spins()}, {"real", re}, {"imag", im}, {"product_operators", terms}};
}

inline DensityMatrix state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", std::string{}) != kStateFormat) throw ParseError("not an nmrqc state file");
  const int n = j.at("spins").get<int>();
  if (n < 1 || n > 16) throw ParseError("state: bad spin count");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix m(dim, dim);
  try {
    for (Eigen::Index a = 0; a < dim; ++a)
      for (Eigen::Index b = 0; b < dim; ++b) m(a, b) = Complex(j.at("real").at(a).at(b), j.at("imag").at(a).at(b));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("state: ") + e.what());
  }
  return DensityMatrix(std::move(m));
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

/// Writes every artifact into `dir`. Files go to temporaries first and are
/// renamed only once all of them have been written.
inline void write_artifacts(const std::string& dir, const std::map<std::string, std::string>& artifacts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<fs::path> temps;
  const auto cleanup = [&] {
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [name, content] : artifacts) {
    const fs::path tmp = fs::path(dir) / (name + ".partial");
    std::ofstream out(tmp, std::ios::binary);
    temps.push_back(tmp);
    out << content;
    if (!out) {
      cleanup();
      throw IoError("cannot write '" + tmp.string() + "'");
    }
  }
  std::size_t k = 0;
  for (const auto& [name, content] : artifacts) {
    fs::rename(temps[k++], fs::path(dir) / name, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot finalize '" + name + "': " + ec.message());
    }
  }
}

// ---------------------------------------------------------------------------
// Pipeline stages

inline Molecule load_molecule(const RunConfig& config) {
  return config.molecule_path ? read_molecule(*config.molecule_path) : demo_molecule();
}

inline DensityMatrix prepare_state(const Molecule& molecule, const RunConfig& config) {
  const SpinSystem& system = molecule.system;
  const ThermalConditions conditions{molecule.temperature_k, system.field_tesla()};
  switch (config.preparation) {
    case Preparation::thermal: return thermal_state(system, conditions);
    case Preparation::pseudopure_spatial:
      return prepare_pseudopure_spatial(system, conditions, config.compiler, config.crush);
    case Preparation::pseudopure_temporal: {
      TemporalAveragingOptions opts;
      opts.compiler = config.compiler;
      return prepare_pseudopure_temporal(system, conditions, opts);
    }
    case Preparation::override_epsilon: return polarization_override(system, config.epsilon);
    case Preparation::pure: return DensityMatrix::basis_state(system.size(), 0);
  }
  throw PhysicsError("unhandled preparation");
}

/// Reads the final state: z values directly, and a spectrum after a (pi/2)_y
/// pulse on every spin, which turns I_z into I_x.
inline void read_out(PipelineResult& r, const RunConfig& config, const RelaxationParams* relaxation) {
  const int n = r.molecule.system.size();
  r.readout = read_qubits(r.final_state);
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[q] = q;
  const DensityMatrix excited = apply_hard_pulse(r.final_state, all, constants::pi / 2.0, constants::pi / 2.0);
  AcquisitionOptions acq;
  acq.dwell_s = config.dwell_s;
  acq.points = config.points;
  acq.relaxation = relaxation;
  acq.noise_sigma = config.noise_sigma;
  acq.seed = config.seed.value_or(0);
  r.fid = acquire_fid(excited, r.molecule.system, acq);
  r.spectrum = spectrum(r.fid);
}

inline nlohmann::json compilation_to_json(const CompilationReport& c) {
  return {{"total_duration_s", c.total_duration_s},
          {"pulse_count", c.pulse_count},
          {"swap_count", c.swap_count},
          {"refocusing_pulse_count", c.refocusing_pulse_count},
          {"cphase_count", c.cphase_count},
          {"warnings", c.warnings}};
}

inline nlohmann::json readout_to_json(const QubitReadout& r) {
  nlohmann::json qubits = nlohmann::json::array();
  for (const auto& q : r.qubits) {
    qubits.push_back({{"analog", q.analog},
                      {"value", q.rounded ? nlohmann::json(*q.rounded) : nlohmann::json(nullptr)},
                      {"deterministic", q.deterministic()}});
  }
  return {{"signal", r.signal}, {"normalized", r.normalized}, {"epsilon", r.epsilon}, {"bits", r.bits()},
          {"qubits", qubits}};
}

inline PipelineResult run_pipeline(const RunConfig& config) {
  PipelineResult r{load_molecule(config), DensityMatrix::maximally_mixed(1), DensityMatrix::maximally_mixed(1),
                   {PulseSequence(1), {}}, {}, {}, {}, {}, {}};
  const SpinSystem& system = r.molecule.system;

  Circuit circuit(system.size());
  if (config.circuit_path) {
    circuit = parse_circuit(read_text_file(*config.circuit_path), system.size());
  } else if (config.circuit) {
    circuit = *config.circuit;
  }
  r.compilation = compile_circuit(circuit, system, config.compiler);
  r.prepared = prepare_state(r.molecule, config);

  std::optional<RelaxationParams> relaxation;
  if (config.relaxation) relaxation = RelaxationParams::thermal(system, r.molecule.temperature_k);
  SimulationOptions sim;
  sim.relaxation = relaxation ? &*relaxation : nullptr;
  sim.frame = config.frame;
  r.final_state = simulate_sequence(r.compilation.sequence, r.prepared, system, sim).final_state;
  read_out(r, config, sim.relaxation);

  const auto structure = check_pseudopure(r.prepared);
  const auto bound = epsilon_bound(system, {r.molecule.temperature_k, system.field_tesla()});
  nlohmann::json prep{{"method", preparation_name(config.preparation)},
                      {"pseudo_pure", structure.ok},
                      {"epsilon", structure.ok ? nlohmann::json(structure.epsilon) : nlohmann::json(nullptr)},
                      {"worst_deviation", structure.worst_deviation},
                      {"thermal_population_spread", bound.population_spread}};
  nlohmann::json report{{"format", "nmrqc-report"},
                        {"molecule", r.molecule.name},
                        {"spins", system.size()},
                        {"circuit", circuit_to_text(circuit)},
                        {"relaxation", config.relaxation},
                        {"crush", crush_mode_name(config.crush)},
                        {"preparation", prep},
                        {"compilation", compilation_to_json(r.compilation.report)},
                        {"readout", readout_to_json(r.readout)},
                        {"spectrum", {{"peaks", peaks_to_json(r.spectrum)},
                                      {"parseval_residual", parseval_residual(r.fid, r.spectrum)}}}};
  if (config.seed) report["seed"] = *config.seed;
  if (config.noise_sigma > 0.0) report["noise_sigma"] = config.noise_sigma;
  r.report = report;

  std::ostringstream fid_csv;
  write_fid_csv(fid_csv, r.fid);
  std::ostringstream spec_csv;
  write_spectrum_csv(spec_csv, r.spectrum);
  r.artifacts["report.json"] = report.dump(2) + "\n";
  r.artifacts["state.json"] = state_to_json(r.final_state).dump(2) + "\n";
  r.artifacts["sequence.json"] = sequence_to_json(r.compilation.sequence).dump(2) + "\n";
  r.artifacts["fid.csv"] = fid_csv.str();
  r.artifacts["spectrum.csv"] = spec_csv.str();
  r.artifacts["peaks.json"] = peaks_to_json(r.spectrum).dump(2) + "\n";
  return r;
}

}  // namespace nmrqc
