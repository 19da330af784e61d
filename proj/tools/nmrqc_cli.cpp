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

// nmrqc command-line front end.
//
// Exit codes: 0 ok, 2 parse, 3 compile, 4 physics or structure, 5 I/O.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nmrqc/nmrqc.hpp"

namespace {

using nmrqc::RunConfig;

struct CommonFlags {
  std::string molecule;
  std::string prep = "pseudopure_temporal";
  double epsilon = 1.0;
  std::string relaxation = "off";
  std::string crush = "physical";
  std::string frame = "explicit";
  std::optional<std::uint64_t> seed;
  double noise = 0.0;
  double dwell = 1e-3;
  std::size_t points = 1024;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--molecule", f.molecule, "molecule JSON file (default: built-in two-proton molecule)");
  cmd->add_option("--prep", f.prep, "thermal|pseudopure_spatial|pseudopure_temporal|override|pure")
      ->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon, "polarization for --prep override")->capture_default_str();
  cmd->add_option("--relaxation", f.relaxation, "on|off")->capture_default_str();
  cmd->add_option("--crush", f.crush, "physical|ideal")->capture_default_str();
  cmd->add_option("--frame", f.frame, "explicit|tracked z-rotation handling")->capture_default_str();
  cmd->add_option("--seed", f.seed, "seed for the optional FID noise");
  cmd->add_option("--noise", f.noise, "Gaussian FID noise per quadrature")->capture_default_str();
  cmd->add_option("--dwell", f.dwell, "FID dwell time, s")->capture_default_str();
  cmd->add_option("--points", f.points, "FID length")->capture_default_str();
}

RunConfig to_config(const CommonFlags& f) {
  RunConfig c;
  if (!f.molecule.empty()) c.molecule_path = f.molecule;
  c.preparation = nmrqc::parse_preparation(f.prep);
  c.epsilon = f.epsilon;
  if (f.relaxation != "on" && f.relaxation != "off") throw nmrqc::ParseError("--relaxation must be on or off");
  c.relaxation = f.relaxation == "on";
  c.crush = nmrqc::parse_crush_mode(f.crush);
  if (f.frame == "explicit") {
    c.frame = nmrqc::FrameMode::explicit_rotation;
  } else if (f.frame == "tracked") {
    c.frame = nmrqc::FrameMode::tracked;
  } else {
    throw nmrqc::ParseError("--frame must be explicit or tracked");
  }
  c.seed = f.seed;
  c.noise_sigma = f.noise;
  c.dwell_s = f.dwell;
  c.points = f.points;
  return c;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string summary_line(const nmrqc::PipelineResult& r) {
  std::ostringstream s;
  s << "qubits " << r.readout.bits() << " (";
  for (std::size_t q = 0; q < r.readout.qubits.size(); ++q)
    s << (q ? " " : "") << format_double(r.readout.qubits[q].analog);
  s << ")";
  if (!r.readout.signal) s << " no signal";
  if (r.readout.normalized) s << " eps " << format_double(r.readout.epsilon);
  return s.str();
}

int run_simulate(const CommonFlags& f, const std::string& circuit, const std::string& out_dir) {
  RunConfig c = to_config(f);
  if (!circuit.empty()) c.circuit_path = circuit;
  const auto r = nmrqc::run_pipeline(c);
  if (!out_dir.empty()) nmrqc::write_artifacts(out_dir, r.artifacts);
  for (const auto& w : r.compilation.report.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << summary_line(r) << '\n';
  return 0;
}

int run_compile(const CommonFlags& f, const std::string& circuit, const std::string& out_dir) {
  const RunConfig c = to_config(f);
  const auto molecule = nmrqc::load_molecule(c);
  if (circuit.empty()) throw nmrqc::ParseError("compile needs --circuit");
  const auto parsed = nmrqc::parse_circuit(nmrqc::read_text_file(circuit), molecule.system.size());
  const auto compiled = nmrqc::compile_circuit(parsed, molecule.system, c.compiler);
  const auto report = nmrqc::compilation_to_json(compiled.report);
  if (!out_dir.empty()) {
    nmrqc::write_artifacts(out_dir, {{"sequence.json", nmrqc::sequence_to_json(compiled.sequence).dump(2) + "\n"},
                                     {"compile_report.json", report.dump(2) + "\n"}});
  }
  for (const auto& w : compiled.report.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "events " << compiled.sequence.size() << " pulses " << compiled.report.pulse_count << " swaps "
            << compiled.report.swap_count << " duration_s " << format_double(compiled.report.total_duration_s)
            << '\n';
  return 0;
}

int run_spectrum(const CommonFlags& f, const std::string& in, const std::string& out, const std::string& peaks_out,
                 bool excite) {
  const RunConfig c = to_config(f);
  const auto molecule = nmrqc::load_molecule(c);
  const auto& system = molecule.system;
  const auto j = nmrqc::parse_json_text(nmrqc::read_text_file(in), in);

  std::optional<nmrqc::RelaxationParams> relaxation;
  if (c.relaxation) relaxation = nmrqc::RelaxationParams::thermal(system, molecule.temperature_k);

  std::optional<nmrqc::DensityMatrix> state;
  if (j.value("format", std::string{}) == nmrqc::kSequenceFormat) {
    const auto seq = nmrqc::sequence_from_json(j);
    nmrqc::SimulationOptions sim;
    sim.relaxation = relaxation ? &*relaxation : nullptr;
    sim.frame = c.frame;
    const auto res = nmrqc::simulate_sequence(seq, nmrqc::prepare_state(molecule, c), system, sim);
    // An Acquire event marks where the receiver opens; no extra pulse then.
    if (!res.acquisitions.empty()) {
      state = res.acquisitions.front();
      excite = false;
    } else {
      state = res.final_state;
    }
  } else {
    state = nmrqc::state_from_json(j);
  }
  if (state->num_spins() != system.size()) throw nmrqc::PhysicsError("state does not match the molecule");
  if (excite) {
    std::vector<int> all;
    for (int q = 0; q < system.size(); ++q) all.push_back(q);
    state = nmrqc::apply_hard_pulse(*state, all, nmrqc::constants::pi / 2.0, nmrqc::constants::pi / 2.0);
  }
  nmrqc::AcquisitionOptions acq;
  acq.dwell_s = c.dwell_s;
  acq.points = c.points;
  acq.relaxation = relaxation ? &*relaxation : nullptr;
  acq.noise_sigma = c.noise_sigma;
  acq.seed = c.seed.value_or(0);
  const auto fid = nmrqc::acquire_fid(*state, system, acq);
  const auto spec = nmrqc::spectrum(fid);

  std::ostringstream csv;
  nmrqc::write_spectrum_csv(csv, spec);
  std::map<std::string, std::string> files{{out, csv.str()}};
  if (!peaks_out.empty()) files[peaks_out] = nmrqc::peaks_to_json(spec).dump(2) + "\n";
  // Paths may point anywhere; group them by directory for the atomic writer.
  std::map<std::string, std::map<std::string, std::string>> by_dir;
  for (const auto& [path, content] : files) {
    const std::filesystem::path p(path);
    by_dir[p.has_parent_path() ? p.parent_path().string() : "."][p.filename().string()] = content;
  }
  for (const auto& [dir, group] : by_dir) nmrqc::write_artifacts(dir, group);
  std::cout << "peaks " << spec.peaks.size() << '\n';
  for (const auto& p : spec.peaks)
    std::cout << "  " << format_double(p.frequency_hz) << " Hz amplitude " << format_double(p.amplitude)
              << " phase " << format_double(p.phase) << '\n';
  return 0;
}

struct AnalyzeFlags {
  double field = 11.74;
  double temperature = 300.0;
  std::string species = "H1";
  double molecules = 1e17;
  int nmax = 12;
  int capacity = 6;
  double t2 = 1.0;
  double gate_time = 1e-3;
  std::string table;
  std::string report;
};

int run_analyze(const AnalyzeFlags& f) {
  nmrqc::ScalingInputs in;
  in.field_tesla = f.field;
  in.temperature_k = f.temperature;
  in.gamma = nmrqc::NucleusRegistry::standard().at(f.species).gamma;
  in.molecules = f.molecules;
  in.table_max_n = f.nmax;
  in.per_species_capacity = f.capacity;
  in.t2_s = f.t2;
  in.gate_time_s = f.gate_time;
  const auto r = nmrqc::scaling_report(in);

  std::ostringstream text;
  text << "species " << f.species << " field_tesla " << format_double(f.field) << " temperature_k "
       << format_double(f.temperature) << '\n';
  text << "larmor_hz " << format_double(r.larmor_hz) << '\n';
  text << "zeeman_energy_ev " << format_double(r.zeeman_energy_ev) << '\n';
  text << "thermal_energy_ev " << format_double(r.thermal_energy_ev) << '\n';
  text << "critical_temperature_k " << format_double(r.critical_temperature_k) << '\n';
  text << "critical_field_tesla " << format_double(r.critical_field_tesla) << '\n';
  text << "excess_fraction " << format_double(r.excess.fraction) << '\n';
  text << "excess_nuclei " << format_double(r.excess.excess) << " of " << format_double(f.molecules) << '\n';
  text << "qubit_limit " << r.qubit_limit << '\n';
  text << "gate_budget " << r.budget.gates << " (" << r.budget.caution << ")\n";
  text << "epsilon_table (" << nmrqc::kRepetitionsModel << ")\n";
  for (const auto& row : r.epsilon_table)
    text << "  n " << row.n << " exact " << format_double(row.epsilon_exact) << " hightemp "
         << format_double(row.epsilon_hightemp) << " repetitions " << format_double(row.repetitions) << '\n';

  std::map<std::string, std::map<std::string, std::string>> by_dir;
  const auto stage = [&](const std::string& path, std::string content) {
    const std::filesystem::path p(path);
    by_dir[p.has_parent_path() ? p.parent_path().string() : "."][p.filename().string()] = std::move(content);
  };
  if (!f.table.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "n,epsilon_exact,epsilon_hightemp,repetitions_model\n";
    for (const auto& row : r.epsilon_table)
      csv << row.n << ',' << row.epsilon_exact << ',' << row.epsilon_hightemp << ',' << row.repetitions << '\n';
    stage(f.table, csv.str());
  }
  if (!f.report.empty()) stage(f.report, text.str());
  for (const auto& [dir, group] : by_dir) nmrqc::write_artifacts(dir, group);
  std::cout << text.str();
  return 0;
}

int run_demo(const CommonFlags& f, const std::string& name, const std::string& out_dir) {
  const auto cases = nmrqc::demo_cases(name);
  nlohmann::json summary = nlohmann::json::array();
  std::map<std::string, std::string> artifacts;
  bool all_ok = true;
  std::ostringstream text;
  for (const auto& dc : cases) {
    RunConfig c = to_config(f);
    c.circuit = dc.circuit;
    const auto r = nmrqc::run_pipeline(c);
    const std::string got = r.readout.bits();
    bool ok = got.size() == dc.expected.size();
    for (std::size_t q = 0; ok && q < got.size(); ++q) ok = dc.expected[q] == '?' || dc.expected[q] == got[q];
    all_ok = all_ok && ok;
    text << name << ' ' << dc.variant << " expected " << dc.expected << " got " << got << ' '
         << (ok ? "ok" : "WRONG") << '\n';
    summary.push_back({{"variant", dc.variant}, {"expected", dc.expected}, {"readout", got}, {"correct", ok}});
    for (const auto& [file, content] : r.artifacts) artifacts[dc.variant + "_" + file] = content;
  }
  artifacts["demo_summary.json"] = summary.dump(2) + "\n";
  if (!out_dir.empty()) nmrqc::write_artifacts(out_dir, artifacts);
  std::cout << text.str();
  if (!all_ok) throw nmrqc::PhysicsError("demo " + name + " returned a wrong answer");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nmrqc: liquid-state NMR quantum computer workbench"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  std::string sim_circuit;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "prepare, compile, simulate and read out a circuit");
  add_common(simulate, sim_flags);
  simulate->add_option("--circuit", sim_circuit, "circuit text file (default: empty circuit)");
  simulate->add_option("--out-dir", sim_out, "directory for report, state, sequence, FID and spectrum");

  CommonFlags comp_flags;
  std::string comp_circuit;
  std::string comp_out;
  auto* compile = app.add_subcommand("compile", "lower a circuit to a pulse sequence");
  add_common(compile, comp_flags);
  compile->add_option("--circuit", comp_circuit, "circuit text file")->required();
  compile->add_option("--out-dir", comp_out, "directory for sequence.json and compile_report.json");

  CommonFlags spec_flags;
  std::string spec_in;
  std::string spec_out;
  std::string spec_peaks;
  bool no_excite = false;
  auto* spectrum = app.add_subcommand("spectrum", "FID and spectrum from a state or pulse sequence");
  add_common(spectrum, spec_flags);
  spectrum->add_option("--in", spec_in, "state JSON or pulse-sequence JSON")->required();
  spectrum->add_option("--out", spec_out, "spectrum CSV")->required();
  spectrum->add_option("--peaks", spec_peaks, "peak list JSON");
  spectrum->add_flag("--no-excite", no_excite, "skip the (pi/2)_y readout pulse");

  AnalyzeFlags an;
  auto* analyze = app.add_subcommand("analyze", "feasibility arithmetic: critical values, epsilon, limits");
  analyze->add_option("--field", an.field, "tesla")->capture_default_str();
  analyze->add_option("--temperature", an.temperature, "kelvin")->capture_default_str();
  analyze->add_option("--species", an.species, "nucleus")->capture_default_str();
  analyze->add_option("--molecules", an.molecules, "sample size")->capture_default_str();
  analyze->add_option("--nmax", an.nmax, "largest n in the epsilon table")->capture_default_str();
  analyze->add_option("--capacity", an.capacity, "addressable spins per species")->capture_default_str();
  analyze->add_option("--t2", an.t2, "s")->capture_default_str();
  analyze->add_option("--gate-time", an.gate_time, "s")->capture_default_str();
  analyze->add_option("--table", an.table, "write the epsilon table as CSV");
  analyze->add_option("--report", an.report, "write the report text to a file");

  CommonFlags demo_flags;
  std::string demo_name;
  std::string demo_out;
  auto* demo = app.add_subcommand("demo", "run a built-in algorithm (deutsch, grover2)");
  add_common(demo, demo_flags);
  demo->add_option("name", demo_name, "demo name")->required();
  demo->add_option("--out-dir", demo_out, "directory for per-variant artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nmrqc::kExitParse;
  }

  try {
    if (*simulate) return run_simulate(sim_flags, sim_circuit, sim_out);
    if (*compile) return run_compile(comp_flags, comp_circuit, comp_out);
    if (*spectrum) return run_spectrum(spec_flags, spec_in, spec_out, spec_peaks, !no_excite);
    if (*analyze) return run_analyze(an);
    if (*demo) return run_demo(demo_flags, demo_name, demo_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nmrqc::exit_code_for(e);
  }
  return 0;
}
