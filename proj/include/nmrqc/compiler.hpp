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
 * @file compiler.hpp
 * @brief Lowering of gate circuits to NMR pulse sequences.
 *
 * Every two-qubit interaction is a controlled phase built from a refocused
 * coupling delay plus frame (z) rotations:
 *
 *     CPhase(phi) = exp(-i phi/2 (I_z + S_z - 2 I_z S_z))   (global phase dropped)
 *
 * The coupling part comes from a delay t = phi / (2 pi |J_eff|) during which
 * the pair keeps its coupling with the sign needed for -2 I_z S_z and every
 * other offset and coupling is echoed away. CNOT, SWAP and Toffoli are
 * expressed through controlled phases and y rotations; gates on uncoupled
 * pairs are routed along the coupling graph with SWAPs.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nmrqc/circuit.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/pulse_sequence.hpp"
#include "nmrqc/refocusing.hpp"
#include "nmrqc/routing.hpp"
#include "nmrqc/spin_model.hpp"

namespace nmrqc {

struct CompilerOptions {
  double rf_nutation_hz = 25000.0;    // hard-pulse rate for fully heteronuclear addressing
  double coupling_threshold_hz = 0.0;  // couplings at or below this are not used for gates
};

// ---------------------------------------------------------------------------
// Rates and selectivity

/// Rate (Hz, inverse 2 pi rotation time) of one-qubit gates on spin q. A spin
/// with same-species partners is limited by its smallest frequency separation.
inline double one_qubit_rate(const SpinSystem& system, int q, const CompilerOptions& options = {}) {
  double rate = options.rf_nutation_hz;
  bool homonuclear = false;
  for (int k = 0; k < system.size(); ++k) {
    if (k == q || !system.same_species(q, k)) continue;
    const double sep = std::abs(system.spin(q).offset_hz - system.spin(k).offset_hz);
    rate = homonuclear ? std::min(rate, sep) : sep;
    homonuclear = true;
  }
  return homonuclear ? std::min(rate, options.rf_nutation_hz) : rate;
}

struct OneQubitRate {
  int spin = 0;
  double rate_hz = 0.0;
  bool selective = false;  // soft pulses required
};

struct TwoQubitRate {
  int i = 0;
  int k = 0;
  double coupling_hz = 0.0;  // J + 2D
  double rate_hz = 0.0;      // 2 |J + 2D|
  double gate_time_s = 0.0;  // 1 / (2 |J + 2D|), the antiphase time
};

struct GateRateReport {
  std::vector<OneQubitRate> one_qubit;
  std::vector<TwoQubitRate> two_qubit;
};

inline GateRateReport gate_rate_report(const SpinSystem& system, const CompilerOptions& options = {}) {
  GateRateReport r;
  for (int q = 0; q < system.size(); ++q) {
    bool selective = false;
    for (int k = 0; k < system.size(); ++k) selective |= k != q && system.same_species(q, k);
    r.one_qubit.push_back({q, one_qubit_rate(system, q, options), selective});
  }
  for (int i = 0; i < system.size(); ++i) {
    for (int k = i + 1; k < system.size(); ++k) {
      const double j = system.couplings().effective(i, k);
      if (std::abs(j) <= options.coupling_threshold_hz || j == 0.0) continue;
      r.two_qubit.push_back({i, k, j, 2.0 * std::abs(j), 1.0 / (2.0 * std::abs(j))});
    }
  }
  return r;
}

enum class SelectivityStatus { pass, warning, overlap };

inline const char* selectivity_status_name(SelectivityStatus s) {
  switch (s) {
    case SelectivityStatus::pass: return "pass";
    case SelectivityStatus::warning: return "warning";
    case SelectivityStatus::overlap: return "overlap";
  }
  return "?";
}

struct SelectivityPair {
  int i = 0;
  int k = 0;
  double margin = 0.0;  // |nu_i - nu_k| / (W_i/2 + W_k/2)
  SelectivityStatus status = SelectivityStatus::pass;
};

struct SelectivityReport {
  std::vector<SelectivityPair> pairs;      // same-species pairs only
  std::vector<double> spin_margin;         // min margin per spin; +inf when unconstrained
  std::vector<SelectivityStatus> spin_status;

  bool any_overlap() const {
    for (const auto& p : pairs)
      if (p.status == SelectivityStatus::overlap) return true;
    return false;
  }
};

inline constexpr double kSelectivityWarnMargin = 5.0;
inline constexpr double kSelectivityFailMargin = 1.0;

/// Multiplet width W_i = sum_j |J_ij + 2 D_ij|, Hz.
inline double multiplet_width(const SpinSystem& system, int i) {
  double w = 0.0;
  for (int j = 0; j < system.size(); ++j)
    if (j != i) w += std::abs(system.couplings().effective(i, j));
  return w;
}

inline SelectivityReport selectivity_check(const SpinSystem& system) {
  SelectivityReport r;
  const int n = system.size();
  r.spin_margin.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  r.spin_status.assign(static_cast<std::size_t>(n), SelectivityStatus::pass);
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      if (!system.same_species(i, k)) continue;  // nucleus-selective excitation is trivial
      const double sep = std::abs(system.spin(i).offset_hz - system.spin(k).offset_hz);
      const double half_widths = 0.5 * (multiplet_width(system, i) + multiplet_width(system, k));
      double margin;
      if (sep == 0.0) {
        margin = 0.0;
      } else if (half_widths == 0.0) {
        margin = std::numeric_limits<double>::infinity();
      } else {
        margin = sep / half_widths;
      }
      SelectivityStatus status = SelectivityStatus::pass;
      if (margin < kSelectivityFailMargin) {
        status = SelectivityStatus::overlap;
      } else if (margin < kSelectivityWarnMargin) {
        status = SelectivityStatus::warning;
      }
      r.pairs.push_back({i, k, margin, status});
      for (int s : {i, k}) {
        r.spin_margin[s] = std::min(r.spin_margin[s], margin);
        r.spin_status[s] = std::max(r.spin_status[s], status);
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pulse emission

/// Rotation of `targets` by `angle` about the axis at `phase`. Spins whose
/// whole species is covered by `targets` share one hard pulse; the rest get
/// individual soft pulses whose length follows from the selectivity-limited rate.
inline PulseSequence rotation_events(const SpinSystem& system, const std::vector<int>& targets, double angle,
                                     double phase, const CompilerOptions& options = {},
                                     const std::string& label = {}) {
  PulseSequence seq(system.size());
  if (targets.empty() || angle == 0.0) return seq;
  std::vector<int> hard;
  std::vector<int> soft;
  const std::set<int> chosen(targets.begin(), targets.end());
  for (int q : chosen) {
    bool whole_species = true;
    for (int k = 0; k < system.size(); ++k)
      if (system.same_species(q, k) && !chosen.contains(k)) whole_species = false;
    (whole_species ? hard : soft).push_back(q);
  }
  if (!hard.empty()) seq.add(HardPulse{hard, angle, phase}, label);
  for (int q : soft) {
    const double rate = one_qubit_rate(system, q, options);
    if (!(rate > 0.0)) {
      throw CompileError("spin " + std::to_string(q) + " cannot be excited selectively (degenerate offsets)");
    }
    const double duration = std::abs(angle) / (2.0 * constants::pi) / rate;
    seq.add(SoftPulse{q, angle, phase, duration}, label);
  }
  return seq;
}

/// Emits the pi pulses and delays of a schedule.
inline PulseSequence schedule_events(const SpinSystem& system, const RefocusingSchedule& schedule,
                                     const CompilerOptions& options = {}) {
  PulseSequence seq(system.size());
  for (int b = 0; b <= schedule.order; ++b) {
    seq.append(rotation_events(system, schedule.flips_at(b), constants::pi, 0.0, options, "refocus"));
    if (b < schedule.order) seq.add(Delay{schedule.intervals[b]}, "evolve");
  }
  return seq;
}

/// Angle reduced to [0, 2 pi).
inline double reduce_angle(double phi) {
  double r = std::fmod(phi, 2.0 * constants::pi);
  if (r < 0.0) r += 2.0 * constants::pi;
  if (r >= 2.0 * constants::pi) r = 0.0;
  return r;
}

/// Controlled phase on a directly coupled pair: refocused delay
/// phi / (2 pi |J_eff|) plus FrameZ(phi/2) on both spins.
inline PulseSequence compile_cphase(int i, int k, double phi, const SpinSystem& system,
                                    const CompilerOptions& options = {},
                                    RefocusingSchedule* schedule_out = nullptr) {
  const int n = system.size();
  if (i < 0 || k < 0 || i >= n || k >= n || i == k) throw CompileError("cphase targets out of range");
  PulseSequence seq(n);
  phi = reduce_angle(phi);
  if (phi == 0.0) return seq;
  const double j_eff = system.couplings().effective(i, k);
  if (j_eff == 0.0 || std::abs(j_eff) <= options.coupling_threshold_hz) throw NotDirectlyCoupledError(i, k);
  const double t = phi / (2.0 * constants::pi * std::abs(j_eff));
  // The coupling must contribute exp(+i phi/2 2 I_z S_z); with J_eff > 0 that
  // needs the pair's signs opposite throughout the delay.
  const int sign = j_eff > 0.0 ? -1 : +1;
  const RefocusingSchedule schedule = refocusing_schedule(system, RetainedCoupling{i, k, sign}, t);
  seq.append(schedule_events(system, schedule, options));
  const std::string label = "cphase " + std::to_string(i) + " " + std::to_string(k);
  seq.add(FrameZ{i, phi / 2.0}, label);
  seq.add(FrameZ{k, phi / 2.0}, label);
  if (schedule_out) *schedule_out = schedule;
  return seq;
}

struct CompilationReport {
  double total_duration_s = 0.0;
  int pulse_count = 0;             // hard + soft pulse events
  int swap_count = 0;              // SWAPs inserted by routing
  int refocusing_pulse_count = 0;  // per-spin pi rotations from echo schedules
  int cphase_count = 0;
  std::vector<std::string> warnings;
};

namespace detail {

class CircuitLowering {
 public:
  CircuitLowering(const SpinSystem& system, const CompilerOptions& options)
      : system_(system), options_(options), graph_(coupling_graph(system, options.coupling_threshold_hz)),
        seq_(system.size()) {}

  void gate(const Gate& g) {
    const auto& t = g.targets;
    switch (g.kind) {
      case GateKind::rx: rotate(t[0], g.angle, 0.0); break;
      case GateKind::ry: rotate(t[0], g.angle, constants::pi / 2.0); break;
      case GateKind::rz: frame(t[0], g.angle); break;
      case GateKind::cphase: cphase(t[0], t[1], g.angle); break;
      case GateKind::cz: cphase(t[0], t[1], constants::pi); break;
      case GateKind::cnot: cnot(t[0], t[1]); break;
      case GateKind::swap: swap(t[0], t[1]); break;
      case GateKind::toffoli: toffoli(t[0], t[1], t[2]); break;
    }
  }

  PulseSequence take_sequence() { return std::move(seq_); }
  CompilationReport& report() { return report_; }

 private:
  void rotate(int q, double angle, double phase) {
    seq_.append(rotation_events(system_, {q}, angle, phase, options_, "rotation"));
  }

  void frame(int q, double angle) {
    if (angle != 0.0) seq_.add(FrameZ{q, angle}, "rz");
  }

  void adjacent_cphase(int a, int b, double phi) {
    RefocusingSchedule schedule;
    PulseSequence part = compile_cphase(a, b, phi, system_, options_, &schedule);
    if (!part.empty()) {
      report_.refocusing_pulse_count += schedule.pi_pulse_count();
      ++report_.cphase_count;
    }
    seq_.append(part);
  }

  void adjacent_cnot(int c, int t) {
    rotate(t, -constants::pi / 2.0, constants::pi / 2.0);
    adjacent_cphase(c, t, constants::pi);
    rotate(t, constants::pi / 2.0, constants::pi / 2.0);
  }

  void adjacent_swap(int a, int b) {
    adjacent_cnot(a, b);
    adjacent_cnot(b, a);
    adjacent_cnot(a, b);
  }

  /// Runs `body(partner)` with b's state moved next to a.
  template <class Body>
  void routed(int a, int b, Body body) {
    if (graph_.adjacent(a, b)) {
      body(b);
      return;
    }
    const SwapChain chain = route_swaps(graph_, a, b);
    for (const auto& [x, y] : chain.before) adjacent_swap(x, y);
    body(chain.partner);
    for (const auto& [x, y] : chain.after) adjacent_swap(x, y);
    report_.swap_count += static_cast<int>(chain.swap_count());
  }

  void cphase(int a, int b, double phi) {
    if (reduce_angle(phi) == 0.0) return;
    routed(a, b, [&](int p) { adjacent_cphase(a, p, phi); });
  }

  void cnot(int c, int t) {
    rotate(t, -constants::pi / 2.0, constants::pi / 2.0);
    cphase(c, t, constants::pi);
    rotate(t, constants::pi / 2.0, constants::pi / 2.0);
  }

  void swap(int a, int b) {
    routed(a, b, [&](int p) { adjacent_swap(a, p); });
  }

  /// Controlled-V with V^2 = X: y-rotation conjugated controlled phase of +-pi/2.
  void controlled_root_x(int c, int t, bool dagger) {
    rotate(t, -constants::pi / 2.0, constants::pi / 2.0);
    cphase(c, t, dagger ? -constants::pi / 2.0 : constants::pi / 2.0);
    rotate(t, constants::pi / 2.0, constants::pi / 2.0);
  }

  void toffoli(int c1, int c2, int t) {
    controlled_root_x(c2, t, false);
    cnot(c1, c2);
    controlled_root_x(c2, t, true);
    cnot(c1, c2);
    controlled_root_x(c1, t, false);
  }

  const SpinSystem& system_;
  CompilerOptions options_;
  CouplingGraph graph_;
  PulseSequence seq_;
  CompilationReport report_;
};

}  // namespace detail

struct Compilation {
  PulseSequence sequence;
  CompilationReport report;
};

/// Lowers a circuit on `system`. Throws RoutingError for disconnected pairs.
inline Compilation compile_circuit(const Circuit& circuit, const SpinSystem& system,
                                   const CompilerOptions& options = {}) {
  if (circuit.qubits() != system.size()) {
    throw CompileError("circuit has " + std::to_string(circuit.qubits()) + " qubits but the molecule has " +
                       std::to_string(system.size()) + " spins");
  }
  detail::CircuitLowering lowering(system, options);
  for (const auto& g : circuit.gates()) lowering.gate(g);
  Compilation out{lowering.take_sequence(), std::move(lowering.report())};

  auto& report = out.report;
  report.total_duration_s = out.sequence.total_duration_s();
  double longest_soft = 0.0;
  for (const auto& ev : out.sequence.events()) {
    if (std::holds_alternative<HardPulse>(ev.body) || std::holds_alternative<SoftPulse>(ev.body)) ++report.pulse_count;
    if (const auto* s = std::get_if<SoftPulse>(&ev.body)) longest_soft = std::max(longest_soft, s->duration_s);
  }

  for (const auto& p : weak_coupling_check(system).pairs) {
    if (!p.pass) {
      report.warnings.push_back("weak coupling violated for spins " + std::to_string(p.i) + "," +
                                std::to_string(p.k) + " (ratio " + std::to_string(p.ratio) + ")");
    }
  }
  for (const auto& p : selectivity_check(system).pairs) {
    if (p.status != SelectivityStatus::pass) {
      report.warnings.push_back(std::string("selectivity ") + selectivity_status_name(p.status) + " for spins " +
                                std::to_string(p.i) + "," + std::to_string(p.k) + " (margin " +
                                std::to_string(p.margin) + ")");
    }
  }
  double strongest = 0.0;
  for (int i = 0; i < system.size(); ++i)
    for (int k = i + 1; k < system.size(); ++k) strongest = std::max(strongest, std::abs(system.couplings().effective(i, k)));
  if (strongest > 0.0 && longest_soft > 0.1 / strongest) {
    report.warnings.push_back("soft pulse of " + std::to_string(longest_soft) +
                              " s exceeds 10% of the shortest coupling period");
  }
  return out;
}

}  // namespace nmrqc
