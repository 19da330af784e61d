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
#pragma once

#include <vector>

#include "nmrqc/engine.hpp"
#include "nmrqc/pulse_sequence.hpp"

namespace nmrqc {

/// How FrameZ events are realized. `tracked` never rotates the state; it
/// shifts the phase of later pulses on that spin and applies the residual
/// frame only when the state is observed.
enum class FrameMode { explicit_rotation, tracked };

struct SimulationOptions {
  const RelaxationParams* relaxation = nullptr;  // null: no relaxation
  FrameMode frame = FrameMode::explicit_rotation;
};

struct SimulationResult {
  DensityMatrix final_state;
  std::vector<DensityMatrix> acquisitions;  // state at each Acquire event
};

/// Runs a pulse sequence on `rho`. Delays evolve under the full rotating-frame
/// Hamiltonian of `system` and then relax; pulses are instantaneous except
/// soft pulses, which relax over their duration.
inline SimulationResult simulate_sequence(const PulseSequence& seq, const DensityMatrix& rho,
                                          const SpinSystem& system, const SimulationOptions& options = {}) {
  const int n = system.size();
  if (seq.spins() != n || rho.num_spins() != n) throw PhysicsError("sequence, state and system sizes differ");
  const RealVector energies = hamiltonian_diagonal(system);
  const RelaxationParams none = RelaxationParams::none(n);
  const RelaxationParams& relaxation = options.relaxation ? *options.relaxation : none;
  const bool tracked = options.frame == FrameMode::tracked;
  std::vector<double> frame(static_cast<std::size_t>(n), 0.0);

  Matrix state = rho.matrix();
  std::vector<DensityMatrix> acquisitions;
  const auto observed = [&] {
    Matrix m = state;
    if (tracked)
      for (int q = 0; q < n; ++q)
        if (frame[q] != 0.0) conjugate_qubit(m, z_rotation(frame[q]), q, n);
    return DensityMatrix(std::move(m), DensityMatrix::Unchecked{});
  };

  for (const auto& ev : seq.events()) {
    if (const auto* p = std::get_if<HardPulse>(&ev.body)) {
      for (int q : p->targets) conjugate_qubit(state, rotation(p->angle, p->phase - frame[q]), q, n);
    } else if (const auto* s = std::get_if<SoftPulse>(&ev.body)) {
      conjugate_qubit(state, rotation(s->angle, s->phase - frame[s->target]), s->target, n);
      if (options.relaxation) {
        state = relax(DensityMatrix(std::move(state), DensityMatrix::Unchecked{}), relaxation, s->duration_s).matrix();
      }
    } else if (const auto* d = std::get_if<Delay>(&ev.body)) {
      DensityMatrix next = evolve_diagonal(DensityMatrix(std::move(state), DensityMatrix::Unchecked{}), energies,
                                           d->duration_s);
      if (options.relaxation) next = relax(next, relaxation, d->duration_s);
      state = next.matrix();
    } else if (const auto* f = std::get_if<FrameZ>(&ev.body)) {
      if (tracked) {
        frame[f->target] += f->angle;
      } else {
        conjugate_qubit(state, z_rotation(f->angle), f->target, n);
      }
    } else if (const auto* c = std::get_if<Crush>(&ev.body)) {
      state = gradient_crush(DensityMatrix(std::move(state), DensityMatrix::Unchecked{}), c->mode).matrix();
    } else if (std::holds_alternative<Acquire>(ev.body)) {
      acquisitions.push_back(observed());
    }
  }
  return {observed(), std::move(acquisitions)};
}

}  // namespace nmrqc
