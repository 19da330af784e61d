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
 * @file refocusing.hpp
 * @brief Spin-echo sign schedules built from rows of a Sylvester Hadamard
 * matrix.
 *
 * A schedule divides a delay into M equal intervals. In interval a spin i
 * sees its Hamiltonian terms with sign s_i(a) (pi pulses toggle the sign).
 * Every row used sums to zero, so all offsets refocus. Coupled spins get
 * distinct (hence orthogonal) rows, so their coupling refocuses. A retained
 * pair shares a row (or uses a row and its negation) so its coupling acts
 * for the whole delay. Uncoupled spins may share rows, which is what makes
 * sparse coupling networks cheap.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <vector>

#include "nmrqc/errors.hpp"
#include "nmrqc/spin_model.hpp"

namespace nmrqc {

/// Coupling kept active during a refocused delay. sign = +1 keeps
/// +pi J_eff 2 I_z I_z, sign = -1 inverts it.
struct RetainedCoupling {
  int i = 0;
  int k = 1;
  int sign = +1;
};

struct RefocusingSchedule {
  std::vector<double> intervals;       // s
  std::vector<std::vector<int>> signs;  // signs[spin][interval], +1 or -1
  std::optional<RetainedCoupling> retained;
  int order = 0;  // Hadamard order M == intervals.size()

  int spins() const { return static_cast<int>(signs.size()); }

  double total_time() const {
    double t = 0.0;
    for (double d : intervals) t += d;
    return t;
  }

  /// sum_a s_i(a) t_a: net evolution time of spin i's offset.
  double larmor_residual(int i) const {
    double acc = 0.0;
    for (std::size_t a = 0; a < intervals.size(); ++a) acc += signs[i][a] * intervals[a];
    return acc;
  }

  /// sum_a s_i(a) s_k(a) t_a: net evolution time of the (i,k) coupling.
  double coupling_residual(int i, int k) const {
    double acc = 0.0;
    for (std::size_t a = 0; a < intervals.size(); ++a) acc += signs[i][a] * signs[k][a] * intervals[a];
    return acc;
  }

  /// Spins that receive a pi pulse before interval `boundary`; boundary ==
  /// order denotes the closing pulses that return every spin to +1.
  std::vector<int> flips_at(int boundary) const {
    std::vector<int> out;
    for (int i = 0; i < spins(); ++i) {
      const int before = boundary == 0 ? +1 : signs[i][boundary - 1];
      const int after = boundary == order ? +1 : signs[i][boundary];
      if (before != after) out.push_back(i);
    }
    return out;
  }

  /// Per-spin pi pulses that create the sign pattern (sign changes inside the delay).
  int echo_pulse_count() const {
    int count = 0;
    for (int b = 0; b < order; ++b) count += static_cast<int>(flips_at(b).size());
    return count;
  }

  /// Per-spin pi pulses appended so that every spin ends unflipped.
  int closing_pulse_count() const { return static_cast<int>(flips_at(order).size()); }

  int pi_pulse_count() const { return echo_pulse_count() + closing_pulse_count(); }
};

namespace detail {

inline int sylvester_sign(int row, int col) { return (std::popcount(static_cast<unsigned>(row & col)) & 1) ? -1 : +1; }

/// Rows 1..order-1 of the Sylvester matrix ordered by number of sign changes.
inline std::vector<std::vector<int>> refocusing_rows(int order) {
  std::vector<std::vector<int>> rows;
  for (int r = 1; r < order; ++r) {
    std::vector<int> row(static_cast<std::size_t>(order));
    for (int c = 0; c < order; ++c) row[c] = sylvester_sign(r, c);
    rows.push_back(std::move(row));
  }
  const auto changes = [](const std::vector<int>& row) {
    int c = 0;
    for (std::size_t a = 1; a < row.size(); ++a) c += row[a] != row[a - 1];
    return c + (row.back() == -1);
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const auto& a, const auto& b) { return changes(a) < changes(b); });
  return rows;
}

}  // namespace detail

inline constexpr int kMaxHadamardOrder = 1 << 12;

/// Builds a refocusing schedule over `total_time` for every spin of `system`.
/// Couplings with |J + 2D| > 0 are treated as active and must be refocused
/// unless they are the retained pair.
inline RefocusingSchedule refocusing_schedule(const SpinSystem& system, std::optional<RetainedCoupling> retained,
                                              double total_time) {
  if (!(total_time > 0.0)) throw CompileError("refocusing schedule needs a positive duration");
  const int n = system.size();
  if (retained) {
    if (retained->i == retained->k || retained->i < 0 || retained->k < 0 || retained->i >= n || retained->k >= n) {
      throw CompileError("retained pair out of range");
    }
    if (retained->sign != 1 && retained->sign != -1) throw CompileError("retained sign must be +1 or -1");
  }

  // Group spins: the retained pair is one vertex of the must-differ graph.
  std::vector<int> group(static_cast<std::size_t>(n));
  int groups = 0;
  if (retained) {
    group[retained->i] = group[retained->k] = groups++;
  }
  for (int i = 0; i < n; ++i) {
    if (retained && (i == retained->i || i == retained->k)) continue;
    group[i] = groups++;
  }

  std::vector<std::vector<bool>> conflict(static_cast<std::size_t>(groups), std::vector<bool>(groups, false));
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      if (group[i] == group[k]) continue;
      if (system.couplings().effective(i, k) != 0.0) conflict[group[i]][group[k]] = conflict[group[k]][group[i]] = true;
    }
  }

  // Greedy colouring in group order.
  std::vector<int> color(static_cast<std::size_t>(groups), -1);
  int colors = 0;
  for (int g = 0; g < groups; ++g) {
    std::vector<bool> used(static_cast<std::size_t>(groups) + 1, false);
    for (int h = 0; h < groups; ++h)
      if (conflict[g][h] && color[h] >= 0) used[color[h]] = true;
    int c = 0;
    while (used[c]) ++c;
    color[g] = c;
    colors = std::max(colors, c + 1);
  }

  int order = 2;
  while (order - 1 < colors) {
    order *= 2;
    if (order > kMaxHadamardOrder) throw CompileError("no refocusing order found below the cap");
  }
  const auto rows = detail::refocusing_rows(order);

  RefocusingSchedule s;
  s.order = order;
  s.retained = retained;
  s.intervals.assign(static_cast<std::size_t>(order), total_time / order);
  s.signs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    s.signs[i] = rows[color[group[i]]];
    if (retained && retained->sign < 0 && i == retained->i) {
      for (int& v : s.signs[i]) v = -v;
    }
  }
  return s;
}

}  // namespace nmrqc
