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

#include <algorithm>
#include <queue>
#include <utility>
#include <vector>

#include "nmrqc/errors.hpp"
#include "nmrqc/spin_model.hpp"

namespace nmrqc {

/// SWAPs that bring qubit k next to qubit i along a shortest coupling path,
/// and the mirror-image SWAPs that put it back afterwards.
struct SwapChain {
  std::vector<int> path;                     // i = path.front(), k = path.back()
  std::vector<std::pair<int, int>> before;   // applied in order
  std::vector<std::pair<int, int>> after;    // applied in order
  int partner = -1;                          // where k's state sits during the gate

  std::size_t swap_count() const { return before.size() + after.size(); }
};

/// Breadth-first shortest path from i to k (ties broken toward lower indices).
inline std::vector<int> shortest_path(const CouplingGraph& graph, int i, int k) {
  if (i < 0 || k < 0 || i >= graph.vertices || k >= graph.vertices) throw RoutingError("routing index out of range");
  std::vector<int> parent(static_cast<std::size_t>(graph.vertices), -1);
  std::vector<bool> seen(static_cast<std::size_t>(graph.vertices), false);
  std::queue<int> frontier;
  frontier.push(i);
  seen[i] = true;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    if (v == k) break;
    std::vector<int> next = graph.adjacency[v];
    std::sort(next.begin(), next.end());
    for (int w : next) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = v;
      frontier.push(w);
    }
  }
  if (!seen[k]) {
    throw RoutingError("spins " + std::to_string(i) + " and " + std::to_string(k) + " are not connected by couplings");
  }
  std::vector<int> path;
  for (int v = k; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

/// For a path of length d (edges), emits d-1 SWAPs before the gate and d-1 after.
inline SwapChain route_swaps(const CouplingGraph& graph, int i, int k) {
  if (i == k) throw RoutingError("cannot route a spin to itself");
  SwapChain chain;
  chain.path = shortest_path(graph, i, k);
  const int d = static_cast<int>(chain.path.size()) - 1;
  for (int step = d; step >= 2; --step) chain.before.emplace_back(chain.path[step - 1], chain.path[step]);
  chain.after.assign(chain.before.rbegin(), chain.before.rend());
  chain.partner = chain.path[1];
  return chain;
}

}  // namespace nmrqc
