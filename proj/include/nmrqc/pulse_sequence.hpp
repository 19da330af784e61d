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
 * @file pulse_sequence.hpp
 * @brief Timed pulse-sequence events and their JSON file format.
 */
#pragma once

#include <fstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "nmrqc/engine.hpp"
#include "nmrqc/errors.hpp"

namespace nmrqc {

struct HardPulse {
  std::vector<int> targets;
  double angle = 0.0;
  double phase = 0.0;
};

struct SoftPulse {
  int target = 0;
  double angle = 0.0;
  double phase = 0.0;
  double duration_s = 0.0;
};

struct Delay {
  double duration_s = 0.0;
};

/// Bookkept z rotation exp(-i angle I_z); zero duration.
struct FrameZ {
  int target = 0;
  double angle = 0.0;
};

struct Crush {
  CrushMode mode = CrushMode::physical;
};

struct Acquire {
  double dwell_s = 1e-3;
  int points = 1024;
};

using PulseEventBody = std::variant<HardPulse, SoftPulse, Delay, FrameZ, Crush, Acquire>;

struct PulseEvent {
  PulseEventBody body;
  std::string label;  // free-form provenance, e.g. "refocus", "cphase 0 1"

  double duration_s() const {
    if (const auto* s = std::get_if<SoftPulse>(&body)) return s->duration_s;
    if (const auto* d = std::get_if<Delay>(&body)) return d->duration_s;
    return 0.0;
  }
};

class PulseSequence {
 public:
  explicit PulseSequence(int spins = 0) : spins_(spins) {}

  int spins() const { return spins_; }
  const std::vector<PulseEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

  PulseSequence& add(PulseEventBody body, std::string label = {}) {
    validate(body);
    events_.push_back({std::move(body), std::move(label)});
    return *this;
  }

  PulseSequence& append(const PulseSequence& other) {
    for (const auto& e : other.events()) add(e.body, e.label);
    return *this;
  }

  double total_duration_s() const {
    double t = 0.0;
    for (const auto& e : events_) t += e.duration_s();
    return t;
  }

  friend bool operator==(const PulseSequence& a, const PulseSequence& b);

 private:
  void check_target(int q) const {
    if (q < 0 || q >= spins_) throw ParseError("pulse target " + std::to_string(q) + " out of range");
  }

  void validate(const PulseEventBody& body) const {
    std::visit(
        [this](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, HardPulse>) {
            if (e.targets.empty()) throw ParseError("hard pulse without targets");
            for (int q : e.targets) check_target(q);
          } else if constexpr (std::is_same_v<T, SoftPulse>) {
            check_target(e.target);
            if (!(e.duration_s > 0.0)) throw ParseError("soft pulse duration must be positive");
          } else if constexpr (std::is_same_v<T, Delay>) {
            if (!(e.duration_s >= 0.0)) throw ParseError("delay duration must be non-negative");
          } else if constexpr (std::is_same_v<T, FrameZ>) {
            check_target(e.target);
          } else if constexpr (std::is_same_v<T, Acquire>) {
            if (!(e.dwell_s > 0.0) || e.points < 2) throw ParseError("acquire needs dwell > 0 and >= 2 points");
          }
        },
        body);
  }

  int spins_;
  std::vector<PulseEvent> events_;
};

inline bool operator==(const HardPulse& a, const HardPulse& b) {
  return a.targets == b.targets && a.angle == b.angle && a.phase == b.phase;
}
inline bool operator==(const SoftPulse& a, const SoftPulse& b) {
  return a.target == b.target && a.angle == b.angle && a.phase == b.phase && a.duration_s == b.duration_s;
}
inline bool operator==(const Delay& a, const Delay& b) { return a.duration_s == b.duration_s; }
inline bool operator==(const FrameZ& a, const FrameZ& b) { return a.target == b.target && a.angle == b.angle; }
inline bool operator==(const Crush& a, const Crush& b) { return a.mode == b.mode; }
inline bool operator==(const Acquire& a, const Acquire& b) { return a.dwell_s == b.dwell_s && a.points == b.points; }

inline bool operator==(const PulseSequence& a, const PulseSequence& b) {
  if (a.spins_ != b.spins_ || a.events_.size() != b.events_.size()) return false;
  for (std::size_t i = 0; i < a.events_.size(); ++i) {
    if (a.events_[i].label != b.events_[i].label || !(a.events_[i].body == b.events_[i].body)) return false;
  }
  return true;
}

inline const char* crush_mode_name(CrushMode m) { return m == CrushMode::ideal ? "ideal" : "physical"; }

inline CrushMode parse_crush_mode(const std::string& s) {
  if (s == "physical") return CrushMode::physical;
  if (s == "ideal") return CrushMode::ideal;
  throw ParseError("unknown crush mode '" + s + "'");
}

inline constexpr const char* kSequenceFormat = "nmrqc-pulse-sequence";

inline nlohmann::json sequence_to_json(const PulseSequence& seq) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& ev : seq.events()) {
    nlohmann::json j = std::visit(
        [](const auto& e) -> nlohmann::json {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, HardPulse>) {
            return {{"type", "hard"}, {"targets", e.targets}, {"angle", e.angle}, {"phase", e.phase}};
          } else if constexpr (std::is_same_v<T, SoftPulse>) {
            return {{"type", "soft"}, {"targets", {e.target}}, {"angle", e.angle}, {"phase", e.phase},
                    {"duration_s", e.duration_s}};
          } else if constexpr (std::is_same_v<T, Delay>) {
            return {{"type", "delay"}, {"duration_s", e.duration_s}};
          } else if constexpr (std::is_same_v<T, FrameZ>) {
            return {{"type", "frame_z"}, {"targets", {e.target}}, {"angle", e.angle}};
          } else if constexpr (std::is_same_v<T, Crush>) {
            return {{"type", "crush"}, {"mode", crush_mode_name(e.mode)}};
          } else {
            return {{"type", "acquire"}, {"dwell_s", e.dwell_s}, {"points", e.points}};
          }
        },
        ev.body);
    if (!ev.label.empty()) j["label"] = ev.label;
    events.push_back(std::move(j));
  }
  return {{"format", kSequenceFormat}, {"version", 1}, {"spins", seq.spins()}, {"events", std::move(events)}};
}

inline PulseSequence sequence_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string{}) != kSequenceFormat) throw ParseError("not a pulse sequence document");
    PulseSequence seq(j.at("spins").get<int>());
    for (const auto& e : j.at("events")) {
      const auto type = e.at("type").get<std::string>();
      const auto label = e.value("label", std::string{});
      const auto single_target = [&] {
        const auto t = e.at("targets").get<std::vector<int>>();
        if (t.size() != 1) throw ParseError(type + " event takes exactly one target");
        return t.front();
      };
      if (type == "hard") {
        seq.add(HardPulse{e.at("targets").get<std::vector<int>>(), e.at("angle").get<double>(),
                          e.at("phase").get<double>()},
                label);
      } else if (type == "soft") {
        seq.add(SoftPulse{single_target(), e.at("angle").get<double>(), e.at("phase").get<double>(),
                          e.at("duration_s").get<double>()},
                label);
      } else if (type == "delay") {
        seq.add(Delay{e.at("duration_s").get<double>()}, label);
      } else if (type == "frame_z") {
        seq.add(FrameZ{single_target(), e.at("angle").get<double>()}, label);
      } else if (type == "crush") {
        seq.add(Crush{parse_crush_mode(e.at("mode").get<std::string>())}, label);
      } else if (type == "acquire") {
        seq.add(Acquire{e.at("dwell_s").get<double>(), e.at("points").get<int>()}, label);
      } else {
        throw ParseError("unknown event type '" + type + "'");
      }
    }
    return seq;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("pulse sequence: ") + ex.what());
  }
}

inline void write_sequence(const PulseSequence& seq, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << sequence_to_json(seq).dump(2) << '\n';
}

inline PulseSequence read_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path + ": " + ex.what());
  }
  return sequence_from_json(j);
}

}  // namespace nmrqc
