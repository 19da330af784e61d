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
 * @file readout.hpp
 * @brief Ensemble readout: free induction decays, spectra and qubit values.
 *
 * The detected signal is Tr(rho(t) sum_i I+^i) over the spins of one channel.
 * With the basis convention |0> = spin up, a spin with positive offset gives
 * a positive frequency.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>
#include <unsupported/Eigen/FFT>

#include "nmrqc/density_matrix.hpp"
#include "nmrqc/engine.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/spin_model.hpp"

namespace nmrqc {

struct Fid {
  double dwell_s = 1e-3;
  std::string channel = "all";
  std::vector<Complex> samples;

  double time(std::size_t k) const { return static_cast<double>(k) * dwell_s; }
};

struct AcquisitionOptions {
  double dwell_s = 1e-3;
  std::size_t points = 1024;
  const RelaxationParams* relaxation = nullptr;  // null: no relaxation
  std::string channel = "all";                   // "all" or a species name
  double noise_sigma = 0.0;                      // additive Gaussian noise per quadrature
  std::uint64_t seed = 0;
};

/// Spins detected by `channel`.
inline std::vector<int> channel_spins(const SpinSystem& system, const std::string& channel) {
  std::vector<int> out;
  for (int q = 0; q < system.size(); ++q)
    if (channel == "all" || system.spin(q).nucleus.species == channel) out.push_back(q);
  if (out.empty()) throw PhysicsError("no spins in detection channel '" + channel + "'");
  return out;
}

/// Samples Tr(rho(t) sum I+) at t = k dwell under free evolution (and relaxation).
inline Fid acquire_fid(const DensityMatrix& rho, const SpinSystem& system, const AcquisitionOptions& options = {}) {
  if (!(options.dwell_s > 0.0)) throw PhysicsError("dwell time must be positive");
  if (options.points < 2) throw PhysicsError("an FID needs at least 2 points");
  const int n = system.size();
  if (rho.num_spins() != n) throw PhysicsError("state and system sizes differ");

  // Elements (a, b) of rho that I+ picks up: a has spin q down, b = a with q up.
  struct Term {
    Eigen::Index row;
    Eigen::Index col;
  };
  std::vector<Term> terms;
  for (int q : channel_spins(system, options.channel)) {
    const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
    for (Eigen::Index a = 0; a < rho.dim(); ++a)
      if (a & bit) terms.push_back({a, a & ~bit});
  }

  const RealVector energies = hamiltonian_diagonal(system);
  Fid fid;
  fid.dwell_s = options.dwell_s;
  fid.channel = options.channel;
  fid.samples.reserve(options.points);
  DensityMatrix state = rho;
  for (std::size_t k = 0; k < options.points; ++k) {
    Complex s = 0.0;
    for (const auto& t : terms) s += state(t.row, t.col);
    fid.samples.push_back(s);
    if (k + 1 == options.points) break;
    state = evolve_diagonal(state, energies, options.dwell_s);
    if (options.relaxation) state = relax(state, *options.relaxation, options.dwell_s);
  }

  if (options.noise_sigma > 0.0) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0.0, options.noise_sigma);
    for (auto& s : fid.samples) s += Complex(noise(rng), noise(rng));
  }
  return fid;
}

struct Peak {
  double frequency_hz = 0.0;
  double amplitude = 0.0;  // |X_k| / N
  double phase = 0.0;      // arg X_k, radians, relative to the first sample
};

struct Spectrum {
  std::vector<double> frequency_hz;  // ascending
  std::vector<Complex> amplitudes;   // X_k / N
  std::vector<Peak> peaks;
};

inline constexpr double kPeakFloor = 1e-9;

/// Local maxima of |amplitude| above kPeakFloor times the global maximum.
inline std::vector<Peak> pick_peaks(const std::vector<double>& freq, const std::vector<Complex>& amp,
                                    double floor = kPeakFloor) {
  std::vector<Peak> peaks;
  const std::size_t n = amp.size();
  double top = 0.0;
  for (const auto& a : amp) top = std::max(top, std::abs(a));
  if (top == 0.0) return peaks;
  const double threshold = floor * top;
  for (std::size_t k = 0; k < n; ++k) {
    const double m = std::abs(amp[k]);
    if (m <= threshold) continue;
    const double left = k > 0 ? std::abs(amp[k - 1]) : 0.0;
    const double right = k + 1 < n ? std::abs(amp[k + 1]) : 0.0;
    if (m > left && m >= right) peaks.push_back({freq[k], m, std::arg(amp[k])});
  }
  return peaks;
}

/// Discrete Fourier transform, reordered so the axis runs from -fs/2 upward.
inline Spectrum spectrum(const Fid& fid) {
  const std::size_t n = fid.samples.size();
  Spectrum s;
  if (n == 0) return s;
  Eigen::FFT<double> fft;
  std::vector<Complex> raw;
  fft.fwd(raw, fid.samples);
  const auto total = static_cast<std::ptrdiff_t>(n);
  const std::ptrdiff_t first = -(total / 2);
  s.frequency_hz.reserve(n);
  s.amplitudes.reserve(n);
  for (std::ptrdiff_t m = first; m < first + total; ++m) {
    const auto k = static_cast<std::size_t>((m + total) % total);
    s.frequency_hz.push_back(static_cast<double>(m) / (static_cast<double>(n) * fid.dwell_s));
    s.amplitudes.push_back(raw[k] / static_cast<double>(n));
  }
  s.peaks = pick_peaks(s.frequency_hz, s.amplitudes);
  return s;
}

/// |sum |x|^2 - N sum |A|^2| / sum |x|^2; zero for an exact transform.
inline double parseval_residual(const Fid& fid, const Spectrum& spec) {
  double time_energy = 0.0;
  double freq_energy = 0.0;
  for (const auto& x : fid.samples) time_energy += std::norm(x);
  for (const auto& a : spec.amplitudes) freq_energy += std::norm(a);
  freq_energy *= static_cast<double>(fid.samples.size());
  if (time_energy == 0.0) return freq_energy;
  return std::abs(time_energy - freq_energy) / time_energy;
}

// ---------------------------------------------------------------------------
// Qubit values

struct PseudoPureForm {
  bool pseudo_pure = false;
  double epsilon = 0.0;
  Vector psi;  // dominant eigenvector
  double rest_spread = 0.0;
};

/// Spectral test for (1 - eps) 1/N + eps |psi><psi| with arbitrary |psi>.
inline PseudoPureForm pseudo_pure_form(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
  const RealVector& values = solver.eigenvalues();  // ascending
  const Eigen::Index dim = values.size();
  PseudoPureForm f;
  const double top = values(dim - 1);
  const double rest_hi = values(dim - 2);
  const double rest_lo = values(0);
  f.rest_spread = rest_hi - rest_lo;
  f.epsilon = top - rest_hi;
  f.psi = solver.eigenvectors().col(dim - 1);
  f.pseudo_pure = f.rest_spread <= 1e-6 * f.epsilon + 1e-14 && f.epsilon > 1e-13;
  return f;
}

struct QubitValue {
  double analog = 0.0;         // 0 for |0>, 1 for |1>
  std::optional<int> rounded;  // set when analog lies within kReadoutRounding of 0 or 1
  bool deterministic() const { return rounded.has_value(); }
};

struct QubitReadout {
  bool signal = false;
  bool normalized = false;  // values divided by the detected eps
  double epsilon = 0.0;
  std::vector<QubitValue> qubits;

  std::string bits() const {
    std::string s;
    for (const auto& q : qubits) s += q.rounded ? static_cast<char>('0' + *q.rounded) : '?';
    return s;
  }
};

inline constexpr double kReadoutRounding = 0.02;

/// v_i = 1/2 - <I_z^i>, divided through by eps when the state is pseudo-pure.
inline QubitReadout read_qubits(const DensityMatrix& rho) {
  const int n = rho.num_spins();
  QubitReadout r;
  const auto form = pseudo_pure_form(rho);
  double scale = 1.0;
  if (form.pseudo_pure) {
    r.normalized = true;
    r.epsilon = form.epsilon;
    scale = form.epsilon;
  }
  double strongest = 0.0;
  for (int q = 0; q < n; ++q) {
    const double iz = z_expectation(rho, q);
    strongest = std::max(strongest, std::abs(iz));
    QubitValue v;
    v.analog = 0.5 - iz / scale;
    if (std::abs(v.analog) <= kReadoutRounding) v.rounded = 0;
    if (std::abs(v.analog - 1.0) <= kReadoutRounding) v.rounded = 1;
    r.qubits.push_back(v);
  }
  // Any traceless content at all, not just z order, counts as signal.
  const double deviation = (rho.matrix() - Matrix::Identity(rho.dim(), rho.dim()) / static_cast<double>(rho.dim()))
                               .cwiseAbs()
                               .maxCoeff();
  r.signal = std::max(strongest, deviation) > 1e-14;
  if (!r.signal) {
    r.normalized = false;
    r.epsilon = 0.0;
    for (auto& v : r.qubits) v = QubitValue{};
  }
  return r;
}

// ---------------------------------------------------------------------------
// Export

inline void write_fid_csv(std::ostream& out, const Fid& fid) {
  out.precision(17);
  out << "time_s,real,imag\n";
  for (std::size_t k = 0; k < fid.samples.size(); ++k)
    out << fid.time(k) << ',' << fid.samples[k].real() << ',' << fid.samples[k].imag() << '\n';
}

inline void write_spectrum_csv(std::ostream& out, const Spectrum& spec) {
  out.precision(17);
  out << "freq_hz,real,imag\n";
  for (std::size_t k = 0; k < spec.amplitudes.size(); ++k)
    out << spec.frequency_hz[k] << ',' << spec.amplitudes[k].real() << ',' << spec.amplitudes[k].imag() << '\n';
}

inline nlohmann::json peaks_to_json(const Spectrum& spec) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : spec.peaks)
    arr.push_back({{"frequency_hz", p.frequency_hz}, {"amplitude", p.amplitude}, {"phase_rad", p.phase}});
  return arr;
}

}  // namespace nmrqc
