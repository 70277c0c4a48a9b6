#pragma once

#include <cstdint>
#include <vector>

#include "xyf/circuit.hpp"

namespace xyf {

struct NoiseParams {
  double p_gate = 0.0;  // random non-identity Pauli pair after each 2-qubit op
  double p_idle = 0.0;  // per-layer Pauli on qubits no op touches
  double p_meas = 0.0;  // recorded-outcome flip
  double p_prep = 0.0;  // orthogonal-state preparation
  bool idle_noise_unused_bridge = false;

  void validate() const;
};

enum class FaultKind : uint8_t { PauliAt, MeasFlip, PrepFlip };

// An elementary fault. PauliAt applies `pauli` to `qubit` after the ops of
// `layer`; PrepFlip flips the preparation in `layer` on `qubit` (X after
// PREP0, Z after PREP+); MeasFlip toggles the recorded outcome of `label`.
struct Fault {
  FaultKind kind = FaultKind::PauliAt;
  int layer = 0;
  QubitId qubit{};
  char pauli = 'X';
  int label = -1;

  friend bool operator==(const Fault&, const Fault&) = default;
};

struct ErrorInstance {
  std::vector<Fault> faults;
};

// SplitMix64; per-shot streams are derived by counter so results do not
// depend on the worker partition.
struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed + 0x9e3779b97f4a7c15ull) {}
  static Rng stream(uint64_t seed, uint64_t idx) {
    Rng r(seed);
    r.s ^= 0xbf58476d1ce4e5b9ull * (idx + 1);
    r.next();
    return r;
  }
  uint64_t next() {
    uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  uint32_t below(uint32_t m) { return (uint32_t)(next() % m); }
  bool bit() { return next() & 1; }
  bool bernoulli(double p) { return uniform() < p; }
};

// All X/Y/Z single-qubit faults after every layer plus every measurement
// flip, in canonical order.
std::vector<Fault> enumerate_elementary_faults(const Circuit& c);

ErrorInstance sample_errors(const Circuit& c, const NoiseParams& np, Rng& rng);

}  // namespace xyf
