#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "xyf/circuit.hpp"
#include "xyf/noise.hpp"
#include "xyf/tableau.hpp"

namespace xyf {

// Dense state on the circuit's qubits in canonical order; amplitude index bit
// i is qubit i.
struct DenseState {
  int n = 0;
  std::vector<std::complex<double>> amps;

  static DenseState zeros(int n) {
    DenseState s;
    s.n = n;
    s.amps.assign(1ull << n, 0.0);
    s.amps[0] = 1.0;
    return s;
  }
  static DenseState basis(int n, uint64_t bits) {
    DenseState s;
    s.n = n;
    s.amps.assign(1ull << n, 0.0);
    s.amps[bits] = 1.0;
    return s;
  }
  double norm2() const;
  void normalize();
  // Fix the global phase: first (by index) nonzero amplitude positive real.
  void canonicalize_phase();
};

struct SvPolicy {
  enum Kind { Sample, Force } kind = Sample;
  uint64_t seed = 0;
  const std::vector<uint8_t>* forced = nullptr;  // recorded bits per label
};

struct SvResult {
  double probability = 1.0;  // of the realized record
  DenseState state;
  MeasRecord rec;
};

// Dense simulation with projective measurements 1/2 (1 +- P) and trace-in
// preparations. Faults are applied like in the stabilizer engine.
SvResult run_statevector(const Circuit& c, const DenseState& input, SvPolicy policy,
                         const ErrorInstance& faults = {}, int qubit_cap = 22);

// Enumerate all measurement branches of a noiseless run (deterministic
// branches do not split); calls sink(record, probability, state). Labels
// with an entry in `forced` are projected instead of branched (the branch
// probability absorbs the projection weight).
struct BranchOptions {
  const std::vector<int>* forced_labels = nullptr;   // sorted label ids
  const std::vector<uint8_t>* forced_bits = nullptr; // parallel values
  long max_branches = 1 << 20;
};
void enumerate_branches(
    const Circuit& c, const DenseState& input,
    const std::function<void(const std::vector<uint8_t>&, double, const DenseState&)>& sink,
    const BranchOptions& opt = {});

// Per outcome-class matrices <out_b| channel |in_a> of a logical operation:
// inputs and output bras are supplied as dense states, the class of a branch
// is computed by the caller from its record.
struct LogicalChannel {
  // channel[class][b * n_in + a]
  std::vector<std::vector<std::complex<double>>> matrices;
};

LogicalChannel logical_channel(const Circuit& c, const std::vector<DenseState>& inputs,
                               const std::vector<DenseState>& out_basis,
                               const std::function<int(const std::vector<uint8_t>&)>& classify,
                               int n_classes);

}  // namespace xyf
