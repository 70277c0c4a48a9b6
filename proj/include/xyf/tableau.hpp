#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xyf/circuit.hpp"
#include "xyf/gf2.hpp"
#include "xyf/noise.hpp"

namespace xyf {

// Measurement outcomes of one shot: outcome (-1)^bit per label, plus a
// determinism flag (outcome forced by the prior state and record).
struct MeasRecord {
  std::vector<uint8_t> bits;
  std::vector<uint8_t> deterministic;

  int outcome(int label) const { return bits[label] ? -1 : +1; }
};

// Aaronson-Gottesman tableau with destabilizer bookkeeping. Row phases are
// tracked mod 4 with an optional symbolic part: a GF(2) vector over the fresh
// random bits r_i introduced by non-deterministic measurements, so a noiseless
// run exposes every outcome as an affine function of the r_i.
class TableauSim {
 public:
  explicit TableauSim(int n, bool symbolic = false);

  int n() const { return n_; }
  int num_random_bits() const { return n_random_; }

  void apply_h(int q);
  void apply_cx(int c, int t);
  // X^x Z^z Pauli given as qubit masks; flips the signs of anticommuting rows.
  void apply_pauli(const Gf2Row& x, const Gf2Row& z);

  struct Outcome {
    uint8_t constant = 0;
    Gf2Row dep;          // symbolic dependence (empty when concrete)
    bool deterministic = false;
    int fresh_bit = -1;  // index of the allocated random bit, if any
  };

  // Projective measurement of the Hermitian Pauli with the given masks.
  // `forced` fixes the outcome of the non-deterministic branch (probability
  // bookkeeping is the caller's job); otherwise `random_bit` supplies it.
  Outcome measure(const Gf2Row& x, const Gf2Row& z, std::optional<uint8_t> forced,
                  uint8_t random_bit = 0);

  // measure + discard: forces the post-measurement sign to +1 (used for
  // preparations; PREP0 resets to |0>, PREP+ to |+>).
  void prepare(int q, bool plus_basis);

  bool commutes_with_stabilizers(const Gf2Row& x, const Gf2Row& z) const;
  // If the Pauli is (+/-) a stabilizer-group element, returns its sign bit.
  std::optional<uint8_t> stabilizer_sign(const Gf2Row& x, const Gf2Row& z) const;

  // Rank of the stabilizer subgroup supported outside the reference qubits
  // [n_sys, n). With n_sys == n this is just n (pure state).
  int isg_rank(int n_sys) const;

  // Debug invariant: rows form a symplectic basis with the standard pairing.
  bool check_symplectic() const;

 private:
  bool anticommutes(int row, const Gf2Row& x, const Gf2Row& z) const;
  void row_mult(int dst, int src);  // row_dst := row_dst * row_src
  int phase_exponent(int dst, int src) const;

  int n_ = 0;
  size_t words_ = 0;
  bool symbolic_ = false;
  int n_random_ = 0;
  // 2n rows: destabilizers [0, n), stabilizers [n, 2n).
  std::vector<uint64_t> xs_, zs_;
  std::vector<uint8_t> phase_;   // mod 4; even at rest
  std::vector<Gf2Row> dep_;      // symbolic sign parts
  std::vector<uint64_t> scratch_x_, scratch_z_;

  uint64_t* xrow(int r) { return xs_.data() + (size_t)r * words_; }
  uint64_t* zrow(int r) { return zs_.data() + (size_t)r * words_; }
  const uint64_t* xrow(int r) const { return xs_.data() + (size_t)r * words_; }
  const uint64_t* zrow(int r) const { return zs_.data() + (size_t)r * words_; }
};

struct EngineResult {
  MeasRecord rec;
  TableauSim tableau;
  double prob = 1.0;  // branch probability in forced mode
};

// Exact simulation of a circuit with injected faults. Outcomes are sampled
// with Born probabilities; fault locations are checked against the circuit.
EngineResult run(const Circuit& c, const ErrorInstance& faults, uint64_t seed);

// Shared forced-record run: returns the branch probability (0 if the record
// is inconsistent) alongside the record actually realized.
EngineResult run_forced(const Circuit& c, const ErrorInstance& faults,
                        const std::vector<uint8_t>& forced_bits);

// One symbolic noiseless pass: the canonical reference record (all random
// bits 0), determinism flags, and each label's dependence on the random bits.
struct ReferenceAnalysis {
  MeasRecord ref;
  std::vector<Gf2Row> label_dep;
  int n_random = 0;

  bool set_deterministic(const std::vector<int>& labels) const;
};

ReferenceAnalysis analyze_reference(const Circuit& c);

// Pauli masks for a PauliString over the circuit's qubit indexing.
void pauli_masks(const Circuit& c, const PauliString& p, Gf2Row& x, Gf2Row& z);

}  // namespace xyf
