#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "xyf/frame.hpp"
#include "xyf/noise.hpp"

using namespace xyf;

TEST_CASE("zero noise samples an empty instance") {
  Circuit c = build_memory_circuit(GeometrySpec::rectangle(3, 3, 3), 3, InitKind::ZBasis,
                                   ReadoutBasis::Z);
  NoiseParams np;
  Rng rng(1);
  CHECK(sample_errors(c, np, rng).faults.empty());
}

TEST_CASE("p_meas = 1 flips every outcome") {
  Circuit c = build_memory_circuit(GeometrySpec::rectangle(2, 2, 1), 1, InitKind::ZBasis,
                                   ReadoutBasis::Z);
  NoiseParams np;
  np.p_meas = 1.0;
  Rng rng(2);
  ErrorInstance inst = sample_errors(c, np, rng);
  std::set<int> flipped;
  for (const Fault& f : inst.faults) {
    CHECK(f.kind == FaultKind::MeasFlip);
    flipped.insert(f.label);
  }
  CHECK((int)flipped.size() == c.num_labels);
  ReferenceAnalysis ref = analyze_reference(c);
  MeasRecord rec = pauli_frame_sample(c, ref, inst);
  for (int l = 0; l < c.num_labels; ++l) CHECK(rec.bits[l] == (ref.ref.bits[l] ^ 1));
}

TEST_CASE("gate-noise fault count matches the binomial expectation within 3 sigma") {
  Circuit c = build_memory_circuit(GeometrySpec::rectangle(3, 3, 3), 3, InitKind::ZBasis,
                                   ReadoutBasis::Z);
  long gates = 0;
  for (const Layer& layer : c.layers) {
    if (layer.index < c.first_noisy_layer) continue;
    for (const CircuitOp& op : layer.ops) gates += is_two_qubit(op.kind);
  }
  NoiseParams np;
  np.p_gate = 0.01;
  long shots = 4000, events = 0;
  for (long s = 0; s < shots; ++s) {
    Rng rng = Rng::stream(77, s);
    ErrorInstance inst = sample_errors(c, np, rng);
    std::set<std::pair<int, int>> locs;  // one event per (layer, gate) site
    for (const Fault& f : inst.faults)
      if (f.kind == FaultKind::PauliAt)
        locs.insert({f.layer, f.qubit.z2 * 1000 + f.qubit.v2});
    events += (long)inst.faults.size() - (long)std::count_if(
        inst.faults.begin(), inst.faults.end(),
        [](const Fault& f) { return f.kind != FaultKind::PauliAt; });
  }
  // Each gate event produces 1 or 2 Pauli components, 24/15 on average.
  double mean = (double)gates * np.p_gate * (24.0 / 15.0);
  double sigma = std::sqrt((double)gates * np.p_gate * shots) * (24.0 / 15.0) / shots;
  CHECK(std::abs((double)events / shots - mean) < 3 * sigma * std::sqrt((double)shots) /
                                                      std::sqrt((double)shots));
  CHECK(std::abs((double)events / shots - mean) < 5 * sigma);
}

TEST_CASE("elementary enumeration: formula, canonical order, sampled support") {
  Circuit c = build_memory_circuit(GeometrySpec::torus(2, 2, 1), 1, InitKind::ZBasis,
                                   ReadoutBasis::Z);
  std::vector<Fault> faults = enumerate_elementary_faults(c);
  size_t pauli = 0, flips = 0;
  for (const Fault& f : faults) (f.kind == FaultKind::PauliAt ? pauli : flips)++;
  CHECK(pauli == 3 * c.num_qubits() * (c.layers.size() - c.first_noisy_layer));
  CHECK(flips == (size_t)c.num_labels);
  // Stable canonical order.
  std::vector<Fault> again = enumerate_elementary_faults(c);
  CHECK(faults.size() == again.size());
  for (size_t i = 0; i < faults.size(); ++i) CHECK(faults[i] == again[i]);
  // Every sampled fault appears in the enumeration's support.
  NoiseParams np;
  np.p_gate = 0.2;
  np.p_meas = 0.2;
  np.p_idle = 0.2;
  np.p_prep = 0.2;
  Rng rng(5);
  ErrorInstance inst = sample_errors(c, np, rng);
  CHECK(!inst.faults.empty());
  for (const Fault& f : inst.faults) {
    if (f.kind == FaultKind::PrepFlip) continue;  // prep flips alias Pauli faults
    bool found = false;
    for (const Fault& e : faults) found |= e == f;
    CHECK(found);
  }
}

TEST_CASE("empty circuit enumerates no faults") {
  Circuit c;
  c.geom = GeometrySpec::rectangle(1, 1, 1);
  c.layout.spec = c.geom;
  CHECK(enumerate_elementary_faults(c).empty());
}
