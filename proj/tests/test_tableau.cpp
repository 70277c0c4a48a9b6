#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xyf/statevector.hpp"
#include "xyf/tableau.hpp"

using namespace xyf;

namespace {

// Ad-hoc circuit container for engine tests.
Circuit make_circuit(int n, std::vector<std::vector<CircuitOp>> layers) {
  Circuit c;
  c.geom = GeometrySpec::rectangle(std::max(1, n), 1, 1);
  c.layout.spec = c.geom;
  for (int i = 0; i < n; ++i) c.layout.qubits.push_back(QubitId{i, 1});
  int label = 0, idx = 0;
  for (auto& ops : layers) {
    Layer layer;
    layer.index = idx++;
    for (CircuitOp op : ops) {
      if (is_measurement(op.kind)) op.label = label++;
      layer.ops.push_back(op);
    }
    c.layers.push_back(layer);
  }
  c.num_labels = label;
  return c;
}

QubitId q(int i) { return QubitId{i, 1}; }

Circuit random_circuit(int n, int n_ops, Rng& rng, bool with_preps = true) {
  std::vector<std::vector<CircuitOp>> layers;
  if (with_preps) {
    std::vector<CircuitOp> init;
    for (int i = 0; i < n; ++i)
      init.push_back({rng.bit() ? OpKind::PrepZero : OpKind::PrepPlus, q(i), {}, -1});
    layers.push_back(init);
  }
  for (int i = 0; i < n_ops; ++i) {
    int a = (int)rng.below(n);
    int b = (a + 1 + (int)rng.below(n - 1)) % n;
    switch (rng.below(6)) {
      case 0: layers.push_back({{OpKind::CX, q(a), q(b), -1}}); break;
      case 1: layers.push_back({{OpKind::MXX, q(a), q(b), -1}}); break;
      case 2: layers.push_back({{OpKind::MZZ, q(a), q(b), -1}}); break;
      case 3: layers.push_back({{OpKind::MZ, q(a), {}, -1}}); break;
      case 4: layers.push_back({{OpKind::MX, q(a), {}, -1}}); break;
      default:
        layers.push_back({{rng.bit() ? OpKind::PrepZero : OpKind::PrepPlus, q(a), {}, -1}});
    }
  }
  return make_circuit(n, layers);
}

}  // namespace

TEST_CASE("projector idempotence: repeated ZZ gives the same deterministic outcome") {
  Circuit c = make_circuit(2, {{{OpKind::PrepPlus, q(0), {}, -1}, {OpKind::PrepPlus, q(1), {}, -1}},
                               {{OpKind::MZZ, q(0), q(1), -1}},
                               {{OpKind::MZZ, q(0), q(1), -1}}});
  for (uint64_t seed = 0; seed < 32; ++seed) {
    EngineResult r = run(c, {}, seed);
    CHECK(!r.rec.deterministic[0]);
    CHECK(r.rec.deterministic[1]);
    CHECK(r.rec.bits[0] == r.rec.bits[1]);
  }
}

TEST_CASE("PrepPlus then MX is deterministically +1") {
  Circuit c = make_circuit(1, {{{OpKind::PrepPlus, q(0), {}, -1}}, {{OpKind::MX, q(0), {}, -1}}});
  EngineResult r = run(c, {}, 3);
  CHECK(r.rec.deterministic[0]);
  CHECK(r.rec.bits[0] == 0);
}

TEST_CASE("engine matches statevector on random circuits (shared forced records)") {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + (int)rng.below(5);
    Circuit c = random_circuit(n, 12 + (int)rng.below(18), rng);
    EngineResult sample = run(c, {}, rng.next());
    // Replaying the sampled record must reproduce its probability
    // 2^-(number of random outcomes) and the flags in the dense simulator.
    EngineResult forced = run_forced(c, {}, sample.rec.bits);
    CHECK(forced.prob > 0);
    SvResult sv = run_statevector(c, DenseState::zeros(n),
                                  SvPolicy{SvPolicy::Force, 0, &sample.rec.bits});
    CHECK(std::abs(sv.probability - forced.prob) < 1e-9);
    for (int l = 0; l < c.num_labels; ++l) {
      CHECK(sv.rec.deterministic[l] == forced.rec.deterministic[l]);
      CHECK(sv.rec.deterministic[l] == sample.rec.deterministic[l]);
    }
    // Flipping the final outcome keeps the branch probability when it was
    // random and kills the branch when it was deterministic (no later
    // outcome can depend on it).
    if (c.num_labels > 0) {
      std::vector<uint8_t> bits = sample.rec.bits;
      int l = c.num_labels - 1;
      bits[l] ^= 1;
      EngineResult forced2 = run_forced(c, {}, bits);
      if (sample.rec.deterministic[l])
        CHECK(forced2.prob == 0.0);
      else
        CHECK(forced2.prob == forced.prob);
    }
  }
}

TEST_CASE("faults flip outcomes consistently with the dense simulator") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + (int)rng.below(4);
    Circuit c = random_circuit(n, 14, rng);
    ErrorInstance inst;
    int nl = (int)c.layers.size();
    inst.faults.push_back({FaultKind::PauliAt, (int)rng.below(nl), q((int)rng.below(n)),
                           "XYZ"[rng.below(3)], -1});
    EngineResult sample = run(c, inst, rng.next());
    SvResult sv = run_statevector(c, DenseState::zeros(n),
                                  SvPolicy{SvPolicy::Force, 0, &sample.rec.bits}, inst);
    CHECK(sv.probability > 1e-12);
  }
}

TEST_CASE("determinism flag is re-measurement stability") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + (int)rng.below(3);
    Circuit c = random_circuit(n, 10, rng);
    if (c.num_labels == 0) continue;
    EngineResult r1 = run(c, {}, 5000 + trial);
    // Append a repeat of the final measurement of some qubit pair: here we
    // simply rerun and check flagged-deterministic labels agree between
    // seeds whenever all earlier random outcomes agree.
    EngineResult r2 = run(c, {}, 6000 + trial);
    bool prefix_equal = true;
    for (int l = 0; l < c.num_labels; ++l) {
      if (prefix_equal && r1.rec.deterministic[l])
        CHECK(r1.rec.bits[l] == r2.rec.bits[l]);
      if (r1.rec.bits[l] != r2.rec.bits[l]) prefix_equal = false;
      CHECK(r1.rec.deterministic[l] == r2.rec.deterministic[l]);
    }
  }
}

TEST_CASE("symplectic tableau invariant holds after a full memory run") {
  Circuit c = build_memory_circuit(GeometrySpec::rectangle(2, 2, 1), 1, InitKind::ZBasis,
                                   ReadoutBasis::Z);
  EngineResult r = run(c, {}, 9);
  CHECK(r.tableau.check_symplectic());
}

TEST_CASE("ISG ranks via purified run: torus stores two logical qubits") {
  // 2n qubits, Bell-paired: the system half starts maximally mixed; running
  // the schedule grows the system-supported stabilizer subgroup.
  GeometrySpec g = GeometrySpec::torus(2, 2, 1);
  Circuit block = build_bare_block(g, 1);
  int n = (int)block.num_qubits();
  TableauSim tab(2 * n);
  for (int i = 0; i < n; ++i) {
    tab.apply_h(i);
    tab.apply_cx(i, n + i);
  }
  CHECK(tab.isg_rank(n) == 0);
  Rng rng(4);
  for (const Layer& layer : block.layers)
    for (const CircuitOp& op : layer.ops) {
      int a = block.qubit_index(op.a), b = is_two_qubit(op.kind) ? block.qubit_index(op.b) : -1;
      if (op.kind == OpKind::CX) {
        tab.apply_cx(a, b);
        continue;
      }
      Gf2Row x(2 * n), z(2 * n);
      if (op.kind == OpKind::MXX) {
        x.set(a, true);
        x.set(b, true);
      } else {
        z.set(a, true);
        z.set(b, true);
      }
      tab.measure(x, z, std::nullopt, rng.bit());
    }
  // 2*l1*l2 qubits storing two logical qubits: rank 2*l1*l2 - 2.
  CHECK(tab.isg_rank(n) == n - 2);

  // Rectangle: one logical qubit.
  GeometrySpec rg = GeometrySpec::rectangle(2, 2, 1);
  Circuit rblock = build_bare_block(rg, 1);
  int rn = (int)rblock.num_qubits();
  TableauSim rtab(2 * rn);
  for (int i = 0; i < rn; ++i) {
    rtab.apply_h(i);
    rtab.apply_cx(i, rn + i);
  }
  for (const Layer& layer : rblock.layers)
    for (const CircuitOp& op : layer.ops) {
      int a = rblock.qubit_index(op.a), b = is_two_qubit(op.kind) ? rblock.qubit_index(op.b) : -1;
      if (op.kind == OpKind::CX) {
        rtab.apply_cx(a, b);
        continue;
      }
      Gf2Row x(2 * rn), z(2 * rn);
      if (op.kind == OpKind::MXX) {
        x.set(a, true);
        x.set(b, true);
      } else if (op.kind == OpKind::MZZ) {
        z.set(a, true);
        z.set(b, true);
      } else if (op.kind == OpKind::MZ) {
        z.set(a, true);
      } else {
        x.set(a, true);
      }
      rtab.measure(x, z, std::nullopt, rng.bit());
    }
  CHECK(rtab.isg_rank(rn) == rn - 1);
}

TEST_CASE("fresh PrepZero state has full stabilizer rank") {
  TableauSim tab(5);
  CHECK(tab.isg_rank(5) == 5);
  CHECK(tab.check_symplectic());
}
