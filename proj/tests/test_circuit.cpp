#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "xyf/circuit.hpp"
#include "xyf/tableau.hpp"

using namespace xyf;

namespace {

std::map<OpKind, int> count_ops(const Layer& layer) {
  std::map<OpKind, int> c;
  for (const CircuitOp& op : layer.ops) c[op.kind]++;
  return c;
}

}  // namespace

TEST_CASE("torus 4x4 schedule counts: 16 measurements and 16 CX per layer") {
  Circuit c = build_bare_block(GeometrySpec::torus(4, 4, 1), 1);
  REQUIRE(c.layers.size() == 6);
  for (const Layer& layer : c.layers) {
    auto n = count_ops(layer);
    if (layer.phase == 0 || layer.phase == 3) {
      CHECK(n[OpKind::MXX] + n[OpKind::MZZ] == 16);
      CHECK(n[OpKind::MXX] == 8);
    } else {
      CHECK(n[OpKind::CX] == 16);
    }
  }
  CHECK(c.num_labels == 32);
}

TEST_CASE("every 2-qubit op joins layout-adjacent qubits") {
  for (auto g : {GeometrySpec::torus(4, 4, 2), GeometrySpec::rectangle(3, 4, 2)}) {
    Circuit c = build_memory_circuit(g, g.rounds, InitKind::ZBasis, ReadoutBasis::Z);
    for (const Layer& layer : c.layers)
      for (const CircuitOp& op : layer.ops) {
        if (!is_two_qubit(op.kind)) continue;
        CHECK(c.layout.adjacent(op.a, op.b));
        if (op.kind == OpKind::CX) {
          CHECK(op.a.species() == Species::Green);
          CHECK(op.b.species() == Species::Purple);
        }
        if (op.kind == OpKind::MXX) CHECK(op.a.green());
        if (op.kind == OpKind::MZZ) CHECK(!op.a.green());
      }
  }
  Circuit s = build_surgery_circuit(GeometrySpec::surgery(2, 1, 2, 3), InitKind::ZBasis,
                                    ReadoutBasis::Z);
  for (const Layer& layer : s.layers)
    for (const CircuitOp& op : layer.ops)
      if (is_two_qubit(op.kind)) CHECK(s.layout.adjacent(op.a, op.b));
}

TEST_CASE("no qubit appears twice within a layer") {
  Circuit c = build_surgery_circuit(GeometrySpec::surgery(2, 0, 2, 3), InitKind::ZBasis,
                                    ReadoutBasis::Z);
  for (const Layer& layer : c.layers) {
    std::set<QubitId> seen;
    for (const CircuitOp& op : layer.ops) {
      CHECK(seen.insert(c.layout.canon(op.a)).second);
      if (is_two_qubit(op.kind)) CHECK(seen.insert(c.layout.canon(op.b)).second);
    }
  }
}

TEST_CASE("rectangle boundary layers: MZ on the wall purples, idle wall greens") {
  GeometrySpec g = GeometrySpec::rectangle(3, 4, 1);
  Circuit c = build_bare_block(g, 1);
  // Phase 0: bottom purple row 1 and (l2 even) top row 2*l2-1 unpaired -> MZ.
  auto n0 = count_ops(c.layers[0]);
  CHECK(n0[OpKind::MZ] == 2 * g.l1);  // both walls, every purple column
  // Phase 3: all purples paired, no MZ; wall green rows idle instead.
  auto n3 = count_ops(c.layers[3]);
  CHECK(n3[OpKind::MZ] == 0);
  std::set<QubitId> in_mxx;
  for (const CircuitOp& op : c.layers[3].ops)
    if (op.kind == OpKind::MXX) {
      in_mxx.insert(c.layout.canon(op.a));
      in_mxx.insert(c.layout.canon(op.b));
    }
  for (int z2 = 0; z2 <= 2 * g.l1; z2 += 2) {
    CHECK(!in_mxx.count(QubitId{z2, 1}));
    CHECK(!in_mxx.count(QubitId{z2, 2 * g.l2 - 1}));
  }
}

TEST_CASE("torus circuits are invariant under unit translations") {
  GeometrySpec g = GeometrySpec::torus(3, 4, 1);
  Circuit c = build_bare_block(g, 1);
  auto key = [&](const CircuitOp& op, int dz2, int dv2) {
    QubitId a = c.layout.canon(QubitId{op.a.z2 + dz2, op.a.v2 + dv2});
    QubitId b = is_two_qubit(op.kind) ? c.layout.canon(QubitId{op.b.z2 + dz2, op.b.v2 + dv2})
                                      : QubitId{};
    if (is_two_qubit(op.kind) && std::pair(b.v2, b.z2) < std::pair(a.v2, a.z2)) std::swap(a, b);
    return std::tuple((int)op.kind, a.v2, a.z2, b.v2, b.z2);
  };
  for (const Layer& layer : c.layers) {
    std::multiset<std::tuple<int, int, int, int, int>> plain, shifted;
    for (const CircuitOp& op : layer.ops) {
      plain.insert(key(op, 0, 0));
      shifted.insert(key(op, 2, 0));  // one unit cell in z-bar
    }
    CHECK(plain == shifted);
  }
  // Shift by one row and two phases (half a period).
  for (int p = 0; p < 6; ++p) {
    int p2 = (p + 3) % 6;
    std::multiset<std::tuple<int, int, int, int, int>> a, b;
    for (const CircuitOp& op : c.layers[p].ops) a.insert(key(op, 0, 2));
    for (const CircuitOp& op : c.layers[p2].ops) b.insert(key(op, 0, 0));
    CHECK(a == b);
  }
}

TEST_CASE("T=0 memory circuit is just init and readout") {
  Circuit c = build_memory_circuit(GeometrySpec::rectangle(2, 2, 0), 0, InitKind::ZBasis,
                                   ReadoutBasis::Z);
  REQUIRE(c.layers.size() == 2);
  CHECK(count_ops(c.layers[0])[OpKind::PrepZero] == (int)c.num_qubits());
  CHECK(count_ops(c.layers[1])[OpKind::MZ] == (int)c.num_qubits());
}

TEST_CASE("surgery transitions: preps, bridge checks, and split MX") {
  GeometrySpec g = GeometrySpec::surgery(2, 1, 2, 3);
  Circuit c = build_surgery_circuit(g, InitKind::ZBasis, ReadoutBasis::Z);
  int bz2 = 2 * g.l + 1;

  // PREP+ on the l bridge qubits in the (d) layer of period t0.
  int preps = 0, mxs = 0;
  for (const Layer& layer : c.layers) {
    for (const CircuitOp& op : layer.ops) {
      if (op.kind == OpKind::PrepPlus && op.a.z2 == bz2) {
        ++preps;
        CHECK(layer.s2 == 4 * g.t0 + 1);
        CHECK(layer.phase == 2);
      }
      if (op.kind == OpKind::MX) {
        ++mxs;
        CHECK(op.a.z2 == bz2);
        CHECK(layer.s2 == 4 * g.t1 + 3);
        CHECK(layer.phase == 4);
      }
    }
  }
  CHECK(preps == g.l);
  CHECK(mxs == g.l);

  // The first merged measurement layer carries the bridge ZZ checks, and
  // they are the class estimator labels.
  CHECK(!c.class_labels.empty());
  auto pos = c.label_positions();
  for (int l : c.class_labels) {
    const Layer& layer = c.layers[pos[l].first];
    CHECK(layer.s2 == 4 * g.t0 + 2);
    const CircuitOp& op = layer.ops[pos[l].second];
    CHECK(op.a.z2 == bz2);
  }

  // Before the merge the bridge column is idle: no ops touch it.
  for (const Layer& layer : c.layers) {
    if (layer.s2 >= 4 * g.t0 + 1) break;
    if (layer.index == 0) continue;  // init preps everything
    for (const CircuitOp& op : layer.ops) {
      CHECK(op.a.z2 != bz2);
      if (is_two_qubit(op.kind)) CHECK(op.b.z2 != bz2);
    }
  }

  // Minimal window is well formed.
  CHECK_NOTHROW(build_surgery_circuit(GeometrySpec::surgery(2, 0, 1, 2), InitKind::ZBasis,
                                      ReadoutBasis::Z));
}

TEST_CASE("text round trip is exact and replayable") {
  for (auto g : {GeometrySpec::torus(2, 2, 1), GeometrySpec::rectangle(2, 3, 2)}) {
    Circuit c = build_memory_circuit(g, g.rounds, InitKind::ZBasis, ReadoutBasis::Z);
    std::string s = emit_text(c);
    Circuit p = parse_text(s);
    CHECK(emit_text(p) == s);
    CHECK(p.num_labels == c.num_labels);
    CHECK(p.layout.size() == c.layout.size());
    // Replay both in the engine: identical records under the same seed.
    EngineResult r1 = run(c, {}, 42);
    EngineResult r2 = run(p, {}, 42);
    CHECK(r1.rec.bits == r2.rec.bits);
  }
}

TEST_CASE("malformed text errors name the line") {
  std::string bad = "XYFLOQUET v1\nQUBITS 2\nLAYER 0 phase=0\nMQQ 0 g(0,1) g(0,3)\n";
  try {
    parse_text(bad);
    CHECK(false);
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
}

TEST_CASE("logical representatives: stabilizer in the matching basis, logical opposite") {
  for (auto g : {GeometrySpec::torus(4, 4, 2), GeometrySpec::rectangle(3, 3, 2)}) {
    for (char basis : {'Z', 'X'}) {
      InitKind init = basis == 'Z' ? InitKind::ZBasis : InitKind::XBasis;
      ReadoutBasis ro = basis == 'Z' ? ReadoutBasis::Z : ReadoutBasis::X;
      Circuit c = build_memory_circuit(g, g.rounds, init, ro);
      Circuit head = c;
      head.layers.pop_back();  // state at the final cut
      EngineResult er = run(head, {}, 7);
      for (const LogicalSpec& lg : c.logicals) {
        Gf2Row x(c.num_qubits()), z(c.num_qubits());
        pauli_masks(c, lg.rep_final, x, z);
        if (lg.name[0] == basis) {
          // +1 stabilizer of the noiseless state in its own basis.
          auto sign = er.tableau.stabilizer_sign(x, z);
          REQUIRE(sign.has_value());
          CHECK(*sign == 0);
        } else {
          // Genuine logical of the opposite basis: anticommutes with the
          // stored-basis stabilizer group (it flips the stored logical).
          CHECK(!er.tableau.commutes_with_stabilizers(x, z));
        }
      }
    }
  }
}
