#include <algorithm>
#include <stdexcept>

#include "xyf/circuit.hpp"

namespace xyf {

namespace {

// s2 offset of each phase within a period (one period spans s2 += 4).
constexpr int kPhaseS2[6] = {0, 1, 1, 2, 3, 3};

struct Builder {
  const GeometrySpec& spec;
  SpacetimeLattice lat;
  SpatialLayout layout;
  Circuit c;

  explicit Builder(const GeometrySpec& s)
      : spec(s), lat(s), layout(project_spatial(lat)) {
    c.geom = s;
    c.layout = layout;
  }

  bool surgery() const { return spec.kind == GeometryKind::Surgery; }
  int bridge_z2() const { return 2 * spec.l + 1; }

  // Merge-window layer bounds for bridge purple qubits: prepared in the (d)
  // layer of period t0, destructively X-measured in the (c) layer of period
  // t1 (clamped to the schedule if t1 == rounds).
  bool bridge_alive_at_s2(int s2, int phase) const {
    int lo = 4 * spec.t0 + 1;       // prep layer s2 (phase 2)
    int hi = 4 * spec.t1 + 3;       // MX layer s2 (phase 4)
    if (s2 < lo || s2 > hi) return false;
    if (s2 == lo) return phase >= 2;
    if (s2 == hi) return phase <= 4;
    return true;
  }

  // The z-edge cell measuring purple pair around even row v2e at time s2.
  Cell zedge_cell(int v2e, int z2, int s2) const {
    return Cell{(s2 - v2e) / 2, (s2 + v2e) / 2, z2};
  }

  void add_measurement_layer(Layer& layer) {
    int s2 = layer.s2;
    // (b) tensors: existing z-edges at this time slice.
    for (const Cell& e : lat.cells_in_range(CellRank::Edge, s2, s2)) {
      if (e.edge_axis() != Axis::Z) continue;
      int v2 = e.v2();
      layer.ops.push_back({OpKind::MZZ, QubitId{e.z2, v2 - 1}, QubitId{e.z2, v2 + 1}, -1});
    }
    // (a) tensors: existing xy faces.
    for (const Cell& f : lat.cells_in_range(CellRank::Face, s2, s2)) {
      if (f.face_plane() != Plane::XY) continue;
      int v2 = f.v2();
      if (!(1 <= v2 - 1 && v2 + 1 <= 2 * spec.l2 - 1) && !lat.is_torus()) {
        continue;  // truncated (e) identity at the rough wall: no op
      }
      layer.ops.push_back({OpKind::MXX, QubitId{f.z2, v2 - 1}, QubitId{f.z2, v2 + 1}, -1});
    }
    // (f) tensors: boundary M_Z on purples whose ZZ partner slot is missing.
    if (!lat.is_torus()) {
      for (const QubitId& q : layout.qubits) {
        if (q.species() != Species::Purple) continue;
        if (surgery() && q.z2 == bridge_z2() && !bridge_alive_at_s2(s2, layer.phase))
          continue;
        // The slot measuring q at time s2 is the z-edge at the even row v2e
        // adjacent to q with (s2 + v2e) == 0 (mod 4).
        int v2e = q.v2 - 1;
        if ((((s2 + v2e) % 4) + 4) % 4 != 0) v2e = q.v2 + 1;
        if (!lat.exists(zedge_cell(v2e, q.z2, s2)))
          layer.ops.push_back({OpKind::MZ, q, QubitId{}, -1});
      }
    }
    sort_ops(layer);
  }

  // kind: (c) pairs each green with the purple at larger z, (d) with the
  // purple at smaller z. A CX exists iff both the x/y-edge tensor and its
  // z-bonded face tensor exist.
  void add_cx_layer(Layer& layer, bool cd_is_c) {
    int s2 = layer.s2;
    for (const Cell& e : lat.cells_in_range(CellRank::Edge, s2, s2)) {
      if (e.edge_axis() == Axis::Z) continue;
      Cell f{e.x2, e.y2, e.z2 + (cd_is_c ? 1 : -1)};
      if (!lat.exists(f)) continue;
      layer.ops.push_back({OpKind::CX, QubitId{e.z2, e.v2()}, QubitId{f.z2, e.v2()}, -1});
    }
    if (surgery() && s2 == 4 * spec.t0 + 1 && !cd_is_c) {
      for (const QubitId& q : layout.qubits)
        if (q.z2 == bridge_z2()) layer.ops.push_back({OpKind::PrepPlus, q, QubitId{}, -1});
    }
    if (surgery() && s2 == 4 * spec.t1 + 3 && cd_is_c) {
      for (const QubitId& q : layout.qubits)
        if (q.z2 == bridge_z2()) layer.ops.push_back({OpKind::MX, q, QubitId{}, -1});
    }
    sort_ops(layer);
  }

  void sort_ops(Layer& layer) {
    std::stable_sort(layer.ops.begin(), layer.ops.end(),
                     [](const CircuitOp& x, const CircuitOp& y) {
                       auto key = [](const CircuitOp& o) {
                         return std::tuple((int)o.kind, o.a.v2, o.a.z2, o.b.v2, o.b.z2);
                       };
                       return key(x) < key(y);
                     });
  }

  void add_schedule(int periods, int period0 = 0) {
    for (int k = period0; k < period0 + periods; ++k) {
      for (int p = 0; p < 6; ++p) {
        Layer layer;
        layer.index = (int)c.layers.size();
        layer.phase = p;
        layer.s2 = 4 * k + kPhaseS2[p];
        if (p == 0 || p == 3)
          add_measurement_layer(layer);
        else
          add_cx_layer(layer, p == 1 || p == 4);
        c.layers.push_back(std::move(layer));
      }
    }
  }

  void add_init(InitKind init) {
    if (init == InitKind::None) return;
    Layer layer;
    layer.index = (int)c.layers.size();
    layer.phase = 5;
    layer.s2 = -1;
    OpKind k = (init == InitKind::XBasis) ? OpKind::PrepPlus : OpKind::PrepZero;
    for (const QubitId& q : layout.qubits) layer.ops.push_back({k, q, QubitId{}, -1});
    c.layers.push_back(std::move(layer));
  }

  void add_readout(ReadoutBasis basis, int rounds) {
    if (basis == ReadoutBasis::None) return;
    Layer layer;
    layer.index = (int)c.layers.size();
    layer.phase = 0;
    layer.s2 = 4 * rounds;
    OpKind k = (basis == ReadoutBasis::X) ? OpKind::MX : OpKind::MZ;
    for (const QubitId& q : layout.qubits) {
      if (surgery() && q.z2 == bridge_z2() && spec.t1 < rounds) continue;
      layer.ops.push_back({k, q, QubitId{}, -1});
    }
    c.layers.push_back(std::move(layer));
  }

  void assign_labels() {
    int next = 0;
    for (Layer& layer : c.layers)
      for (CircuitOp& op : layer.ops)
        if (is_measurement(op.kind)) op.label = next++;
    c.num_labels = next;
  }
};

PauliString column_z_string(const GeometrySpec& g, int z2) {
  PauliString s;
  for (int v2 = 1; v2 <= 2 * g.l2 - 1; v2 += 2) s.support.push_back({QubitId{z2, v2}, 'Z'});
  return s;
}

PauliString row_x_string(const GeometrySpec&, int v2, int z2_lo, int z2_hi) {
  PauliString s;
  for (int z2 = z2_lo; z2 <= z2_hi; z2 += 2) s.support.push_back({QubitId{z2, v2}, 'X'});
  return s;
}

void attach_readout_labels(Circuit& c) {
  if (c.readout == ReadoutBasis::None) return;
  char want = (c.readout == ReadoutBasis::Z) ? 'Z' : 'X';
  const Layer& last = c.layers.back();
  for (LogicalSpec& lg : c.logicals) {
    bool match = !lg.rep_final.support.empty();
    for (auto& [q, p] : lg.rep_final.support)
      if (p != want) match = false;
    if (!match) continue;
    for (auto& [q, p] : lg.rep_final.support) {
      for (const CircuitOp& op : last.ops)
        if (op.a == q && is_measurement(op.kind)) lg.readout_labels.push_back(op.label);
    }
  }
}

}  // namespace

std::vector<std::pair<int, int>> Circuit::label_positions() const {
  std::vector<std::pair<int, int>> pos(num_labels, {-1, -1});
  for (size_t li = 0; li < layers.size(); ++li)
    for (size_t oi = 0; oi < layers[li].ops.size(); ++oi)
      if (layers[li].ops[oi].label >= 0)
        pos[layers[li].ops[oi].label] = {(int)li, (int)oi};
  return pos;
}

bool Circuit::alive(const QubitId& q, int layer_index) const {
  if (geom.kind != GeometryKind::Surgery) return true;
  if (q.z2 != 2 * geom.l + 1) return true;
  int s2 = layers[layer_index].s2;
  int phase = layers[layer_index].phase;
  int lo = 4 * geom.t0 + 1, hi = 4 * geom.t1 + 3;
  if (geom.t1 >= geom.rounds) hi = 1 << 30;  // never split: merged at readout
  if (s2 < lo || s2 > hi) return false;
  if (s2 == lo && phase < 2) return false;
  if (s2 == hi && phase > 4) return false;
  return true;
}

Circuit build_bare_block(const GeometrySpec& spec, int rounds) {
  if (spec.kind == GeometryKind::Torus && (spec.l2 & 1))
    throw std::invalid_argument(
        "torus circuits need even l2: rows pair vertically and an odd cycle has no "
        "perfect matching of adjacent rows");
  Builder b(spec);
  b.add_schedule(rounds);
  b.assign_labels();
  return std::move(b.c);
}

Circuit build_memory_circuit(const GeometrySpec& spec, int rounds, InitKind init,
                             ReadoutBasis readout) {
  if (spec.kind == GeometryKind::Surgery)
    throw std::invalid_argument("memory circuits take torus or rectangle layouts");
  if (spec.kind == GeometryKind::Torus && (spec.l2 & 1))
    throw std::invalid_argument("torus circuits need even l2");
  Builder b(spec);
  b.add_init(init);
  int gauge_periods = (init == InitKind::Stabilizer) ? 1 : 0;
  b.add_schedule(gauge_periods + rounds);
  b.add_readout(readout, gauge_periods + rounds);
  b.assign_labels();
  Circuit c = std::move(b.c);
  c.init = init;
  c.readout = readout;
  c.first_noisy_layer = (init == InitKind::None ? 0 : 1) + 6 * gauge_periods;

  const GeometrySpec& g = c.geom;
  if (g.kind == GeometryKind::Rectangle) {
    LogicalSpec z{"Z", column_z_string(g, 0), column_z_string(g, 0), {}};
    LogicalSpec x{"X", row_x_string(g, 1, 0, 2 * g.l1), row_x_string(g, 1, 0, 2 * g.l1), {}};
    c.logicals = {z, x};
  } else {
    LogicalSpec za{"Za", column_z_string(g, 0), column_z_string(g, 0), {}};
    PauliString zb;
    for (int z2 = 1; z2 <= 2 * g.l1 - 1; z2 += 2)
      zb.support.push_back({QubitId{z2, 2 * g.l2 - 1}, 'Z'});
    PauliString xa;
    for (int v2 = 1; v2 <= 2 * g.l2 - 1; v2 += 2)
      xa.support.push_back({QubitId{1, v2}, 'X'});
    LogicalSpec xb{"Xb", row_x_string(g, 1, 0, 2 * g.l1 - 2), row_x_string(g, 1, 0, 2 * g.l1 - 2), {}};
    c.logicals = {za, LogicalSpec{"Zb", zb, zb, {}}, LogicalSpec{"Xa", xa, xa, {}}, xb};
  }
  attach_readout_labels(c);
  return c;
}

Circuit build_surgery_circuit(const GeometrySpec& spec, InitKind init,
                              ReadoutBasis readout) {
  if (spec.kind != GeometryKind::Surgery)
    throw std::invalid_argument("build_surgery_circuit needs a surgery spec");
  Builder b(spec);
  b.add_init(init);
  b.add_schedule(spec.rounds);
  b.add_readout(readout, spec.rounds);
  b.assign_labels();
  Circuit c = std::move(b.c);
  c.init = init;
  c.readout = readout;
  c.first_noisy_layer = (init == InitKind::None) ? 0 : 1;

  const GeometrySpec& g = c.geom;
  int bz2 = 2 * g.l + 1;
  LogicalSpec z1{"Z1", column_z_string(g, 0), column_z_string(g, 0), {}};
  LogicalSpec z2{"Z2", column_z_string(g, 4 * g.l + 2), column_z_string(g, 4 * g.l + 2), {}};
  // X1*X2 survives the joint ZZ measurement: one green row across both
  // blocks (the bridge column is purple and not part of it).
  LogicalSpec xx{"X1X2", row_x_string(g, 1, 0, 4 * g.l + 2), row_x_string(g, 1, 0, 4 * g.l + 2), {}};
  c.logicals = {z1, z2, xx};
  attach_readout_labels(c);

  // Class estimator: the bridge-column checks of the first merged
  // measurement layer.
  for (const Layer& layer : c.layers) {
    if (layer.s2 != 4 * g.t0 + 2 || layer.phase != 3) continue;
    for (const CircuitOp& op : layer.ops) {
      if (!is_measurement(op.kind)) continue;
      if (op.a.z2 == bz2 && (!is_two_qubit(op.kind) || op.b.z2 == bz2))
        c.class_labels.push_back(op.label);
    }
  }

  // M1 representative: the worldline faces of the lowest bridge purple
  // across the merge window (cap to cap).
  QubitId p0{bz2, 1};
  int s2_hi = std::min(4 * g.t1 + 1, 4 * g.rounds - 1);
  for (int s2 = 4 * g.t0 + 3; s2 <= s2_hi; s2 += 2)
    c.m1_worldline.push_back(Cell{(s2 - p0.v2) / 2, (s2 + p0.v2) / 2, bz2});
  return c;
}

}  // namespace xyf
