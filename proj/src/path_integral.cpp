#include "xyf/path_integral.hpp"

#include <algorithm>
#include <stdexcept>

#include "xyf/gf2.hpp"

namespace xyf {

namespace {

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

void PathIntegralInstance::finalize_indices() {
  edge_index.clear();
  face_index.clear();
  for (size_t i = 0; i < edges.size(); ++i) edge_index[edges[i]] = (int)i;
  for (size_t i = 0; i < faces.size(); ++i) face_index[faces[i]] = (int)i;
  if (edge_sign.size() != edges.size()) edge_sign.assign(edges.size(), 0);
  if (face_target.size() != faces.size()) face_target.assign(faces.size(), 0);
}

void PathIntegralInstance::insert_anyons(const AnyonConfig& a) {
  for (const Cell& e : a.w_e) {
    auto it = edge_index.find(e);
    if (it == edge_index.end())
      throw std::runtime_error("e-anyon cell " + e.str() + " is not a variable of this instance");
    edge_sign[it->second] ^= 1;
  }
  for (const Cell& f : a.w_m) {
    auto it = face_index.find(f);
    if (it == face_index.end())
      throw std::runtime_error("m-anyon cell " + f.str() + " is not a constraint of this instance");
    face_target[it->second] ^= 1;
  }
}

int64_t evaluate(const PathIntegralInstance& inst) {
  size_t n = inst.edges.size();
  Gf2System sys(n);
  for (size_t f = 0; f < inst.faces.size(); ++f)
    sys.add_row(inst.face_vars[f], inst.face_target[f]);
  for (auto [v, val] : inst.clamps) sys.add_row({v}, val);

  Gf2System::Solution sol = sys.solve();
  if (!sol.consistent) return 0;
  int k = (int)sol.kernel.size();
  if (k > inst.kernel_cap)
    throw std::runtime_error("path integral kernel dimension " + std::to_string(k) +
                             " exceeds cap " + std::to_string(inst.kernel_cap));

  Gf2Row we(n);
  bool any_sign = false;
  for (size_t e = 0; e < n; ++e)
    if (inst.edge_sign[e]) {
      we.set(e, true);
      any_sign = true;
    }
  if (!any_sign) return (int64_t)1 << k;

  int sign = sol.particular.parity_and(we) ? 1 : 0;
  std::vector<uint8_t> flips(k);
  for (int i = 0; i < k; ++i) flips[i] = sol.kernel[i].parity_and(we);

  // Gray-code enumeration of the kernel, accumulating (-1)^{W_e . A}.
  int64_t total = sign ? -1 : 1;
  int cur = sign;
  for (uint64_t g = 1; g < (1ull << k); ++g) {
    cur ^= flips[__builtin_ctzll(g)];
    total += cur ? -1 : 1;
  }
  return total;
}

namespace {

struct BoxCanon {
  const SpacetimeLattice& lat;
  int s2_period;  // 0 = unbounded time

  Cell operator()(Cell c) const {
    if (s2_period > 0) {
      long k = floor_div(c.s2(), s2_period);
      c.x2 -= (int32_t)(k * (s2_period / 2));
      c.y2 -= (int32_t)(k * (s2_period / 2));
    }
    return lat.canon(c);
  }
};

void collect_region(const SpacetimeLattice& lat, const BoxCanon& canon, int s2_lo,
                    int s2_hi, PathIntegralInstance& inst) {
  for (const Cell& e : lat.cells_in_range(CellRank::Edge, s2_lo, s2_hi))
    inst.edges.push_back(e);
  for (const Cell& f : lat.cells_in_range(CellRank::Face, s2_lo, s2_hi))
    inst.faces.push_back(f);
  inst.finalize_indices();
  inst.face_vars.resize(inst.faces.size());
  for (size_t fi = 0; fi < inst.faces.size(); ++fi) {
    for (const Cell& e : edges_of_face(inst.faces[fi])) {
      auto it = inst.edge_index.find(canon(e));
      if (it != inst.edge_index.end()) inst.face_vars[fi].push_back(it->second);
    }
  }
}

}  // namespace

PathIntegralInstance periodic_instance(const GeometrySpec& torus, int t_periods,
                                       const AnyonConfig& anyons) {
  if (torus.kind != GeometryKind::Torus)
    throw std::invalid_argument("periodic_instance needs a torus geometry");
  SpacetimeLattice lat(torus);
  BoxCanon canon{lat, 4 * t_periods};
  PathIntegralInstance inst;
  collect_region(lat, canon, 0, 4 * t_periods - 1, inst);
  AnyonConfig a;
  for (Cell c : anyons.w_e) a.w_e.push_back(canon(c));
  for (Cell c : anyons.w_m) a.w_m.push_back(canon(c));
  inst.insert_anyons(a);
  return inst;
}

OperatorSlab build_operator_slab(const GeometrySpec& spec, int rounds) {
  if (rounds < 1) throw std::invalid_argument("slab needs at least one period");
  OperatorSlab slab;
  slab.geom = spec;
  slab.rounds = rounds;
  SpacetimeLattice lat(spec);
  slab.layout = project_spatial(lat);
  BoxCanon canon{lat, 0};
  PathIntegralInstance& inst = slab.base;

  int s2_end = 4 * rounds;
  // Variables: measured z-edges, the x/y-edges of the block, and the phantom
  // input x/y-edges one half-step before the first measurement layer.
  for (const Cell& e : lat.cells_in_range(CellRank::Edge, -1, s2_end - 1)) {
    if (e.edge_axis() == Axis::Z) {
      if (e.s2() >= 0) inst.edges.push_back(e);
    } else {
      inst.edges.push_back(e);
    }
  }
  for (const Cell& f : lat.cells_in_range(CellRank::Face, 0, s2_end - 1))
    inst.faces.push_back(f);
  inst.finalize_indices();
  inst.face_vars.resize(inst.faces.size());
  for (size_t fi = 0; fi < inst.faces.size(); ++fi)
    for (const Cell& e : edges_of_face(inst.faces[fi])) {
      auto it = inst.edge_index.find(canon(e));
      if (it != inst.edge_index.end()) inst.face_vars[fi].push_back(it->second);
    }

  // Boundary couplers.
  slab.input.resize(slab.layout.size());
  slab.output.resize(slab.layout.size());
  for (size_t qi = 0; qi < slab.layout.size(); ++qi) {
    QubitId q = slab.layout.qubits[qi];
    if (q.species() == Species::Green) {
      Cell in{(-1 - q.v2) / 2, (-1 + q.v2) / 2, q.z2};
      Cell out{(s2_end - 1 - q.v2) / 2, (s2_end - 1 + q.v2) / 2, q.z2};
      slab.input[qi] = {true, inst.edge_index.at(canon(in))};
      slab.output[qi] = {true, inst.edge_index.at(canon(out))};
    } else {
      int v2e = q.v2 - 1;
      if ((((0 + v2e) % 4) + 4) % 4 != 0) v2e = q.v2 + 1;
      Cell in{-v2e / 2, v2e / 2, q.z2};
      slab.input[qi] = {true, inst.edge_index.at(canon(in))};
      Cell out{(s2_end - 1 - q.v2) / 2, (s2_end - 1 + q.v2) / 2, q.z2};
      slab.output[qi] = {false, inst.face_index.at(canon(out))};
    }
  }
  return slab;
}

int64_t evaluate_slab_entry(const OperatorSlab& slab, uint64_t in_bits,
                            uint64_t out_bits, const AnyonConfig& anyons,
                            uint64_t input_leg_flips) {
  PathIntegralInstance inst = slab.base;
  inst.insert_anyons(anyons);
  for (size_t qi = 0; qi < slab.layout.size(); ++qi) {
    uint8_t in_v = (uint8_t)((in_bits >> qi) & 1) ^ (uint8_t)((input_leg_flips >> qi) & 1);
    uint8_t out_v = (uint8_t)((out_bits >> qi) & 1);
    inst.clamps.push_back({slab.input[qi].index, in_v});
    const auto& out = slab.output[qi];
    if (out.clamp)
      inst.clamps.push_back({out.index, out_v});
    else
      inst.face_target[out.index] ^= out_v;
  }
  return evaluate(inst);
}

ClosureReport is_closed(const AnyonConfig& anyons, const SpacetimeLattice& lat,
                        std::optional<std::pair<int, int>> slab_s2) {
  std::unordered_map<Cell, int, CellHash> vpar, cpar;
  for (const Cell& e : anyons.w_e)
    for (const Cell& v : vertices_of_edge(e)) vpar[lat.canon(v)] ^= 1;
  for (const Cell& f : anyons.w_m)
    for (const Cell& c : cubes_of_face(f)) cpar[lat.canon(c)] ^= 1;

  auto bclass = [&](const Cell& c) {
    if (slab_s2) return lat.classify_in_slab(c, slab_s2->first, slab_s2->second);
    return lat.classify(c);
  };
  ClosureReport rep;
  for (auto& [v, p] : vpar) {
    if (!p) continue;
    BoundaryClass b = bclass(v);
    bool absorbed = !lat.exists(v) || b == BoundaryClass::StateInitial ||
                    b == BoundaryClass::StateFinal;
    if (absorbed && (b == BoundaryClass::Rough || b == BoundaryClass::Corner ||
                     b == BoundaryClass::StateInitial || b == BoundaryClass::StateFinal))
      rep.absorbed_e.push_back(v);
    else
      rep.odd_e.push_back(v);
  }
  for (auto& [c, p] : cpar) {
    if (!p) continue;
    BoundaryClass b = bclass(c);
    bool absorbed = !lat.exists(c) || b == BoundaryClass::StateInitial ||
                    b == BoundaryClass::StateFinal;
    if (absorbed && (b == BoundaryClass::Smooth || b == BoundaryClass::Removed ||
                     b == BoundaryClass::StateInitial || b == BoundaryClass::StateFinal))
      rep.absorbed_m.push_back(c);
    else
      rep.odd_m.push_back(c);
  }
  std::sort(rep.odd_e.begin(), rep.odd_e.end());
  std::sort(rep.odd_m.begin(), rep.odd_m.end());
  std::sort(rep.absorbed_e.begin(), rep.absorbed_e.end());
  std::sort(rep.absorbed_m.begin(), rep.absorbed_m.end());
  return rep;
}

namespace {

}  // namespace

// Reference-cut functional for the surgery outcome class: a face set meeting
// every existing edge's face star an even number of times and the M1
// representative an odd number of times, solved once per lattice near the
// middle of the merge window.
std::vector<Cell> surgery_class_cut(const SpacetimeLattice& lat) {
  const GeometrySpec& g = lat.spec();
  int s2c = 4 * g.t0 + 2 * (g.t1 - g.t0) + 2;  // even slot inside the window
  // M1 representative: worldline faces of the lowest bridge purple.
  std::vector<Cell> m1;
  for (int s2 = 4 * g.t0 + 3; s2 <= 4 * g.t1 + 1; s2 += 2)
    m1.push_back(Cell{(s2 - 1) / 2, (s2 + 1) / 2, 2 * g.l + 1});

  for (int half_width = 3; half_width <= 9; half_width += 2) {
    std::vector<Cell> cand = lat.cells_in_range(CellRank::Face, s2c - half_width,
                                                s2c + half_width);
    std::unordered_map<Cell, int, CellHash> cidx;
    for (size_t i = 0; i < cand.size(); ++i) cidx[cand[i]] = (int)i;

    Gf2System sys(cand.size());
    std::unordered_map<Cell, std::vector<int>, CellHash> star;
    for (size_t i = 0; i < cand.size(); ++i)
      for (const Cell& e : lat.existing_edges_of_face(cand[i]))
        star[e].push_back((int)i);
    int z2_max = 2 * g.l1;
    for (auto& [e, faces] : star) {
      // Worldlines may slide along the outer smooth walls; the classes on
      // either side of that corridor differ by a logical Z on one block
      // (tracked separately), so wall-sheet moves are exempt.
      if (e.z2 == 0 || e.z2 == z2_max) continue;
      // Edges whose face star pokes outside the candidate window cannot be
      // balanced inside it; keep the cut clear of them instead.
      if (lat.existing_faces_of_edge(e).size() == faces.size()) {
        sys.add_row(faces, false);
      } else {
        for (int fi : faces) sys.add_row({fi}, false);
      }
    }
    std::vector<int> m1row;
    for (const Cell& f : m1) {
      auto it = cidx.find(lat.canon(f));
      if (it != cidx.end()) m1row.push_back(it->second);
    }
    sys.add_row(m1row, true);

    Gf2System::Solution sol = sys.solve();
    if (!sol.consistent) continue;
    std::vector<Cell> cut;
    for (size_t i = 0; i < cand.size(); ++i)
      if (sol.particular.get(i)) cut.push_back(cand[i]);
    return cut;
  }
  throw std::runtime_error("no surgery class cut found near the merge window");
}

HomologyLabel homology_label(const AnyonConfig& anyons, const SpacetimeLattice& lat) {
  HomologyLabel lab;
  const GeometrySpec& g = lat.spec();
  auto parity_count = [](int& acc) { acc ^= 1; };

  for (Cell e : anyons.w_e) {
    e = lat.canon(e);
    if (e.edge_axis() != Axis::Z && e.v2() == 1) parity_count(lab.e_winding_v);
    if (e.edge_axis() == Axis::Z && e.z2 == 1) parity_count(lab.e_winding_z);
  }
  for (Cell f : anyons.w_m) {
    f = lat.canon(f);
    if (f.face_plane() != Plane::XY && f.v2() == 1) parity_count(lab.m_winding_v);
    if (f.face_plane() == Plane::XY && f.z2 == (g.kind == GeometryKind::Torus ? 0 : 2 * (g.l1 / 2)))
      parity_count(lab.m_winding_z);
  }
  lab.rect_b_e = lab.e_winding_v;
  lab.rect_b_m = lab.m_winding_z;

  if (g.kind == GeometryKind::Surgery) {
    std::vector<Cell> cut = surgery_class_cut(lat);
    std::unordered_map<Cell, int, CellHash> in_cut;
    for (const Cell& f : cut) in_cut[f] = 1;
    int m = 0;
    for (Cell f : anyons.w_m)
      if (in_cut.count(lat.canon(f))) m ^= 1;
    lab.surgery_m = m;
  }
  return lab;
}

std::vector<int64_t> ground_state_amplitudes(const OperatorSlab& slab,
                                             const AnyonConfig& anyons) {
  size_t n = slab.layout.size();
  if (n > 12) throw std::runtime_error("ground_state_amplitudes capped at 12 qubits");
  std::vector<int64_t> amps;
  amps.reserve(1ull << (2 * n));
  for (uint64_t out = 0; out < (1ull << n); ++out)
    for (uint64_t in = 0; in < (1ull << n); ++in)
      amps.push_back(evaluate_slab_entry(slab, in, out, anyons));
  return amps;
}

}  // namespace xyf
