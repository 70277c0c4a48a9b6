#include "xyf/geometry.hpp"

#include <algorithm>
#include <unordered_set>

namespace xyf {

SpacetimeLattice::SpacetimeLattice(const GeometrySpec& spec) : spec_(spec) {
  spec_.validate();
  v2_max_ = 2 * spec_.l2;
  z2_max_ = 2 * spec_.l1;
}

Cell SpacetimeLattice::canon(Cell c) const {
  if (spec_.kind != GeometryKind::Torus) return c;
  // z wrap: z2 ~ z2 + 2*l1.
  int zm = 2 * spec_.l1;
  c.z2 = ((c.z2 % zm) + zm) % zm;
  // x-bar wrap: (x2, y2) ~ (x2 - l2, y2 + l2), shifting v2 by 2*l2 and
  // keeping s2. Parity-safe only for even l2 (enforced by circuit builders;
  // for odd l2 only spatial projections are meaningful).
  long v2 = (long)c.y2 - c.x2;
  int vm = 2 * spec_.l2;
  long shift = ((v2 % vm) + vm) % vm - v2;  // multiple of vm
  c.x2 -= (int32_t)(shift / 2);
  c.y2 += (int32_t)(shift / 2);
  return c;
}

bool SpacetimeLattice::bridge_cell(const Cell& c) const {
  return spec_.kind == GeometryKind::Surgery && c.z2 == 2 * spec_.l + 1;
}

bool SpacetimeLattice::bridge_in_window(const Cell& c) const {
  // Merge happens at the phase-3 measurement layer of period t0
  // (s2 = 4*t0 + 2), split at the phase-3 layer of period t1 (s2 = 4*t1 + 2).
  int s2 = c.s2();
  int lo = 4 * spec_.t0 + 2, hi = 4 * spec_.t1 + 2;
  switch (c.rank()) {
    case CellRank::Edge:  // z-edges carry the bridge ZZ checks
      return lo <= s2 && s2 <= hi;
    case CellRank::Face:  // xz/yz faces of the bridge purple worldlines
      return lo + 1 <= s2 && s2 <= hi - 1;
    case CellRank::Cube:
      return lo + 2 <= s2 && s2 <= hi - 2;
    default:
      return false;  // no vertices at odd z2... (never reached; bridge has none)
  }
}

bool SpacetimeLattice::exists_rect(const Cell& c) const {
  int v2 = c.v2();
  switch (c.rank()) {
    case CellRank::Vertex:
      // Wall vertices (v2 = 0 or 2*l2) are removed together with the wall
      // z-edges: e worldlines may terminate there.
      if (!(0 < v2 && v2 < v2_max_)) return false;
      return 0 <= c.z2 && c.z2 <= z2_max_;
    case CellRank::Edge:
      switch (c.edge_axis()) {
        case Axis::Z:
          // No variables on the rough-boundary edges.
          if (!(0 < v2 && v2 < v2_max_)) return false;
          return 1 <= c.z2 && c.z2 <= z2_max_ - 1;
        default:  // x/y edges: green worldline cells, rows 1..2*l2-1
          if (!(1 <= v2 && v2 <= v2_max_ - 1)) return false;
          return 0 <= c.z2 && c.z2 <= z2_max_;
      }
    case CellRank::Face:
      switch (c.face_plane()) {
        case Plane::XY:
          // Kept at v2 = 0 / 2*l2 as the truncated identity tensors of the
          // rough wall.
          if (!(0 <= v2 && v2 <= v2_max_)) return false;
          return 0 <= c.z2 && c.z2 <= z2_max_;
        default:  // xz / yz
          if (!(1 <= v2 && v2 <= v2_max_ - 1)) return false;
          return 1 <= c.z2 && c.z2 <= z2_max_ - 1;
      }
    case CellRank::Cube:
      // Cubes centered on the rough wall (the staircase half-cubes) are kept;
      // they carry m-type detector nodes.
      if (!(0 <= v2 && v2 <= v2_max_)) return false;
      return 1 <= c.z2 && c.z2 <= z2_max_ - 1;
  }
  return false;
}

bool SpacetimeLattice::exists(Cell c) const {
  c = canon(c);
  switch (spec_.kind) {
    case GeometryKind::Torus:
      return true;
    case GeometryKind::Rectangle:
      return exists_rect(c);
    case GeometryKind::Surgery:
      if (!exists_rect(c)) return false;
      if (bridge_cell(c)) return bridge_in_window(c);
      return true;
  }
  return false;
}

BoundaryClass SpacetimeLattice::classify(Cell c) const {
  c = canon(c);
  if (spec_.kind == GeometryKind::Torus) return BoundaryClass::Bulk;

  int v2 = c.v2();
  bool v_out = v2 < 0 || v2 > v2_max_;
  bool z_out = c.z2 < 0 || c.z2 > z2_max_;

  if (spec_.kind == GeometryKind::Surgery && bridge_cell(c) && !bridge_in_window(c))
    return BoundaryClass::Removed;

  if (exists(c)) {
    bool at_rough = v2 <= 1 || v2 >= v2_max_ - 1;
    bool at_smooth = c.z2 <= 0 || c.z2 >= z2_max_;
    if (spec_.kind == GeometryKind::Surgery && !at_smooth) {
      // The sheets around the bridge column become smooth walls outside the
      // merge window; cells on them always touch that boundary.
      if (c.z2 == 2 * spec_.l || c.z2 == 2 * spec_.l + 2) at_smooth = true;
    }
    if (at_rough && at_smooth) return BoundaryClass::Corner;
    if (at_rough) return BoundaryClass::Rough;
    if (at_smooth) return BoundaryClass::Smooth;
    return BoundaryClass::Bulk;
  }

  // Non-existing cells: report the boundary that swallowed them.
  if (v_out && z_out) return BoundaryClass::Corner;
  if (v_out) return BoundaryClass::Rough;
  if (z_out) return BoundaryClass::Smooth;
  // In-range but removed: the rough-wall vertex/z-edge slots, or (surgery)
  // interior bridge cells outside the window handled above.
  bool at_wall_line = v2 == 0 || v2 == v2_max_;
  if (at_wall_line && (c.z2 <= 0 || c.z2 >= z2_max_)) return BoundaryClass::Corner;
  if (at_wall_line) return BoundaryClass::Rough;
  return BoundaryClass::Removed;
}

BoundaryClass SpacetimeLattice::classify_in_slab(Cell c, int s2_lo, int s2_hi) const {
  if (c.s2() < s2_lo) return BoundaryClass::StateInitial;
  if (c.s2() > s2_hi) return BoundaryClass::StateFinal;
  return classify(c);
}

std::vector<Cell> SpacetimeLattice::cells_in_range(CellRank rank, int s2_lo,
                                                   int s2_hi) const {
  std::vector<Cell> out;
  // Spatial ranges in (v2, z2); time range in s2. x2/y2 are recovered from
  // (s2, v2). On the torus the canonical window is v2 in [0, 2*l2).
  int v_lo = 0, v_hi = v2_max_;
  int z_lo = 0, z_hi = z2_max_;
  if (is_torus()) v_hi = v2_max_ - 1;
  if (is_torus()) z_hi = z2_max_ - 1;
  for (int s2 = s2_lo; s2 <= s2_hi; ++s2) {
    for (int v2 = v_lo - 2; v2 <= v_hi + 2; ++v2) {
      if (((s2 + v2) & 1) != 0) continue;  // x2,y2 must be integers
      int x2 = (s2 - v2) / 2, y2 = (s2 + v2) / 2;
      for (int z2 = z_lo - 1; z2 <= z_hi + 1; ++z2) {
        Cell c{x2, y2, z2};
        if (c.rank() != rank) continue;
        if (is_torus()) {
          if (v2 < 0 || v2 > v_hi || z2 < 0 || z2 > z_hi) continue;
        }
        if (!exists(c)) continue;
        out.push_back(canon(c));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Cell> SpacetimeLattice::existing_faces_of_edge(Cell e) const {
  std::vector<Cell> out;
  for (const Cell& f : faces_of_edge(e))
    if (exists(f)) out.push_back(canon(f));
  return out;
}

std::vector<Cell> SpacetimeLattice::existing_edges_of_face(Cell f) const {
  std::vector<Cell> out;
  for (const Cell& e : edges_of_face(f))
    if (exists(e)) out.push_back(canon(e));
  return out;
}

SpacetimeLattice build_spacetime_lattice(const GeometrySpec& spec) {
  return SpacetimeLattice(spec);
}

int SpatialLayout::index_of(const QubitId& q) const {
  QubitId c = canon(q);
  auto it = std::lower_bound(qubits.begin(), qubits.end(), c,
                             [](const QubitId& a, const QubitId& b) {
                               return std::pair(a.v2, a.z2) < std::pair(b.v2, b.z2);
                             });
  if (it != qubits.end() && *it == c) return (int)(it - qubits.begin());
  return -1;
}

QubitId SpatialLayout::canon(QubitId q) const {
  if (spec.kind != GeometryKind::Torus) return q;
  int vm = 2 * spec.l2, zm = 2 * spec.l1;
  q.v2 = ((q.v2 % vm) + vm) % vm;
  q.z2 = ((q.z2 % zm) + zm) % zm;
  return q;
}

std::vector<QubitId> SpatialLayout::neighbors(QubitId q) const {
  std::vector<QubitId> out;
  // Cross-species CX partners step by (+-1, 0); same-species measurement
  // partners step by (0, +-2).
  for (auto [dz, dv] : {std::pair{1, 0}, {-1, 0}, {0, 2}, {0, -2}}) {
    QubitId n{q.z2 + dz, q.v2 + dv};
    if (index_of(n) >= 0) out.push_back(canon(n));
  }
  std::sort(out.begin(), out.end(), [](const QubitId& a, const QubitId& b) {
    return std::pair(a.v2, a.z2) < std::pair(b.v2, b.z2);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool SpatialLayout::adjacent(QubitId a, QubitId b) const {
  a = canon(a);
  b = canon(b);
  if (a.species() != b.species()) {
    // CX partners: same row, adjacent columns.
    if (a.v2 != b.v2) {
      if (spec.kind != GeometryKind::Torus) return false;
      if (((a.v2 - b.v2) % (2 * spec.l2)) != 0) return false;
    }
    int dz = std::abs(a.z2 - b.z2);
    if (spec.kind == GeometryKind::Torus) dz = std::min(dz, 2 * spec.l1 - dz);
    return dz == 1;
  }
  // Measurement partners: same column, adjacent rows.
  if (a.z2 != b.z2) return false;
  int dv = std::abs(a.v2 - b.v2);
  if (spec.kind == GeometryKind::Torus) dv = std::min(dv, 2 * spec.l2 - dv);
  return dv == 2;
}

SpatialLayout project_spatial(const SpacetimeLattice& lat) {
  const GeometrySpec& g = lat.spec();
  SpatialLayout out;
  out.spec = g;
  int v_hi = 2 * g.l2 - 1;
  int z_lo = 0, z_hi = 2 * g.l1;
  if (g.kind == GeometryKind::Torus) z_hi = 2 * g.l1 - 1;
  for (int v2 = 1; v2 <= v_hi; v2 += 2)
    for (int z2 = z_lo; z2 <= z_hi; ++z2) out.qubits.push_back(QubitId{z2, v2});
  return out;
}

}  // namespace xyf
