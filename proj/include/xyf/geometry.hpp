#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xyf/cell.hpp"

namespace xyf {

enum class GeometryKind : uint8_t { Torus, Rectangle, Surgery };

// Geometry of one experiment.
//   Torus:     l1 columns (z-bar period), l2 rows (x-bar period, must be even
//              for circuits), rounds periods.
//   Rectangle: l1 cube columns between the two smooth walls, so l1+1 green
//              columns and l1 purple columns; l2 rows between the rough
//              walls.
//   Surgery:   two l x l rectangle blocks joined by a one-column bridge;
//              the merged block is l x (2l+1); merge window [t0, t1] in
//              periods. l1/l2 are derived as 2l+1 and l.
struct GeometrySpec {
  GeometryKind kind = GeometryKind::Torus;
  int l1 = 2;
  int l2 = 2;
  int rounds = 1;
  int l = 2;   // surgery block size
  int t0 = 0;  // merge at phase 3 of period t0
  int t1 = 1;  // split after phase 3 of period t1

  static GeometrySpec torus(int l1, int l2, int rounds) {
    GeometrySpec g;
    g.kind = GeometryKind::Torus;
    g.l1 = l1;
    g.l2 = l2;
    g.rounds = rounds;
    g.validate();
    return g;
  }
  static GeometrySpec rectangle(int l1, int l2, int rounds) {
    GeometrySpec g;
    g.kind = GeometryKind::Rectangle;
    g.l1 = l1;
    g.l2 = l2;
    g.rounds = rounds;
    g.validate();
    return g;
  }
  static GeometrySpec surgery(int l, int t0, int t1, int rounds) {
    GeometrySpec g;
    g.kind = GeometryKind::Surgery;
    g.l = l;
    g.l1 = 2 * l + 1;
    g.l2 = l;
    g.t0 = t0;
    g.t1 = t1;
    g.rounds = rounds;
    g.validate();
    return g;
  }

  void validate() const {
    if (rounds < 0) throw std::invalid_argument("rounds must be >= 0");
    switch (kind) {
      case GeometryKind::Torus:
        if (l1 < 2 || l2 < 2)
          throw std::invalid_argument("torus requires l1, l2 >= 2");
        break;
      case GeometryKind::Rectangle:
        if (l1 < 1 || l2 < 1)
          throw std::invalid_argument("rectangle requires l1, l2 >= 1");
        break;
      case GeometryKind::Surgery:
        if (l < 1) throw std::invalid_argument("surgery requires l >= 1");
        if (l1 != 2 * l + 1 || l2 != l)
          throw std::invalid_argument("surgery block is l x (2l+1); l1/l2 are derived");
        if (!(0 <= t0 && t0 < t1 && t1 <= rounds))
          throw std::invalid_argument("surgery merge window must satisfy 0 <= t0 < t1 <= rounds");
        break;
    }
  }
};

enum class BoundaryClass : uint8_t {
  Bulk,
  Smooth,
  Rough,
  Corner,
  Removed,
  StateInitial,
  StateFinal,
};

inline const char* to_string(BoundaryClass b) {
  switch (b) {
    case BoundaryClass::Bulk: return "bulk";
    case BoundaryClass::Smooth: return "smooth";
    case BoundaryClass::Rough: return "rough";
    case BoundaryClass::Corner: return "corner";
    case BoundaryClass::Removed: return "removed";
    case BoundaryClass::StateInitial: return "state_initial";
    case BoundaryClass::StateFinal: return "state_final";
  }
  return "?";
}

enum class Species : uint8_t { Green, Purple };

// A qubit of the projected ("squeezed") spatial lattice, in doubled
// coordinates (2*z-bar, 2*x-bar). Green qubits sit at x-bar edge centers
// (even, odd), purple qubits at face centers (odd, odd).
struct QubitId {
  int32_t z2 = 0;  // doubled column
  int32_t v2 = 0;  // doubled row

  friend bool operator==(const QubitId&, const QubitId&) = default;
  friend auto operator<=>(const QubitId&, const QubitId&) = default;

  Species species() const { return (z2 & 1) ? Species::Purple : Species::Green; }
  bool green() const { return species() == Species::Green; }
  std::string str() const {
    return std::string(green() ? "g(" : "p(") + std::to_string(z2) + "," +
           std::to_string(v2) + ")";
  }
};

// The spacetime cubic lattice of one experiment: cell existence, boundary
// classification, and canonicalization. Time (s2) is unbounded here; the
// circuit picks a slab [0, 4*rounds). Cells before/after an explicit slab are
// classified by `classify_in_slab`.
class SpacetimeLattice {
 public:
  explicit SpacetimeLattice(const GeometrySpec& spec);

  const GeometrySpec& spec() const { return spec_; }

  // Canonical representative under the torus identifications (identity for
  // the other geometries). Both shifts preserve all cell parities.
  Cell canon(Cell c) const;

  // Whether the cell is part of the lattice (after boundary truncation and
  // surgery removal). Time is not restricted.
  bool exists(Cell c) const;

  // Spatial/surgery boundary classification; total on cells. Existing cells
  // report Bulk/Smooth/Rough/Corner, non-existing cells report the boundary
  // that swallowed them (Rough/Smooth/Corner/Removed).
  BoundaryClass classify(Cell c) const;

  // classify() refined by a time slab [s2_lo, s2_hi]: cells strictly before
  // or after the slab report StateInitial / StateFinal.
  BoundaryClass classify_in_slab(Cell c, int s2_lo, int s2_hi) const;

  // All existing cells of the given rank with s2 in [s2_lo, s2_hi].
  std::vector<Cell> cells_in_range(CellRank rank, int s2_lo, int s2_hi) const;

  // Faces of `e` / edges of `f` that exist, canonicalized.
  std::vector<Cell> existing_faces_of_edge(Cell e) const;
  std::vector<Cell> existing_edges_of_face(Cell f) const;

  bool is_torus() const { return spec_.kind == GeometryKind::Torus; }

 private:
  bool exists_rect(const Cell& c) const;   // rectangle + surgery common part
  bool bridge_cell(const Cell& c) const;   // z2 == 2l+1 interior of the bridge
  bool bridge_in_window(const Cell& c) const;

  GeometrySpec spec_;
  int v2_max_ = 0;  // 2 * l2
  int z2_max_ = 0;  // 2 * l1
};

// The projected spatial qubit layout with adjacency, in canonical row-major
// (v2, z2) order.
struct SpatialLayout {
  GeometrySpec spec;
  std::vector<QubitId> qubits;  // sorted by (v2, z2)

  int index_of(const QubitId& q) const;           // -1 if absent
  QubitId canon(QubitId q) const;                 // torus wrap
  std::vector<QubitId> neighbors(QubitId q) const;  // layout-adjacent qubits
  bool adjacent(QubitId a, QubitId b) const;
  size_t size() const { return qubits.size(); }
};

SpacetimeLattice build_spacetime_lattice(const GeometrySpec& spec);
SpatialLayout project_spatial(const SpacetimeLattice& lat);

}  // namespace xyf
