#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "xyf/cell.hpp"
#include "xyf/geometry.hpp"

namespace xyf {

// Anyon worldline insertions: e worldlines as characteristic sets of primal
// edges, m worldlines as sets of faces. Parity semantics (repeats cancel).
struct AnyonConfig {
  std::vector<Cell> w_e;
  std::vector<Cell> w_m;
};

// A concrete instance of the discrete path integral
//   Z = sum_A prod_f delta[sum_{e in f} A(e) = target(f)] prod_e (-1)^{A(e) W_e(e)}
// with an explicit variable/constraint list, so tests can also evaluate
// hand-built lattices.
struct PathIntegralInstance {
  std::vector<Cell> edges;                   // variable cells
  std::vector<Cell> faces;                   // constraint cells
  std::vector<std::vector<int>> face_vars;   // per constraint: variable ids
  std::vector<uint8_t> face_target;          // W_m and boundary constants
  std::vector<uint8_t> edge_sign;            // W_e characteristic
  std::vector<std::pair<int, uint8_t>> clamps;  // boundary-fixed variables
  int kernel_cap = 30;

  std::unordered_map<Cell, int, CellHash> edge_index;
  std::unordered_map<Cell, int, CellHash> face_index;

  void finalize_indices();
  void insert_anyons(const AnyonConfig& a);  // throws if a cell is not present
};

// Exact integer evaluation: Gaussian elimination over GF(2) on the face
// constraints, then enumeration of the constraint kernel accumulating signs.
int64_t evaluate(const PathIntegralInstance& inst);

// A full periodic box (torus lattice) over s2 in one fundamental period list;
// for torus geometry this wraps time as well, giving a closed 3-manifold with
// t period `t_periods`. Used for deformation/duality tests.
PathIntegralInstance periodic_instance(const GeometrySpec& torus, int t_periods,
                                       const AnyonConfig& anyons);

// The spacetime slab matching a bare circuit block of `rounds` periods with
// state boundaries at both phase-0 cuts. Boundary couplers map qubit in/out
// basis values onto the instance.
struct OperatorSlab {
  GeometrySpec geom;
  int rounds = 0;
  SpatialLayout layout;
  PathIntegralInstance base;

  struct Coupler {
    bool clamp = true;  // clamp a variable; otherwise add into a face target
    int index = -1;
  };
  std::vector<Coupler> input;   // by qubit index
  std::vector<Coupler> output;  // by qubit index
};

OperatorSlab build_operator_slab(const GeometrySpec& spec, int rounds);

// <out| Z |in> for computational-basis boundary configurations, with anyon
// insertions and optional extra flips of input couplers (the boundary legs of
// first-layer -1 outcomes).
int64_t evaluate_slab_entry(const OperatorSlab& slab, uint64_t in_bits,
                            uint64_t out_bits, const AnyonConfig& anyons,
                            uint64_t input_leg_flips = 0);

// Closure report: incidence parity of worldline endpoints at every vertex
// (e species) and cube (m species), split into violations and endpoints
// absorbed by an allowed boundary.
struct ClosureReport {
  std::vector<Cell> odd_e, odd_m;            // violating cells
  std::vector<Cell> absorbed_e, absorbed_m;  // allowed boundary terminations
  bool all_even() const { return odd_e.empty() && odd_m.empty(); }
};

ClosureReport is_closed(const AnyonConfig& anyons, const SpacetimeLattice& lat,
                        std::optional<std::pair<int, int>> slab_s2 = std::nullopt);

// Homology labels with pinned reference cuts.
struct HomologyLabel {
  int e_winding_v = 0, e_winding_z = 0;  // torus e classes (i, j)
  int m_winding_v = 0, m_winding_z = 0;  // torus m classes
  int rect_b_e = 0, rect_b_m = 0;        // rectangle B0/B1 per species
  int surgery_m = 0;                     // M0 / M1
};

HomologyLabel homology_label(const AnyonConfig& anyons, const SpacetimeLattice& lat);

// The pinned reference cut for the surgery outcome class: a face set meeting
// every existing edge star evenly and the M1 representative once; the class
// of a closed m configuration is its crossing parity.
std::vector<Cell> surgery_class_cut(const SpacetimeLattice& lat);

// State amplitudes of a slab with both state boundaries: value for every
// (input, output) boundary configuration, indexed out_bits * 2^n + in_bits.
std::vector<int64_t> ground_state_amplitudes(const OperatorSlab& slab,
                                             const AnyonConfig& anyons);

}  // namespace xyf
