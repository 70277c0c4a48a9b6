#pragma once

#include <vector>

#include "xyf/circuit.hpp"
#include "xyf/noise.hpp"

namespace xyf {

enum class SegSpecies : uint8_t { E, M };

// One anyon worldline segment: E segments live on primal edges, M segments
// on faces (Poincare-dual edges).
struct Segment {
  SegSpecies species;
  Cell cell;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmentSet {
  std::vector<Segment> segments;  // parity semantics: repeats cancel
};

// Worldline cells of the projected qubits, in raw (uncanonicalized)
// coordinates. Green worldlines alternate x/y edges (odd s2) and xy faces
// (even s2); purple worldlines alternate z edges (even s2) and xz/yz faces
// (odd s2).
Cell green_edge_cell(QubitId g, int s2);
Cell green_face_cell(QubitId g, int s2);
Cell purple_zedge_cell(QubitId p, int s2);
Cell purple_face_cell(QubitId p, int s2);

// Worldline segments of the -1 outcome of a measurement. Conventions: the
// charged tensors sit on the in/out bonds of the measurement's first-listed
// (lower-row) qubit; boundary and surgery variants follow by dropping cells
// that are not part of the lattice.
SegmentSet segments_for_outcome(const Circuit& c, int label);

// Worldline segments of an elementary fault: Z faults make E segments on the
// adjacent worldline edge cell, X faults make M segments on the adjacent face
// cell, Y is the union, measurement flips reuse the -1 outcome map.
SegmentSet segments_for_error(const Circuit& c, const Fault& f);

}  // namespace xyf
