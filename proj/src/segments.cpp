#include "xyf/segments.hpp"

#include <stdexcept>

namespace xyf {

namespace {

int mod4(int a) { return ((a % 4) + 4) % 4; }

}  // namespace

Cell green_edge_cell(QubitId g, int s2) {
  return Cell{(s2 - g.v2) / 2, (s2 + g.v2) / 2, g.z2};
}

Cell green_face_cell(QubitId g, int s2) {
  int v2f = g.v2 - 1;
  if (mod4(s2 + v2f) != 2) v2f = g.v2 + 1;
  return Cell{(s2 - v2f) / 2, (s2 + v2f) / 2, g.z2};
}

Cell purple_zedge_cell(QubitId p, int s2) {
  int v2e = p.v2 - 1;
  if (mod4(s2 + v2e) != 0) v2e = p.v2 + 1;
  return Cell{(s2 - v2e) / 2, (s2 + v2e) / 2, p.z2};
}

Cell purple_face_cell(QubitId p, int s2) {
  return Cell{(s2 - p.v2) / 2, (s2 + p.v2) / 2, p.z2};
}

namespace {

bool is_readout_layer(const Circuit& c, int layer_idx) {
  return c.readout != ReadoutBasis::None && layer_idx == (int)c.layers.size() - 1;
}

SegmentSet outcome_segments(const Circuit& c, int layer_idx, const CircuitOp& op) {
  const Layer& layer = c.layers[layer_idx];
  int s2 = layer.s2;
  SegmentSet out;
  if (is_readout_layer(c, layer_idx)) {
    // Flipping a readout outcome is equivalent to the anticommuting Pauli
    // just before it.
    bool green = op.a.green();
    if (op.kind == OpKind::MZ) {
      out.segments.push_back({SegSpecies::M, green ? green_face_cell(op.a, s2)
                                                   : purple_face_cell(op.a, s2 - 1)});
    } else {
      out.segments.push_back({SegSpecies::E, green ? green_edge_cell(op.a, s2 - 1)
                                                   : purple_zedge_cell(op.a, s2)});
    }
    return out;
  }
  switch (op.kind) {
    case OpKind::MXX:
      // Charged tensors on the first-listed (lower-row) qubit's in/out bonds.
      out.segments.push_back({SegSpecies::E, green_edge_cell(op.a, s2 - 1)});
      out.segments.push_back({SegSpecies::E, green_edge_cell(op.a, s2 + 1)});
      break;
    case OpKind::MZZ:
      out.segments.push_back({SegSpecies::M, purple_face_cell(op.a, s2 - 1)});
      out.segments.push_back({SegSpecies::M, purple_face_cell(op.a, s2 + 1)});
      break;
    case OpKind::MZ:
      out.segments.push_back({SegSpecies::M, purple_face_cell(op.a, s2 - 1)});
      out.segments.push_back({SegSpecies::M, purple_face_cell(op.a, s2 + 1)});
      break;
    case OpKind::MX:
      // Surgery split: the destructive X measurement's charge fuses onto the
      // split ZZ check's z-edge at the smooth boundary.
      out.segments.push_back({SegSpecies::E, purple_zedge_cell(op.a, s2 - 1)});
      break;
    default:
      throw std::runtime_error("label on a non-measurement op");
  }
  return out;
}

}  // namespace

SegmentSet segments_for_outcome(const Circuit& c, int label) {
  if (label < 0 || label >= c.num_labels) throw std::runtime_error("unknown label");
  for (size_t li = 0; li < c.layers.size(); ++li)
    for (const CircuitOp& op : c.layers[li].ops)
      if (op.label == label) return outcome_segments(c, (int)li, op);
  throw std::runtime_error("label not found");
}

SegmentSet segments_for_error(const Circuit& c, const Fault& f) {
  if (f.kind == FaultKind::MeasFlip) return segments_for_outcome(c, f.label);

  int layer_idx = f.layer;
  if (layer_idx < 0 || layer_idx >= (int)c.layers.size())
    throw std::runtime_error("fault layer out of range");
  const Layer& layer = c.layers[layer_idx];
  int s2 = layer.s2;
  bool last_layer = layer_idx == (int)c.layers.size() - 1 && c.readout != ReadoutBasis::None;

  char p = f.pauli;
  if (f.kind == FaultKind::PrepFlip) {
    p = 'X';
    for (const CircuitOp& op : layer.ops)
      if ((op.kind == OpKind::PrepPlus || op.kind == OpKind::PrepZero) && op.a == f.qubit)
        p = (op.kind == OpKind::PrepPlus) ? 'Z' : 'X';
  }

  SegmentSet out;
  if (last_layer) return out;  // after the final readout nothing can see it

  bool green = f.qubit.green();
  bool meas_slot = !(s2 & 1);  // measurement-layer time slice (phases 0/3)
  if (p == 'X' || p == 'Y') {
    if (green) {
      if (meas_slot) {
        out.segments.push_back({SegSpecies::M, green_face_cell(f.qubit, s2)});
      } else if (layer.phase == 1 || layer.phase == 4) {
        // Between the (c) and (d) halves: push forward through the (d) half,
        // charging its CX-partner face and the next worldline face.
        out.segments.push_back({SegSpecies::M,
                                purple_face_cell(QubitId{f.qubit.z2 - 1, f.qubit.v2}, s2)});
        out.segments.push_back({SegSpecies::M, green_face_cell(f.qubit, s2 + 1)});
      } else {
        out.segments.push_back({SegSpecies::M, green_face_cell(f.qubit, s2 + 1)});
      }
    } else {
      out.segments.push_back(
          {SegSpecies::M, purple_face_cell(f.qubit, meas_slot ? s2 + 1 : s2)});
    }
  }
  if (p == 'Z' || p == 'Y') {
    if (green) {
      out.segments.push_back(
          {SegSpecies::E, green_edge_cell(f.qubit, meas_slot ? s2 + 1 : s2)});
    } else {
      if (meas_slot) {
        out.segments.push_back({SegSpecies::E, purple_zedge_cell(f.qubit, s2)});
      } else if (layer.phase == 1 || layer.phase == 4) {
        // Between the (c) and (d) halves of the face tensor: push forward
        // through the (d) half, charging its CX-partner edge as well.
        out.segments.push_back(
            {SegSpecies::E, green_edge_cell(QubitId{f.qubit.z2 + 1, f.qubit.v2}, s2)});
        out.segments.push_back({SegSpecies::E, purple_zedge_cell(f.qubit, s2 + 1)});
      } else {
        out.segments.push_back({SegSpecies::E, purple_zedge_cell(f.qubit, s2 + 1)});
      }
    }
  }
  return out;
}

}  // namespace xyf
