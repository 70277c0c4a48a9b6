#pragma once

#include <vector>

#include "xyf/circuit.hpp"
#include "xyf/gf2.hpp"
#include "xyf/noise.hpp"
#include "xyf/tableau.hpp"

namespace xyf {

// Pauli frame propagated through one circuit: which recorded outcomes flip,
// and the residual frame at the final cut.
struct FramePropagation {
  std::vector<int> flipped_labels;  // sorted
  Gf2Row final_x, final_z;          // over qubit indices
};

FramePropagation propagate_fault(const Circuit& c, const Fault& f);

// Joint propagation of a whole error instance; equals the XOR of the
// per-fault propagations (Pauli frame group property).
FramePropagation propagate_instance(const Circuit& c, const ErrorInstance& inst);

// Fast-path sampler: reference outcomes flipped wherever the propagated
// frame anticommutes with the measured product.
MeasRecord pauli_frame_sample(const Circuit& c, const ReferenceAnalysis& ref,
                              const ErrorInstance& inst);

}  // namespace xyf
