#include "xyf/frame.hpp"

#include <algorithm>
#include <stdexcept>

namespace xyf {

namespace {

struct FrameState {
  const Circuit& c;
  Gf2Row x, z;

  explicit FrameState(const Circuit& circ)
      : c(circ), x(circ.num_qubits()), z(circ.num_qubits()) {}

  void inject(int q, char p) {
    if (p == 'X' || p == 'Y') x.flip(q);
    if (p == 'Z' || p == 'Y') z.flip(q);
  }

  void step_layer(const Layer& layer, std::vector<int>& flips) {
    for (const CircuitOp& op : layer.ops) {
      int a = c.qubit_index(op.a);
      switch (op.kind) {
        case OpKind::CX: {
          int b = c.qubit_index(op.b);
          if (x.get(a)) x.flip(b);
          if (z.get(b)) z.flip(a);
          break;
        }
        case OpKind::PrepZero:
        case OpKind::PrepPlus:
          x.set(a, false);
          z.set(a, false);
          break;
        case OpKind::MXX: {
          int b = c.qubit_index(op.b);
          if (z.get(a) ^ z.get(b)) flips.push_back(op.label);
          break;
        }
        case OpKind::MZZ: {
          int b = c.qubit_index(op.b);
          if (x.get(a) ^ x.get(b)) flips.push_back(op.label);
          break;
        }
        case OpKind::MZ:
          if (x.get(a)) flips.push_back(op.label);
          break;
        case OpKind::MX:
          if (z.get(a)) flips.push_back(op.label);
          break;
      }
    }
  }
};

char prep_flip_pauli(const Circuit& c, const Fault& f) {
  for (const CircuitOp& op : c.layers[f.layer].ops)
    if ((op.kind == OpKind::PrepPlus || op.kind == OpKind::PrepZero) && op.a == f.qubit)
      return op.kind == OpKind::PrepPlus ? 'Z' : 'X';
  return 'X';
}

}  // namespace

FramePropagation propagate_instance(const Circuit& c, const ErrorInstance& inst) {
  FramePropagation out;
  FrameState fs(c);
  std::vector<std::vector<const Fault*>> by_layer(c.layers.size());
  for (const Fault& f : inst.faults) {
    if (f.kind == FaultKind::MeasFlip) {
      out.flipped_labels.push_back(f.label);
      continue;
    }
    if (f.layer < 0 || f.layer >= (int)c.layers.size())
      throw std::runtime_error("fault layer out of range");
    by_layer[f.layer].push_back(&f);
  }
  for (const Layer& layer : c.layers) {
    fs.step_layer(layer, out.flipped_labels);
    for (const Fault* f : by_layer[layer.index]) {
      char p = (f->kind == FaultKind::PrepFlip) ? prep_flip_pauli(c, *f) : f->pauli;
      int q = c.qubit_index(f->qubit);
      if (q < 0) throw std::runtime_error("fault on unknown qubit");
      fs.inject(q, p);
    }
  }
  std::sort(out.flipped_labels.begin(), out.flipped_labels.end());
  // XOR semantics: a label flipped twice is not flipped.
  std::vector<int> dedup;
  for (size_t i = 0; i < out.flipped_labels.size(); ++i) {
    if (i + 1 < out.flipped_labels.size() &&
        out.flipped_labels[i] == out.flipped_labels[i + 1]) {
      ++i;
      continue;
    }
    dedup.push_back(out.flipped_labels[i]);
  }
  out.flipped_labels = std::move(dedup);
  out.final_x = fs.x;
  out.final_z = fs.z;
  return out;
}

FramePropagation propagate_fault(const Circuit& c, const Fault& f) {
  ErrorInstance inst;
  inst.faults.push_back(f);
  return propagate_instance(c, inst);
}

MeasRecord pauli_frame_sample(const Circuit& c, const ReferenceAnalysis& ref,
                              const ErrorInstance& inst) {
  FramePropagation fp = propagate_instance(c, inst);
  MeasRecord rec = ref.ref;
  for (int l : fp.flipped_labels) rec.bits[l] ^= 1;
  return rec;
}

}  // namespace xyf
