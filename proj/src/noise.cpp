#include "xyf/noise.hpp"

#include <stdexcept>

namespace xyf {

void NoiseParams::validate() const {
  for (double p : {p_gate, p_idle, p_meas, p_prep})
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise probability outside [0,1]");
}

std::vector<Fault> enumerate_elementary_faults(const Circuit& c) {
  std::vector<Fault> out;
  for (const Layer& layer : c.layers) {
    if (layer.index < c.first_noisy_layer) continue;
    for (const QubitId& q : c.layout.qubits) {
      if (!c.alive(q, layer.index)) continue;
      for (char p : {'X', 'Y', 'Z'})
        out.push_back({FaultKind::PauliAt, layer.index, q, p, -1});
    }
  }
  for (const Layer& layer : c.layers) {
    if (layer.index < c.first_noisy_layer) continue;
    for (const CircuitOp& op : layer.ops)
      if (is_measurement(op.kind))
        out.push_back({FaultKind::MeasFlip, layer.index, QubitId{}, 'I', op.label});
  }
  return out;
}

ErrorInstance sample_errors(const Circuit& c, const NoiseParams& np, Rng& rng) {
  np.validate();
  static const char kPauli[3] = {'X', 'Y', 'Z'};
  ErrorInstance inst;
  for (const Layer& layer : c.layers) {
    if (layer.index < c.first_noisy_layer) continue;
    std::vector<uint8_t> touched(c.layout.size(), 0);
    for (const CircuitOp& op : layer.ops) {
      touched[c.qubit_index(op.a)] = 1;
      if (is_two_qubit(op.kind)) touched[c.qubit_index(op.b)] = 1;
      if (is_two_qubit(op.kind) && np.p_gate > 0 && rng.bernoulli(np.p_gate)) {
        // Uniform non-identity Pauli pair.
        int k = 1 + (int)rng.below(15);
        int pa = k / 4, pb = k % 4;
        if (pa)
          inst.faults.push_back(
              {FaultKind::PauliAt, layer.index, c.layout.canon(op.a), kPauli[pa - 1], -1});
        if (pb)
          inst.faults.push_back(
              {FaultKind::PauliAt, layer.index, c.layout.canon(op.b), kPauli[pb - 1], -1});
      }
      if (is_measurement(op.kind) && np.p_meas > 0 && rng.bernoulli(np.p_meas))
        inst.faults.push_back({FaultKind::MeasFlip, layer.index, QubitId{}, 'I', op.label});
      if ((op.kind == OpKind::PrepPlus || op.kind == OpKind::PrepZero) && np.p_prep > 0 &&
          rng.bernoulli(np.p_prep))
        inst.faults.push_back({FaultKind::PrepFlip, layer.index, c.layout.canon(op.a), 'I', -1});
    }
    if (np.p_idle > 0) {
      for (size_t qi = 0; qi < c.layout.size(); ++qi) {
        if (touched[qi]) continue;
        const QubitId& q = c.layout.qubits[qi];
        bool unused_bridge = !c.alive(q, layer.index);
        if (unused_bridge && !np.idle_noise_unused_bridge) continue;
        if (rng.bernoulli(np.p_idle))
          inst.faults.push_back(
              {FaultKind::PauliAt, layer.index, q, kPauli[rng.below(3)], -1});
      }
    }
  }
  return inst;
}

}  // namespace xyf
