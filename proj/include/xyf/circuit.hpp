#pragma once

#include <string>
#include <vector>

#include "xyf/geometry.hpp"

namespace xyf {

enum class OpKind : uint8_t { CX, MXX, MZZ, MZ, MX, PrepPlus, PrepZero };

inline bool is_measurement(OpKind k) {
  return k == OpKind::MXX || k == OpKind::MZZ || k == OpKind::MZ || k == OpKind::MX;
}
inline bool is_two_qubit(OpKind k) {
  return k == OpKind::CX || k == OpKind::MXX || k == OpKind::MZZ;
}

// CX control is always the green qubit (a); MXX acts on two greens, MZZ on
// two purples, MZ/MX/preps on single purples or (init layer) any qubit.
struct CircuitOp {
  OpKind kind;
  QubitId a;
  QubitId b{};        // second qubit for 2-qubit ops
  int32_t label = -1;  // dense measurement label, -1 for non-measurements
};

struct Layer {
  int index = 0;
  int phase = 0;  // 0..5 within a period
  int s2 = 0;     // doubled time of the layer's tensors
  std::vector<CircuitOp> ops;
};

// A sparse Pauli operator on layout qubits.
struct PauliString {
  std::vector<std::pair<QubitId, char>> support;  // 'X','Y','Z'; no duplicates
};

enum class InitKind : uint8_t { None, ZBasis, XBasis, Stabilizer };
enum class ReadoutBasis : uint8_t { None, Z, X };

// A logical operator tracked by the circuit: Pauli representatives at the
// initial and final phase-0 cuts, plus (when the readout basis matches) the
// set of readout labels whose XOR reads the logical out.
struct LogicalSpec {
  std::string name;
  PauliString rep_initial;
  PauliString rep_final;
  std::vector<int> readout_labels;
};

struct Circuit {
  GeometrySpec geom;
  SpatialLayout layout;
  InitKind init = InitKind::None;
  ReadoutBasis readout = ReadoutBasis::None;
  std::vector<Layer> layers;
  int num_labels = 0;
  int first_noisy_layer = 0;  // layers before this are noise-exempt (gauge period)

  std::vector<LogicalSpec> logicals;
  std::vector<int> class_labels;     // surgery: bridge checks of the first merged layer
  std::vector<Cell> m1_worldline;    // surgery: M1 representative (m faces)

  int qubit_index(const QubitId& q) const { return layout.index_of(q); }
  size_t num_qubits() const { return layout.size(); }

  // (layer, op) position of each measurement label.
  std::vector<std::pair<int, int>> label_positions() const;

  // True while the qubit participates in the protocol (false for surgery
  // bridge qubits outside the merge window).
  bool alive(const QubitId& q, int layer_index) const;
};

// Schedule-only block (no init/readout): the object the path-integral oracle
// is compared against.
Circuit build_bare_block(const GeometrySpec& spec, int rounds);

Circuit build_memory_circuit(const GeometrySpec& spec, int rounds, InitKind init,
                             ReadoutBasis readout);

Circuit build_surgery_circuit(const GeometrySpec& spec, InitKind init,
                              ReadoutBasis readout);

std::string emit_text(const Circuit& c);
Circuit parse_text(const std::string& text);

}  // namespace xyf
