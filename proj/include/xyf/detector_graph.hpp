#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "xyf/circuit.hpp"
#include "xyf/frame.hpp"
#include "xyf/geometry.hpp"
#include "xyf/noise.hpp"
#include "xyf/segments.hpp"
#include "xyf/tableau.hpp"

namespace xyf {

// A detector node: a spacetime vertex (E species) or cube (M species) whose
// incident measurement outcomes multiply to a deterministic parity, or a
// virtual node standing for a boundary where worldlines may terminate.
struct DetectorNode {
  SegSpecies species;
  Cell cell{};  // unused for virtual nodes
  bool is_virtual = false;
  BoundaryClass bclass = BoundaryClass::Bulk;
  std::vector<int> labels;  // odd-incidence measurement labels
};

struct FaultEdge {
  int fault_id = -1;
  SegSpecies species;
  int a = -1, b = -1;  // node indices (may be virtual)
  // The per-species component of the fault (a Y splits into its Z part on
  // the e graph and its X part on the m graph), with its own bookkeeping.
  Fault component;
};

// Observables scored by experiments: XOR of a label set, with decoder
// corrections supplied by matched fault witnesses.
struct Observable {
  std::string name;
  std::vector<int> labels;
};

struct DetectorGraph {
  const Circuit* circuit = nullptr;
  SpacetimeLattice lat;
  ReferenceAnalysis ref;

  std::vector<DetectorNode> nodes;  // real detectors first, then virtuals
  int n_real = 0;
  std::vector<Fault> faults;  // elementary faults (graph edge source)
  std::vector<FaultEdge> edges;
  std::vector<std::array<int, 2>> fault_edge_ids;  // per fault: [E, M] edge id or -1

  std::vector<std::vector<int>> fault_flips;  // per fault: flipped labels
  std::vector<uint32_t> fault_obs;            // per fault: observable flip mask
  std::vector<Gf2Row> fault_final_x, fault_final_z;
  std::vector<uint32_t> edge_obs;             // per edge: its component's flips
  std::vector<Gf2Row> edge_final_x, edge_final_z;

  std::vector<Observable> observables;
  // Undetectable faults that flip the surgery class: nonempty when the merge
  // window is below the fault distance (or the class is input-random).
  std::vector<int> class_fragile_faults;
  std::vector<uint32_t> label_obs;                // per label: observable mask
  std::vector<std::vector<int>> label_to_nodes;   // per label: real nodes containing it

  // Fired nodes and observable flips from a flipped-label list (the frame
  // sampler's output relative to the reference).
  std::vector<int> syndrome_from_flips(const std::vector<int>& flipped) const;
  uint32_t obs_flips_from_flips(const std::vector<int>& flipped) const;

  explicit DetectorGraph(const GeometrySpec& g) : lat(g) {}

  // Fired node indices from a record relative to the reference.
  std::vector<int> syndrome(const MeasRecord& rec, const MeasRecord& reference) const;
  // Fired node indices from a set of elementary fault ids (frame path).
  std::vector<int> syndrome_from_faults(const std::vector<int>& fault_ids) const;

  uint32_t obs_flips_of_faults(const std::vector<int>& fault_ids) const;
  int observable_index(const std::string& name) const;
};

DetectorGraph build_detector_graph(const Circuit& c);

std::string detector_graph_json(const DetectorGraph& g);

}  // namespace xyf
