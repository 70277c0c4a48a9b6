#pragma once

#include <unordered_map>
#include <vector>

#include "xyf/detector_graph.hpp"
#include "xyf/matching.hpp"

namespace xyf {

// Shortest-path (unit weight per elementary fault) metric over the detector
// graph, one component per species, with path witnesses for correction and
// observable bookkeeping. Virtual nodes of a species are merged: matching to
// any allowed boundary costs the same as reaching the nearest one.
struct MatchingGraph {
  const DetectorGraph* g = nullptr;

  struct SpeciesPart {
    std::vector<int> node_ids;  // real detector nodes of this species
    int n = 0;
    bool has_virtual = false;
    std::unordered_map<int, int> local_of;        // graph node id -> local
    std::vector<std::vector<std::pair<int, int>>> adj;  // local -> (local, edge id)
    // BFS data from each real node; column n is the merged virtual node.
    std::vector<std::vector<int32_t>> dist;
    std::vector<std::vector<int32_t>> pred_fault;
    std::vector<std::vector<int32_t>> pred_node;
  };
  SpeciesPart part[2];

  int64_t distance(SegSpecies sp, int a, int b) const;  // graph node ids, b=-1 boundary
  std::vector<int> witness(SegSpecies sp, int a, int b) const;  // edge ids on a path
};

MatchingGraph build_matching_graph(const DetectorGraph& g);

struct DecodeResult {
  struct Match {
    SegSpecies species;
    int a = -1, b = -1;  // graph node ids; b = -1 means matched to the boundary
    std::vector<int> witness_edges;
  };
  std::vector<Match> matches;
  PauliString correction;                  // residual frame estimate at the final cut
  std::vector<uint8_t> obs_flip_predicted;  // per observable of the graph
  int logical_outcome = -1;                // surgery class (set by experiments)
};

DecodeResult decode(const MatchingGraph& mg, const std::vector<int>& fired_nodes);

// Failure bits: predicted observable flip XOR the true flip.
std::vector<uint8_t> logical_failure(const DecodeResult& dr, uint32_t true_obs_mask,
                                     size_t n_obs);

// External-syndrome interface: fired node ids as {"fired": [ ... ]} against
// the exported detector-graph JSON, and the decode result emitted as JSON.
DecodeResult decode_fired_json(const MatchingGraph& mg, const std::string& fired_json);
std::string decode_result_json(const DetectorGraph& g, const DecodeResult& dr);

}  // namespace xyf
