#include "xyf/detector_graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "xyf/path_integral.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xyf {

namespace {

struct NodeKey {
  SegSpecies species;
  Cell cell;
  bool operator==(const NodeKey&) const = default;
};
struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    return CellHash{}(k.cell) * 2 + (size_t)k.species;
  }
};

// Endpoint cells of one segment set per species, with parity cancellation.
std::vector<std::pair<NodeKey, int>> endpoints(const SpacetimeLattice& lat,
                                               const SegmentSet& segs) {
  std::unordered_map<NodeKey, int, NodeKeyHash> par;
  for (const Segment& s : segs.segments) {
    Cell c = lat.canon(s.cell);
    if (!lat.exists(c)) continue;  // charge on removed structure: no effect
    if (s.species == SegSpecies::E) {
      for (const Cell& v : vertices_of_edge(c)) par[{SegSpecies::E, lat.canon(v)}] ^= 1;
    } else {
      for (const Cell& q : cubes_of_face(c)) par[{SegSpecies::M, lat.canon(q)}] ^= 1;
    }
  }
  std::vector<std::pair<NodeKey, int>> out;
  for (auto& [k, p] : par)
    if (p) out.push_back({k, p});
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
    return std::tuple((int)a.first.species, a.first.cell) <
           std::tuple((int)b.first.species, b.first.cell);
  });
  return out;
}

bool virtual_allowed(SegSpecies sp, BoundaryClass b) {
  if (b == BoundaryClass::StateInitial || b == BoundaryClass::StateFinal) return true;
  if (sp == SegSpecies::E)
    return b == BoundaryClass::Rough || b == BoundaryClass::Corner;
  return b == BoundaryClass::Smooth || b == BoundaryClass::Removed;
}

}  // namespace

std::vector<int> DetectorGraph::syndrome(const MeasRecord& rec,
                                         const MeasRecord& reference) const {
  if (rec.bits.size() != reference.bits.size())
    throw std::runtime_error("record length mismatch");
  std::vector<int> fired;
  for (int i = 0; i < n_real; ++i) {
    int p = 0;
    for (int l : nodes[i].labels) p ^= rec.bits[l] ^ reference.bits[l];
    if (p) fired.push_back(i);
  }
  return fired;
}

std::vector<int> DetectorGraph::syndrome_from_faults(const std::vector<int>& fault_ids) const {
  std::unordered_map<int, int> par;
  for (int f : fault_ids)
    for (int e : fault_edge_ids[f]) {
      if (e < 0) continue;
      if (edges[e].a >= 0 && edges[e].a < n_real) par[edges[e].a] ^= 1;
      if (edges[e].b >= 0 && edges[e].b < n_real) par[edges[e].b] ^= 1;
    }
  std::vector<int> fired;
  for (auto& [n, p] : par)
    if (p) fired.push_back(n);
  std::sort(fired.begin(), fired.end());
  return fired;
}

uint32_t DetectorGraph::obs_flips_of_faults(const std::vector<int>& fault_ids) const {
  uint32_t m = 0;
  for (int f : fault_ids) m ^= fault_obs[f];
  return m;
}

std::vector<int> DetectorGraph::syndrome_from_flips(const std::vector<int>& flipped) const {
  std::unordered_map<int, int> par;
  for (int l : flipped)
    for (int n : label_to_nodes[l]) par[n] ^= 1;
  std::vector<int> fired;
  for (auto& [n, p] : par)
    if (p) fired.push_back(n);
  std::sort(fired.begin(), fired.end());
  return fired;
}

uint32_t DetectorGraph::obs_flips_from_flips(const std::vector<int>& flipped) const {
  uint32_t m = 0;
  for (int l : flipped) m ^= label_obs[l];
  return m;
}

int DetectorGraph::observable_index(const std::string& name) const {
  for (size_t i = 0; i < observables.size(); ++i)
    if (observables[i].name == name) return (int)i;
  return -1;
}

DetectorGraph build_detector_graph(const Circuit& c) {
  DetectorGraph g(c.geom);
  g.circuit = &c;
  g.ref = analyze_reference(c);

  int last_s2 = c.layers.empty() ? 0 : c.layers.back().s2;
  auto slab_class = [&](const Cell& cell) {
    return g.lat.classify_in_slab(cell, 0, last_s2);
  };

  // 1) Odd-incidence label sets per candidate node cell.
  std::unordered_map<NodeKey, std::vector<int>, NodeKeyHash> incid;
  for (int label = 0; label < c.num_labels; ++label) {
    SegmentSet segs = segments_for_outcome(c, label);
    for (auto& [key, p] : endpoints(g.lat, segs)) incid[key].push_back(label);
  }

  // 2) Determinism filter: keep nodes whose label parity carries no random
  // dependence; drop the rest toward the matching boundary they face.
  std::vector<std::pair<NodeKey, std::vector<int>>> cands(incid.begin(), incid.end());
  std::sort(cands.begin(), cands.end(), [](auto& a, auto& b) {
    return std::tuple((int)a.first.species, a.first.cell) <
           std::tuple((int)b.first.species, b.first.cell);
  });
  std::unordered_map<NodeKey, int, NodeKeyHash> node_of;
  std::unordered_map<NodeKey, BoundaryClass, NodeKeyHash> dropped;
  int gauge_hi = 4 * ((c.init == InitKind::Stabilizer) ? 2 : 1);
  for (auto& [key, labels] : cands) {
    if (g.lat.exists(key.cell) && g.ref.set_deterministic(labels)) {
      node_of[key] = (int)g.nodes.size();
      g.nodes.push_back({key.species, key.cell, false, slab_class(key.cell), labels});
      continue;
    }
    BoundaryClass b = slab_class(key.cell);
    if (b == BoundaryClass::Bulk || b == BoundaryClass::Smooth ||
        b == BoundaryClass::Rough || b == BoundaryClass::Corner) {
      // Non-deterministic candidates must sit against a state boundary (the
      // init gauge or the readout cut); anything interior is a builder bug.
      if (key.cell.s2() <= gauge_hi)
        b = BoundaryClass::StateInitial;
      else if (key.cell.s2() >= last_s2 - 4)
        b = BoundaryClass::StateFinal;
      else
        throw std::runtime_error("non-deterministic interior detector at " +
                                 key.cell.str());
    }
    dropped[key] = b;
  }
  g.n_real = (int)g.nodes.size();

  // Virtual nodes per (species, boundary kind), created on demand.
  std::map<std::pair<int, int>, int> virt;
  auto virtual_node = [&](SegSpecies sp, BoundaryClass b) {
    if (!virtual_allowed(sp, b))
      throw std::runtime_error(std::string("worldline endpoint on a forbidden ") +
                               to_string(b) + " boundary (species " +
                               (sp == SegSpecies::E ? "e" : "m") + ")");
    auto key = std::make_pair((int)sp, (int)b);
    auto it = virt.find(key);
    if (it != virt.end()) return it->second;
    int id = (int)g.nodes.size();
    g.nodes.push_back({sp, Cell{}, true, b, {}});
    virt[key] = id;
    return id;
  };
  auto route = [&](const NodeKey& key) {
    auto it = node_of.find(key);
    if (it != node_of.end()) return it->second;
    auto dr = dropped.find(key);
    BoundaryClass b = (dr != dropped.end()) ? dr->second : slab_class(key.cell);
    if (dr == dropped.end() && g.lat.exists(key.cell) && b == BoundaryClass::Bulk)
      throw std::runtime_error("fault endpoint at unknown bulk cell " + key.cell.str());
    return virtual_node(key.species, b);
  };

  // 3) Elementary faults, their frame action and their graph edges.
  g.faults = enumerate_elementary_faults(c);
  size_t nf = g.faults.size();
  g.fault_flips.resize(nf);
  g.fault_final_x.resize(nf);
  g.fault_final_z.resize(nf);
  g.fault_obs.assign(nf, 0);
  g.fault_edge_ids.assign(nf, {-1, -1});

  // Observables: scored logicals plus (surgery) the outcome class, read as
  // the crossing parity of the measured worldline configuration with the
  // pinned class cut.
  for (const LogicalSpec& lg : c.logicals)
    if (!lg.readout_labels.empty()) g.observables.push_back({lg.name, lg.readout_labels});
  if (c.geom.kind == GeometryKind::Surgery) {
    std::vector<Cell> cut = surgery_class_cut(g.lat);
    std::unordered_map<Cell, int, CellHash> in_cut;
    for (const Cell& f : cut) in_cut[f] ^= 1;
    Observable cls{"class", {}};
    for (int label = 0; label < c.num_labels; ++label) {
      int par = 0;
      for (const Segment& s : segments_for_outcome(c, label).segments) {
        if (s.species != SegSpecies::M) continue;
        auto it = in_cut.find(g.lat.canon(s.cell));
        if (it != in_cut.end()) par ^= it->second;
      }
      if (par) cls.labels.push_back(label);
    }
    g.observables.push_back(std::move(cls));
  }
  g.label_obs.assign(c.num_labels, 0);
  for (size_t oi = 0; oi < g.observables.size(); ++oi)
    for (int l : g.observables[oi].labels) g.label_obs[l] ^= (1u << oi);
  const std::vector<uint32_t>& label_obs_mask = g.label_obs;
  g.label_to_nodes.assign(c.num_labels, {});
  for (int ni = 0; ni < g.n_real; ++ni)
    for (int l : g.nodes[ni].labels) g.label_to_nodes[l].push_back(ni);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
  for (size_t fi = 0; fi < nf; ++fi) {
    FramePropagation fp = propagate_fault(c, g.faults[fi]);
    g.fault_flips[fi] = std::move(fp.flipped_labels);
    g.fault_final_x[fi] = std::move(fp.final_x);
    g.fault_final_z[fi] = std::move(fp.final_z);
    uint32_t m = 0;
    for (int l : g.fault_flips[fi]) m ^= label_obs_mask[l];
    g.fault_obs[fi] = m;
  }

  for (size_t fi = 0; fi < nf; ++fi) {
    SegmentSet segs = segments_for_error(c, g.faults[fi]);
    auto eps = endpoints(g.lat, segs);
    for (int spi = 0; spi < 2; ++spi) {
      SegSpecies sp = (SegSpecies)spi;
      std::vector<int> ids;
      for (auto& [key, p] : eps)
        if (key.species == sp) ids.push_back(route(key));
      if (ids.empty()) continue;
      if (ids.size() != 2)
        throw std::runtime_error("elementary fault with " + std::to_string(ids.size()) +
                                 " endpoints");
      bool va = g.nodes[ids[0]].is_virtual, vb = g.nodes[ids[1]].is_virtual;
      if (va && vb) continue;  // undetectable in this species
      if (va) std::swap(ids[0], ids[1]);
      Fault comp = g.faults[fi];
      if (comp.kind == FaultKind::PauliAt && comp.pauli == 'Y')
        comp.pauli = (sp == SegSpecies::E) ? 'Z' : 'X';
      g.fault_edge_ids[fi][spi] = (int)g.edges.size();
      g.edges.push_back({(int)fi, sp, ids[0], ids[1], comp});
    }
    // A fault invisible to every detector must not flip a scored logical
    // observable. The surgery class is exempt: a below-distance merge window
    // (t1 - t0 too short) legitimately exposes it, and under X-basis input
    // the class is intrinsically random; such faults are recorded instead.
    if (g.fault_edge_ids[fi][0] < 0 && g.fault_edge_ids[fi][1] < 0 &&
        g.fault_obs[fi] != 0) {
      uint32_t mask = g.fault_obs[fi];
      int class_idx = g.observable_index("class");
      if (class_idx >= 0) mask &= ~(1u << class_idx);
      if (mask != 0) {
        const Fault& f = g.faults[fi];
        throw std::runtime_error(
            "undetectable fault flips an observable: kind=" +
            std::to_string((int)f.kind) + " layer=" + std::to_string(f.layer) +
            " qubit=" + f.qubit.str() + " pauli=" + std::string(1, f.pauli) +
            " label=" + std::to_string(f.label) +
            " obs_mask=" + std::to_string(g.fault_obs[fi]));
      }
      g.class_fragile_faults.push_back((int)fi);
    }
  }
  g.edge_obs.resize(g.edges.size());
  g.edge_final_x.resize(g.edges.size());
  g.edge_final_z.resize(g.edges.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    FramePropagation fp = propagate_fault(c, g.edges[ei].component);
    uint32_t m = 0;
    for (int l : fp.flipped_labels) m ^= label_obs_mask[l];
    g.edge_obs[ei] = m;
    g.edge_final_x[ei] = std::move(fp.final_x);
    g.edge_final_z[ei] = std::move(fp.final_z);
  }

  return g;
}

std::string detector_graph_json(const DetectorGraph& g) {
  nlohmann::json j;
  j["format"] = "xyfloquet-detector-graph";
  j["version"] = 1;
  nlohmann::json nodes = nlohmann::json::array();
  for (const DetectorNode& n : g.nodes) {
    nlohmann::json jn;
    jn["species"] = n.species == SegSpecies::E ? "e" : "m";
    jn["virtual"] = n.is_virtual;
    jn["boundary"] = to_string(n.bclass);
    if (!n.is_virtual) jn["cell"] = {n.cell.x2, n.cell.y2, n.cell.z2};
    jn["labels"] = n.labels;
    nodes.push_back(jn);
  }
  j["nodes"] = nodes;
  nlohmann::json edges = nlohmann::json::array();
  for (const FaultEdge& e : g.edges) {
    edges.push_back({{"fault", e.fault_id},
                     {"species", e.species == SegSpecies::E ? "e" : "m"},
                     {"nodes", {e.a, e.b}}});
  }
  j["edges"] = edges;
  nlohmann::json facts = nlohmann::json::array();
  for (const Fault& f : g.faults) {
    nlohmann::json jf;
    switch (f.kind) {
      case FaultKind::PauliAt:
        jf["kind"] = "pauli";
        jf["layer"] = f.layer;
        jf["qubit"] = f.qubit.str();
        jf["pauli"] = std::string(1, f.pauli);
        break;
      case FaultKind::MeasFlip:
        jf["kind"] = "meas_flip";
        jf["label"] = f.label;
        break;
      case FaultKind::PrepFlip:
        jf["kind"] = "prep_flip";
        jf["layer"] = f.layer;
        jf["qubit"] = f.qubit.str();
        break;
    }
    facts.push_back(jf);
  }
  j["faults"] = facts;
  return j.dump(1);
}

}  // namespace xyf
