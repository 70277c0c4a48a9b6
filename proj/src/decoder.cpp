#include "xyf/decoder.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include <json.hpp>

namespace xyf {

namespace {
constexpr int64_t kForbidden = 1ll << 40;
}

MatchingGraph build_matching_graph(const DetectorGraph& g) {
  MatchingGraph mg;
  mg.g = &g;
  for (int spi = 0; spi < 2; ++spi) {
    auto& part = mg.part[spi];
    for (int i = 0; i < g.n_real; ++i)
      if ((int)g.nodes[i].species == spi) {
        part.local_of[i] = (int)part.node_ids.size();
        part.node_ids.push_back(i);
      }
    part.n = (int)part.node_ids.size();
    // Any virtual node of the species maps to the merged boundary column n.
    for (size_t i = g.n_real; i < g.nodes.size(); ++i)
      if ((int)g.nodes[i].species == spi && g.nodes[i].is_virtual) {
        part.has_virtual = true;
        part.local_of[(int)i] = part.n;
      }
    part.adj.assign(part.n + 1, {});
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
      const FaultEdge& e = g.edges[ei];
      if ((int)e.species != spi) continue;
      int a = part.local_of.at(e.a), b = part.local_of.at(e.b);
      part.adj[a].push_back({b, (int)ei});
      part.adj[b].push_back({a, (int)ei});
    }
    part.dist.assign(part.n, {});
    part.pred_fault.assign(part.n, {});
    part.pred_node.assign(part.n, {});
    for (int s = 0; s < part.n; ++s) {
      auto& dist = part.dist[s];
      auto& pf = part.pred_fault[s];
      auto& pn = part.pred_node[s];
      dist.assign(part.n + 1, -1);
      pf.assign(part.n + 1, -1);
      pn.assign(part.n + 1, -1);
      std::deque<int> q{s};
      dist[s] = 0;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        if (u == part.n) continue;  // not route paths through the boundary
        for (auto [v, f] : part.adj[u]) {
          if (dist[v] >= 0) continue;
          dist[v] = dist[u] + 1;
          pf[v] = f;
          pn[v] = u;
          q.push_back(v);
        }
      }
    }
  }
  return mg;
}

int64_t MatchingGraph::distance(SegSpecies sp, int a, int b) const {
  const auto& part = this->part[(int)sp];
  int la = part.local_of.at(a);
  int lb = (b < 0) ? part.n : part.local_of.at(b);
  int32_t d = part.dist[la][lb];
  return d < 0 ? kForbidden : d;
}

std::vector<int> MatchingGraph::witness(SegSpecies sp, int a, int b) const {
  const auto& part = this->part[(int)sp];
  int la = part.local_of.at(a);
  int lb = (b < 0) ? part.n : part.local_of.at(b);
  std::vector<int> out;
  int cur = lb;
  while (cur != la) {
    int f = part.pred_fault[la][cur];
    if (f < 0) throw std::runtime_error("no path between matched detectors");
    out.push_back(f);
    cur = part.pred_node[la][cur];
  }
  return out;
}

DecodeResult decode(const MatchingGraph& mg, const std::vector<int>& fired_nodes) {
  const DetectorGraph& g = *mg.g;
  DecodeResult res;
  res.obs_flip_predicted.assign(g.observables.size(), 0);

  for (int spi = 0; spi < 2; ++spi) {
    SegSpecies sp = (SegSpecies)spi;
    std::vector<int> fired;
    for (int n : fired_nodes)
      if ((int)g.nodes[n].species == spi) fired.push_back(n);
    if (fired.empty()) continue;
    const auto& part = mg.part[spi];
    int m = (int)fired.size();
    if (!part.has_virtual && (m % 2))
      throw std::runtime_error("infeasible syndrome parity (no boundary node)");

    int nn = part.has_virtual ? 2 * m : m;
    std::vector<std::vector<int64_t>> w(nn, std::vector<int64_t>(nn, kForbidden));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        w[i][j] = w[j][i] = mg.distance(sp, fired[i], fired[j]);
    if (part.has_virtual) {
      for (int i = 0; i < m; ++i) w[i][m + i] = w[m + i][i] = mg.distance(sp, fired[i], -1);
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) w[m + i][m + j] = w[m + j][m + i] = 0;
    }
    std::vector<int> mate = min_weight_perfect_matching(nn, w, kForbidden);
    for (int i = 0; i < m; ++i) {
      if (mate[i] < m) {
        if (mate[i] < i) continue;  // count each pair once
        DecodeResult::Match match;
        match.species = sp;
        match.a = fired[i];
        match.b = fired[mate[i]];
        match.witness_edges = mg.witness(sp, match.a, match.b);
        res.matches.push_back(std::move(match));
      } else {
        DecodeResult::Match match;
        match.species = sp;
        match.a = fired[i];
        match.b = -1;
        match.witness_edges = mg.witness(sp, match.a, -1);
        res.matches.push_back(std::move(match));
      }
    }
  }

  // Correction: residual frame of the witness faults at the final cut, and
  // the predicted observable flips.
  Gf2Row fx((size_t)0), fz((size_t)0);
  uint32_t obs = 0;
  for (const auto& match : res.matches)
    for (int e : match.witness_edges) {
      if (fx.w.size() < g.edge_final_x[e].w.size()) fx.w.resize(g.edge_final_x[e].w.size(), 0);
      if (fz.w.size() < g.edge_final_z[e].w.size()) fz.w.resize(g.edge_final_z[e].w.size(), 0);
      fx ^= g.edge_final_x[e];
      fz ^= g.edge_final_z[e];
      obs ^= g.edge_obs[e];
    }
  for (size_t oi = 0; oi < g.observables.size(); ++oi)
    res.obs_flip_predicted[oi] = (obs >> oi) & 1;
  const Circuit& c = *g.circuit;
  for (size_t qi = 0; qi < c.layout.size(); ++qi) {
    bool x = qi < fx.w.size() * 64 && fx.get(qi);
    bool z = qi < fz.w.size() * 64 && fz.get(qi);
    if (!x && !z) continue;
    char p = x && z ? 'Y' : (x ? 'X' : 'Z');
    res.correction.support.push_back({c.layout.qubits[qi], p});
  }
  return res;
}

DecodeResult decode_fired_json(const MatchingGraph& mg, const std::string& fired_json) {
  nlohmann::json j = nlohmann::json::parse(fired_json);
  std::vector<int> fired;
  for (const auto& v : j.at("fired")) {
    int n = v.get<int>();
    if (n < 0 || n >= mg.g->n_real) throw std::runtime_error("fired node out of range");
    fired.push_back(n);
  }
  return decode(mg, fired);
}

std::string decode_result_json(const DetectorGraph& g, const DecodeResult& dr) {
  nlohmann::json j;
  nlohmann::json matches = nlohmann::json::array();
  for (const auto& m : dr.matches) {
    nlohmann::json jm;
    jm["species"] = m.species == SegSpecies::E ? "e" : "m";
    jm["nodes"] = {m.a, m.b};
    nlohmann::json wit = nlohmann::json::array();
    for (int e : m.witness_edges) wit.push_back(g.edges[e].fault_id);
    jm["witness_faults"] = wit;
    matches.push_back(jm);
  }
  j["matches"] = matches;
  nlohmann::json corr = nlohmann::json::array();
  for (auto& [q, p] : dr.correction.support)
    corr.push_back({{"qubit", q.str()}, {"pauli", std::string(1, p)}});
  j["correction"] = corr;
  nlohmann::json obs = nlohmann::json::array();
  for (size_t i = 0; i < dr.obs_flip_predicted.size(); ++i)
    obs.push_back({{"name", g.observables[i].name}, {"flip", (bool)dr.obs_flip_predicted[i]}});
  j["observable_corrections"] = obs;
  if (dr.logical_outcome >= 0) j["logical_outcome"] = dr.logical_outcome;
  return j.dump(1);
}

std::vector<uint8_t> logical_failure(const DecodeResult& dr, uint32_t true_obs_mask,
                                     size_t n_obs) {
  std::vector<uint8_t> out(n_obs, 0);
  for (size_t i = 0; i < n_obs; ++i)
    out[i] = dr.obs_flip_predicted[i] ^ (uint8_t)((true_obs_mask >> i) & 1);
  return out;
}

}  // namespace xyf
