#include "xyf/matching.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

namespace xyf {

namespace {

// Dense maximum-weight perfect matching with blossoms (the classical
// primal-dual implementation on doubled integer weights). Vertices are
// 1-based; ids above n are blossoms.
struct Blossom {
  struct Edge {
    int u = 0, v = 0;
    int64_t w = 0;
  };

  int n = 0, n_x = 0;
  std::vector<std::vector<Edge>> g;
  std::vector<int64_t> lab;
  std::vector<int> match, slack, st, pa, S, vis;
  std::vector<std::vector<int>> flower, flower_from;
  std::deque<int> q;
  int t = 0;

  explicit Blossom(int n_) : n(n_) {
    int m = 2 * n + 1;
    g.assign(m, std::vector<Edge>(m));
    lab.assign(m, 0);
    match.assign(m, 0);
    slack.assign(m, 0);
    st.assign(m, 0);
    pa.assign(m, 0);
    S.assign(m, 0);
    vis.assign(m, 0);
    flower.assign(m, {});
    flower_from.assign(m, std::vector<int>(n + 1, 0));
    for (int u = 1; u <= n; ++u)
      for (int v = 1; v <= n; ++v) g[u][v] = Edge{u, v, 0};
  }

  int64_t e_delta(const Edge& e) const {  // slack, doubled
    return lab[e.u] + lab[e.v] - g[e.u][e.v].w * 2;
  }

  void update_slack(int u, int x) {
    if (!slack[x] || e_delta(g[u][x]) < e_delta(g[slack[x]][x])) slack[x] = u;
  }

  void set_slack(int x) {
    slack[x] = 0;
    for (int u = 1; u <= n; ++u)
      if (g[u][x].w > 0 && st[u] != x && S[st[u]] == 0) update_slack(u, x);
  }

  void q_push(int x) {
    if (x <= n)
      q.push_back(x);
    else
      for (int y : flower[x]) q_push(y);
  }

  void set_st(int x, int b) {
    st[x] = b;
    if (x > n)
      for (int y : flower[x]) set_st(y, b);
  }

  int get_pr(int b, int xr) {
    int pr = (int)(std::find(flower[b].begin(), flower[b].end(), xr) -
                   flower[b].begin());
    if (pr & 1) {
      std::reverse(flower[b].begin() + 1, flower[b].end());
      return (int)flower[b].size() - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match[u] = g[u][v].v;
    if (u <= n) return;
    Edge e = g[u][v];
    int xr = flower_from[u][e.u];
    int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower[u][i], flower[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower[u].begin(), flower[u].begin() + pr, flower[u].end());
  }

  void augment(int u, int v) {
    for (;;) {
      int xnv = st[match[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st[pa[xnv]]);
      u = st[pa[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++t; u || v; std::swap(u, v)) {
      if (!u) continue;
      if (vis[u] == t) return u;
      vis[u] = t;
      u = st[match[u]];
      if (u) u = st[pa[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n + 1;
    while (b <= n_x && st[b]) ++b;
    if (b > n_x) ++n_x;
    lab[b] = 0;
    S[b] = 0;
    match[b] = match[lca];
    flower[b].clear();
    flower[b].push_back(lca);
    for (int x = u, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    std::reverse(flower[b].begin() + 1, flower[b].end());
    for (int x = v, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x; ++x) g[b][x].w = g[x][b].w = 0;
    for (int x = 1; x <= n; ++x) flower_from[b][x] = 0;
    for (int xs : flower[b]) {
      for (int x = 1; x <= n_x; ++x)
        if (g[b][x].w == 0 || e_delta(g[xs][x]) < e_delta(g[b][x])) {
          g[b][x] = g[xs][x];
          g[x][b] = g[x][xs];
        }
      for (int x = 1; x <= n; ++x)
        if (flower_from[xs][x]) flower_from[b][x] = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int xs : flower[b]) set_st(xs, xs);
    int xr = flower_from[b][g[b][pa[b]].u];
    int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      int xs = flower[b][i], xns = flower[b][i + 1];
      pa[xs] = g[xns][xs].u;
      S[xs] = 1;
      S[xns] = 0;
      slack[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    S[xr] = 1;
    pa[xr] = pa[b];
    for (size_t i = pr + 1; i < flower[b].size(); ++i) {
      int xs = flower[b][i];
      S[xs] = -1;
      set_slack(xs);
    }
    st[b] = 0;
  }

  bool on_found_edge(const Edge& e) {
    int u = st[e.u], v = st[e.v];
    if (S[v] == -1) {
      pa[v] = e.u;
      S[v] = 1;
      int nu = st[match[v]];
      slack[v] = slack[nu] = 0;
      S[nu] = 0;
      q_push(nu);
    } else if (S[v] == 0) {
      int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool matching() {
    std::fill(S.begin(), S.begin() + n_x + 1, -1);
    std::fill(slack.begin(), slack.begin() + n_x + 1, 0);
    q.clear();
    for (int x = 1; x <= n_x; ++x)
      if (st[x] == x && !match[x]) {
        pa[x] = 0;
        S[x] = 0;
        q_push(x);
      }
    if (q.empty()) return false;
    for (;;) {
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        if (S[st[u]] == 1) continue;
        for (int v = 1; v <= n; ++v) {
          if (g[u][v].w > 0 && st[u] != st[v]) {
            if (e_delta(g[u][v]) == 0) {
              if (on_found_edge(g[u][v])) return true;
            } else {
              update_slack(u, st[v]);
            }
          }
        }
      }
      int64_t d = -1;
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b && S[b] == 1) {
          int64_t cand = lab[b] / 2;
          if (d < 0 || cand < d) d = cand;
        }
      for (int x = 1; x <= n_x; ++x)
        if (st[x] == x && slack[x]) {
          int64_t delta = e_delta(g[slack[x]][x]);
          if (S[x] == 0)
            delta /= 2;
          else if (S[x] != -1)
            continue;
          if (d < 0 || delta < d) d = delta;
        }
      if (d < 0) return false;  // dual is unbounded: no perfect matching
      for (int u = 1; u <= n; ++u) {
        switch (S[st[u]]) {
          case 0:
            if (lab[u] <= d) return false;  // outer dual hit zero
            lab[u] -= d;
            break;
          case 1:
            lab[u] += d;
            break;
          default:
            break;
        }
      }
      for (int b = n + 1; b <= n_x; ++b) {
        if (st[b] != b || S[b] == -1) continue;
        lab[b] += (S[b] == 0) ? 2 * d : -2 * d;
      }
      q.clear();
      for (int x = 1; x <= n_x; ++x) {
        if (st[x] != x) continue;
        if (slack[x] && st[slack[x]] != x && e_delta(g[slack[x]][x]) == 0)
          if (on_found_edge(g[slack[x]][x])) return true;
      }
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b && S[b] == 1 && lab[b] == 0) expand_blossom(b);
    }
  }

  void solve(const std::vector<std::vector<int64_t>>& w) {
    n_x = n;
    int64_t w_max = 0;
    for (int u = 1; u <= n; ++u)
      for (int v = 1; v <= n; ++v) {
        flower_from[u][v] = (u == v ? u : 0);
        g[u][v].w = w[u - 1][v - 1];
        if (g[u][v].w > w_max) w_max = g[u][v].w;
      }
    for (int u = 1; u <= n; ++u) {
      st[u] = u;
      lab[u] = w_max;
    }
    int matched = 0;
    while (matched < n) {
      if (!matching()) break;
      matched += 2;
    }
  }
};

}  // namespace

std::vector<int> min_weight_perfect_matching(int n,
                                             const std::vector<std::vector<int64_t>>& w,
                                             int64_t forbidden) {
  if (n == 0) return {};
  if (n % 2) throw std::runtime_error("perfect matching needs even order");
  // Maximize (forbidden - w); forbidden edges get weight 0 which the solver
  // treats as absent.
  std::vector<std::vector<int64_t>> wm(n, std::vector<int64_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && w[i][j] < forbidden) wm[i][j] = forbidden - w[i][j];
  Blossom bl(n);
  bl.solve(wm);
  std::vector<int> mate(n, -1);
  for (int u = 1; u <= n; ++u) {
    if (bl.match[u] == 0) throw std::runtime_error("no perfect matching within allowed edges");
    mate[u - 1] = bl.match[u] - 1;
  }
  for (int i = 0; i < n; ++i)
    if (mate[i] < 0 || mate[mate[i]] != i)
      throw std::runtime_error("matching postcondition failed");
  return mate;
}

int64_t brute_force_min_matching(int n, const std::vector<std::vector<int64_t>>& w,
                                 int64_t forbidden) {
  if (n % 2) return -1;
  std::vector<int> order;
  int64_t best = -1;
  std::vector<uint8_t> used(n, 0);
  std::function<void(int, int64_t)> rec = [&](int matched, int64_t acc) {
    if (matched == n) {
      if (best < 0 || acc < best) best = acc;
      return;
    }
    int i = 0;
    while (used[i]) ++i;
    used[i] = 1;
    for (int j = i + 1; j < n; ++j) {
      if (used[j] || w[i][j] >= forbidden) continue;
      used[j] = 1;
      if (best < 0 || acc + w[i][j] < best) rec(matched + 2, acc + w[i][j]);
      used[j] = 0;
    }
    used[i] = 0;
  };
  rec(0, 0);
  return best;
}

}  // namespace xyf
