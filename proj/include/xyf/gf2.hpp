#pragma once

#include <cstdint>
#include <vector>

namespace xyf {

// Bit-packed GF(2) row vectors.
struct Gf2Row {
  std::vector<uint64_t> w;

  explicit Gf2Row(size_t bits = 0) : w((bits + 63) / 64, 0) {}
  void resize_bits(size_t bits) { w.assign((bits + 63) / 64, 0); }
  bool get(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool v) {
    if (v)
      w[i >> 6] |= 1ull << (i & 63);
    else
      w[i >> 6] &= ~(1ull << (i & 63));
  }
  void flip(size_t i) { w[i >> 6] ^= 1ull << (i & 63); }
  void operator^=(const Gf2Row& o) {
    for (size_t i = 0; i < w.size() && i < o.w.size(); ++i) w[i] ^= o.w[i];
  }
  bool zero() const {
    for (uint64_t x : w)
      if (x) return false;
    return true;
  }
  int lowest_set() const {
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i]) return (int)(i * 64 + __builtin_ctzll(w[i]));
    return -1;
  }
  bool parity_and(const Gf2Row& o) const {
    uint64_t acc = 0;
    for (size_t i = 0; i < w.size() && i < o.w.size(); ++i) acc ^= w[i] & o.w[i];
    return __builtin_popcountll(acc) & 1;
  }
};

// Row echelon solver for A x = b over GF(2) with kernel basis extraction.
struct Gf2System {
  size_t n_vars = 0;
  std::vector<Gf2Row> rows;
  std::vector<uint8_t> rhs;

  explicit Gf2System(size_t n) : n_vars(n) {}

  void add_row(const std::vector<int>& vars, bool b) {
    Gf2Row r(n_vars);
    for (int v : vars) r.flip((size_t)v);
    rows.push_back(std::move(r));
    rhs.push_back(b);
  }

  struct Solution {
    bool consistent = false;
    Gf2Row particular;
    std::vector<Gf2Row> kernel;
  };

  // Plain Gaussian elimination; deterministic pivot order (lowest variable
  // index first).
  Solution solve() const {
    size_t m = rows.size();
    std::vector<Gf2Row> a = rows;
    std::vector<uint8_t> b = rhs;
    std::vector<int> pivot_of_var(n_vars, -1);
    size_t rank = 0;
    for (size_t col = 0; col < n_vars && rank < m; ++col) {
      size_t sel = m;
      for (size_t r = rank; r < m; ++r)
        if (a[r].get(col)) {
          sel = r;
          break;
        }
      if (sel == m) continue;
      std::swap(a[rank], a[sel]);
      std::swap(b[rank], b[sel]);
      for (size_t r = 0; r < m; ++r) {
        if (r != rank && a[r].get(col)) {
          a[r] ^= a[rank];
          b[r] ^= b[rank];
        }
      }
      pivot_of_var[col] = (int)rank;
      ++rank;
    }
    Solution s;
    for (size_t r = rank; r < m; ++r)
      if (b[r]) return s;  // inconsistent
    s.consistent = true;
    s.particular.resize_bits(n_vars);
    for (size_t col = 0; col < n_vars; ++col)
      if (pivot_of_var[col] >= 0 && b[pivot_of_var[col]]) s.particular.set(col, true);
    for (size_t col = 0; col < n_vars; ++col) {
      if (pivot_of_var[col] >= 0) continue;  // pivot variable
      Gf2Row k(n_vars);
      k.set(col, true);
      for (size_t c2 = 0; c2 < n_vars; ++c2)
        if (pivot_of_var[c2] >= 0 && a[pivot_of_var[c2]].get(col)) k.set(c2, true);
      s.kernel.push_back(std::move(k));
    }
    return s;
  }
};

}  // namespace xyf
