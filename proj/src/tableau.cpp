#include "xyf/tableau.hpp"

#include <cassert>
#include <stdexcept>

namespace xyf {

namespace {

inline bool getbit(const uint64_t* w, int i) { return (w[i >> 6] >> (i & 63)) & 1; }
inline void flipbit(uint64_t* w, int i) { w[i >> 6] ^= 1ull << (i & 63); }

inline bool parity_and(const uint64_t* a, const uint64_t* b, size_t words) {
  uint64_t acc = 0;
  for (size_t i = 0; i < words; ++i) acc ^= a[i] & b[i];
  return __builtin_popcountll(acc) & 1;
}

}  // namespace

TableauSim::TableauSim(int n, bool symbolic)
    : n_(n), words_((n + 63) / 64), symbolic_(symbolic) {
  xs_.assign((size_t)2 * n * words_, 0);
  zs_.assign((size_t)2 * n * words_, 0);
  phase_.assign(2 * n, 0);
  if (symbolic_) dep_.assign(2 * n, Gf2Row(0));
  scratch_x_.assign(words_, 0);
  scratch_z_.assign(words_, 0);
  for (int i = 0; i < n; ++i) {
    flipbit(xrow(i), i);       // destabilizer X_i
    flipbit(zrow(n + i), i);   // stabilizer Z_i: state |0...0>
  }
}

int TableauSim::phase_exponent(int dst, int src) const {
  // i-exponent of multiplying (x1,z1)*(x2,z2) per qubit, rows in the
  // Hermitian i^{x.z} X^x Z^z convention.
  static const int8_t g[16] = {
      // index = x1*8 + z1*4 + x2*2 + z2
      0, 0, 0, 0,   // I * {I,Z,X,Y}
      0, 0, 1, -1,  // Z * {I,Z,X,Y}
      0, -1, 0, 1,  // X * {I,Z,X,Y}
      0, 1, -1, 0,  // Y * {I,Z,X,Y}
  };
  const uint64_t *x1 = xrow(dst), *z1 = zrow(dst), *x2 = xrow(src), *z2 = zrow(src);
  int total = 0;
  for (int q = 0; q < n_; ++q) {
    int idx = (getbit(x1, q) << 3) | (getbit(z1, q) << 2) | (getbit(x2, q) << 1) |
              (int)getbit(z2, q);
    total += g[idx];
  }
  return total;
}

void TableauSim::row_mult(int dst, int src) {
  int ph = phase_exponent(dst, src);
  phase_[dst] = (uint8_t)((phase_[dst] + phase_[src] + ph) & 3);
  if (symbolic_) {
    if (dep_[dst].w.size() < dep_[src].w.size()) dep_[dst].w.resize(dep_[src].w.size(), 0);
    dep_[dst] ^= dep_[src];
  }
  uint64_t *x1 = xrow(dst), *z1 = zrow(dst);
  const uint64_t *x2 = xrow(src), *z2 = zrow(src);
  for (size_t i = 0; i < words_; ++i) {
    x1[i] ^= x2[i];
    z1[i] ^= z2[i];
  }
}

void TableauSim::apply_h(int q) {
  for (int r = 0; r < 2 * n_; ++r) {
    bool x = getbit(xrow(r), q), z = getbit(zrow(r), q);
    if (x && z) phase_[r] = (uint8_t)((phase_[r] + 2) & 3);
    if (x != z) {
      flipbit(xrow(r), q);
      flipbit(zrow(r), q);
    }
  }
}

void TableauSim::apply_cx(int c, int t) {
  for (int r = 0; r < 2 * n_; ++r) {
    bool xc = getbit(xrow(r), c), zc = getbit(zrow(r), c);
    bool xt = getbit(xrow(r), t), zt = getbit(zrow(r), t);
    if (xc && zt && (xt == zc)) phase_[r] = (uint8_t)((phase_[r] + 2) & 3);
    if (xc) flipbit(xrow(r), t);
    if (zt) flipbit(zrow(r), c);
  }
}

void TableauSim::apply_pauli(const Gf2Row& x, const Gf2Row& z) {
  for (int r = 0; r < 2 * n_; ++r)
    if (anticommutes(r, x, z)) phase_[r] = (uint8_t)((phase_[r] + 2) & 3);
}

bool TableauSim::anticommutes(int row, const Gf2Row& x, const Gf2Row& z) const {
  return parity_and(xrow(row), z.w.data(), words_) ^
         parity_and(zrow(row), x.w.data(), words_);
}

TableauSim::Outcome TableauSim::measure(const Gf2Row& x, const Gf2Row& z,
                                        std::optional<uint8_t> forced,
                                        uint8_t random_bit) {
  Outcome out;
  int p = -1;
  for (int r = n_; r < 2 * n_; ++r)
    if (anticommutes(r, x, z)) {
      p = r;
      break;
    }
  if (p >= 0) {
    for (int r = 0; r < 2 * n_; ++r)
      if (r != p && anticommutes(r, x, z)) row_mult(r, p);
    int d = p - n_;
    // Old stabilizer becomes the destabilizer partner of the new one.
    std::copy(xrow(p), xrow(p) + words_, xrow(d));
    std::copy(zrow(p), zrow(p) + words_, zrow(d));
    phase_[d] = phase_[p];
    if (symbolic_) dep_[d] = dep_[p];
    std::copy(x.w.begin(), x.w.begin() + words_, xrow(p));
    std::copy(z.w.begin(), z.w.begin() + words_, zrow(p));
    out.deterministic = false;
    if (forced) {
      out.constant = *forced;
    } else if (symbolic_) {
      out.fresh_bit = n_random_++;
      out.dep.resize_bits(n_random_);
      out.dep.set(out.fresh_bit, true);
    } else {
      out.constant = random_bit;
    }
    phase_[p] = (uint8_t)(2 * (out.constant & 1));
    if (symbolic_) dep_[p] = out.dep;
    return out;
  }

  // Deterministic: accumulate the stabilizer product selected by the
  // destabilizer syndrome into a scratch row (stored in row slot 2n behind a
  // temporary extension would complicate things; reuse explicit scratch).
  std::fill(scratch_x_.begin(), scratch_x_.end(), 0);
  std::fill(scratch_z_.begin(), scratch_z_.end(), 0);
  int phase = 0;
  Gf2Row dep(symbolic_ ? 0 : 0);
  auto mult_into_scratch = [&](int src) {
    static const int8_t g[16] = {0, 0, 0, 0, 0, 0, 1, -1, 0, -1, 0, 1, 0, 1, -1, 0};
    int total = 0;
    for (int q = 0; q < n_; ++q) {
      int idx = ((int)getbit(scratch_x_.data(), q) << 3) |
                ((int)getbit(scratch_z_.data(), q) << 2) |
                ((int)getbit(xrow(src), q) << 1) | (int)getbit(zrow(src), q);
      total += g[idx];
    }
    phase = (phase + phase_[src] + total) & 3;
    if (symbolic_) {
      if (dep.w.size() < dep_[src].w.size()) dep.w.resize(dep_[src].w.size(), 0);
      dep ^= dep_[src];
    }
    for (size_t i = 0; i < words_; ++i) {
      scratch_x_[i] ^= xrow(src)[i];
      scratch_z_[i] ^= zrow(src)[i];
    }
  };
  for (int i = 0; i < n_; ++i)
    if (anticommutes(i, x, z)) mult_into_scratch(n_ + i);
  // scratch must now equal the measured Pauli up to sign.
  for (size_t i = 0; i < words_; ++i) {
    if (scratch_x_[i] != (i < x.w.size() ? x.w[i] : 0) ||
        scratch_z_[i] != (i < z.w.size() ? z.w[i] : 0))
      throw std::logic_error("measured Pauli not reconstructed from stabilizers");
  }
  if (phase & 1) throw std::logic_error("odd i-phase in stabilizer product");
  out.deterministic = true;
  out.constant = (uint8_t)((phase >> 1) & 1);
  out.dep = dep;
  return out;
}

void TableauSim::prepare(int q, bool plus_basis) {
  Gf2Row x(n_), z(n_);
  if (plus_basis)
    x.set(q, true);
  else
    z.set(q, true);
  Outcome o = measure(x, z, std::nullopt, 0);
  if (!o.deterministic) {
    // The fresh sign lives only in the new stabilizer row; reset it to +1.
    for (int r = n_; r < 2 * n_; ++r) {
      bool match = true;
      for (size_t i = 0; i < words_; ++i)
        if (xrow(r)[i] != x.w[i] || zrow(r)[i] != z.w[i]) {
          match = false;
          break;
        }
      if (match) {
        phase_[r] = 0;
        if (symbolic_) {
          dep_[r] = Gf2Row(0);
          if (o.fresh_bit == n_random_ - 1) --n_random_;  // bit never escaped
        }
        break;
      }
    }
  } else if (o.constant || (symbolic_ && !o.dep.zero())) {
    // Deterministically wrong (or randomness-dependent) sign: apply the
    // conjugate Pauli conditioned on the outcome.
    Gf2Row cx(n_), cz(n_);
    if (plus_basis)
      cz.set(q, true);
    else
      cx.set(q, true);
    for (int r = 0; r < 2 * n_; ++r) {
      if (!anticommutes(r, cx, cz)) continue;
      phase_[r] = (uint8_t)((phase_[r] + 2 * o.constant) & 3);
      if (symbolic_ && !o.dep.zero()) {
        if (dep_[r].w.size() < o.dep.w.size()) dep_[r].w.resize(o.dep.w.size(), 0);
        dep_[r] ^= o.dep;
      }
    }
  }
}

bool TableauSim::commutes_with_stabilizers(const Gf2Row& x, const Gf2Row& z) const {
  for (int r = n_; r < 2 * n_; ++r)
    if (anticommutes(r, x, z)) return false;
  return true;
}

std::optional<uint8_t> TableauSim::stabilizer_sign(const Gf2Row& x, const Gf2Row& z) const {
  if (!commutes_with_stabilizers(x, z)) return std::nullopt;
  TableauSim copy = *this;
  try {
    Outcome o = copy.measure(x, z, std::nullopt, 0);
    if (!o.deterministic) return std::nullopt;
    return o.constant;
  } catch (const std::logic_error&) {
    return std::nullopt;  // commutes but independent of the group
  }
}

int TableauSim::isg_rank(int n_sys) const {
  // Stabilizer rows restricted to the reference qubits [n_sys, n); the
  // system-supported subgroup has rank n - rank(restriction).
  int n_ref = n_ - n_sys;
  if (n_ref <= 0) return n_;
  std::vector<Gf2Row> rows;
  for (int r = n_; r < 2 * n_; ++r) {
    Gf2Row row(2 * n_ref);
    for (int q = 0; q < n_ref; ++q) {
      row.set(q, getbit(xrow(r), n_sys + q));
      row.set(n_ref + q, getbit(zrow(r), n_sys + q));
    }
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < 2 * n_ref; ++col) {
    int sel = -1;
    for (size_t r = rank; r < rows.size(); ++r)
      if (rows[r].get(col)) {
        sel = (int)r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[rank], rows[sel]);
    for (size_t r = 0; r < rows.size(); ++r)
      if ((int)r != rank && rows[r].get(col)) rows[r] ^= rows[rank];
    ++rank;
  }
  return n_ - rank;
}

bool TableauSim::check_symplectic() const {
  Gf2Row x(n_), z(n_);
  auto sp = [&](int a, int b) {
    return parity_and(xrow(a), zrow(b), words_) ^ parity_and(zrow(a), xrow(b), words_);
  };
  for (int i = 0; i < 2 * n_; ++i) {
    if (phase_[i] & 1) return false;
    for (int j = 0; j < 2 * n_; ++j) {
      bool want = (i < n_ && j == i + n_) || (j < n_ && i == j + n_);
      if (sp(i, j) != want) return false;
    }
  }
  return true;
}

void pauli_masks(const Circuit& c, const PauliString& p, Gf2Row& x, Gf2Row& z) {
  x.resize_bits(c.num_qubits());
  z.resize_bits(c.num_qubits());
  for (auto& [q, pk] : p.support) {
    int idx = c.qubit_index(q);
    if (idx < 0) throw std::runtime_error("Pauli on unknown qubit " + q.str());
    if (pk == 'X' || pk == 'Y') x.flip(idx);
    if (pk == 'Z' || pk == 'Y') z.flip(idx);
  }
}

namespace {

struct EngineRun {
  const Circuit& c;
  TableauSim tab;
  MeasRecord rec;
  double prob = 1.0;
  bool consistent = true;

  // The injected-fault Pauli frame, propagated alongside the tableau. Faults
  // are applied to the state; the frame only fixes which coin maps to which
  // outcome on non-deterministic measurements, so that a faulted run under
  // the same rng stream differs from the clean run exactly by the
  // frame-anticommutation flips.
  Gf2Row frame_x, frame_z;

  std::vector<std::vector<const Fault*>> layer_faults;
  std::vector<uint8_t> meas_flip;

  EngineRun(const Circuit& circ, const ErrorInstance& errs, bool symbolic)
      : c(circ),
        tab((int)circ.num_qubits(), symbolic),
        frame_x(circ.num_qubits()),
        frame_z(circ.num_qubits()) {
    rec.bits.assign(c.num_labels, 0);
    rec.deterministic.assign(c.num_labels, 0);
    meas_flip.assign(c.num_labels, 0);
    layer_faults.resize(c.layers.size());
    for (const Fault& f : errs.faults) {
      switch (f.kind) {
        case FaultKind::MeasFlip:
          if (f.label < 0 || f.label >= c.num_labels)
            throw std::runtime_error("MeasFlip on unknown label");
          meas_flip[f.label] ^= 1;
          break;
        case FaultKind::PauliAt:
        case FaultKind::PrepFlip:
          if (f.layer < 0 || f.layer >= (int)c.layers.size())
            throw std::runtime_error("fault layer out of range");
          if (c.qubit_index(f.qubit) < 0)
            throw std::runtime_error("fault on unknown qubit");
          layer_faults[f.layer].push_back(&f);
          break;
      }
    }
  }

  void apply_fault(const Fault& f) {
    Gf2Row x(tab.n()), z(tab.n());
    int q = c.qubit_index(f.qubit);
    char p = f.pauli;
    if (f.kind == FaultKind::PrepFlip) {
      // Orthogonalize whatever was prepared in this layer.
      p = 'X';
      for (const CircuitOp& op : c.layers[f.layer].ops)
        if ((op.kind == OpKind::PrepPlus || op.kind == OpKind::PrepZero) &&
            c.qubit_index(op.a) == q)
          p = (op.kind == OpKind::PrepPlus) ? 'Z' : 'X';
    }
    if (p == 'X' || p == 'Y') {
      x.set(q, true);
      frame_x.flip(q);
    }
    if (p == 'Z' || p == 'Y') {
      z.set(q, true);
      frame_z.flip(q);
    }
    tab.apply_pauli(x, z);
  }

  uint8_t frame_flip(const Gf2Row& x, const Gf2Row& z) const {
    return (uint8_t)(frame_x.parity_and(z) ^ frame_z.parity_and(x));
  }

  template <typename OutcomeFn>
  void execute(OutcomeFn&& outcome_bit) {
    Gf2Row x(tab.n()), z(tab.n());
    for (const Layer& layer : c.layers) {
      for (const CircuitOp& op : layer.ops) {
        int a = c.qubit_index(op.a);
        int b = is_two_qubit(op.kind) ? c.qubit_index(op.b) : -1;
        switch (op.kind) {
          case OpKind::CX:
            tab.apply_cx(a, b);
            if (frame_x.get(a)) frame_x.flip(b);
            if (frame_z.get(b)) frame_z.flip(a);
            break;
          case OpKind::PrepZero:
            tab.prepare(a, false);
            frame_x.set(a, false);
            frame_z.set(a, false);
            break;
          case OpKind::PrepPlus:
            tab.prepare(a, true);
            frame_x.set(a, false);
            frame_z.set(a, false);
            break;
          default: {
            x.resize_bits(tab.n());
            z.resize_bits(tab.n());
            if (op.kind == OpKind::MXX) {
              x.set(a, true);
              x.set(b, true);
            } else if (op.kind == OpKind::MZZ) {
              z.set(a, true);
              z.set(b, true);
            } else if (op.kind == OpKind::MZ) {
              z.set(a, true);
            } else {
              x.set(a, true);
            }
            outcome_bit(op.label, x, z);
          }
        }
      }
      for (const Fault* f : layer_faults[layer.index]) apply_fault(*f);
    }
  }
};

}  // namespace

EngineResult run(const Circuit& c, const ErrorInstance& faults, uint64_t seed) {
  EngineRun er(c, faults, false);
  Rng rng(seed);
  er.execute([&](int label, const Gf2Row& x, const Gf2Row& z) {
    uint8_t coin = (uint8_t)rng.bit() ^ er.frame_flip(x, z);
    TableauSim::Outcome o = er.tab.measure(x, z, std::nullopt, coin);
    er.rec.bits[label] = o.constant ^ er.meas_flip[label];
    er.rec.deterministic[label] = o.deterministic;
  });
  return {std::move(er.rec), std::move(er.tab), 1.0};
}

EngineResult run_forced(const Circuit& c, const ErrorInstance& faults,
                        const std::vector<uint8_t>& forced_bits) {
  if ((int)forced_bits.size() != c.num_labels)
    throw std::runtime_error("forced record has wrong length");
  EngineRun er(c, faults, false);
  er.execute([&](int label, const Gf2Row& x, const Gf2Row& z) {
    // The fault model flips the *record*; forcing a recorded bit means the
    // physical projector acts on forced ^ flip.
    uint8_t want = forced_bits[label] ^ er.meas_flip[label];
    TableauSim::Outcome o = er.tab.measure(x, z, want);
    if (o.deterministic) {
      if (o.constant != want) er.prob = 0.0;
    } else {
      er.prob *= 0.5;
    }
    er.rec.bits[label] = forced_bits[label];
    er.rec.deterministic[label] = o.deterministic;
  });
  return {std::move(er.rec), std::move(er.tab), er.prob};
}

ReferenceAnalysis analyze_reference(const Circuit& c) {
  EngineRun er(c, {}, true);
  ReferenceAnalysis ra;
  ra.label_dep.assign(c.num_labels, Gf2Row(0));
  er.execute([&](int label, const Gf2Row& x, const Gf2Row& z) {
    TableauSim::Outcome o = er.tab.measure(x, z, std::nullopt);
    er.rec.bits[label] = o.constant;
    er.rec.deterministic[label] = o.deterministic;
    ra.label_dep[label] = o.dep;
  });
  ra.ref = std::move(er.rec);
  ra.n_random = er.tab.num_random_bits();
  return ra;
}

bool ReferenceAnalysis::set_deterministic(const std::vector<int>& labels) const {
  Gf2Row acc(0);
  for (int l : labels) {
    if (acc.w.size() < label_dep[l].w.size()) acc.w.resize(label_dep[l].w.size(), 0);
    acc ^= label_dep[l];
  }
  return acc.zero();
}

}  // namespace xyf
