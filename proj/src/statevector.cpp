#include "xyf/statevector.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xyf {

namespace {

using cplx = std::complex<double>;

struct SvOps {
  const Circuit& c;
  int n;

  int idx(const QubitId& q) const {
    int i = c.qubit_index(q);
    if (i < 0) throw std::runtime_error("unknown qubit " + q.str());
    return i;
  }

  static void apply_cx(DenseState& s, int ctrl, int tgt) {
    uint64_t cm = 1ull << ctrl, tm = 1ull << tgt;
    int64_t n = (int64_t)s.amps.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= (1 << 18))
#endif
    for (int64_t i = 0; i < n; ++i)
      if ((i & cm) && !(i & tm)) std::swap(s.amps[i], s.amps[i | tm]);
  }

  static void apply_pauli(DenseState& s, uint64_t xm, uint64_t zm) {
    if (xm == 0) {
      for (uint64_t i = 0; i < s.amps.size(); ++i)
        if (__builtin_popcountll(i & zm) & 1) s.amps[i] = -s.amps[i];
      return;
    }
    for (uint64_t i = 0; i < s.amps.size(); ++i) {
      uint64_t j = i ^ xm;
      if (j < i) continue;
      cplx a = s.amps[i], b = s.amps[j];
      double sa = (__builtin_popcountll(j & zm) & 1) ? -1.0 : 1.0;  // sign onto i
      double sb = (__builtin_popcountll(i & zm) & 1) ? -1.0 : 1.0;
      s.amps[i] = sa * b;
      s.amps[j] = sb * a;
    }
  }

  // Branch weight of projecting onto 1/2 (1 + (-1)^bit P) for the Pauli
  // X^xm Z^zm (Hermitian for our XX/ZZ/Z/X cases). Projects in place without
  // renormalizing; returns the squared norm of the projected state.
  static double project(DenseState& s, uint64_t xm, uint64_t zm, int bit) {
    double sgn = bit ? -1.0 : 1.0;
    if (xm == 0) {
      double w = 0;
      int64_t n = (int64_t)s.amps.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : w) if (n >= (1 << 18))
#endif
      for (int64_t i = 0; i < n; ++i) {
        double ev = (__builtin_popcountll(i & zm) & 1) ? -1.0 : 1.0;
        if (ev * sgn < 0)
          s.amps[i] = 0;
        else
          w += std::norm(s.amps[i]);
      }
      return w;
    }
    double w = 0;
    int64_t n = (int64_t)s.amps.size();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : w) if (n >= (1 << 18))
#endif
    for (int64_t i = 0; i < n; ++i) {
      uint64_t j = (uint64_t)i ^ xm;
      if (j < (uint64_t)i) continue;
      // P |i> = sign_i |j>, with sign_i from the Z part acting before X.
      double si = (__builtin_popcountll(i & zm) & 1) ? -1.0 : 1.0;
      cplx a = s.amps[i], b = s.amps[j];
      cplx pa = 0.5 * (a + sgn * si * b);  // P|j> carries sign_j = si for our Paulis
      cplx pb = 0.5 * (b + sgn * si * a);
      s.amps[i] = pa;
      s.amps[j] = pb;
      w += std::norm(pa) + std::norm(pb);
    }
    return w;
  }

  // <psi| X^xm Z^zm |psi> for the Hermitian Paulis used here.
  static double expectation(const DenseState& s, uint64_t xm, uint64_t zm) {
    double acc = 0;
    int64_t n = (int64_t)s.amps.size();
    if (xm == 0) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : acc) if (n >= (1 << 18))
#endif
      for (int64_t i = 0; i < n; ++i)
        acc += ((__builtin_popcountll(i & zm) & 1) ? -1.0 : 1.0) * std::norm(s.amps[i]);
      return acc;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : acc) if (n >= (1 << 18))
#endif
    for (int64_t i = 0; i < n; ++i) {
      double si = (__builtin_popcountll(i & zm) & 1) ? -1.0 : 1.0;
      acc += si * std::real(std::conj(s.amps[i]) * s.amps[(uint64_t)i ^ xm]);
    }
    return acc;
  }

  // Preparation as trace-in of a fresh qubit. Valid when the qubit is
  // unentangled from the rest (all preparations in these circuits act on
  // fresh, idle, or just-measured qubits): project onto the target state,
  // flipping first if the qubit sat in the orthogonal state, then restore
  // the norm.
  static void prepare(DenseState& s, int q, bool plus) {
    uint64_t m = 1ull << q;
    double before = s.norm2();
    if (before == 0) return;
    auto project_target = [&]() {
      double w = 0;
      if (plus) {
        for (uint64_t i = 0; i < s.amps.size(); ++i) {
          if (i & m) continue;
          cplx avg = 0.5 * (s.amps[i] + s.amps[i | m]);
          s.amps[i] = avg;
          s.amps[i | m] = avg;
          w += 2.0 * std::norm(avg);
        }
      } else {
        for (uint64_t i = 0; i < s.amps.size(); ++i) {
          if (i & m)
            s.amps[i] = 0;
          else
            w += std::norm(s.amps[i]);
        }
      }
      return w;
    };
    DenseState saved = s;
    double w = project_target();
    if (w < 1e-12 * before) {
      s = std::move(saved);
      apply_pauli(s, plus ? 0 : m, plus ? m : 0);  // flip |1> -> |0> or |-> -> |+>
      w = project_target();
      if (w < 1e-12 * before)
        throw std::runtime_error("preparation hit an entangled qubit");
    }
    double scale = std::sqrt(before / w);
    for (auto& a : s.amps) a *= scale;
  }
};

}  // namespace

double DenseState::norm2() const {
  double w = 0;
  for (const auto& a : amps) w += std::norm(a);
  return w;
}

void DenseState::normalize() {
  double w = std::sqrt(norm2());
  if (w > 0)
    for (auto& a : amps) a /= w;
}

void DenseState::canonicalize_phase() {
  for (const auto& a : amps) {
    if (std::abs(a) > 1e-12) {
      cplx ph = a / std::abs(a);
      for (auto& b : amps) b /= ph;
      return;
    }
  }
}

SvResult run_statevector(const Circuit& c, const DenseState& input, SvPolicy policy,
                         const ErrorInstance& faults, int qubit_cap) {
  int n = (int)c.num_qubits();
  if (n > qubit_cap)
    throw std::runtime_error("statevector cap exceeded: " + std::to_string(n) +
                             " qubits > " + std::to_string(qubit_cap));
  if (input.n != n || input.amps.size() != (1ull << n))
    throw std::runtime_error("input state has wrong size");
  SvOps ops{c, n};
  SvResult res;
  res.state = input;
  res.rec.bits.assign(c.num_labels, 0);
  res.rec.deterministic.assign(c.num_labels, 0);
  Rng rng(policy.seed);

  std::vector<uint8_t> meas_flip(c.num_labels, 0);
  std::vector<std::vector<const Fault*>> layer_faults(c.layers.size());
  for (const Fault& f : faults.faults) {
    if (f.kind == FaultKind::MeasFlip)
      meas_flip[f.label] ^= 1;
    else
      layer_faults[f.layer].push_back(&f);
  }

  for (const Layer& layer : c.layers) {
    for (const CircuitOp& op : layer.ops) {
      int a = ops.idx(op.a);
      switch (op.kind) {
        case OpKind::CX:
          SvOps::apply_cx(res.state, a, ops.idx(op.b));
          break;
        case OpKind::PrepZero:
          SvOps::prepare(res.state, a, false);
          break;
        case OpKind::PrepPlus:
          SvOps::prepare(res.state, a, true);
          break;
        default: {
          uint64_t xm = 0, zm = 0;
          if (op.kind == OpKind::MXX)
            xm = (1ull << a) | (1ull << ops.idx(op.b));
          else if (op.kind == OpKind::MZZ)
            zm = (1ull << a) | (1ull << ops.idx(op.b));
          else if (op.kind == OpKind::MZ)
            zm = 1ull << a;
          else
            xm = 1ull << a;

          int bit;
          if (policy.kind == SvPolicy::Force) {
            bit = (*policy.forced)[op.label] ^ meas_flip[op.label];
          } else {
            double p0 = 0.5 * (1.0 + SvOps::expectation(res.state, xm, zm));
            bit = rng.uniform() < p0 ? 0 : 1;
          }
          double w = SvOps::project(res.state, xm, zm, bit);
          res.probability *= w;
          res.rec.deterministic[op.label] = (w > 1.0 - 1e-9) || (w < 1e-9);
          res.rec.bits[op.label] = (uint8_t)bit ^ meas_flip[op.label];
          if (w < 1e-12) {
            res.probability = 0.0;
            return res;  // forced a 0-probability branch; state undefined
          }
          res.state.normalize();
        }
      }
    }
    for (const Fault* f : layer_faults[layer.index]) {
      int q = ops.idx(f->qubit);
      char p = f->pauli;
      if (f->kind == FaultKind::PrepFlip) {
        p = 'X';
        for (const CircuitOp& op : c.layers[f->layer].ops)
          if ((op.kind == OpKind::PrepPlus || op.kind == OpKind::PrepZero) &&
              ops.idx(op.a) == q)
            p = (op.kind == OpKind::PrepPlus) ? 'Z' : 'X';
      }
      uint64_t xm = (p == 'X' || p == 'Y') ? (1ull << q) : 0;
      uint64_t zm = (p == 'Z' || p == 'Y') ? (1ull << q) : 0;
      if (p == 'Y') {
        SvOps::apply_pauli(res.state, xm, zm);
        for (auto& amp : res.state.amps) amp *= cplx(0, 1);
      } else {
        SvOps::apply_pauli(res.state, xm, zm);
      }
    }
  }
  return res;
}

void enumerate_branches(
    const Circuit& c, const DenseState& input,
    const std::function<void(const std::vector<uint8_t>&, double, const DenseState&)>& sink,
    const BranchOptions& opt) {
  // Depth-first with copy-on-branch: peak memory is one state per pending
  // second branch (one per genuinely random measurement on the path).
  struct Frame {
    DenseState state;
    double prob;
    size_t op_cursor;  // global op index to resume at
    std::vector<uint8_t> rec;
  };
  SvOps ops{c, (int)c.num_qubits()};

  // Flatten ops for cursor-based resumption.
  std::vector<const CircuitOp*> flat;
  for (const Layer& layer : c.layers)
    for (const CircuitOp& op : layer.ops) flat.push_back(&op);

  auto forced_bit = [&](int label) -> int {
    if (!opt.forced_labels) return -1;
    auto it = std::lower_bound(opt.forced_labels->begin(), opt.forced_labels->end(), label);
    if (it == opt.forced_labels->end() || *it != label) return -1;
    return (*opt.forced_bits)[it - opt.forced_labels->begin()];
  };

  long emitted = 0;
  std::vector<Frame> stack;
  stack.push_back({input, 1.0, 0, {}});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    bool dead = false;
    for (size_t cur = fr.op_cursor; cur < flat.size() && !dead; ++cur) {
      const CircuitOp& op = *flat[cur];
      int a = ops.idx(op.a);
      switch (op.kind) {
        case OpKind::CX:
          SvOps::apply_cx(fr.state, a, ops.idx(op.b));
          break;
        case OpKind::PrepZero:
          SvOps::prepare(fr.state, a, false);
          break;
        case OpKind::PrepPlus:
          SvOps::prepare(fr.state, a, true);
          break;
        default: {
          uint64_t xm = 0, zm = 0;
          if (op.kind == OpKind::MXX)
            xm = (1ull << a) | (1ull << ops.idx(op.b));
          else if (op.kind == OpKind::MZZ)
            zm = (1ull << a) | (1ull << ops.idx(op.b));
          else if (op.kind == OpKind::MZ)
            zm = 1ull << a;
          else
            xm = 1ull << a;
          int force = forced_bit(op.label);
          if (force >= 0) {
            double w = SvOps::project(fr.state, xm, zm, force);
            if (w < 1e-18) {
              dead = true;
              break;
            }
            fr.state.normalize();
            fr.prob *= w;
            fr.rec.push_back((uint8_t)force);
            break;
          }
          double p0 = 0.5 * (1.0 + SvOps::expectation(fr.state, xm, zm));
          if (p0 > 1.0 - 1e-12 || p0 < 1e-12) {
            int bit = p0 < 0.5;
            double w = SvOps::project(fr.state, xm, zm, bit);
            fr.state.normalize();
            fr.prob *= w;
            fr.rec.push_back((uint8_t)bit);
            break;
          }
          // Genuine branch: queue bit=1, continue with bit=0.
          Frame other;
          other.state = fr.state;
          double w1 = SvOps::project(other.state, xm, zm, 1);
          other.state.normalize();
          other.prob = fr.prob * w1;
          other.op_cursor = cur + 1;
          other.rec = fr.rec;
          other.rec.push_back(1);
          stack.push_back(std::move(other));
          double w0 = SvOps::project(fr.state, xm, zm, 0);
          fr.state.normalize();
          fr.prob *= w0;
          fr.rec.push_back(0);
        }
      }
    }
    if (dead) continue;
    sink(fr.rec, fr.prob, fr.state);
    if (++emitted > opt.max_branches)
      throw std::runtime_error("branch enumeration exceeded cap");
  }
}

LogicalChannel logical_channel(const Circuit& c, const std::vector<DenseState>& inputs,
                               const std::vector<DenseState>& out_basis,
                               const std::function<int(const std::vector<uint8_t>&)>& classify,
                               int n_classes) {
  LogicalChannel ch;
  ch.matrices.assign(n_classes, std::vector<cplx>(out_basis.size() * inputs.size(), 0.0));
  for (size_t a = 0; a < inputs.size(); ++a) {
    enumerate_branches(c, inputs[a], [&](const std::vector<uint8_t>& rec, double prob,
                                         const DenseState& st) {
      int cls = classify(rec);
      if (cls < 0 || cls >= n_classes) throw std::runtime_error("bad branch class");
      // Unnormalized branch operator column: sqrt(prob) * |st>.
      double amp = std::sqrt(prob);
      for (size_t b = 0; b < out_basis.size(); ++b) {
        cplx ov = 0;
        for (size_t i = 0; i < st.amps.size(); ++i)
          ov += std::conj(out_basis[b].amps[i]) * st.amps[i];
        ch.matrices[cls][b * inputs.size() + a] += amp * ov;
      }
    });
  }
  return ch;
}

}  // namespace xyf
