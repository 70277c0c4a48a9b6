#include "xyf/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "xyf/frame.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xyf {

void ExperimentConfig::validate() const {
  geom.validate();
  noise.validate();
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (!seed_set) throw std::invalid_argument("seed is mandatory (no wall-clock default)");
  if (geom.kind == GeometryKind::Surgery) {
    if (surgery_input != "00" && surgery_input != "01" && surgery_input != "10" &&
        surgery_input != "11" && surgery_input != "++")
      throw std::invalid_argument("surgery input must be 00/01/10/11/++");
  }
}

Wilson wilson_interval(long fails, long shots) {
  double z = 1.959963984540054;  // 95%
  double n = (double)shots;
  double p = fails / n;
  double d = 1.0 + z * z / n;
  double center = (p + z * z / (2 * n)) / d;
  double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / d;
  return {center - half, center + half};
}

long Stats::fails(const std::string& name) const {
  for (const auto& o : per_obs)
    if (o.name == name) return o.fails;
  return -1;
}

void ShotAggregate::merge(const ShotAggregate& o) {
  shots += o.shots;
  if (obs_fails.size() < o.obs_fails.size()) obs_fails.resize(o.obs_fails.size(), 0);
  for (size_t i = 0; i < o.obs_fails.size(); ++i) obs_fails[i] += o.obs_fails[i];
  m0 += o.m0;
  m1 += o.m1;
  class_errors += o.class_errors;
}

namespace {

ShotAggregate run_one_shot(const ShotContext& ctx, long idx, bool exact) {
  const DetectorGraph& g = *ctx.graph;
  const Circuit& c = *ctx.circuit;
  ShotAggregate agg;
  agg.shots = 1;
  agg.obs_fails.assign(g.observables.size(), 0);
  agg.class_obs_index = ctx.graph->observable_index("class");

  Rng rng = Rng::stream(ctx.seed, (uint64_t)idx);
  ErrorInstance inst = sample_errors(c, ctx.noise, rng);

  std::vector<int> flipped;
  if (exact) {
    ErrorInstance all = inst;
    for (const Fault& f : ctx.input_mask.faults) all.faults.push_back(f);
    EngineResult er = run(c, all, rng.next());
    for (int l = 0; l < c.num_labels; ++l)
      if (er.rec.bits[l] != g.ref.ref.bits[l]) flipped.push_back(l);
  } else {
    FramePropagation fp = propagate_instance(c, inst);
    flipped = std::move(fp.flipped_labels);
  }

  std::vector<int> fired = g.syndrome_from_flips(flipped);
  DecodeResult dr = decode(*ctx.matching, fired);
  uint32_t flips = g.obs_flips_from_flips(flipped);

  for (size_t oi = 0; oi < g.observables.size(); ++oi) {
    if ((int)oi == agg.class_obs_index) continue;
    uint8_t fail = ((flips >> oi) & 1) ^ dr.obs_flip_predicted[oi];
    agg.obs_fails[oi] += fail;
  }
  if (agg.class_obs_index >= 0) {
    int oi = agg.class_obs_index;
    uint8_t decoded =
        (uint8_t)((flips >> oi) & 1) ^ dr.obs_flip_predicted[oi] ^
        (uint8_t)(exact ? 0 : ((ctx.mask_obs >> oi) & 1));
    if (decoded)
      agg.m1 = 1;
    else
      agg.m0 = 1;
    if (ctx.truth_class >= 0) {
      uint8_t wrong = decoded ^ (uint8_t)ctx.truth_class;
      agg.class_errors = wrong;
      agg.obs_fails[oi] += wrong;
    }
  }
  return agg;
}

struct PreparedRun {
  Circuit circuit;
  DetectorGraph graph;
  MatchingGraph matching;
  ShotContext ctx;
  bool exact = false;

  PreparedRun(Circuit&& c) : circuit(std::move(c)), graph(build_detector_graph(circuit)) {
    matching = build_matching_graph(graph);
    ctx.circuit = &circuit;
    ctx.graph = &graph;
    ctx.matching = &matching;
  }
};

PauliString block_x_string(const GeometrySpec&, int z2_lo, int z2_hi) {
  PauliString s;
  for (int z2 = z2_lo; z2 <= z2_hi; z2 += 2) s.support.push_back({QubitId{z2, 1}, 'X'});
  return s;
}

}  // namespace

ShotAggregate run_shots_serial(const ShotContext& ctx, long shots) {
  bool exact = ctx.truth_class < 0 && ctx.circuit->init == InitKind::XBasis &&
               ctx.circuit->geom.kind == GeometryKind::Surgery;
  ShotAggregate total;
  total.class_obs_index = ctx.graph->observable_index("class");
  total.truth_class = ctx.truth_class;
  total.obs_fails.assign(ctx.graph->observables.size(), 0);
  for (long i = 0; i < shots; ++i) total.merge(run_one_shot(ctx, i, exact));
  return total;
}

ShotAggregate run_shots_parallel(const ShotContext& ctx, long shots, int workers) {
  bool exact = ctx.truth_class < 0 && ctx.circuit->init == InitKind::XBasis &&
               ctx.circuit->geom.kind == GeometryKind::Surgery;
  ShotAggregate total;
  total.class_obs_index = ctx.graph->observable_index("class");
  total.truth_class = ctx.truth_class;
  total.obs_fails.assign(ctx.graph->observables.size(), 0);
#ifdef _OPENMP
  int nthreads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel num_threads(nthreads)
  {
    ShotAggregate local;
    local.obs_fails.assign(ctx.graph->observables.size(), 0);
#pragma omp for schedule(dynamic, 16)
    for (long i = 0; i < shots; ++i) local.merge(run_one_shot(ctx, i, exact));
#pragma omp critical
    total.merge(local);
  }
#else
  (void)workers;
  for (long i = 0; i < shots; ++i) total.merge(run_one_shot(ctx, i, exact));
#endif
  return total;
}

Stats run_memory_basis(const ExperimentConfig& cfg, char basis) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();
  InitKind init = basis == 'X' ? InitKind::XBasis : InitKind::ZBasis;
  ReadoutBasis ro = basis == 'X' ? ReadoutBasis::X : ReadoutBasis::Z;
  PreparedRun run(build_memory_circuit(cfg.geom, cfg.geom.rounds, init, ro));
  run.ctx.noise = cfg.noise;
  run.ctx.seed = cfg.seed ^ (basis == 'X' ? 0x5851f42d4c957f2dull : 0);
  run.ctx.truth_class = -1;

  ShotAggregate agg = run_shots_parallel(run.ctx, cfg.shots, cfg.workers);
  Stats st;
  st.shots = agg.shots;
  for (size_t oi = 0; oi < run.graph.observables.size(); ++oi)
    st.per_obs.push_back({run.graph.observables[oi].name, agg.obs_fails[oi]});
  st.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

MemoryResult run_memory_experiment(const ExperimentConfig& cfg) {
  return {run_memory_basis(cfg, 'Z'), run_memory_basis(cfg, 'X')};
}

Stats run_surgery_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.geom.kind != GeometryKind::Surgery)
    throw std::invalid_argument("surgery experiment needs a surgery geometry");
  auto t0 = std::chrono::steady_clock::now();
  const GeometrySpec& gm = cfg.geom;
  bool plus = cfg.surgery_input == "++";
  PreparedRun run(build_surgery_circuit(gm, plus ? InitKind::XBasis : InitKind::ZBasis,
                                        plus ? ReadoutBasis::X : ReadoutBasis::Z));
  run.ctx.noise = cfg.noise;
  run.ctx.seed = cfg.seed;

  if (!plus) {
    int a = cfg.surgery_input[0] - '0';
    int b = cfg.surgery_input[1] - '0';
    ErrorInstance mask;
    auto add_mask = [&](const PauliString& ps) {
      for (auto& [q, p] : ps.support)
        mask.faults.push_back({FaultKind::PauliAt, 0, q, p, -1});
    };
    if (a) add_mask(block_x_string(gm, 0, 2 * gm.l));
    if (b) add_mask(block_x_string(gm, 2 * gm.l + 2, 4 * gm.l + 2));
    run.ctx.input_mask = mask;
    FramePropagation fp = propagate_instance(run.circuit, mask);
    if (!run.graph.syndrome_from_flips(fp.flipped_labels).empty())
      throw std::logic_error("logical input mask fires detectors");
    run.ctx.mask_obs = run.graph.obs_flips_from_flips(fp.flipped_labels);
    int ci = run.graph.observable_index("class");
    run.ctx.truth_class = (a + b) % 2;
    // Consistency: the mask must flip the class estimator iff a+b is odd.
    if (ci >= 0 && (int)((run.ctx.mask_obs >> ci) & 1) != run.ctx.truth_class)
      throw std::logic_error("class estimator disagrees with the logical input mask");
  } else {
    run.ctx.truth_class = -1;
  }

  ShotAggregate agg = run_shots_parallel(run.ctx, cfg.shots, cfg.workers);
  Stats st;
  st.shots = agg.shots;
  st.m0 = agg.m0;
  st.m1 = agg.m1;
  st.class_errors = agg.class_errors;
  for (size_t oi = 0; oi < run.graph.observables.size(); ++oi)
    st.per_obs.push_back({run.graph.observables[oi].name, agg.obs_fails[oi]});
  st.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string memory_csv_row(const ExperimentConfig& cfg, const MemoryResult& r, bool header) {
  std::ostringstream os;
  if (header)
    os << "geometry,L1,L2,rounds,p_gate,p_idle,p_meas,p_prep,shots,fails_Z,fails_X,"
          "ci_low,ci_high,seed,wall_seconds\n";
  long fz = 0, fx = 0;
  for (const auto& o : r.z.per_obs)
    if (o.name[0] == 'Z') fz = std::max(fz, o.fails);
  for (const auto& o : r.x.per_obs)
    if (o.name[0] == 'X') fx = std::max(fx, o.fails);
  Wilson w = wilson_interval(fz, r.z.shots);
  os << (cfg.geom.kind == GeometryKind::Torus ? "torus" : "rectangle") << ","
     << cfg.geom.l1 << "," << cfg.geom.l2 << "," << cfg.geom.rounds << ","
     << fmt_double(cfg.noise.p_gate) << "," << fmt_double(cfg.noise.p_idle) << ","
     << fmt_double(cfg.noise.p_meas) << "," << fmt_double(cfg.noise.p_prep) << ","
     << r.z.shots << "," << fz << "," << fx << "," << fmt_double(w.lo) << ","
     << fmt_double(w.hi) << "," << cfg.seed << ","
     << fmt_double(r.z.wall_seconds + r.x.wall_seconds) << "\n";
  return os.str();
}

std::string surgery_csv_row(const ExperimentConfig& cfg, const Stats& s, bool header) {
  std::ostringstream os;
  if (header)
    os << "geometry,L,rounds,T0,T1,input,p_gate,p_idle,p_meas,p_prep,shots,m0,m1,"
          "class_errors,fails_Z1,fails_Z2,fails_X1X2,seed,wall_seconds\n";
  os << "surgery," << cfg.geom.l << "," << cfg.geom.rounds << "," << cfg.geom.t0 << ","
     << cfg.geom.t1 << "," << cfg.surgery_input << "," << fmt_double(cfg.noise.p_gate)
     << "," << fmt_double(cfg.noise.p_idle) << "," << fmt_double(cfg.noise.p_meas) << ","
     << fmt_double(cfg.noise.p_prep) << "," << s.shots << "," << s.m0 << "," << s.m1
     << "," << s.class_errors << "," << s.fails("Z1") << "," << s.fails("Z2") << ","
     << s.fails("X1X2") << "," << cfg.seed << "," << fmt_double(s.wall_seconds) << "\n";
  return os.str();
}

}  // namespace xyf
