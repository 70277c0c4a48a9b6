#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "xyf/experiment.hpp"

using namespace xyf;

namespace {

ExperimentConfig base_cfg(GeometrySpec g, long shots, uint64_t seed) {
  ExperimentConfig cfg;
  cfg.geom = g;
  cfg.shots = shots;
  cfg.seed = seed;
  cfg.seed_set = true;
  return cfg;
}

}  // namespace

TEST_CASE("zero noise gives exactly zero failures") {
  ExperimentConfig cfg = base_cfg(GeometrySpec::rectangle(2, 2, 2), 300, 4);
  MemoryResult r = run_memory_experiment(cfg);
  for (const auto& o : r.z.per_obs) CHECK(o.fails == 0);
  for (const auto& o : r.x.per_obs) CHECK(o.fails == 0);

  ExperimentConfig sg = base_cfg(GeometrySpec::surgery(2, 0, 2, 3), 200, 5);
  Stats s = run_surgery_experiment(sg);
  CHECK(s.class_errors == 0);
  CHECK(s.m0 == s.shots);  // |00> input measures M0 with certainty
  CHECK(s.fails("Z1") == 0);
  CHECK(s.fails("Z2") == 0);
}

TEST_CASE("surgery logical inputs: deterministic noiseless classes") {
  for (auto [input, m1] : {std::pair{"00", 0}, {"01", 1}, {"10", 1}, {"11", 0}}) {
    ExperimentConfig cfg = base_cfg(GeometrySpec::surgery(2, 0, 2, 3), 64, 6);
    cfg.surgery_input = input;
    Stats s = run_surgery_experiment(cfg);
    CHECK(s.class_errors == 0);
    CHECK((m1 ? s.m1 : s.m0) == s.shots);
  }
  // |++> input: both classes appear (probability 1/2 each).
  ExperimentConfig cfg = base_cfg(GeometrySpec::surgery(2, 0, 2, 3), 400, 7);
  cfg.surgery_input = "++";
  Stats s = run_surgery_experiment(cfg);
  CHECK(s.m0 + s.m1 == s.shots);
  CHECK(s.m0 > s.shots / 4);
  CHECK(s.m1 > s.shots / 4);
  CHECK(s.fails("X1X2") == 0);
}

TEST_CASE("identical seeds give identical CSV, worker count does not matter") {
  ExperimentConfig cfg = base_cfg(GeometrySpec::rectangle(3, 3, 3), 500, 99);
  cfg.noise.p_gate = 0.01;
  cfg.noise.p_meas = 0.01;
  MemoryResult r1 = run_memory_experiment(cfg);
  cfg.workers = 1;
  MemoryResult r2 = run_memory_experiment(cfg);
  auto strip_wall = [](std::string s) { return s.substr(0, s.rfind(',')); };
  CHECK(strip_wall(memory_csv_row(cfg, r1, false)) == strip_wall(memory_csv_row(cfg, r2, false)));
  // Failures really do occur at this noise level.
  long total = 0;
  for (const auto& o : r1.z.per_obs) total += o.fails;
  CHECK(total > 0);
}

TEST_CASE("serial and parallel shot kernels agree exactly") {
  GeometrySpec g = GeometrySpec::rectangle(3, 3, 2);
  Circuit c = build_memory_circuit(g, 2, InitKind::ZBasis, ReadoutBasis::Z);
  DetectorGraph dg = build_detector_graph(c);
  MatchingGraph mg = build_matching_graph(dg);
  ShotContext ctx;
  ctx.circuit = &c;
  ctx.graph = &dg;
  ctx.matching = &mg;
  ctx.noise.p_gate = 0.02;
  ctx.noise.p_meas = 0.02;
  ctx.seed = 123;
  ShotAggregate a = run_shots_serial(ctx, 400);
  ShotAggregate b = run_shots_parallel(ctx, 400, 0);
  CHECK(a.obs_fails == b.obs_fails);
  CHECK(a.shots == b.shots);
}

TEST_CASE("config validation reports bad fields") {
  ExperimentConfig cfg;
  cfg.geom = GeometrySpec::rectangle(2, 2, 1);
  cfg.shots = 0;
  cfg.seed_set = true;
  CHECK_THROWS(cfg.validate());
  cfg.shots = 10;
  cfg.seed_set = false;
  CHECK_THROWS(cfg.validate());
  cfg.seed_set = true;
  cfg.noise.p_gate = 1.5;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("throughput budget: L=7 T=7 memory, 1e4 shots in minutes") {
  ExperimentConfig cfg = base_cfg(GeometrySpec::rectangle(7, 7, 7), 10000, 70);
  cfg.noise.p_gate = 0.002;
  cfg.noise.p_meas = 0.002;
  Stats st = run_memory_basis(cfg, 'X');
  CHECK(st.shots == 10000);
  CHECK(st.wall_seconds < 300.0);  // soft CI budget (frame-sampler path)
  MESSAGE("L=7 T=7 1e4 shots took ", st.wall_seconds, " s");
}

TEST_CASE("p = 0 logical failure rate is exactly zero over 1e5 shots") {
  ExperimentConfig cfg = base_cfg(GeometrySpec::rectangle(3, 3, 3), 100000, 71);
  Stats st = run_memory_basis(cfg, 'Z');
  CHECK(st.fails("Z") == 0);
}
