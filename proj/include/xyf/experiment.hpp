#pragma once

#include <string>
#include <vector>

#include "xyf/decoder.hpp"
#include "xyf/detector_graph.hpp"
#include "xyf/noise.hpp"

namespace xyf {

struct ExperimentConfig {
  GeometrySpec geom;
  NoiseParams noise;
  long shots = 1;
  uint64_t seed = 0;
  bool seed_set = false;  // mandatory: no wall-clock default
  int workers = 0;        // 0 = all available
  std::string out_path;   // CSV; empty = stdout
  // Surgery logical input: "00", "01", "10", "11" (Z basis) or "++".
  std::string surgery_input = "00";

  void validate() const;
};

struct Wilson {
  double lo = 0, hi = 0;
};
Wilson wilson_interval(long fails, long shots);

struct ObservableStats {
  std::string name;
  long fails = 0;
};

struct Stats {
  long shots = 0;
  std::vector<ObservableStats> per_obs;
  // Surgery:
  long m0 = 0, m1 = 0;
  long class_errors = 0;  // decoded class vs the known Z-basis truth
  double wall_seconds = 0;

  long fails(const std::string& name) const;
};

// One basis of the memory experiment: init and readout in `basis`, scoring
// that basis's logical representatives.
Stats run_memory_basis(const ExperimentConfig& cfg, char basis);

// Both bases back to back (fails_Z from the Z run, fails_X from the X run).
struct MemoryResult {
  Stats z, x;
};
MemoryResult run_memory_experiment(const ExperimentConfig& cfg);

Stats run_surgery_experiment(const ExperimentConfig& cfg);

std::string memory_csv_row(const ExperimentConfig& cfg, const MemoryResult& r,
                           bool header);
std::string surgery_csv_row(const ExperimentConfig& cfg, const Stats& s, bool header);

// Shot kernel shared by experiments and the benchmark: decodes `shots`
// frame-sampled shots of the prepared context. Exposed with a serial
// reference path; the parallel path must produce identical aggregates.
struct ShotContext {
  const Circuit* circuit = nullptr;
  const DetectorGraph* graph = nullptr;
  const MatchingGraph* matching = nullptr;
  NoiseParams noise;
  uint64_t seed = 0;
  ErrorInstance input_mask;  // deterministic Paulis (logical input dressing)
  uint32_t mask_obs = 0;     // observable flips caused by the mask alone
  long truth_class = -1;     // expected class bit for Z-basis surgery inputs
};

struct ShotAggregate {
  long shots = 0;
  std::vector<long> obs_fails;
  long m0 = 0, m1 = 0, class_errors = 0;
  int class_obs_index = -1;
  long truth_class = -1;  // expected class bit for Z-basis surgery inputs

  void merge(const ShotAggregate& o);
};

ShotAggregate run_shots_serial(const ShotContext& ctx, long shots);
ShotAggregate run_shots_parallel(const ShotContext& ctx, long shots, int workers);

}  // namespace xyf
