#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xyf/circuit.hpp"
#include "xyf/detector_graph.hpp"
#include "xyf/experiment.hpp"
#include "xyf/path_integral.hpp"
#include "xyf/statevector.hpp"

using namespace xyf;

namespace {

struct CommonOpts {
  std::string geometry = "rectangle";
  int l1 = 3, l2 = 3, l = 2;
  int rounds = 3, t0 = 0, t1 = 1;
  double p_gate = 0, p_idle = 0, p_meas = 0, p_prep = 0;
  long shots = 1000;
  uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  std::string out;
  std::string config_path;
};

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("--geometry", o.geometry, "torus | rectangle | surgery");
  app->add_option("--l1", o.l1, "columns (z direction unit cells)");
  app->add_option("--l2", o.l2, "rows (x-bar direction unit cells)");
  app->add_option("--l", o.l, "surgery block size");
  app->add_option("--rounds", o.rounds, "time periods");
  app->add_option("--t0", o.t0, "surgery merge period");
  app->add_option("--t1", o.t1, "surgery split period");
  app->add_option("--p-gate", o.p_gate);
  app->add_option("--p-idle", o.p_idle);
  app->add_option("--p-meas", o.p_meas);
  app->add_option("--p-prep", o.p_prep);
  app->add_option("--shots", o.shots);
  app->add_option("--seed", o.seed)->each([&o](const std::string&) { o.seed_set = true; });
  app->add_option("--workers", o.workers, "0 = all cores");
  app->add_option("--out", o.out, "output path (default stdout)");
  app->add_option("--config", o.config_path, "JSON config file (flags override)");
}

void load_config(CommonOpts& o, CLI::App* app) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config_path);
  nlohmann::json j;
  in >> j;
  auto set_if = [&](const char* key, auto& field, const char* flag) {
    if (j.contains(key) && app->count(flag) == 0) field = j[key].template get<std::decay_t<decltype(field)>>();
  };
  set_if("geometry", o.geometry, "--geometry");
  set_if("l1", o.l1, "--l1");
  set_if("l2", o.l2, "--l2");
  set_if("l", o.l, "--l");
  set_if("rounds", o.rounds, "--rounds");
  set_if("t0", o.t0, "--t0");
  set_if("t1", o.t1, "--t1");
  set_if("p_gate", o.p_gate, "--p-gate");
  set_if("p_idle", o.p_idle, "--p-idle");
  set_if("p_meas", o.p_meas, "--p-meas");
  set_if("p_prep", o.p_prep, "--p-prep");
  set_if("shots", o.shots, "--shots");
  set_if("workers", o.workers, "--workers");
  if (j.contains("seed") && app->count("--seed") == 0) {
    o.seed = j["seed"].get<uint64_t>();
    o.seed_set = true;
  }
}

ExperimentConfig to_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  if (o.geometry == "torus")
    cfg.geom = GeometrySpec::torus(o.l1, o.l2, o.rounds);
  else if (o.geometry == "rectangle")
    cfg.geom = GeometrySpec::rectangle(o.l1, o.l2, o.rounds);
  else if (o.geometry == "surgery")
    cfg.geom = GeometrySpec::surgery(o.l, o.t0, o.t1, o.rounds);
  else
    throw CLI::ValidationError("--geometry", "unknown geometry " + o.geometry);
  cfg.noise.p_gate = o.p_gate;
  cfg.noise.p_idle = o.p_idle;
  cfg.noise.p_meas = o.p_meas;
  cfg.noise.p_prep = o.p_prep;
  cfg.shots = o.shots;
  cfg.seed = o.seed;
  cfg.seed_set = o.seed_set;
  cfg.workers = o.workers;
  cfg.out_path = o.out;
  return cfg;
}

void write_out(const std::string& path, const std::string& body, const std::string& hdr) {
  std::string text = hdr + body;
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// Per-run metadata sidecar next to the CSV.
void write_meta(const ExperimentConfig& cfg, const std::string& extra) {
  if (cfg.out_path.empty()) return;
  nlohmann::json j;
  j["geometry"] = cfg.geom.kind == GeometryKind::Torus
                      ? "torus"
                      : cfg.geom.kind == GeometryKind::Rectangle ? "rectangle" : "surgery";
  j["l1"] = cfg.geom.l1;
  j["l2"] = cfg.geom.l2;
  j["rounds"] = cfg.geom.rounds;
  if (cfg.geom.kind == GeometryKind::Surgery) {
    j["l"] = cfg.geom.l;
    j["t0"] = cfg.geom.t0;
    j["t1"] = cfg.geom.t1;
    if (!extra.empty()) j["input"] = extra;
  }
  j["p_gate"] = cfg.noise.p_gate;
  j["p_idle"] = cfg.noise.p_idle;
  j["p_meas"] = cfg.noise.p_meas;
  j["p_prep"] = cfg.noise.p_prep;
  j["shots"] = cfg.shots;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  std::ofstream f(cfg.out_path + ".meta.json");
  if (f) f << j.dump(1) << "\n";
}

std::string echo_header(const ExperimentConfig& cfg, const std::string& extra = "") {
  std::ostringstream os;
  os << "# xyf run: geometry="
     << (cfg.geom.kind == GeometryKind::Torus
             ? "torus"
             : cfg.geom.kind == GeometryKind::Rectangle ? "rectangle" : "surgery")
     << " l1=" << cfg.geom.l1 << " l2=" << cfg.geom.l2 << " rounds=" << cfg.geom.rounds;
  if (cfg.geom.kind == GeometryKind::Surgery)
    os << " l=" << cfg.geom.l << " t0=" << cfg.geom.t0 << " t1=" << cfg.geom.t1;
  os << " p_gate=" << cfg.noise.p_gate << " p_idle=" << cfg.noise.p_idle
     << " p_meas=" << cfg.noise.p_meas << " p_prep=" << cfg.noise.p_prep
     << " shots=" << cfg.shots << " seed=" << cfg.seed << " workers=" << cfg.workers;
  if (!extra.empty()) os << " " << extra;
  os << "\n";
  return os.str();
}

int run_selftest();

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"x+y Floquet code workbench"};
  app.require_subcommand(1);

  CommonOpts mo, so, eo;
  CLI::App* mem = app.add_subcommand("memory", "memory experiment (both logical bases)");
  add_common(mem, mo);

  CLI::App* sur = app.add_subcommand("surgery", "lattice-surgery logical ZZ measurement");
  add_common(sur, so);
  std::string input = "00";
  sur->add_option("--input", input, "logical input: 00 | 01 | 10 | 11 | ++");

  CLI::App* exp = app.add_subcommand("export", "emit circuit text or detector-graph JSON");
  add_common(exp, eo);
  std::string what = "circuit-text";
  exp->add_option("--what", what, "circuit-text | detector-graph-json");
  std::string basis = "Z";
  exp->add_option("--basis", basis, "memory basis for the exported circuit (Z|X)");

  CLI::App* self = app.add_subcommand("selftest", "run the oracle-equivalence suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mem->parsed()) {
      load_config(mo, mem);
      ExperimentConfig cfg = to_config(mo);
      MemoryResult r = run_memory_experiment(cfg);
      write_out(cfg.out_path, memory_csv_row(cfg, r, true), echo_header(cfg));
      write_meta(cfg, "");
    } else if (sur->parsed()) {
      load_config(so, sur);
      so.geometry = "surgery";
      ExperimentConfig cfg = to_config(so);
      cfg.surgery_input = input;
      Stats s = run_surgery_experiment(cfg);
      write_out(cfg.out_path, surgery_csv_row(cfg, s, true),
                echo_header(cfg, "input=" + input));
      write_meta(cfg, input);
    } else if (exp->parsed()) {
      load_config(eo, exp);
      ExperimentConfig cfg = to_config(eo);
      InitKind init = basis == "X" ? InitKind::XBasis : InitKind::ZBasis;
      ReadoutBasis ro = basis == "X" ? ReadoutBasis::X : ReadoutBasis::Z;
      Circuit c = cfg.geom.kind == GeometryKind::Surgery
                      ? build_surgery_circuit(cfg.geom, init, ro)
                      : build_memory_circuit(cfg.geom, cfg.geom.rounds, init, ro);
      if (what == "circuit-text") {
        write_out(cfg.out_path, emit_text(c), "");
      } else if (what == "detector-graph-json") {
        DetectorGraph g = build_detector_graph(c);
        write_out(cfg.out_path, detector_graph_json(g) + "\n", "");
      } else {
        std::cerr << "unknown export kind '" << what
                  << "' (use circuit-text or detector-graph-json)\n";
        return 2;
      }
    } else if (self->parsed()) {
      return run_selftest();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

namespace {

int run_selftest() {
  using std::cout;
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  // Circuit operator vs path integral on the 2x2 torus, one period.
  {
    GeometrySpec g = GeometrySpec::torus(2, 2, 1);
    Circuit c = build_bare_block(g, 1);
    OperatorSlab slab = build_operator_slab(g, 1);
    size_t n = c.num_qubits();
    std::vector<uint8_t> all_plus(c.num_labels, 0);
    bool ok = true;
    double lambda = 0;
    for (uint64_t in = 0; in < (1ull << n) && ok; ++in) {
      DenseState st = DenseState::basis((int)n, in);
      SvPolicy pol;
      pol.kind = SvPolicy::Force;
      pol.forced = &all_plus;
      SvResult res = run_statevector(c, st, pol);
      for (uint64_t out = 0; out < (1ull << n); ++out) {
        double circ = res.probability > 0
                          ? std::sqrt(res.probability) * std::real(res.state.amps[out])
                          : 0.0;
        int64_t zval = evaluate_slab_entry(slab, in, out, {});
        if (lambda == 0 && std::abs(circ) > 1e-9 && zval != 0) lambda = circ / zval;
        double want = lambda * zval;
        if (std::abs(circ - want) > 1e-7 * std::max(1.0, std::abs(want))) ok = false;
      }
    }
    check("circuit operator matches path integral (2x2 torus)", ok && lambda != 0);
  }

  // Engine vs statevector on random small circuits.
  {
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      GeometrySpec g = GeometrySpec::rectangle(1, 2, 1);
      Circuit c = build_memory_circuit(g, 1, InitKind::ZBasis, ReadoutBasis::Z);
      EngineResult er = run(c, {}, 1234 + trial);
      SvResult sv = run_statevector(c, DenseState::zeros((int)c.num_qubits()),
                                    SvPolicy{SvPolicy::Force, 0, &er.rec.bits});
      EngineResult ef = run_forced(c, {}, er.rec.bits);
      if (std::abs(sv.probability - ef.prob) > 1e-9) ok = false;
      for (int l = 0; l < c.num_labels; ++l)
        if (sv.rec.deterministic[l] != ef.rec.deterministic[l]) ok = false;
    }
    check("stabilizer engine agrees with statevector", ok);
  }

  // Noiseless detector closure.
  {
    GeometrySpec g = GeometrySpec::rectangle(3, 3, 2);
    Circuit c = build_memory_circuit(g, 2, InitKind::ZBasis, ReadoutBasis::Z);
    DetectorGraph dg = build_detector_graph(c);
    bool ok = true;
    for (int s = 0; s < 200 && ok; ++s) {
      EngineResult er = run(c, {}, 777 + s);
      ok = dg.syndrome(er.rec, dg.ref.ref).empty();
    }
    check("noiseless shots fire no detectors", ok);
  }

  cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace
