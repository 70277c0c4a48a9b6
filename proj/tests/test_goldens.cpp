#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "xyf/circuit.hpp"
#include "xyf/detector_graph.hpp"

using namespace xyf;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(XYF_SOURCE_DIR) + "/" + rel);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("torus 2x2 one-period circuit text matches the golden file") {
  Circuit c = build_bare_block(GeometrySpec::torus(2, 2, 1), 1);
  CHECK(emit_text(c) == slurp("goldens/torus_2x2_T1.xyf"));
}

TEST_CASE("rectangle memory circuit text matches the golden file") {
  Circuit c = build_memory_circuit(GeometrySpec::rectangle(2, 2, 1), 1, InitKind::ZBasis,
                                   ReadoutBasis::Z);
  CHECK(emit_text(c) == slurp("goldens/rectangle_2x2_T1_memoryZ.xyf"));
}

TEST_CASE("detector graph JSON matches the golden file") {
  Circuit c = build_memory_circuit(GeometrySpec::rectangle(2, 2, 1), 1, InitKind::ZBasis,
                                   ReadoutBasis::Z);
  DetectorGraph g = build_detector_graph(c);
  CHECK(detector_graph_json(g) + "\n" == slurp("goldens/rectangle_2x2_T1_memoryZ.graph.json"));
}

TEST_CASE("golden circuits parse back to themselves") {
  for (const char* name : {"goldens/torus_2x2_T1.xyf", "goldens/rectangle_2x2_T1_memoryZ.xyf"}) {
    std::string text = slurp(name);
    CHECK(emit_text(parse_text(text)) == text);
  }
}
