#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

namespace xyf {

// Spacetime cells of the cubic lattice in doubled coordinates: a cell is
// named by twice the coordinates of its center, so vertices have all three
// components even and cubes all three odd. The circuit traverses the lattice
// along t = x+y; the useful derived coordinates are
//   s2 = x2 + y2   (doubled time; one schedule period spans s2 += 4)
//   v2 = y2 - x2   (doubled x-bar coordinate, the spatial row)
// and z2 is the spatial column. Qubit rows sit at odd v2, green columns at
// even z2, purple columns at odd z2.

enum class CellRank : uint8_t { Vertex, Edge, Face, Cube };
enum class Axis : uint8_t { X, Y, Z };
enum class Plane : uint8_t { XY, XZ, YZ };

struct Cell {
  int32_t x2 = 0, y2 = 0, z2 = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;

  int32_t s2() const { return x2 + y2; }
  int32_t v2() const { return y2 - x2; }

  CellRank rank() const {
    int odd = (x2 & 1) + (y2 & 1) + (z2 & 1);
    return static_cast<CellRank>(odd == 0 ? 0 : odd == 3 ? 3 : odd);
  }
  bool is_vertex() const { return rank() == CellRank::Vertex; }
  bool is_edge() const { return rank() == CellRank::Edge; }
  bool is_face() const { return rank() == CellRank::Face; }
  bool is_cube() const { return rank() == CellRank::Cube; }

  Axis edge_axis() const {
    if (x2 & 1) return Axis::X;
    if (y2 & 1) return Axis::Y;
    return Axis::Z;
  }
  Plane face_plane() const {
    if (!(z2 & 1)) return Plane::XY;
    if (y2 & 1) return Plane::YZ;
    return Plane::XZ;
  }

  std::string str() const {
    return "(" + std::to_string(x2) + "," + std::to_string(y2) + "," +
           std::to_string(z2) + ")";
  }
};

struct CellHash {
  size_t operator()(const Cell& c) const {
    uint64_t h = (uint64_t)(uint32_t)c.x2;
    h = h * 0x9e3779b97f4a7c15ull + (uint32_t)c.y2;
    h = h * 0x9e3779b97f4a7c15ull + (uint32_t)c.z2;
    h ^= h >> 31;
    return (size_t)h;
  }
};

// Incidence helpers. These enumerate cells of the infinite lattice; geometry
// predicates decide existence separately.

inline std::array<Cell, 2> vertices_of_edge(const Cell& e) {
  switch (e.edge_axis()) {
    case Axis::X: return {Cell{e.x2 - 1, e.y2, e.z2}, Cell{e.x2 + 1, e.y2, e.z2}};
    case Axis::Y: return {Cell{e.x2, e.y2 - 1, e.z2}, Cell{e.x2, e.y2 + 1, e.z2}};
    default: return {Cell{e.x2, e.y2, e.z2 - 1}, Cell{e.x2, e.y2, e.z2 + 1}};
  }
}

inline std::array<Cell, 4> edges_of_face(const Cell& f) {
  switch (f.face_plane()) {
    case Plane::XY:
      return {Cell{f.x2, f.y2 - 1, f.z2}, Cell{f.x2, f.y2 + 1, f.z2},
              Cell{f.x2 - 1, f.y2, f.z2}, Cell{f.x2 + 1, f.y2, f.z2}};
    case Plane::XZ:
      return {Cell{f.x2, f.y2, f.z2 - 1}, Cell{f.x2, f.y2, f.z2 + 1},
              Cell{f.x2 - 1, f.y2, f.z2}, Cell{f.x2 + 1, f.y2, f.z2}};
    default:
      return {Cell{f.x2, f.y2, f.z2 - 1}, Cell{f.x2, f.y2, f.z2 + 1},
              Cell{f.x2, f.y2 - 1, f.z2}, Cell{f.x2, f.y2 + 1, f.z2}};
  }
}

inline std::array<Cell, 2> cubes_of_face(const Cell& f) {
  switch (f.face_plane()) {
    case Plane::XY: return {Cell{f.x2, f.y2, f.z2 - 1}, Cell{f.x2, f.y2, f.z2 + 1}};
    case Plane::XZ: return {Cell{f.x2, f.y2 - 1, f.z2}, Cell{f.x2, f.y2 + 1, f.z2}};
    default: return {Cell{f.x2 - 1, f.y2, f.z2}, Cell{f.x2 + 1, f.y2, f.z2}};
  }
}

inline std::array<Cell, 6> faces_of_cube(const Cell& c) {
  return {Cell{c.x2 - 1, c.y2, c.z2}, Cell{c.x2 + 1, c.y2, c.z2},
          Cell{c.x2, c.y2 - 1, c.z2}, Cell{c.x2, c.y2 + 1, c.z2},
          Cell{c.x2, c.y2, c.z2 - 1}, Cell{c.x2, c.y2, c.z2 + 1}};
}

inline std::array<Cell, 4> faces_of_edge(const Cell& e) {
  switch (e.edge_axis()) {
    case Axis::X:
      return {Cell{e.x2, e.y2 - 1, e.z2}, Cell{e.x2, e.y2 + 1, e.z2},
              Cell{e.x2, e.y2, e.z2 - 1}, Cell{e.x2, e.y2, e.z2 + 1}};
    case Axis::Y:
      return {Cell{e.x2 - 1, e.y2, e.z2}, Cell{e.x2 + 1, e.y2, e.z2},
              Cell{e.x2, e.y2, e.z2 - 1}, Cell{e.x2, e.y2, e.z2 + 1}};
    default:
      return {Cell{e.x2 - 1, e.y2, e.z2}, Cell{e.x2 + 1, e.y2, e.z2},
              Cell{e.x2, e.y2 - 1, e.z2}, Cell{e.x2, e.y2 + 1, e.z2}};
  }
}

inline std::array<Cell, 6> edges_of_vertex(const Cell& v) {
  return {Cell{v.x2 - 1, v.y2, v.z2}, Cell{v.x2 + 1, v.y2, v.z2},
          Cell{v.x2, v.y2 - 1, v.z2}, Cell{v.x2, v.y2 + 1, v.z2},
          Cell{v.x2, v.y2, v.z2 - 1}, Cell{v.x2, v.y2, v.z2 + 1}};
}

}  // namespace xyf
