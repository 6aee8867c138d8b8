#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "techtime/vec.hpp"

namespace techtime {

using Triangle = std::array<uint32_t, 3>;

// One item's geometry. Vertices are in model units until normalize() maps the
// mesh into the canonical frame (unit bounding sphere at the origin).
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string id;

  // Throws on invariant violations: empty geometry, out-of-range indices,
  // repeated indices within a triangle.
  void validate() const;
};

struct BoundingSphere {
  Vec3 center;
  double radius = 0.0;
};

/// Parses ASCII Wavefront OBJ. Polygon faces are fan-triangulated from the
/// first vertex; records other than v/f are ignored.
TriangleMesh parse_obj(std::string_view text, std::string id = {});

/// Parses binary or ASCII STL. Vertices are deduplicated by exact coordinate
/// bit-equality.
TriangleMesh parse_stl(std::string_view bytes, std::string id = {});

/// Canonical OBJ writer: 9 significant digits, 1-based faces. Reparsing its
/// output reproduces the same text byte for byte.
std::string write_obj(const TriangleMesh& mesh);

/// Bounding sphere via Ritter's approximation, then the radius is tightened to
/// the exact farthest vertex for that center.
BoundingSphere bounding_sphere(const TriangleMesh& mesh);

/// Translates and uniformly scales so the bounding sphere becomes the unit
/// sphere at the origin. Idempotent within 1e-6.
std::pair<TriangleMesh, BoundingSphere> normalize(const TriangleMesh& mesh);

TriangleMesh load_mesh_file(const std::string& path);

}  // namespace techtime
