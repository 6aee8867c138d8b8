#include "techtime/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "techtime/error.hpp"

namespace techtime {

const char* err_name(Err e) {
  switch (e) {
    case Err::MalformedRecord: return "MalformedRecord";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::EmptyMesh: return "EmptyMesh";
    case Err::TruncatedFile: return "TruncatedFile";
    case Err::CountMismatch: return "CountMismatch";
    case Err::DegenerateMesh: return "DegenerateMesh";
    case Err::SamplingExhausted: return "SamplingExhausted";
    case Err::InvalidPose: return "InvalidPose";
    case Err::ShapeMismatch: return "ShapeMismatch";
    case Err::EmptySet: return "EmptySet";
    case Err::EmptyScene: return "EmptyScene";
    case Err::EmptyDataset: return "EmptyDataset";
    case Err::PoolTooSmall: return "PoolTooSmall";
    case Err::PoolMissing: return "PoolMissing";
    case Err::InvalidRange: return "InvalidRange";
    case Err::Overflow: return "Overflow";
    case Err::NonFiniteLoss: return "NonFiniteLoss";
    case Err::NonFiniteGradient: return "NonFiniteGradient";
    case Err::BadMagic: return "BadMagic";
    case Err::VersionMismatch: return "VersionMismatch";
    case Err::Truncated: return "Truncated";
    case Err::IoFailure: return "IoFailure";
    case Err::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

void TriangleMesh::validate() const {
  if (vertices.size() < 3 || triangles.empty())
    raise(Err::EmptyMesh, "mesh needs at least 3 vertices and 1 triangle");
  for (const Triangle& t : triangles) {
    for (uint32_t idx : t)
      if (idx >= vertices.size())
        raise(Err::IndexOutOfRange, "triangle index " + std::to_string(idx) + " with " +
                                        std::to_string(vertices.size()) + " vertices");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      raise(Err::MalformedRecord, "triangle repeats a vertex index");
  }
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view tok, double& out) {
  const char* b = tok.data();
  const char* e = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e;
}

bool parse_int(std::string_view tok, long& out) {
  const char* b = tok.data();
  const char* e = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e;
}

[[noreturn]] void malformed(size_t line_no, const std::string& what) {
  raise(Err::MalformedRecord, "line " + std::to_string(line_no) + ": " + what);
}

void push_triangle(TriangleMesh& mesh, uint32_t a, uint32_t b, uint32_t c, size_t line_no) {
  if (a == b || b == c || a == c) malformed(line_no, "face repeats a vertex");
  mesh.triangles.push_back({a, b, c});
}

}  // namespace

TriangleMesh parse_obj(std::string_view text, std::string id) {
  TriangleMesh mesh;
  mesh.id = std::move(id);
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "v") {
      if (toks.size() < 4) malformed(line_no, "vertex needs 3 coordinates");
      Vec3 v;
      if (!parse_double(toks[1], v.x) || !parse_double(toks[2], v.y) || !parse_double(toks[3], v.z))
        malformed(line_no, "unparsable vertex coordinate");
      mesh.vertices.push_back(v);
    } else if (toks[0] == "f") {
      if (toks.size() < 4) malformed(line_no, "face needs at least 3 indices");
      std::vector<uint32_t> idx;
      for (size_t i = 1; i < toks.size(); ++i) {
        std::string_view ref = toks[i];
        size_t slash = ref.find('/');
        if (slash != std::string_view::npos) ref = ref.substr(0, slash);
        long v;
        if (!parse_int(ref, v)) malformed(line_no, "unparsable face index");
        if (v < 1 || static_cast<size_t>(v) > mesh.vertices.size())
          raise(Err::IndexOutOfRange, "line " + std::to_string(line_no) + ": face index " +
                                          std::to_string(v) + " with " +
                                          std::to_string(mesh.vertices.size()) + " vertices");
        idx.push_back(static_cast<uint32_t>(v - 1));
      }
      for (size_t i = 1; i + 1 < idx.size(); ++i)
        push_triangle(mesh, idx[0], idx[i], idx[i + 1], line_no);
    }
    // everything else (vn, vt, g, o, s, usemtl, mtllib, ...) is ignored
  }
  mesh.validate();
  return mesh;
}

namespace {

// Exact-bits vertex key, so deduplication never depends on tolerances.
struct VertexKey {
  uint64_t x, y, z;
  bool operator<(const VertexKey& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

VertexKey key_of(float x, float y, float z) {
  uint32_t bx, by, bz;
  std::memcpy(&bx, &x, 4);
  std::memcpy(&by, &y, 4);
  std::memcpy(&bz, &z, 4);
  return {bx, by, bz};
}

uint32_t dedup_vertex(TriangleMesh& mesh, std::map<VertexKey, uint32_t>& seen, float x, float y,
                      float z) {
  auto [it, inserted] = seen.try_emplace(key_of(x, y, z), static_cast<uint32_t>(mesh.vertices.size()));
  if (inserted) mesh.vertices.push_back({x, y, z});
  return it->second;
}

TriangleMesh parse_stl_binary(std::string_view bytes, std::string id) {
  if (bytes.size() < 84) raise(Err::TruncatedFile, "binary STL shorter than 84-byte preamble");
  uint32_t count;
  std::memcpy(&count, bytes.data() + 80, 4);
  size_t expected = 84 + static_cast<size_t>(count) * 50;
  if (bytes.size() < expected)
    raise(Err::TruncatedFile, "declared " + std::to_string(count) + " triangles, file holds " +
                                  std::to_string((bytes.size() - 84) / 50));
  if (bytes.size() > expected)
    raise(Err::CountMismatch, "trailing bytes after " + std::to_string(count) + " triangle records");

  TriangleMesh mesh;
  mesh.id = std::move(id);
  std::map<VertexKey, uint32_t> seen;
  for (uint32_t t = 0; t < count; ++t) {
    const char* rec = bytes.data() + 84 + static_cast<size_t>(t) * 50;
    float v[12];  // normal + 3 vertices
    std::memcpy(v, rec, 48);
    uint32_t a = dedup_vertex(mesh, seen, v[3], v[4], v[5]);
    uint32_t b = dedup_vertex(mesh, seen, v[6], v[7], v[8]);
    uint32_t c = dedup_vertex(mesh, seen, v[9], v[10], v[11]);
    mesh.triangles.push_back({a, b, c});
  }
  if (mesh.triangles.size() != count) raise(Err::CountMismatch, "triangle count mismatch");
  mesh.validate();
  return mesh;
}

TriangleMesh parse_stl_ascii(std::string_view text, std::string id) {
  TriangleMesh mesh;
  mesh.id = std::move(id);
  std::map<VertexKey, uint32_t> seen;
  std::vector<double> coords;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "vertex") {
      if (toks.size() != 4) malformed(line_no, "vertex needs 3 coordinates");
      for (int i = 1; i <= 3; ++i) {
        double d;
        if (!parse_double(toks[i], d)) malformed(line_no, "unparsable vertex coordinate");
        coords.push_back(d);
      }
    } else if (toks[0] == "endfacet") {
      if (coords.size() != 9) malformed(line_no, "facet without exactly 3 vertices");
      uint32_t idx[3];
      for (int i = 0; i < 3; ++i)
        idx[i] = dedup_vertex(mesh, seen, static_cast<float>(coords[i * 3]),
                              static_cast<float>(coords[i * 3 + 1]),
                              static_cast<float>(coords[i * 3 + 2]));
      mesh.triangles.push_back({idx[0], idx[1], idx[2]});
      coords.clear();
    }
  }
  if (!coords.empty()) raise(Err::TruncatedFile, "dangling facet at end of ASCII STL");
  mesh.validate();
  return mesh;
}

}  // namespace

TriangleMesh parse_stl(std::string_view bytes, std::string id) {
  // ASCII files start with "solid", but so may a binary header; trust the
  // record structure over the prefix.
  bool starts_solid = bytes.substr(0, 5) == "solid";
  if (starts_solid && bytes.find("facet") != std::string_view::npos &&
      bytes.find("vertex") != std::string_view::npos)
    return parse_stl_ascii(bytes, std::move(id));
  return parse_stl_binary(bytes, std::move(id));
}

std::string write_obj(const TriangleMesh& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 40 + mesh.triangles.size() * 24);
  char buf[96];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    out += buf;
  }
  for (const Triangle& t : mesh.triangles) {
    std::snprintf(buf, sizeof buf, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out += buf;
  }
  return out;
}

BoundingSphere bounding_sphere(const TriangleMesh& mesh) {
  const auto& v = mesh.vertices;
  auto farthest_from = [&](const Vec3& p) {
    size_t best = 0;
    double best_d = -1.0;
    for (size_t i = 0; i < v.size(); ++i) {
      double d = dot(v[i] - p, v[i] - p);
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };

  // Ritter: two farthest-point probes give the initial sphere, then grow to
  // cover stragglers.
  Vec3 a = v[farthest_from(v[0])];
  Vec3 b = v[farthest_from(a)];
  Vec3 center = (a + b) * 0.5;
  double radius = norm(b - a) * 0.5;
  for (const Vec3& p : v) {
    double d = norm(p - center);
    if (d > radius) {
      double nr = (radius + d) * 0.5;
      center = center + (p - center) * ((nr - radius) / d);
      radius = nr;
    }
  }

  // Tightening pass: pin the radius to the actual farthest vertex.
  double max_d = 0.0;
  for (const Vec3& p : v) max_d = std::max(max_d, norm(p - center));
  radius = max_d;

  if (radius <= 0.0) raise(Err::DegenerateMesh, "all vertices coincide");
  return {center, radius};
}

std::pair<TriangleMesh, BoundingSphere> normalize(const TriangleMesh& mesh) {
  mesh.validate();
  BoundingSphere s = bounding_sphere(mesh);
  TriangleMesh out;
  out.id = mesh.id;
  out.triangles = mesh.triangles;
  out.vertices.reserve(mesh.vertices.size());
  double inv = 1.0 / s.radius;
  for (const Vec3& v : mesh.vertices) out.vertices.push_back((v - s.center) * inv);
  return {std::move(out), BoundingSphere{{0.0, 0.0, 0.0}, 1.0}};
}

TriangleMesh load_mesh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Err::IoFailure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string bytes = ss.str();
  std::string id = std::filesystem::path(path).stem().string();
  std::string ext = std::filesystem::path(path).extension().string();
  for (char& c : ext) c = static_cast<char>(::tolower(c));
  if (ext == ".stl") return parse_stl(bytes, id);
  return parse_obj(bytes, id);
}

}  // namespace techtime
