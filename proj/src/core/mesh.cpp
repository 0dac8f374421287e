#include "mesh.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace stcmc {

namespace {

constexpr int kMaxLevel = 8;

void push_icosahedron(std::vector<Vec3>& verts, std::vector<std::array<int, 3>>& faces) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const double s = 1.0 / std::sqrt(1.0 + t * t);
  auto v = [&](double a, double b, double c) { verts.emplace_back(a * s, b * s, c * s); };
  v(-1, t, 0); v(1, t, 0); v(-1, -t, 0); v(1, -t, 0);
  v(0, -1, t); v(0, 1, t); v(0, -1, -t); v(0, 1, -t);
  v(t, 0, -1); v(t, 0, 1); v(-t, 0, -1); v(-t, 0, 1);
  const int f[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (const auto& tri : f) faces.push_back({tri[0], tri[1], tri[2]});
}

}  // namespace

SurfaceMesh build_icosphere(int level, double radius, const Vec3& center) {
  if (level < 0) throw InvalidArgument("icosphere level must be nonnegative");
  if (level > kMaxLevel)
    throw SizeError("icosphere level " + std::to_string(level) + " exceeds guard " +
                    std::to_string(kMaxLevel));
  if (!(radius > 0)) throw InvalidArgument("icosphere radius must be positive");

  std::vector<Vec3> dirs;
  std::vector<std::array<int, 3>> faces;
  push_icosahedron(dirs, faces);

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (dirs[a] + dirs[b]).normalized();
      dirs.push_back(m);
      int idx = static_cast<int>(dirs.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  SurfaceMesh mesh;
  mesh.level = level;
  mesh.faces = std::move(faces);
  mesh.param = dirs;
  mesh.vertices.reserve(dirs.size());
  for (const Vec3& u : dirs) mesh.vertices.push_back(center + radius * u);
  return mesh;
}

SurfaceMesh embed_radial_graph(const SurfaceMesh& mesh, const std::function<double(const Vec3&)>& rho,
                               const Vec3& center) {
  if (mesh.param.size() != mesh.vertices.size())
    throw GeometryError("radial graph needs a sphere parametrization");
  SurfaceMesh out = mesh;
  for (size_t i = 0; i < mesh.param.size(); ++i) {
    const double r = rho(mesh.param[i]);
    if (!(r > 0))
      throw GeometryError("radial field nonpositive at vertex " + std::to_string(i) + ": rho = " +
                          std::to_string(r));
    out.vertices[i] = center + r * mesh.param[i];
  }
  return out;
}

int euler_characteristic(const SurfaceMesh& mesh) {
  const int nv = mesh.vertex_count();
  std::map<std::pair<int, int>, int> edge_count;    // undirected incidence
  std::map<std::pair<int, int>, int> directed;      // orientation check
  for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const auto& f = mesh.faces[fi];
    for (int e = 0; e < 3; ++e) {
      int a = f[e], b = f[(e + 1) % 3];
      if (a < 0 || b < 0 || a >= nv || b >= nv)
        throw GeometryError("face " + std::to_string(fi) + " references missing vertex");
      if (a == b) throw GeometryError("face " + std::to_string(fi) + " is degenerate");
      ++edge_count[std::minmax(a, b)];
      if (++directed[{a, b}] > 1)
        throw GeometryError("inconsistent orientation at edge " + std::to_string(a) + "-" +
                            std::to_string(b));
    }
  }
  for (const auto& [e, c] : edge_count)
    if (c != 2)
      throw GeometryError("edge " + std::to_string(e.first) + "-" + std::to_string(e.second) +
                          " borders " + std::to_string(c) + " faces, expected 2");
  const int ne = static_cast<int>(edge_count.size());
  return nv - ne + mesh.face_count();
}

SurfaceMesh read_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open OFF file: " + path);
  std::string tok;
  in >> tok;
  if (tok != "OFF") throw IoError("bad OFF header in " + path);
  int nv = 0, nf = 0, ne = 0;
  in >> nv >> nf >> ne;
  if (!in || nv <= 0 || nf <= 0) throw IoError("bad OFF counts in " + path);
  SurfaceMesh mesh;
  mesh.vertices.resize(nv);
  for (int i = 0; i < nv; ++i) in >> mesh.vertices[i](0) >> mesh.vertices[i](1) >> mesh.vertices[i](2);
  mesh.faces.resize(nf);
  for (int i = 0; i < nf; ++i) {
    int k = 0;
    in >> k;
    if (k != 3) throw IoError("OFF face " + std::to_string(i) + " is not a triangle");
    in >> mesh.faces[i][0] >> mesh.faces[i][1] >> mesh.faces[i][2];
  }
  if (!in) throw IoError("truncated OFF file: " + path);
  return mesh;
}

void write_off(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write OFF file: " + path);
  out.precision(17);
  out << "OFF\n" << mesh.vertex_count() << " " << mesh.face_count() << " 0\n";
  for (const Vec3& v : mesh.vertices) out << v(0) << " " << v(1) << " " << v(2) << "\n";
  for (const auto& f : mesh.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace stcmc
