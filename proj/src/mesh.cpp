#include "visco/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include "visco/error.hpp"

namespace visco {

namespace {

// corners of each local face (lexicographic corner ids), outward orientation
constexpr int kFaceCorners[6][4] = {
    {0, 4, 6, 2},  // -x
    {1, 3, 7, 5},  // +x
    {0, 1, 5, 4},  // -y
    {2, 6, 7, 3},  // +y
    {0, 2, 3, 1},  // -z
    {4, 5, 7, 6},  // +z
};

struct GridBox {
  std::array<double, 3> origin;
  std::array<double, 3> lengths;
  std::array<int, 3> div;
};

/// Appends a structured box, merging vertices shared with previous boxes via
/// quantized coordinate keys.
void append_box(HexMesh& mesh, const GridBox& box,
                std::map<std::array<std::int64_t, 3>, int>& vertex_index, double quantum) {
  auto key = [&](const Vector3& x) {
    return std::array<std::int64_t, 3>{static_cast<std::int64_t>(std::llround(x[0] / quantum)),
                                       static_cast<std::int64_t>(std::llround(x[1] / quantum)),
                                       static_cast<std::int64_t>(std::llround(x[2] / quantum))};
  };
  const auto& d = box.div;
  std::vector<int> ids((d[0] + 1) * (d[1] + 1) * (d[2] + 1));
  auto lin = [&](int i, int j, int k) { return i + (d[0] + 1) * (j + (d[1] + 1) * k); };
  for (int k = 0; k <= d[2]; ++k)
    for (int j = 0; j <= d[1]; ++j)
      for (int i = 0; i <= d[0]; ++i) {
        Vector3 x(box.origin[0] + box.lengths[0] * i / d[0],
                  box.origin[1] + box.lengths[1] * j / d[1],
                  box.origin[2] + box.lengths[2] * k / d[2]);
        auto [it, inserted] = vertex_index.try_emplace(key(x), mesh.n_vertices());
        if (inserted) mesh.vertices.push_back(x);
        ids[lin(i, j, k)] = it->second;
      }
  for (int k = 0; k < d[2]; ++k)
    for (int j = 0; j < d[1]; ++j)
      for (int i = 0; i < d[0]; ++i) {
        std::array<int, 8> conn;
        for (int c = 0; c < 8; ++c) {
          conn[c] = ids[lin(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))];
        }
        mesh.elements.push_back(conn);
      }
}

/// Tags every boundary face of `mesh` whose four corners satisfy `on_plane`.
template <typename Pred>
void tag_faces(HexMesh& mesh, const std::string& name, Pred&& on_plane) {
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int f = 0; f < 6; ++f) {
      const auto fv = mesh.face_vertices(e, f);
      bool all = true;
      for (int c : fv) all = all && on_plane(mesh.vertices[c]);
      if (all) mesh.face_sets[name].emplace_back(e, f);
    }
  }
}

}  // namespace

std::array<int, 4> HexMesh::face_vertices(int elem, int local_face) const {
  std::array<int, 4> out;
  for (int c = 0; c < 4; ++c) out[c] = elements[elem][kFaceCorners[local_face][c]];
  return out;
}

HexMesh generate_box_mesh(const std::array<double, 3>& lengths,
                          const std::array<int, 3>& divisions) {
  std::vector<std::string> issues;
  for (int a = 0; a < 3; ++a) {
    if (!(lengths[a] > 0.0)) issues.push_back("box length must be positive");
    if (divisions[a] < 1) issues.push_back("box division count must be at least 1");
  }
  if (!issues.empty()) throw ConfigError(issues);

  HexMesh mesh;
  std::map<std::array<std::int64_t, 3>, int> index;
  const double quantum = 1e-12 * std::max({lengths[0], lengths[1], lengths[2]});
  append_box(mesh, {{0, 0, 0}, lengths, divisions}, index, quantum);

  const double tol = 1e-9 * std::max({lengths[0], lengths[1], lengths[2]});
  tag_faces(mesh, "xmin", [&](const Vector3& x) { return std::abs(x[0]) < tol; });
  tag_faces(mesh, "xmax", [&](const Vector3& x) { return std::abs(x[0] - lengths[0]) < tol; });
  tag_faces(mesh, "ymin", [&](const Vector3& x) { return std::abs(x[1]) < tol; });
  tag_faces(mesh, "ymax", [&](const Vector3& x) { return std::abs(x[1] - lengths[1]) < tol; });
  tag_faces(mesh, "zmin", [&](const Vector3& x) { return std::abs(x[2]) < tol; });
  tag_faces(mesh, "zmax", [&](const Vector3& x) { return std::abs(x[2] - lengths[2]) < tol; });
  return mesh;
}

HexMesh generate_lblock_mesh(const LBlockSpec& s) {
  std::vector<std::string> issues;
  if (!(s.width > 0.0 && s.depth > 0.0)) issues.push_back("lblock width/depth must be positive");
  if (!(s.length > s.width)) issues.push_back("lblock length must exceed its width");
  if (s.n_cross < 1 || s.n_arm < 1 || s.n_depth < 1)
    issues.push_back("lblock divisions must be at least 1");
  if (!issues.empty()) throw ConfigError(issues);

  const double w = s.width, L = s.length, d = s.depth;
  HexMesh mesh;
  std::map<std::array<std::int64_t, 3>, int> index;
  const double quantum = 1e-12 * std::max({L, d});
  append_box(mesh, {{0, 0, 0}, {w, w, d}, {s.n_cross, s.n_cross, s.n_depth}}, index, quantum);
  append_box(mesh, {{w, 0, 0}, {L - w, w, d}, {s.n_arm, s.n_cross, s.n_depth}}, index, quantum);
  append_box(mesh, {{0, w, 0}, {w, L - w, d}, {s.n_cross, s.n_arm, s.n_depth}}, index, quantum);

  const double tol = 1e-9 * L;
  tag_faces(mesh, "h1", [&](const Vector3& x) { return std::abs(x[0] - L) < tol; });
  tag_faces(mesh, "h2", [&](const Vector3& x) { return std::abs(x[1] - L) < tol; });
  tag_faces(mesh, "zmin", [&](const Vector3& x) { return std::abs(x[2]) < tol; });
  return mesh;
}

HexMesh read_mesh(std::istream& in) {
  HexMesh mesh;
  int nv = 0, ne = 0;
  if (!(in >> nv >> ne) || nv < 8 || ne < 1) {
    throw ConfigError("mesh file: bad header (expected vertex and element counts)");
  }
  mesh.vertices.resize(nv);
  for (auto& v : mesh.vertices) {
    if (!(in >> v[0] >> v[1] >> v[2])) throw ConfigError("mesh file: truncated vertex list");
  }
  mesh.elements.resize(ne);
  for (auto& e : mesh.elements) {
    for (int& c : e) {
      if (!(in >> c) || c < 0 || c >= nv)
        throw ConfigError("mesh file: bad element connectivity");
    }
  }
  std::string tok;
  while (in >> tok) {
    if (tok != "set") throw ConfigError("mesh file: expected 'set', got '" + tok + "'");
    std::string name, kind;
    in >> name >> kind;
    if (kind == "face") {
      int e = 0, f = 0;
      if (!(in >> e >> f) || e < 0 || e >= ne || f < 0 || f > 5)
        throw ConfigError("mesh file: bad face set entry for '" + name + "'");
      mesh.face_sets[name].emplace_back(e, f);
    } else if (kind == "vertex") {
      int v = 0;
      if (!(in >> v) || v < 0 || v >= nv)
        throw ConfigError("mesh file: bad vertex set entry for '" + name + "'");
      mesh.vertex_sets[name].push_back(v);
    } else {
      throw ConfigError("mesh file: unknown set kind '" + kind + "'");
    }
  }
  return mesh;
}

void write_mesh(const HexMesh& mesh, std::ostream& out) {
  out << mesh.n_vertices() << ' ' << mesh.n_elements() << '\n';
  out.precision(17);
  for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& e : mesh.elements) {
    for (int c = 0; c < 8; ++c) out << e[c] << (c == 7 ? '\n' : ' ');
  }
  for (const auto& [name, faces] : mesh.face_sets) {
    for (auto [e, f] : faces) out << "set " << name << " face " << e << ' ' << f << '\n';
  }
  for (const auto& [name, verts] : mesh.vertex_sets) {
    for (int v : verts) out << "set " << name << " vertex " << v << '\n';
  }
}

double mesh_volume(const HexMesh& mesh) {
  // trilinear geometry, 2-point Gauss is exact; reuse a small fixed rule
  const double g = 1.0 / std::sqrt(3.0);
  double vol = 0.0;
  for (const auto& conn : mesh.elements) {
    for (int q = 0; q < 8; ++q) {
      const double xi[3] = {(q & 1 ? g : -g), (q & 2 ? g : -g), (q & 4 ? g : -g)};
      Tensor2 jac = Tensor2::Zero();
      for (int c = 0; c < 8; ++c) {
        const double sx = (c & 1) ? 1.0 : -1.0;
        const double sy = (c & 2) ? 1.0 : -1.0;
        const double sz = (c & 4) ? 1.0 : -1.0;
        const double vx = 0.5 * (1 + sx * xi[0]);
        const double vy = 0.5 * (1 + sy * xi[1]);
        const double vz = 0.5 * (1 + sz * xi[2]);
        const Vector3 dn(0.5 * sx * vy * vz, vx * 0.5 * sy * vz, vx * vy * 0.5 * sz);
        jac += mesh.vertices[conn[c]] * dn.transpose();
      }
      vol += jac.determinant();
    }
  }
  return vol;
}

}  // namespace visco
