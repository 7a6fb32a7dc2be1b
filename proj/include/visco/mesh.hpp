#pragma once

// Hexahedral meshes with named face and vertex sets, structured generators
// for the box and L-shaped block geometries, and the ASCII mesh format.

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "visco/tensor.hpp"

namespace visco {

/// Conforming 8-node hexahedral mesh. Element corners are ordered
/// lexicographically: index = ix + 2 iy + 4 iz with ix,iy,iz in {0,1}.
/// Local faces: 0 -x, 1 +x, 2 -y, 3 +y, 4 -z, 5 +z.
struct HexMesh {
  std::vector<Vector3> vertices;
  std::vector<std::array<int, 8>> elements;
  std::map<std::string, std::vector<std::pair<int, int>>> face_sets;  // (elem, local face)
  std::map<std::string, std::vector<int>> vertex_sets;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }

  /// The four corner vertex ids of a local face, ordered so that
  /// (c1-c0) x (c3-c0) points outward.
  std::array<int, 4> face_vertices(int elem, int local_face) const;
};

/// Structured box [0,Lx] x [0,Ly] x [0,Lz] with face sets xmin/xmax/ymin/
/// ymax/zmin/zmax. Throws ConfigError on non-positive lengths or divisions.
HexMesh generate_box_mesh(const std::array<double, 3>& lengths,
                          const std::array<int, 3>& divisions);

/// L-shaped block in the x-y plane extruded along z, as a three-box union:
/// corner [0,w]^2, an x-arm to length and a y-arm to length, all of depth d.
/// Face sets: h1 = arm end at x = length, h2 = arm end at y = length, plus
/// the z = 0 face as zmin. Defaults reproduce a 180-element mesh.
struct LBlockSpec {
  double width = 1.0;    // cross-section side w
  double length = 3.0;   // total extent of each arm from the corner
  double depth = 1.0;    // z extent
  int n_cross = 3;       // divisions across w (both in-plane directions)
  int n_arm = 6;         // divisions along each arm of length (length - width)
  int n_depth = 4;       // divisions along z
};
HexMesh generate_lblock_mesh(const LBlockSpec& spec = {});

/// ASCII format: header "nv ne", nv lines "x y z", ne lines of 8 vertex
/// indices, then "set <name> face <elem> <localface>" or
/// "set <name> vertex <id>" lines.
HexMesh read_mesh(std::istream& in);
void write_mesh(const HexMesh& mesh, std::ostream& out);

/// Sum of quadrature volumes (4-point Gauss per direction), for checks.
double mesh_volume(const HexMesh& mesh);

}  // namespace visco
