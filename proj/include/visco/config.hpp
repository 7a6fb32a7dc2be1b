#pragma once

// Run configuration: the line-oriented "key = value" format with [section]
// headers, full-file validation (every problem reported, not just the
// first), and construction of the runtime objects a run needs.

#include <iosfwd>
#include <optional>

#include "visco/mesh.hpp"
#include "visco/solver.hpp"

namespace visco {

struct MeshConfig {
  enum class Type { Box, LBlock, File } type = Type::Box;
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  std::array<int, 3> divisions{1, 1, 1};
  LBlockSpec lblock;
  std::string path;  // Type::File
};

struct OutputConfig {
  std::string csv;              // per-step diagnostics series
  std::string snapshot_prefix;  // VTK files <prefix>_t<t>.vtk
  std::vector<double> snapshot_times;
  std::optional<Vector3> probe;
  std::string state_out;  // binary state written at T
};

struct RunConfig {
  MeshConfig mesh;
  MaterialParams material;
  LoadSpec loads;
  SolverConfig solver;
  OutputConfig output;
  std::string restart;  // binary state to continue from
};

/// Parses and validates; throws ConfigError carrying every issue found.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

/// Inverse of parse_config: parse(serialize(cfg)) == cfg.
void serialize_config(const RunConfig& cfg, std::ostream& out);

HexMesh make_mesh(const MeshConfig& cfg);

}  // namespace visco
