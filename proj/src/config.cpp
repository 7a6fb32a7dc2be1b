#include "visco/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace visco {

namespace {

struct Entry {
  std::string section, key, value;
  int line = 0;
  bool consumed = false;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<Entry> tokenize(std::istream& in, std::vector<std::string>& issues) {
  std::vector<Entry> entries;
  std::string line, section;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back("line " + std::to_string(ln) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(ln) + ": expected key = value");
      continue;
    }
    entries.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), ln});
  }
  return entries;
}

class Parser {
 public:
  Parser(std::vector<Entry> entries, std::vector<std::string>& issues)
      : entries_(std::move(entries)), issues_(issues) {}

  std::optional<std::string> take(const std::string& section, const std::string& key) {
    for (auto& e : entries_) {
      if (!e.consumed && e.section == section && e.key == key) {
        e.consumed = true;
        return e.value;
      }
    }
    return std::nullopt;
  }

  std::vector<std::string> take_all(const std::string& section, const std::string& key) {
    std::vector<std::string> out;
    for (auto& e : entries_) {
      if (!e.consumed && e.section == section && e.key == key) {
        e.consumed = true;
        out.push_back(e.value);
      }
    }
    return out;
  }

  double take_double(const std::string& section, const std::string& key, double fallback,
                     bool required = false) {
    const auto v = take(section, key);
    if (!v) {
      if (required) issues_.push_back("missing required key [" + section + "] " + key);
      return fallback;
    }
    try {
      std::size_t pos = 0;
      const double d = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return d;
    } catch (...) {
      issues_.push_back("[" + section + "] " + key + ": not a number: '" + *v + "'");
      return fallback;
    }
  }

  int take_int(const std::string& section, const std::string& key, int fallback,
               bool required = false) {
    return static_cast<int>(take_double(section, key, fallback, required));
  }

  void complain_unknown() {
    for (const auto& e : entries_) {
      if (!e.consumed) {
        issues_.push_back("line " + std::to_string(e.line) + ": unknown key [" + e.section +
                          "] " + e.key);
      }
    }
  }

  void issue(const std::string& s) { issues_.push_back(s); }

 private:
  std::vector<Entry> entries_;
  std::vector<std::string>& issues_;
};

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::istringstream ss(s);
  double v;
  while (ss >> v) out.push_back(v);
  return out;
}

/// "hat(2.5, 5)" | "sin(6895, 0.5)" | "const(1)"
std::optional<TimeFunction> parse_time_function(const std::string& s,
                                                std::vector<std::string>& issues,
                                                const std::string& where) {
  const auto open = s.find('(');
  const auto close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    issues.push_back(where + ": malformed time function '" + s + "'");
    return std::nullopt;
  }
  const std::string name = trim(s.substr(0, open));
  std::string args = s.substr(open + 1, close - open - 1);
  std::replace(args.begin(), args.end(), ',', ' ');
  const auto nums = parse_numbers(args);
  if (name == "hat" && nums.size() == 2) {
    if (!(nums[0] > 0.0 && nums[1] > nums[0])) {
      issues.push_back(where + ": hat(peak_t, end_t) needs 0 < peak_t < end_t");
      return std::nullopt;
    }
    return TimeFunction::hat(nums[0], nums[1]);
  }
  if (name == "sin" && nums.size() == 2) return TimeFunction::sine(nums[0], nums[1]);
  if (name == "const" && nums.size() == 1) return TimeFunction::constant(nums[0]);
  issues.push_back(where + ": unknown time function '" + s + "'");
  return std::nullopt;
}

std::string format_time_function(const TimeFunction& f) {
  std::ostringstream ss;
  ss.precision(17);
  switch (f.kind) {
    case TimeFunction::Kind::Hat:
      ss << "hat(" << f.a << ", " << f.b << ")";
      break;
    case TimeFunction::Kind::Sin:
      ss << "sin(" << f.a << ", " << f.b << ")";
      break;
    case TimeFunction::Kind::Const:
      ss << "const(" << f.a << ")";
      break;
  }
  return ss.str();
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  std::vector<std::string> issues;
  Parser p(tokenize(in, issues), issues);
  RunConfig cfg;

  // [mesh]
  const auto mesh_type = p.take("mesh", "type");
  if (!mesh_type) {
    issues.push_back("missing required key [mesh] type (box | lblock | file)");
  } else if (*mesh_type == "box") {
    cfg.mesh.type = MeshConfig::Type::Box;
    const auto lengths = p.take("mesh", "lengths");
    const auto divisions = p.take("mesh", "divisions");
    if (!lengths || parse_numbers(*lengths).size() != 3) {
      issues.push_back("[mesh] lengths: three values required for a box mesh");
    } else {
      const auto l = parse_numbers(*lengths);
      cfg.mesh.lengths = {l[0], l[1], l[2]};
    }
    if (!divisions || parse_numbers(*divisions).size() != 3) {
      issues.push_back("[mesh] divisions: three values required for a box mesh");
    } else {
      const auto d = parse_numbers(*divisions);
      cfg.mesh.divisions = {static_cast<int>(d[0]), static_cast<int>(d[1]),
                            static_cast<int>(d[2])};
    }
  } else if (*mesh_type == "lblock") {
    cfg.mesh.type = MeshConfig::Type::LBlock;
    cfg.mesh.lblock.width = p.take_double("mesh", "width", cfg.mesh.lblock.width);
    cfg.mesh.lblock.length = p.take_double("mesh", "length", cfg.mesh.lblock.length);
    cfg.mesh.lblock.depth = p.take_double("mesh", "depth", cfg.mesh.lblock.depth);
    cfg.mesh.lblock.n_cross = p.take_int("mesh", "n_cross", cfg.mesh.lblock.n_cross);
    cfg.mesh.lblock.n_arm = p.take_int("mesh", "n_arm", cfg.mesh.lblock.n_arm);
    cfg.mesh.lblock.n_depth = p.take_int("mesh", "n_depth", cfg.mesh.lblock.n_depth);
  } else if (*mesh_type == "file") {
    cfg.mesh.type = MeshConfig::Type::File;
    const auto path = p.take("mesh", "path");
    if (!path) {
      issues.push_back("[mesh] path required for type = file");
    } else {
      cfg.mesh.path = *path;
    }
  } else {
    issues.push_back("[mesh] type: unknown mesh type '" + *mesh_type + "'");
  }

  // [material]
  cfg.material.rho0 = p.take_double("material", "rho0", 0.0, true);
  cfg.material.equilibrium.c1 = p.take_double("material", "c1", 0.0, true);
  cfg.material.equilibrium.c2 = p.take_double("material", "c2", 0.0, true);
  const int n_branches = p.take_int("material", "branches", 0);
  for (int a = 1; a <= n_branches; ++a) {
    const std::string prefix = "branch" + std::to_string(a);
    ViscoBranch b;
    const auto kind = p.take("material", prefix + ".kind");
    if (!kind || (*kind != "hs" && *kind != "mipc")) {
      issues.push_back("[material] " + prefix + ".kind must be hs or mipc");
    } else {
      b.kind = *kind == "hs" ? BranchKind::HS : BranchKind::MIPC;
    }
    b.mu = p.take_double("material", prefix + ".mu", 0.0, true);
    b.eta = p.take_double("material", prefix + ".eta", 0.0, true);
    b.beta_inf = p.take_double("material", prefix + ".beta_inf", 1.0);
    cfg.material.branches.push_back(b);
  }
  if (!(cfg.material.rho0 > 0.0)) issues.push_back("[material] rho0 must be positive");
  if (cfg.material.equilibrium.c1 < 0.0 || cfg.material.equilibrium.c2 < 0.0 ||
      cfg.material.equilibrium.c1 + cfg.material.equilibrium.c2 <= 0.0) {
    issues.push_back("[material] c1, c2 must be non-negative with c1 + c2 > 0");
  }
  for (std::size_t a = 0; a < cfg.material.branches.size(); ++a) {
    const auto& b = cfg.material.branches[a];
    if (!(b.mu > 0.0) || !(b.eta > 0.0)) {
      issues.push_back("[material] branch" + std::to_string(a + 1) +
                       ": mu and eta must be positive");
    }
    if (b.kind == BranchKind::MIPC && !(b.beta_inf > 0.0)) {
      issues.push_back("[material] branch" + std::to_string(a + 1) +
                       ": beta_inf must be positive for mipc");
    }
  }
  cfg.material.initialize_branch_offsets(SymTensor2::identity());

  // [loads]
  for (const auto& v : p.take_all("loads", "traction")) {
    std::istringstream ss(v);
    TractionLoad load;
    std::string rest;
    if (!(ss >> load.face_set >> load.direction[0] >> load.direction[1] >>
          load.direction[2])) {
      issues.push_back("[loads] traction: expected '<set> dx dy dz timefunc(...)'");
      continue;
    }
    std::getline(ss, rest);
    if (const auto f = parse_time_function(trim(rest), issues, "[loads] traction")) {
      load.profile = *f;
      cfg.loads.tractions.push_back(load);
    }
  }
  for (const auto& v : p.take_all("loads", "body")) {
    std::istringstream ss(v);
    BodyForce bf;
    std::string rest;
    if (!(ss >> bf.direction[0] >> bf.direction[1] >> bf.direction[2])) {
      issues.push_back("[loads] body: expected 'dx dy dz timefunc(...)'");
      continue;
    }
    std::getline(ss, rest);
    if (const auto f = parse_time_function(trim(rest), issues, "[loads] body")) {
      bf.profile = *f;
      cfg.loads.body_forces.push_back(bf);
    }
  }
  for (const auto& v : p.take_all("loads", "dirichlet")) {
    std::istringstream ss(v);
    DirichletSpec d;
    std::string comps;
    if (!(ss >> d.face_set >> comps)) {
      issues.push_back("[loads] dirichlet: expected '<set> <components from xyz>'");
      continue;
    }
    d.components = {false, false, false};
    bool ok = !comps.empty();
    for (char c : comps) {
      if (c == 'x') d.components[0] = true;
      else if (c == 'y') d.components[1] = true;
      else if (c == 'z') d.components[2] = true;
      else ok = false;
    }
    if (!ok) {
      issues.push_back("[loads] dirichlet: components must be a subset of xyz");
      continue;
    }
    cfg.loads.dirichlet.push_back(d);
  }

  // [solver]
  cfg.solver.dt = p.take_double("solver", "dt", 0.0, true);
  cfg.solver.T = p.take_double("solver", "T", 0.0, true);
  cfg.solver.tol_R = p.take_double("solver", "tol_R", cfg.solver.tol_R);
  cfg.solver.tol_A = p.take_double("solver", "tol_A", cfg.solver.tol_A);
  cfg.solver.l_max = p.take_int("solver", "l_max", cfg.solver.l_max);
  cfg.solver.gamma = p.take_double("solver", "gamma", cfg.solver.gamma);
  cfg.solver.z_cut = p.take_double("solver", "z_cut", cfg.solver.z_cut);
  if (const auto s = p.take("solver", "scheme")) {
    if (*s == "1") cfg.solver.scheme = SchemeKind::Scheme1;
    else if (*s == "2") cfg.solver.scheme = SchemeKind::Scheme2;
    else if (*s == "mp") cfg.solver.scheme = SchemeKind::Midpoint;
    else issues.push_back("[solver] scheme must be 1, 2 or mp");
  }
  if (!(cfg.solver.dt > 0.0)) issues.push_back("[solver] dt must be positive");
  if (cfg.solver.T < 0.0) issues.push_back("[solver] T must be non-negative");
  if (!(cfg.solver.tol_R > 0.0 && cfg.solver.tol_A > 0.0)) {
    issues.push_back("[solver] tolerances must be positive");
  }
  if (cfg.solver.l_max < 1) issues.push_back("[solver] l_max must be at least 1");
  if (cfg.solver.gamma < 0.0) issues.push_back("[solver] gamma must be non-negative");

  // [output]
  if (const auto v = p.take("output", "csv")) cfg.output.csv = *v;
  if (const auto v = p.take("output", "snapshot_prefix")) cfg.output.snapshot_prefix = *v;
  if (const auto v = p.take("output", "snapshot_times"))
    cfg.output.snapshot_times = parse_numbers(*v);
  if (const auto v = p.take("output", "probe")) {
    const auto nums = parse_numbers(*v);
    if (nums.size() != 3) {
      issues.push_back("[output] probe: three coordinates required");
    } else {
      cfg.output.probe = Vector3(nums[0], nums[1], nums[2]);
    }
  }
  if (const auto v = p.take("output", "state_out")) cfg.output.state_out = *v;
  if (const auto v = p.take("output", "restart")) cfg.restart = *v;

  p.complain_unknown();
  if (!issues.empty()) throw ConfigError(issues);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void serialize_config(const RunConfig& cfg, std::ostream& out) {
  out.precision(17);
  out << "[mesh]\n";
  switch (cfg.mesh.type) {
    case MeshConfig::Type::Box:
      out << "type = box\n";
      out << "lengths = " << cfg.mesh.lengths[0] << ' ' << cfg.mesh.lengths[1] << ' '
          << cfg.mesh.lengths[2] << '\n';
      out << "divisions = " << cfg.mesh.divisions[0] << ' ' << cfg.mesh.divisions[1] << ' '
          << cfg.mesh.divisions[2] << '\n';
      break;
    case MeshConfig::Type::LBlock:
      out << "type = lblock\n";
      out << "width = " << cfg.mesh.lblock.width << '\n';
      out << "length = " << cfg.mesh.lblock.length << '\n';
      out << "depth = " << cfg.mesh.lblock.depth << '\n';
      out << "n_cross = " << cfg.mesh.lblock.n_cross << '\n';
      out << "n_arm = " << cfg.mesh.lblock.n_arm << '\n';
      out << "n_depth = " << cfg.mesh.lblock.n_depth << '\n';
      break;
    case MeshConfig::Type::File:
      out << "type = file\n";
      out << "path = " << cfg.mesh.path << '\n';
      break;
  }
  out << "\n[material]\n";
  out << "rho0 = " << cfg.material.rho0 << '\n';
  out << "c1 = " << cfg.material.equilibrium.c1 << '\n';
  out << "c2 = " << cfg.material.equilibrium.c2 << '\n';
  out << "branches = " << cfg.material.branches.size() << '\n';
  for (std::size_t a = 0; a < cfg.material.branches.size(); ++a) {
    const auto& b = cfg.material.branches[a];
    const std::string prefix = "branch" + std::to_string(a + 1);
    out << prefix << ".kind = " << (b.kind == BranchKind::HS ? "hs" : "mipc") << '\n';
    out << prefix << ".mu = " << b.mu << '\n';
    out << prefix << ".eta = " << b.eta << '\n';
    out << prefix << ".beta_inf = " << b.beta_inf << '\n';
  }
  out << "\n[loads]\n";
  for (const auto& t : cfg.loads.tractions) {
    out << "traction = " << t.face_set << ' ' << t.direction[0] << ' ' << t.direction[1]
        << ' ' << t.direction[2] << ' ' << format_time_function(t.profile) << '\n';
  }
  for (const auto& b : cfg.loads.body_forces) {
    out << "body = " << b.direction[0] << ' ' << b.direction[1] << ' ' << b.direction[2]
        << ' ' << format_time_function(b.profile) << '\n';
  }
  for (const auto& d : cfg.loads.dirichlet) {
    out << "dirichlet = " << d.face_set << ' ';
    if (d.components[0]) out << 'x';
    if (d.components[1]) out << 'y';
    if (d.components[2]) out << 'z';
    out << '\n';
  }
  out << "\n[solver]\n";
  out << "dt = " << cfg.solver.dt << '\n';
  out << "T = " << cfg.solver.T << '\n';
  out << "tol_R = " << cfg.solver.tol_R << '\n';
  out << "tol_A = " << cfg.solver.tol_A << '\n';
  out << "l_max = " << cfg.solver.l_max << '\n';
  out << "gamma = " << cfg.solver.gamma << '\n';
  out << "z_cut = " << cfg.solver.z_cut << '\n';
  out << "scheme = "
      << (cfg.solver.scheme == SchemeKind::Scheme1
              ? "1"
              : cfg.solver.scheme == SchemeKind::Scheme2 ? "2" : "mp")
      << '\n';
  out << "\n[output]\n";
  if (!cfg.output.csv.empty()) out << "csv = " << cfg.output.csv << '\n';
  if (!cfg.output.snapshot_prefix.empty())
    out << "snapshot_prefix = " << cfg.output.snapshot_prefix << '\n';
  if (!cfg.output.snapshot_times.empty()) {
    out << "snapshot_times =";
    for (double t : cfg.output.snapshot_times) out << ' ' << t;
    out << '\n';
  }
  if (cfg.output.probe) {
    out << "probe = " << (*cfg.output.probe)[0] << ' ' << (*cfg.output.probe)[1] << ' '
        << (*cfg.output.probe)[2] << '\n';
  }
  if (!cfg.output.state_out.empty()) out << "state_out = " << cfg.output.state_out << '\n';
  if (!cfg.restart.empty()) out << "restart = " << cfg.restart << '\n';
}

HexMesh make_mesh(const MeshConfig& cfg) {
  switch (cfg.type) {
    case MeshConfig::Type::Box:
      return generate_box_mesh(cfg.lengths, cfg.divisions);
    case MeshConfig::Type::LBlock:
      return generate_lblock_mesh(cfg.lblock);
    case MeshConfig::Type::File: {
      std::ifstream in(cfg.path);
      if (!in) throw ConfigError("cannot open mesh file '" + cfg.path + "'");
      return read_mesh(in);
    }
  }
  throw ConfigError("unreachable mesh type");
}

}  // namespace visco
