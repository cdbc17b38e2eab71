#include "thinms/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace thinms {

namespace pt = boost::property_tree;

TransportParams ExperimentConfig::transport_physics() const {
  TransportParams p;
  p.diffusion = diffusion;
  p.penalty = penalty_c;
  p.wall = wall;
  p.robin = alpha;
  p.wall_value = constant(c_wall);
  p.wall_flux = beta;
  p.inflow_value = constant(c_in);
  return p;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error("config: " + what);
  };
  require(geometry.length > 0.0 && geometry.mean_half_width > 0.0, "geometry length and half_width must be positive");
  require(geometry.amplitude >= 0.0, "geometry amplitude must be nonnegative");
  require(geometry.inlet_radius > 0.0, "inlet_radius must be positive");
  require(n_domains >= 1, "partition domains must be at least 1");
  require(flow.viscosity > 0.0 && flow.density > 0.0 && flow.penalty > 0.0, "flow coefficients must be positive");
  require(inflow_exponent >= 1, "inflow exponent must be at least 1");
  require(u_in >= 0.0, "u_in must be nonnegative");
  require(diffusion > 0.0 && penalty_c > 0.0, "diffusion and penalty must be positive");
  require(alpha >= 0.0 && beta >= 0.0, "alpha and beta must be nonnegative");
  time.validate();
  for (const auto* list : {&velocity_modes, &concentration_modes}) {
    require(!list->empty(), "mode lists must be nonempty");
    require(std::is_sorted(list->begin(), list->end()) &&
                std::adjacent_find(list->begin(), list->end()) == list->end(),
            "mode lists must be strictly ascending");
    require(list->front() >= 1, "mode counts must be at least 1");
  }
}

namespace {

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error("config: bad integer '" + item + "' in list");
    }
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"", {"name"}},
      {"geometry",
       {"length", "centerline", "half_width", "profile", "amplitude", "wavelength", "cells", "h", "inlet_x",
        "inlet_y", "inlet_radius", "flip_fraction", "seed", "mesh_file"}},
      {"partition", {"domains", "mode", "seed"}},
      {"flow", {"viscosity", "density", "penalty", "u_in", "exponent"}},
      {"transport", {"diffusion", "penalty", "wall", "alpha", "c_wall", "beta", "c_in", "c0"}},
      {"time", {"t_max", "steps"}},
      {"basis",
       {"velocity_type", "concentration_type", "variant", "velocity_modes", "concentration_modes", "fine_velocity"}},
      {"output", {"dir", "vtk", "eigenvalues", "timings"}},
  };
  return keys;
}

void check_keys(const pt::ptree& tree) {
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      if (section != "name") throw Error("config: unknown top-level key '" + section + "'");
      continue;
    }
    auto it = keys.find(section);
    if (it == keys.end()) throw Error("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body)
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw Error("config: unknown key '" + key + "' in [" + section + "]");
  }
}

template <class T>
T get(const pt::ptree& tree, const std::string& path, const T& fallback) {
  // get(path, default) silently returns the default on a conversion failure.
  if (!tree.get_child_optional(path)) return fallback;
  try {
    return tree.get<T>(path);
  } catch (const pt::ptree_error& e) {
    throw Error("config: bad value for " + path + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const ExperimentConfig& defaults) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(std::string("config: ") + e.what());
  }
  check_keys(tree);
  ExperimentConfig c = defaults;
  c.name = get(tree, "name", c.name);

  ChannelParams& g = c.geometry;
  g.length = get(tree, "geometry.length", g.length);
  g.centerline = get(tree, "geometry.centerline", g.centerline);
  g.mean_half_width = get(tree, "geometry.half_width", g.mean_half_width);
  const std::string profile =
      get<std::string>(tree, "geometry.profile", g.profile == WallProfile::Straight ? "straight" : "sinusoidal");
  if (profile == "straight") g.profile = WallProfile::Straight;
  else if (profile == "sinusoidal") g.profile = WallProfile::Sinusoidal;
  else throw Error("config: unknown geometry.profile '" + profile + "'");
  g.amplitude = get(tree, "geometry.amplitude", g.amplitude);
  g.wavelength = get(tree, "geometry.wavelength", g.wavelength);
  g.target_cells = get(tree, "geometry.cells", g.target_cells);
  g.target_h = get(tree, "geometry.h", g.target_h);
  g.inlet_center.x() = get(tree, "geometry.inlet_x", g.inlet_center.x());
  g.inlet_center.y() = get(tree, "geometry.inlet_y", g.inlet_center.y());
  g.inlet_radius = get(tree, "geometry.inlet_radius", g.inlet_radius);
  g.flip_fraction = get(tree, "geometry.flip_fraction", g.flip_fraction);
  g.seed = get(tree, "geometry.seed", g.seed);
  c.mesh_file = get(tree, "geometry.mesh_file", c.mesh_file);

  c.n_domains = get(tree, "partition.domains", c.n_domains);
  c.partition_mode =
      partition_mode_from_string(get<std::string>(tree, "partition.mode", std::string(to_string(c.partition_mode))));
  c.partition_seed = get(tree, "partition.seed", c.partition_seed);

  c.flow.viscosity = get(tree, "flow.viscosity", c.flow.viscosity);
  c.flow.density = get(tree, "flow.density", c.flow.density);
  c.flow.penalty = get(tree, "flow.penalty", c.flow.penalty);
  c.u_in = get(tree, "flow.u_in", c.u_in);
  c.inflow_exponent = get(tree, "flow.exponent", c.inflow_exponent);

  c.diffusion = get(tree, "transport.diffusion", c.diffusion);
  c.penalty_c = get(tree, "transport.penalty", c.penalty_c);
  c.wall = wall_bc_from_string(get<std::string>(tree, "transport.wall", std::string(to_string(c.wall))));
  c.alpha = get(tree, "transport.alpha", c.alpha);
  c.c_wall = get(tree, "transport.c_wall", c.c_wall);
  c.beta = get(tree, "transport.beta", c.beta);
  c.c_in = get(tree, "transport.c_in", c.c_in);
  c.c0 = get(tree, "transport.c0", c.c0);

  c.time.t_max = get(tree, "time.t_max", c.time.t_max);
  c.time.n_steps = get(tree, "time.steps", c.time.n_steps);

  c.velocity_type =
      basis_type_from_string(get<std::string>(tree, "basis.velocity_type", std::string(to_string(c.velocity_type))));
  c.concentration_type = basis_type_from_string(
      get<std::string>(tree, "basis.concentration_type", std::string(to_string(c.concentration_type))));
  c.variant =
      snapshot_variant_from_string(get<std::string>(tree, "basis.variant", std::string(to_string(c.variant))));
  if (auto v = tree.get_optional<std::string>("basis.velocity_modes")) c.velocity_modes = parse_list(*v);
  if (auto v = tree.get_optional<std::string>("basis.concentration_modes")) c.concentration_modes = parse_list(*v);
  c.fine_velocity_rows = get(tree, "basis.fine_velocity", c.fine_velocity_rows);

  c.out_dir = get(tree, "output.dir", c.out_dir);
  c.write_vtk = get(tree, "output.vtk", c.write_vtk);
  c.write_eigenvalues = get(tree, "output.eigenvalues", c.write_eigenvalues);
  c.timings = get(tree, "output.timings", c.timings);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream s;
  s.precision(17);
  const ChannelParams& g = c.geometry;
  s << "name = " << c.name << "\n\n[geometry]\n"
    << "length = " << g.length << "\ncenterline = " << g.centerline << "\nhalf_width = " << g.mean_half_width
    << "\nprofile = " << (g.profile == WallProfile::Straight ? "straight" : "sinusoidal")
    << "\namplitude = " << g.amplitude << "\nwavelength = " << g.wavelength << "\ncells = " << g.target_cells
    << "\nh = " << g.target_h << "\ninlet_x = " << g.inlet_center.x() << "\ninlet_y = " << g.inlet_center.y()
    << "\ninlet_radius = " << g.inlet_radius << "\nflip_fraction = " << g.flip_fraction << "\nseed = " << g.seed
    << '\n';
  if (!c.mesh_file.empty()) s << "mesh_file = " << c.mesh_file << '\n';
  s << "\n[partition]\ndomains = " << c.n_domains << "\nmode = " << to_string(c.partition_mode)
    << "\nseed = " << c.partition_seed << "\n\n[flow]\nviscosity = " << c.flow.viscosity
    << "\ndensity = " << c.flow.density << "\npenalty = " << c.flow.penalty << "\nu_in = " << c.u_in
    << "\nexponent = " << c.inflow_exponent << "\n\n[transport]\ndiffusion = " << c.diffusion
    << "\npenalty = " << c.penalty_c << "\nwall = " << to_string(c.wall) << "\nalpha = " << c.alpha
    << "\nc_wall = " << c.c_wall << "\nbeta = " << c.beta << "\nc_in = " << c.c_in << "\nc0 = " << c.c0
    << "\n\n[time]\nt_max = " << c.time.t_max << "\nsteps = " << c.time.n_steps
    << "\n\n[basis]\nvelocity_type = " << to_string(c.velocity_type)
    << "\nconcentration_type = " << to_string(c.concentration_type) << "\nvariant = " << to_string(c.variant)
    << "\nvelocity_modes = " << join(c.velocity_modes) << "\nconcentration_modes = " << join(c.concentration_modes)
    << "\nfine_velocity = " << b(c.fine_velocity_rows) << "\n\n[output]\ndir = " << c.out_dir
    << "\nvtk = " << b(c.write_vtk) << "\neigenvalues = " << b(c.write_eigenvalues)
    << "\ntimings = " << b(c.timings) << '\n';
  out << s.str();
}

namespace {

// Sinusoidal-wall channel of length 1 and mean width 0.1 with a full-width inlet.
const char* const kGeometry1 = R"([geometry]
length = 1
centerline = 0.05
half_width = 0.05
profile = sinusoidal
amplitude = 0.015
wavelength = 0.1
cells = 15000
inlet_x = 0
inlet_y = 0.05
inlet_radius = 0.05
)";

const char* const kFlow = R"(
[flow]
viscosity = 1
density = 1
penalty = 8
u_in = 1
exponent = 2
)";

std::string make_preset(const std::string& name, const std::string& partition, const std::string& transport,
                        const std::string& time, const std::string& basis) {
  return "name = " + name + "\n\n" + kGeometry1 + "\n[partition]\n" + partition + kFlow + "\n[transport]\n" +
         transport + "\n[time]\n" + time + "\n[basis]\n" + basis + "\n[output]\ndir = out/" + name +
         "\nvtk = false\neigenvalues = true\ntimings = true\n";
}

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = [] {
    const std::string structured = "domains = 10\nmode = structured\nseed = 1\n";
    const std::string rbc = "diffusion = 0.01\npenalty = 8\nwall = rbc\nalpha = 0.01\nc_wall = 1\nc_in = 0\nc0 = 1\n";
    const std::string sweep_basis =
        "velocity_type = T2\nconcentration_type = T2\nvariant = elliptic\nvelocity_modes = 5,10,20,40\n"
        "concentration_modes = 1,3,5,10,20,30,40\nfine_velocity = true\n";
    const std::string bc_basis =
        "velocity_type = T2\nconcentration_type = T2\nvariant = elliptic\nvelocity_modes = 20\n"
        "concentration_modes = 1,3,5,10,20,30,40\nfine_velocity = false\n";
    std::map<std::string, std::string> t;
    t["test1_rbc"] = make_preset("test1_rbc", structured, rbc, "t_max = 0.7\nsteps = 40\n", sweep_basis);
    t["test2_dbc"] = make_preset("test2_dbc", structured,
                                 "diffusion = 0.01\npenalty = 8\nwall = dbc\nc_wall = 1\nc_in = 1\nc0 = 0\n",
                                 "t_max = 0.1\nsteps = 40\n", bc_basis);
    t["test2_nbc"] = make_preset("test2_nbc", structured,
                                 "diffusion = 0.01\npenalty = 8\nwall = nbc\nbeta = 0.01\nc_in = 0\nc0 = 1\n",
                                 "t_max = 0.5\nsteps = 40\n", bc_basis);
    t["test2_d01"] = make_preset("test2_d01", structured,
                                 "diffusion = 0.1\npenalty = 8\nwall = rbc\nalpha = 0.1\nc_wall = 1\nc_in = 0\nc0 = 1\n",
                                 "t_max = 0.7\nsteps = 40\n", bc_basis);
    t["test2_d1"] = make_preset("test2_d1", structured,
                                "diffusion = 1\npenalty = 8\nwall = rbc\nalpha = 0.1\nc_wall = 1\nc_in = 0\nc0 = 1\n",
                                "t_max = 0.7\nsteps = 40\n", bc_basis);
    t["test3_unstructured"] =
        make_preset("test3_unstructured", "domains = 10\nmode = unstructured\nseed = 7\n", rbc,
                    "t_max = 0.7\nsteps = 40\n",
                    "velocity_type = T2\nconcentration_type = T2\nvariant = elliptic\nvelocity_modes = 5,10,20,40\n"
                    "concentration_modes = 1,3,5,10,20,30,40\nfine_velocity = true\n");
    // Small straight channel for quick end-to-end checks.
    t["smoke"] =
        "name = smoke\n\n[geometry]\nlength = 1\ncenterline = 0.05\nhalf_width = 0.05\nprofile = straight\n"
        "cells = 800\ninlet_x = 0\ninlet_y = 0.05\ninlet_radius = 0.05\n\n[partition]\ndomains = 4\nmode = structured\n"
        "seed = 1\n" +
        std::string(kFlow) + "\n[transport]\n" + rbc +
        "\n[time]\nt_max = 0.7\nsteps = 40\n\n[basis]\nvelocity_type = T2\nconcentration_type = T2\n"
        "variant = elliptic\nvelocity_modes = 2,4,8\nconcentration_modes = 1,2,4,8\nfine_velocity = true\n"
        "\n[output]\ndir = out/smoke\nvtk = false\neigenvalues = true\ntimings = true\n";
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : presets()) n.push_back(k);
    return n;
  }();
  return names;
}

const std::string& preset_text(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw Error("unknown preset '" + name + "'");
  return it->second;
}

ExperimentConfig preset(const std::string& name) {
  std::istringstream in(preset_text(name));
  return parse_config(in);
}

}  // namespace thinms
