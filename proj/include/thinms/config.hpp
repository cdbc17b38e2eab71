#pragma once

#include "thinms/assembly.hpp"
#include "thinms/fine_solver.hpp"
#include "thinms/mesh.hpp"
#include "thinms/msbasis_transport.hpp"
#include "thinms/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace thinms {

/// Declarative description of one experiment. Every field has a default; INI
/// files override them section by section.
struct ExperimentConfig {
  std::string name = "experiment";

  // [geometry]
  ChannelParams geometry;
  /// When set, the mesh (and its partition, if stored) is read from this file.
  std::string mesh_file;

  // [partition]
  int n_domains = 10;
  PartitionMode partition_mode = PartitionMode::Structured;
  std::uint64_t partition_seed = 1;

  // [flow]
  FlowParams flow;
  double u_in = 1.0;
  int inflow_exponent = 2;

  // [transport]
  TransportParams transport_physics() const;
  double diffusion = 0.01;
  double penalty_c = kDefaultPenalty;
  WallBc wall = WallBc::Robin;
  double alpha = 0.01;
  double c_wall = 1.0;
  double beta = 0.0;
  double c_in = 0.0;
  double c0 = 1.0;

  // [time]
  TimeGrid time{0.7, 40};

  // [basis]
  BasisType velocity_type = BasisType::Type2;
  BasisType concentration_type = BasisType::Type2;
  SnapshotVariant variant = SnapshotVariant::Elliptic;
  std::vector<int> velocity_modes{20};
  std::vector<int> concentration_modes{1, 3, 5, 10, 20};
  /// Adds rows that drive the coarse transport with the fine velocity.
  bool fine_velocity_rows = false;

  // [output]
  std::string out_dir = "out";
  bool write_vtk = false;
  bool write_eigenvalues = true;
  bool timings = true;

  /// Throws Error on negative coefficients, empty or unsorted mode lists and
  /// invalid time grids.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in, const ExperimentConfig& defaults = {});
ExperimentConfig load_config(const std::string& path);
/// INI text that reproduces `config` through parse_config.
void write_config(std::ostream& out, const ExperimentConfig& config);

/// Names of the built-in presets.
const std::vector<std::string>& preset_names();
/// INI text of a built-in preset.
const std::string& preset_text(const std::string& name);
ExperimentConfig preset(const std::string& name);

}  // namespace thinms
