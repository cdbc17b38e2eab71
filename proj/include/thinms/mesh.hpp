#pragma once

#include "thinms/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thinms {

enum class FacetMarker { Interior, Inflow, Outflow, Wall };

std::string_view to_string(FacetMarker marker);
FacetMarker facet_marker_from_string(std::string_view text);

/// A mesh edge. `cells[0]` is the lower-indexed adjacent cell (K+), `cells[1]`
/// the other one or -1 on the boundary. `normal` points out of K+.
struct Facet {
  std::array<int, 2> nodes{};
  std::array<int, 2> cells{-1, -1};
  FacetMarker marker = FacetMarker::Interior;
  Point normal = Point::Zero();
  double length = 0.0;

  bool is_boundary() const { return cells[1] < 0; }
};

/// Conforming triangulation with counterclockwise cells and marked facets.
struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> cells;
  std::vector<Facet> facets;
  /// cell_facets[c][k] is the facet opposite local vertex k.
  std::vector<std::array<int, 3>> cell_facets;
  std::vector<double> cell_area;
  /// sqrt(2 * mean cell area): leg length of an equivalent right isosceles cell.
  double h = 0.0;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }

  Point centroid(int cell) const;
  double total_area() const;
  /// Local vertex index (0..2) of `node` in `cell`, or -1.
  int local_vertex(int cell, int node) const;
};

/// Builds topology, normals and areas from raw arrays. Boundary facets get
/// `boundary_marker(facet nodes)`; interior facets are always Interior.
/// When `facet_order` is given, facets are emitted in that order (it must list
/// every edge exactly once).
Mesh build_mesh(std::vector<Point> nodes, std::vector<std::array<int, 3>> cells,
                const std::function<FacetMarker(const Point&, const Point&)>& boundary_marker,
                const std::vector<std::array<int, 2>>* facet_order = nullptr);

/// Throws Error when a structural invariant fails (adjacency counts,
/// boundary markers, orientation).
void validate(const Mesh& mesh);

enum class WallProfile { Straight, Sinusoidal };

struct ChannelParams {
  double length = 1.0;
  /// Centerline y coordinate; the channel spans centerline +- half_width(x).
  double centerline = 0.05;
  double mean_half_width = 0.05;
  WallProfile profile = WallProfile::Straight;
  double amplitude = 0.0;
  double wavelength = 0.1;
  /// Either target_cells > 0 or target_h > 0 selects the resolution.
  int target_cells = 0;
  double target_h = 0.0;
  Point inlet_center{0.0, 0.05};
  double inlet_radius = 0.05;
  /// Fraction of quads whose split diagonal is flipped at random.
  double flip_fraction = 0.0;
  std::uint64_t seed = 1;

  double half_width(double x) const;
};

/// Thin channel triangulation: a structured quad grid mapped onto the channel
/// and split into triangles.
Mesh generate_channel(const ChannelParams& params);

enum class PartitionMode { Structured, Unstructured };

std::string_view to_string(PartitionMode mode);
PartitionMode partition_mode_from_string(std::string_view text);

struct CoarsePartition {
  int n_domains = 0;
  PartitionMode mode = PartitionMode::Structured;
  std::vector<int> cell_to_domain;
  std::vector<std::vector<int>> domain_cells;
  /// Non-wall local boundary: inter-domain facets and global inflow/outflow.
  std::vector<std::vector<int>> interface_facets;
  std::vector<std::vector<int>> wall_facets;
  std::vector<double> domain_area;
};

/// Recomputes domain cell lists and boundary decomposition from cell_to_domain.
CoarsePartition make_partition(const Mesh& mesh, std::vector<int> cell_to_domain, PartitionMode mode);

CoarsePartition partition_coarse(const Mesh& mesh, int n_domains, PartitionMode mode,
                                 std::uint64_t seed);

/// Number of facet-connected components of each domain.
std::vector<int> domain_component_counts(const Mesh& mesh, const CoarsePartition& partition);

/// Text mesh format, version 1.
void write_mesh(std::ostream& out, const Mesh& mesh, const CoarsePartition* partition = nullptr);
struct MeshFile {
  Mesh mesh;
  std::optional<CoarsePartition> partition;
};
MeshFile read_mesh(std::istream& in);

}  // namespace thinms
