#pragma once

#include "thinms/mesh.hpp"
#include "thinms/types.hpp"

#include <array>
#include <optional>
#include <vector>

namespace thinms {

/// Degree-of-freedom layout of the three fully discontinuous fine spaces:
/// vector P1 velocity, P0 pressure and scalar P1 concentration. Every cell
/// owns its own DOFs; nothing is shared across facets.
struct DofMaps {
  int n_cells = 0;

  int velocity(int cell, int component, int vertex) const { return 6 * cell + 3 * component + vertex; }
  int pressure(int cell) const { return cell; }
  int concentration(int cell, int vertex) const { return 3 * cell + vertex; }

  int num_velocity() const { return 6 * n_cells; }
  int num_pressure() const { return n_cells; }
  int num_concentration() const { return 3 * n_cells; }
  /// Velocity plus pressure unknowns of the saddle-point system.
  int num_flow() const { return num_velocity() + num_pressure(); }
};

DofMaps build_spaces(const Mesh& mesh);

/// N_cell * (d (d+1) + 1): P1 vector velocity plus P0 pressure on simplices.
constexpr long long fine_flow_dofs(long long n_cells, int dim) { return n_cells * (dim * (dim + 1) + 1); }
/// N_cell * (d + 1): scalar P1 on simplices.
constexpr long long fine_concentration_dofs(long long n_cells, int dim) { return n_cells * (dim + 1); }

/// Affine map and constant P1 gradients of one cell.
struct CellGeometry {
  std::array<Point, 3> vertices;
  std::array<Point, 3> grads;
  double area = 0.0;

  Point map(const Point& ref) const {
    return vertices[0] + ref.x() * (vertices[1] - vertices[0]) + ref.y() * (vertices[2] - vertices[0]);
  }
  static std::array<double, 3> shape(const Point& ref) { return {1.0 - ref.x() - ref.y(), ref.x(), ref.y()}; }
};

CellGeometry cell_geometry(const Mesh& mesh, int cell);

/// One side of a facet: the adjacent cell and the local vertex numbers of the
/// facet endpoints. A facet point is parametrised by s in [0, 1] from
/// facet.nodes[0] to facet.nodes[1].
struct FacetSide {
  int cell = -1;
  std::array<int, 2> local{};

  std::array<double, 3> shape(double s) const {
    std::array<double, 3> phi{0.0, 0.0, 0.0};
    phi[local[0]] = 1.0 - s;
    phi[local[1]] = s;
    return phi;
  }
};

FacetSide facet_side(const Mesh& mesh, int facet, int side);

/// Traces of a P1 DG scalar field on a facet. On boundary facets only `plus`
/// exists, and jump and average both reduce to it.
struct Trace {
  double plus = 0.0;
  std::optional<double> minus;

  double jump() const { return minus ? plus - *minus : plus; }
  double average() const { return minus ? 0.5 * (plus + *minus) : plus; }
};

/// Evaluates a concentration-layout field at facet parameter s.
Trace scalar_trace(const Mesh& mesh, const DofMaps& dofs, const Vector& field, int facet, double s);

/// Value of a concentration-layout field at a point inside `cell`.
double evaluate_scalar(const Mesh& mesh, const DofMaps& dofs, const Vector& field, int cell, const Point& x);

/// Fine facet on the boundary of a coarse domain, seen from inside it.
struct LocalBoundaryFacet {
  int facet = -1;
  int local_cell = -1;
  FacetSide side;
  /// Unit normal pointing out of the domain.
  Point normal = Point::Zero();
  bool wall = false;
};

/// View of one coarse domain with local cell numbering. Local DOFs follow the
/// global layout rules applied to local cell indices.
struct LocalDomain {
  int id = 0;
  std::vector<int> cells;
  std::vector<int> local_index;  // global cell -> local cell or -1
  std::vector<int> interior_facets;
  std::vector<LocalBoundaryFacet> boundary;
  double area = 0.0;

  int num_cells() const { return static_cast<int>(cells.size()); }
  DofMaps dofs() const { return DofMaps{num_cells()}; }
};

LocalDomain make_local_domain(const Mesh& mesh, const CoarsePartition& partition, int domain);

enum class BoundaryPart { Interface, Wall, All };

bool in_part(const LocalBoundaryFacet& facet, BoundaryPart part);

/// A DG node on the local boundary: local cell and local vertex.
struct TraceNode {
  int local_cell = -1;
  int vertex = -1;
  bool operator==(const TraceNode&) const = default;
};

/// DG trace nodes on the selected part of the domain boundary, in boundary
/// facet order (first endpoint, then second), without duplicates.
std::vector<TraceNode> trace_nodes(const LocalDomain& domain, BoundaryPart part);

}  // namespace thinms
