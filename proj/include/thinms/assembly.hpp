#pragma once

#include "thinms/dgspace.hpp"
#include "thinms/mesh.hpp"
#include "thinms/types.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace thinms {

/// Default interior-penalty parameter for both velocity and concentration.
inline constexpr double kDefaultPenalty = 8.0;

struct FlowParams {
  double viscosity = 1.0;
  double density = 1.0;
  double penalty = kDefaultPenalty;
};

/// Fine IPDG Stokes operators. `divergence` is B with one row per pressure DOF.
struct FlowOperators {
  SparseMatrix mass;
  SparseMatrix stiffness;
  SparseMatrix divergence;
  Vector load_velocity;
  Vector load_pressure;
};

/// Flow forms: viscous volume term on every cell; consistency, symmetry and
/// penalty terms on all facets except outflow; loads on inflow facets only.
FlowOperators assemble_flow(const Mesh& mesh, const DofMaps& dofs, const FlowParams& params, const VectorFn& inflow);

enum class WallBc { Dirichlet, Neumann, Robin };

std::string_view to_string(WallBc bc);
WallBc wall_bc_from_string(std::string_view text);

struct TransportParams {
  double diffusion = 0.01;
  double penalty = kDefaultPenalty;
  WallBc wall = WallBc::Robin;
  /// Robin coefficient alpha in -D grad c . n = alpha (c - c_w).
  double robin = 0.0;
  /// c_w for Dirichlet and Robin walls.
  ScalarFn wall_value = constant(0.0);
  /// beta in -D grad c . n = beta for Neumann walls.
  double wall_flux = 0.0;
  ScalarFn inflow_value = constant(0.0);
};

struct TransportOperators {
  SparseMatrix mass;
  SparseMatrix stiffness;   // diffusion plus the Robin wall term
  SparseMatrix convection;  // upwind, built for the velocity passed in
  Vector load;              // inflow, wall and convective inflow data
};

/// Upwind convection operator for a velocity-layout field, with the load
/// contributed by inflow facets where u.n < 0.
struct ConvectionOperator {
  SparseMatrix matrix;
  Vector inflow_load;
};

ConvectionOperator assemble_convection(const Mesh& mesh, const DofMaps& dofs, const Vector& velocity,
                                       const ScalarFn& inflow_value);

/// Diffusion, Robin, mass and data loads (no convection).
TransportOperators assemble_transport_static(const Mesh& mesh, const DofMaps& dofs, const TransportParams& params);

TransportOperators assemble_transport(const Mesh& mesh, const DofMaps& dofs, const TransportParams& params,
                                      const Vector& velocity);

SparseMatrix assemble_concentration_mass(const Mesh& mesh, const DofMaps& dofs);
SparseMatrix assemble_velocity_mass(const Mesh& mesh, const DofMaps& dofs, double density = 1.0);

/// Load vector of int f r dx over concentration test functions.
Vector assemble_source(const Mesh& mesh, const DofMaps& dofs, const ScalarFn& f);

/// L2 projection of a scalar function onto the concentration space.
Vector project_scalar(const Mesh& mesh, const DofMaps& dofs, const ScalarFn& f);
/// L2 projection of a vector function onto the velocity space.
Vector project_vector(const Mesh& mesh, const DofMaps& dofs, const VectorFn& f);

/// Stiffness (interior-facet IPDG terms only) and boundary facet mass of one coarse domain.
struct LocalForms {
  SparseMatrix stiffness;
  SparseMatrix boundary_mass;
};

LocalForms assemble_local_velocity_forms(const Mesh& mesh, const LocalDomain& domain, double viscosity,
                                         double penalty);
LocalForms assemble_local_concentration_forms(const Mesh& mesh, const LocalDomain& domain, double diffusion,
                                              double penalty);

/// Element-level kernels shared by the global and local assemblers. Facet
/// matrices on interior facets use the ordering [K+ vertices, K- vertices].
namespace kernels {

using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

Mat3 stiffness(const CellGeometry& g, double kappa);
Mat3 mass(const CellGeometry& g);

/// Symmetric interior-penalty terms on an interior facet; `normal` points from K+ to K-.
Mat6 interior_sipg(double length, const Point& normal, const CellGeometry& gp, const FacetSide& sp,
                   const CellGeometry& gm, const FacetSide& sm, double kappa, double penalty);
/// Nitsche terms on a boundary facet; `normal` is outward.
Mat3 boundary_sipg(double length, const Point& normal, const CellGeometry& g, const FacetSide& side, double kappa,
                   double penalty);
/// Entry (r, k): int (penalty kappa / length phi_r - kappa grad phi_r . n) phi_k ds.
Mat3 boundary_nitsche_data(double length, const Point& normal, const CellGeometry& g, const FacetSide& side,
                           double kappa, double penalty);
Mat3 facet_mass(double length, const FacetSide& side);

/// Entry (i, j): -int phi_j (u . grad phi_i) dx with P1 velocity nodal values.
Mat3 volume_convection(const CellGeometry& g, const std::array<Point, 3>& u);
/// Upwind flux ({u}.n)^+ c+ - ({u}.n)^- c- tested against the jump of r.
Mat6 interior_upwind(double length, const Point& normal, const FacetSide& sp, const std::array<Point, 3>& up,
                     const FacetSide& sm, const std::array<Point, 3>& um);
/// Entry (i, j): int (u.n)^+ phi_j phi_i ds on a boundary facet.
Mat3 boundary_outflow(double length, const Point& normal, const FacetSide& side, const std::array<Point, 3>& u);
/// Entry (i, k): int (u.n)^- phi_k phi_i ds on a boundary facet.
Mat3 boundary_inflow_data(double length, const Point& normal, const FacetSide& side, const std::array<Point, 3>& u);

}  // namespace kernels

/// Velocity nodal values of one cell from a velocity-layout vector.
std::array<Point, 3> cell_velocity(const DofMaps& dofs, const Vector& velocity, int cell);

}  // namespace thinms
