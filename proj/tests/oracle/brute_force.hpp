#pragma once

// Dense reference assembler for small meshes. It shares only the mesh
// (nodes, cells, boundary markers) with the library: adjacency, normals,
// basis functions and quadrature are recomputed here from scratch.

#include "thinms/mesh.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace oracle {

using thinms::Point;
using Dense = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;

struct Flow {
  Dense mass, stiffness, divergence;
  DenseVector load_velocity, load_pressure;
};

Flow flow(const thinms::Mesh& mesh, double mu, double rho, double penalty,
          const std::function<Point(const Point&)>& inflow);

enum class Wall { Dirichlet, Neumann, Robin };

struct Transport {
  Dense mass, stiffness;
  DenseVector load;
};

Transport transport(const thinms::Mesh& mesh, double diffusion, double penalty, Wall wall, double robin,
                    double wall_value, double wall_flux, double inflow_value);

/// Upwind convection for a velocity given as a function (interpolated at the
/// cell vertices, i.e. the P1 nodal field), plus its inflow load.
struct Convection {
  Dense matrix;
  DenseVector inflow_load;
};
Convection convection(const thinms::Mesh& mesh, const std::function<Point(const Point&)>& velocity,
                      double inflow_value);

/// Interior SIPG and boundary mass over the cells listed (local numbering
/// follows the list order, `components` stacked per cell).
struct Local {
  Dense stiffness, boundary_mass;
};
Local local_forms(const thinms::Mesh& mesh, const std::vector<int>& cells, int components, double kappa,
                  double penalty);

}  // namespace oracle
