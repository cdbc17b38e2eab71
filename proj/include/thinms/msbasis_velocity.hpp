#pragma once

#include "thinms/dgspace.hpp"
#include "thinms/mesh.hpp"
#include "thinms/spectral.hpp"
#include "thinms/types.hpp"

#include <iosfwd>
#include <vector>

namespace thinms {

/// Local Stokes solutions on one domain, one per Gamma_E trace node and
/// delta component. Columns hold local velocity and pressure DOFs.
struct VelocitySnapshotSet {
  int domain = 0;
  /// Component of the boundary delta (0 or 1), or -1 when both are pooled.
  int direction = -1;
  std::vector<TraceNode> nodes;
  std::vector<int> components;  // delta component of each snapshot
  Matrix velocity;
  Matrix pressure;
  /// Constant divergence source f of each snapshot.
  Vector divergence_source;
  /// Largest relative residual of the local solves.
  double max_residual = 0.0;
};

/// Solves -mu Lap u + grad p = 0, div u = f on the domain with u = delta on
/// Gamma_E, u = 0 on the walls (imposed by Nitsche terms) and pressure DOF 0 pinned.
VelocitySnapshotSet velocity_snapshots(const Mesh& mesh, const LocalDomain& domain, int direction, double viscosity,
                                       double penalty);

struct DomainVelocityBasis {
  LocalDomain domain;
  /// One family per direction (Type 2) or a single pooled family (Type 1).
  std::vector<SpectralBasis> families;
  double snapshot_seconds = 0.0;
  double spectral_seconds = 0.0;
};

struct VelocityMsBasis {
  BasisType type = BasisType::Type2;
  std::vector<DomainVelocityBasis> domains;
};

struct VelocityBasisOptions {
  BasisType type = BasisType::Type2;
  double viscosity = 1.0;
  double penalty = 8.0;
  /// Modes kept per family; coarse spaces may use any prefix.
  int max_modes = 40;
  int threads = 1;
};

VelocityMsBasis build_velocity_basis(const Mesh& mesh, const CoarsePartition& partition,
                                     const VelocityBasisOptions& options);

/// Rows of a projection matrix with their origin.
struct ProjectionRows {
  SparseMatrix matrix;
  std::vector<int> domain;
  std::vector<int> family;
  std::vector<int> mode;
  /// Vectors skipped because they were linearly dependent on earlier ones.
  int dropped = 0;
  int rows() const { return static_cast<int>(matrix.rows()); }
};

/// Maps a local index of a `components`-field on the domain to the global index.
inline int local_to_global(const LocalDomain& domain, int components, int local) {
  const int block = local / 3, k = local % 3;
  const int lc = block / components, comp = block % components;
  return 3 * (components * domain.cells[lc] + comp) + k;
}

/// Builds rows from per-domain column blocks. Vectors linearly dependent on
/// earlier ones of the same domain (relative tolerance 1e-10) are skipped.
ProjectionRows assemble_projection(int n_fine, int components, const std::vector<const LocalDomain*>& domains,
                                   const std::vector<std::vector<Matrix>>& blocks);

/// R_u with the first `modes` modes of every family. Throws when a family has
/// fewer S-regular modes than requested.
ProjectionRows velocity_projection(const Mesh& mesh, const VelocityMsBasis& basis, int modes);

/// N_domains (M + 1) for Type 1 and N_domains (d M + 1) for Type 2, pressure included.
int velocity_coarse_dofs(BasisType type, int n_domains, int modes);

/// CSV with header domain,r,k,lambda (r = 0 for pooled Type 1, else 1 or 2).
void write_velocity_eigenvalues(std::ostream& out, const VelocityMsBasis& basis);

}  // namespace thinms
