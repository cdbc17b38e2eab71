#pragma once

#include "thinms/assembly.hpp"
#include "thinms/dgspace.hpp"
#include "thinms/msbasis_velocity.hpp"
#include "thinms/spectral.hpp"

#include <iosfwd>
#include <string_view>
#include <vector>

namespace thinms {

enum class SnapshotVariant { Elliptic, TimeVelocity };

std::string_view to_string(SnapshotVariant variant);
SnapshotVariant snapshot_variant_from_string(std::string_view text);

struct TransportBasisOptions {
  BasisType type = BasisType::Type2;
  WallBc wall = WallBc::Robin;
  SnapshotVariant variant = SnapshotVariant::Elliptic;
  double diffusion = 0.01;
  double robin = 0.0;
  double penalty = 8.0;
  int max_modes = 40;
  int threads = 1;
  /// TimeVelocity only: global velocity-layout field and time step.
  const Vector* velocity = nullptr;
  double tau = 0.0;
};

/// Snapshot families: 0 pooled over the whole boundary (Type 1), 1 interface
/// Gamma_E, 2 walls Gamma_w.
struct ConcentrationSnapshotSet {
  int domain = 0;
  int family = 0;
  std::vector<TraceNode> nodes;
  Matrix snapshots;
  double max_residual = 0.0;
};

/// Family 1: delta on Gamma_E, homogeneous wall condition of the chosen kind.
/// Family 2: zero flux on Gamma_E; walls get c = delta (DBC),
/// -D grad c . n = delta (NBC) or -D grad c . n = alpha (c - delta) (RBC).
/// Family 0: delta on all of the domain boundary. Dirichlet data is imposed
/// by Nitsche terms; pure Neumann problems are closed by a zero-mean constraint.
ConcentrationSnapshotSet concentration_snapshots(const Mesh& mesh, const LocalDomain& domain, int family,
                                                 const TransportBasisOptions& options);

/// Zero-trace local solution with source 1 (Elliptic) or 1/tau (TimeVelocity),
/// scaled to unit L2 norm.
Vector interior_basis(const Mesh& mesh, const LocalDomain& domain, const TransportBasisOptions& options);

struct DomainConcentrationBasis {
  LocalDomain domain;
  std::vector<int> family_ids;
  std::vector<SpectralBasis> families;
  Vector interior;
  double snapshot_seconds = 0.0;
  double spectral_seconds = 0.0;
};

struct ConcentrationMsBasis {
  BasisType type = BasisType::Type2;
  std::vector<DomainConcentrationBasis> domains;
};

ConcentrationMsBasis build_concentration_basis(const Mesh& mesh, const CoarsePartition& partition,
                                               const TransportBasisOptions& options);

/// R_c with the first `modes` modes of every family (fewer where a family has
/// fewer nonzero modes) plus the interior basis of each domain.
ProjectionRows concentration_projection(const Mesh& mesh, const ConcentrationMsBasis& basis, int modes);

/// N_domains (M + 1) for Type 1 and N_domains (2 M + 1) for Type 2.
int concentration_coarse_dofs(BasisType type, int n_domains, int modes);

/// CSV with header domain,family,k,lambda.
void write_concentration_eigenvalues(std::ostream& out, const ConcentrationMsBasis& basis);

}  // namespace thinms
