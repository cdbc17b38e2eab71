#include "thinms/msbasis_transport.hpp"

#include "thinms/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace thinms {

std::string_view to_string(SnapshotVariant variant) {
  return variant == SnapshotVariant::Elliptic ? "elliptic" : "time_velocity";
}

SnapshotVariant snapshot_variant_from_string(std::string_view text) {
  if (text == "elliptic") return SnapshotVariant::Elliptic;
  if (text == "time_velocity" || text == "tv") return SnapshotVariant::TimeVelocity;
  throw Error("unknown snapshot variant '" + std::string(text) + "'");
}

namespace {

using kernels::Mat3;
using kernels::Mat6;

enum class Wall { Nitsche, Robin, Natural };

struct LocalSetup {
  // Boundary treatment of Gamma_E and Gamma_w facets in the operator.
  bool interface_nitsche = false;
  Wall wall = Wall::Natural;
};

struct LocalOperator {
  SparseMatrix matrix;
  bool constrained = false;  // zero-mean multiplier appended as the last unknown
};

void check_variant(const TransportBasisOptions& o) {
  if (o.variant != SnapshotVariant::TimeVelocity) return;
  if (o.velocity == nullptr) throw Error("time-velocity snapshots need a velocity field");
  if (!(o.tau > 0.0)) throw Error("time-velocity snapshots need a positive time step");
}

LocalOperator local_operator(const Mesh& mesh, const LocalDomain& d, const TransportBasisOptions& o,
                             const LocalSetup& setup) {
  const int nc = d.num_cells(), n = 3 * nc;
  const bool tv = o.variant == SnapshotVariant::TimeVelocity;
  const DofMaps global{mesh.num_cells()};
  std::vector<Triplet> t;
  auto add3 = [&](int lc, const Mat3& m) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (m(i, j) != 0.0) t.emplace_back(3 * lc + i, 3 * lc + j, m(i, j));
  };
  std::vector<CellGeometry> geo(nc);
  for (int lc = 0; lc < nc; ++lc) {
    geo[lc] = cell_geometry(mesh, d.cells[lc]);
    add3(lc, kernels::stiffness(geo[lc], o.diffusion));
    if (tv) {
      add3(lc, kernels::mass(geo[lc]) / o.tau);
      add3(lc, kernels::volume_convection(geo[lc], cell_velocity(global, *o.velocity, d.cells[lc])));
    }
  }
  for (int f : d.interior_facets) {
    const Facet& facet = mesh.facets[f];
    FacetSide sp = facet_side(mesh, f, 0), sm = facet_side(mesh, f, 1);
    const int lp = d.local_index[sp.cell], lm = d.local_index[sm.cell];
    Mat6 m = kernels::interior_sipg(facet.length, facet.normal, geo[lp], sp, geo[lm], sm, o.diffusion, o.penalty);
    if (tv)
      m += kernels::interior_upwind(facet.length, facet.normal, sp, cell_velocity(global, *o.velocity, sp.cell), sm,
                                    cell_velocity(global, *o.velocity, sm.cell));
    std::array<int, 6> idx{3 * lp, 3 * lp + 1, 3 * lp + 2, 3 * lm, 3 * lm + 1, 3 * lm + 2};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (m(i, j) != 0.0) t.emplace_back(idx[i], idx[j], m(i, j));
  }
  bool anchored = tv;
  for (const auto& b : d.boundary) {
    const double len = mesh.facets[b.facet].length;
    const bool nitsche = b.wall ? setup.wall == Wall::Nitsche : setup.interface_nitsche;
    if (nitsche) {
      add3(b.local_cell, kernels::boundary_sipg(len, b.normal, geo[b.local_cell], b.side, o.diffusion, o.penalty));
      anchored = true;
    }
    if (b.wall && setup.wall == Wall::Robin && o.robin > 0.0) {
      add3(b.local_cell, o.robin * kernels::facet_mass(len, b.side));
      anchored = true;
    }
    if (tv && !b.wall)
      add3(b.local_cell,
           kernels::boundary_outflow(len, b.normal, b.side, cell_velocity(global, *o.velocity, d.cells[b.local_cell])));
  }
  LocalOperator op;
  op.constrained = !anchored;
  const int size = n + (op.constrained ? 1 : 0);
  if (op.constrained) {
    for (int lc = 0; lc < nc; ++lc)
      for (int k = 0; k < 3; ++k) {
        const double m = geo[lc].area / 3.0;  // integral of a P1 basis function
        t.emplace_back(3 * lc + k, n, m);
        t.emplace_back(n, 3 * lc + k, m);
      }
  }
  op.matrix.resize(size, size);
  op.matrix.setFromTriplets(t.begin(), t.end());
  op.matrix.makeCompressed();
  return op;
}

LocalSetup family_setup(int family, WallBc wall) {
  LocalSetup s;
  if (family == 0) {
    s.interface_nitsche = true;
    s.wall = Wall::Nitsche;
    return s;
  }
  s.interface_nitsche = family == 1;
  switch (wall) {
    case WallBc::Dirichlet: s.wall = Wall::Nitsche; break;
    case WallBc::Neumann: s.wall = Wall::Natural; break;
    case WallBc::Robin: s.wall = Wall::Robin; break;
  }
  return s;
}

}  // namespace

ConcentrationSnapshotSet concentration_snapshots(const Mesh& mesh, const LocalDomain& d, int family,
                                                 const TransportBasisOptions& o) {
  if (family < 0 || family > 2) throw Error("concentration snapshots: family must be 0, 1 or 2");
  check_variant(o);
  ConcentrationSnapshotSet set;
  set.domain = d.id;
  set.family = family;
  const BoundaryPart part = family == 0 ? BoundaryPart::All : family == 1 ? BoundaryPart::Interface : BoundaryPart::Wall;
  set.nodes = trace_nodes(d, part);
  const int n = 3 * d.num_cells();
  if (set.nodes.empty()) {
    set.snapshots.resize(n, 0);
    return set;
  }
  const LocalSetup setup = family_setup(family, o.wall);
  LocalOperator op = local_operator(mesh, d, o, setup);
  const bool tv = o.variant == SnapshotVariant::TimeVelocity;
  const DofMaps global{mesh.num_cells()};

  const int count = static_cast<int>(set.nodes.size());
  Matrix rhs = Matrix::Zero(op.matrix.rows(), count);
  for (int col = 0; col < count; ++col) {
    const TraceNode& node = set.nodes[col];
    for (const auto& b : d.boundary) {
      if (!in_part(b, part) || b.local_cell != node.local_cell) continue;
      if (b.side.local[0] != node.vertex && b.side.local[1] != node.vertex) continue;
      const double len = mesh.facets[b.facet].length;
      const bool nitsche = b.wall ? setup.wall == Wall::Nitsche : setup.interface_nitsche;
      Mat3 load = Mat3::Zero();
      if (nitsche) {
        load = kernels::boundary_nitsche_data(len, b.normal, cell_geometry(mesh, d.cells[b.local_cell]), b.side,
                                              o.diffusion, o.penalty);
        if (tv && !b.wall)
          load += kernels::boundary_inflow_data(len, b.normal, b.side,
                                                cell_velocity(global, *o.velocity, d.cells[b.local_cell]));
      } else if (setup.wall == Wall::Natural) {
        load = -kernels::facet_mass(len, b.side);
      } else {
        load = o.robin * kernels::facet_mass(len, b.side);
      }
      for (int i = 0; i < 3; ++i) rhs(3 * node.local_cell + i, col) += load(i, node.vertex);
    }
  }
  SparseLu lu;
  lu.factorize(op.matrix, "local transport system of domain " + std::to_string(d.id) + ", family " +
                              std::to_string(family));
  Matrix x = lu.solve(rhs);
  for (int j = 0; j < count; ++j) {
    const double scale = rhs.col(j).norm();
    const double r = (op.matrix * x.col(j) - rhs.col(j)).norm();
    set.max_residual = std::max(set.max_residual, scale > 0.0 ? r / scale : r);
  }
  set.snapshots = x.topRows(n);
  return set;
}

Vector interior_basis(const Mesh& mesh, const LocalDomain& d, const TransportBasisOptions& o) {
  check_variant(o);
  LocalSetup setup;
  setup.interface_nitsche = true;
  setup.wall = Wall::Nitsche;
  LocalOperator op = local_operator(mesh, d, o, setup);
  const double source = o.variant == SnapshotVariant::TimeVelocity ? 1.0 / o.tau : 1.0;
  const int n = 3 * d.num_cells();
  Vector rhs = Vector::Zero(n);
  std::vector<Triplet> mt;
  for (int lc = 0; lc < d.num_cells(); ++lc) {
    CellGeometry g = cell_geometry(mesh, d.cells[lc]);
    Mat3 m = kernels::mass(g);
    for (int i = 0; i < 3; ++i) {
      rhs[3 * lc + i] = source * g.area / 3.0;
      for (int j = 0; j < 3; ++j) mt.emplace_back(3 * lc + i, 3 * lc + j, m(i, j));
    }
  }
  SparseLu lu;
  lu.factorize(op.matrix, "interior basis system of domain " + std::to_string(d.id));
  Vector x = lu.solve(rhs);
  SparseMatrix mass(n, n);
  mass.setFromTriplets(mt.begin(), mt.end());
  const double norm = std::sqrt(x.dot(mass * x));
  if (!(norm > 0.0)) throw Error("interior basis of domain " + std::to_string(d.id) + " vanished");
  return x / norm;
}

ConcentrationMsBasis build_concentration_basis(const Mesh& mesh, const CoarsePartition& partition,
                                               const TransportBasisOptions& options) {
  check_variant(options);
  ConcentrationMsBasis basis;
  basis.type = options.type;
  basis.domains.resize(partition.n_domains);
  parallel_for(partition.n_domains, options.threads, [&](int i) {
    DomainConcentrationBasis& out = basis.domains[i];
    out.domain = make_local_domain(mesh, partition, i);
    LocalForms forms = assemble_local_concentration_forms(mesh, out.domain, options.diffusion, options.penalty);
    out.family_ids = options.type == BasisType::Type1 ? std::vector<int>{0} : std::vector<int>{1, 2};
    Stopwatch clock;
    for (int fam : out.family_ids) {
      ConcentrationSnapshotSet set = concentration_snapshots(mesh, out.domain, fam, options);
      out.snapshot_seconds += clock.lap();
      out.families.push_back(spectral_reduce(set.snapshots, forms.stiffness, forms.boundary_mass, options.max_modes));
      out.spectral_seconds += clock.lap();
    }
    out.interior = interior_basis(mesh, out.domain, options);
    out.snapshot_seconds += clock.lap();
  });
  return basis;
}

ProjectionRows concentration_projection(const Mesh& mesh, const ConcentrationMsBasis& basis, int modes) {
  std::vector<const LocalDomain*> domains;
  std::vector<std::vector<Matrix>> blocks;
  for (const auto& d : basis.domains) {
    domains.push_back(&d.domain);
    blocks.emplace_back();
    for (const auto& fam : d.families) {
      const Eigen::Index k = std::min<Eigen::Index>(modes, fam.modes.cols());
      blocks.back().push_back(fam.modes.leftCols(k));
    }
    blocks.back().push_back(d.interior);
  }
  return assemble_projection(3 * mesh.num_cells(), 1, domains, blocks);
}

int concentration_coarse_dofs(BasisType type, int n_domains, int modes) {
  return n_domains * ((type == BasisType::Type1 ? 1 : 2) * modes + 1);
}

void write_concentration_eigenvalues(std::ostream& out, const ConcentrationMsBasis& basis) {
  out << "domain,family,k,lambda\n";
  char buf[96];
  for (const auto& d : basis.domains)
    for (size_t f = 0; f < d.families.size(); ++f) {
      const Vector& ev = d.families[f].eigenvalues;
      for (Eigen::Index k = 0; k < ev.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%d,%d,%lld,%.17g\n", d.domain.id, d.family_ids[f],
                      static_cast<long long>(k + 1), ev[k]);
        out << buf;
      }
    }
}

}  // namespace thinms
