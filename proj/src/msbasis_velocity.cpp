#include "thinms/msbasis_velocity.hpp"

#include "thinms/assembly.hpp"
#include "thinms/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace thinms {

namespace {

using kernels::Mat3;
using kernels::Mat6;

// Local Stokes matrix with Nitsche terms on the whole domain boundary and the
// first pressure DOF replaced by an identity row.
SparseMatrix local_stokes_matrix(const Mesh& mesh, const LocalDomain& d, double mu, double penalty) {
  const int nc = d.num_cells();
  const int nu = 6 * nc;
  const int pinned = nu;
  std::vector<Triplet> t;
  auto add = [&](int i, int j, double v) {
    if (v == 0.0 || i == pinned || j == pinned) return;
    t.emplace_back(i, j, v);
  };
  auto vel = [](int lc, int comp, int k) { return 6 * lc + 3 * comp + k; };
  std::vector<CellGeometry> geo(nc);
  for (int lc = 0; lc < nc; ++lc) geo[lc] = cell_geometry(mesh, d.cells[lc]);

  for (int lc = 0; lc < nc; ++lc) {
    Mat3 k = kernels::stiffness(geo[lc], mu);
    for (int comp = 0; comp < 2; ++comp)
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) add(vel(lc, comp, i), vel(lc, comp, j), k(i, j));
        const double b = -geo[lc].area * geo[lc].grads[i][comp];
        add(nu + lc, vel(lc, comp, i), b);
        add(vel(lc, comp, i), nu + lc, b);
      }
  }
  for (int f : d.interior_facets) {
    const Facet& facet = mesh.facets[f];
    FacetSide sp = facet_side(mesh, f, 0), sm = facet_side(mesh, f, 1);
    const int lp = d.local_index[sp.cell], lm = d.local_index[sm.cell];
    Mat6 m = kernels::interior_sipg(facet.length, facet.normal, geo[lp], sp, geo[lm], sm, mu, penalty);
    for (int comp = 0; comp < 2; ++comp) {
      std::array<int, 6> idx{vel(lp, comp, 0), vel(lp, comp, 1), vel(lp, comp, 2),
                             vel(lm, comp, 0), vel(lm, comp, 1), vel(lm, comp, 2)};
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) add(idx[i], idx[j], m(i, j));
      for (int q : {lp, lm})
        for (int e = 0; e < 2; ++e) {
          const double v = 0.25 * facet.normal[comp] * facet.length;
          for (auto [cell, side, sign] : {std::tuple{lp, sp, 1.0}, std::tuple{lm, sm, -1.0}}) {
            add(nu + q, vel(cell, comp, side.local[e]), sign * v);
            add(vel(cell, comp, side.local[e]), nu + q, sign * v);
          }
        }
    }
  }
  for (const auto& b : d.boundary) {
    const double len = mesh.facets[b.facet].length;
    Mat3 m = kernels::boundary_sipg(len, b.normal, geo[b.local_cell], b.side, mu, penalty);
    for (int comp = 0; comp < 2; ++comp) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) add(vel(b.local_cell, comp, i), vel(b.local_cell, comp, j), m(i, j));
      for (int e = 0; e < 2; ++e) {
        const double v = 0.5 * b.normal[comp] * len;
        add(nu + b.local_cell, vel(b.local_cell, comp, b.side.local[e]), v);
        add(vel(b.local_cell, comp, b.side.local[e]), nu + b.local_cell, v);
      }
    }
  }
  t.emplace_back(pinned, pinned, 1.0);
  SparseMatrix a(nu + nc, nu + nc);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

}  // namespace

VelocitySnapshotSet velocity_snapshots(const Mesh& mesh, const LocalDomain& d, int direction, double mu,
                                       double penalty) {
  if (d.num_cells() == 0) throw Error("velocity snapshots: empty domain");
  VelocitySnapshotSet set;
  set.domain = d.id;
  set.direction = direction;
  set.nodes = trace_nodes(d, BoundaryPart::Interface);
  if (set.nodes.empty()) throw Error("velocity snapshots: domain " + std::to_string(d.id) + " has no interface");

  std::vector<int> comps = direction < 0 ? std::vector<int>{0, 1} : std::vector<int>{direction};
  const int nc = d.num_cells(), nu = 6 * nc;
  const int count = static_cast<int>(set.nodes.size() * comps.size());

  SparseMatrix a = local_stokes_matrix(mesh, d, mu, penalty);
  SparseLu lu;
  try {
    lu.factorize(a, "local Stokes system of domain " + std::to_string(d.id));
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " (pressure pinned at local cell 0)");
  }

  Matrix rhs = Matrix::Zero(nu + nc, count);
  set.divergence_source.resize(count);
  set.components.resize(count);
  int col = 0;
  for (int comp : comps) {
    for (const TraceNode& node : set.nodes) {
      set.components[col] = comp;
      double flux = 0.0;
      for (const auto& b : d.boundary) {
        if (b.wall || b.local_cell != node.local_cell) continue;
        if (b.side.local[0] != node.vertex && b.side.local[1] != node.vertex) continue;
        const double len = mesh.facets[b.facet].length;
        Mat3 g = kernels::boundary_nitsche_data(len, b.normal, cell_geometry(mesh, d.cells[b.local_cell]), b.side, mu,
                                                penalty);
        for (int i = 0; i < 3; ++i) rhs(6 * node.local_cell + 3 * comp + i, col) += g(i, node.vertex);
        const double v = 0.5 * b.normal[comp] * len;
        rhs(nu + node.local_cell, col) += v;
        flux += v;
      }
      const double f = flux / d.area;
      set.divergence_source[col] = f;
      for (int lc = 0; lc < nc; ++lc) rhs(nu + lc, col) -= f * mesh.cell_area[d.cells[lc]];
      rhs(nu, col) = 0.0;
      ++col;
    }
  }
  Matrix x = lu.solve(rhs);
  for (int j = 0; j < count; ++j) {
    const double scale = rhs.col(j).norm();
    const double r = (a * x.col(j) - rhs.col(j)).norm();
    set.max_residual = std::max(set.max_residual, scale > 0.0 ? r / scale : r);
  }
  set.velocity = x.topRows(nu);
  set.pressure = x.bottomRows(nc);
  return set;
}

VelocityMsBasis build_velocity_basis(const Mesh& mesh, const CoarsePartition& partition,
                                     const VelocityBasisOptions& options) {
  VelocityMsBasis basis;
  basis.type = options.type;
  basis.domains.resize(partition.n_domains);
  parallel_for(partition.n_domains, options.threads, [&](int i) {
    DomainVelocityBasis& out = basis.domains[i];
    out.domain = make_local_domain(mesh, partition, i);
    LocalForms forms = assemble_local_velocity_forms(mesh, out.domain, options.viscosity, options.penalty);
    std::vector<int> directions = options.type == BasisType::Type1 ? std::vector<int>{-1} : std::vector<int>{0, 1};
    for (int r : directions) {
      Stopwatch clock;
      VelocitySnapshotSet set = velocity_snapshots(mesh, out.domain, r, options.viscosity, options.penalty);
      out.snapshot_seconds += clock.lap();
      out.families.push_back(spectral_reduce(set.velocity, forms.stiffness, forms.boundary_mass, options.max_modes));
      out.spectral_seconds += clock.lap();
    }
  });
  return basis;
}

ProjectionRows assemble_projection(int n_fine, int components, const std::vector<const LocalDomain*>& domains,
                                   const std::vector<std::vector<Matrix>>& blocks) {
  ProjectionRows rows;
  std::vector<Triplet> t;
  int row = 0;
  for (size_t i = 0; i < domains.size(); ++i) {
    std::vector<Vector> accepted;  // orthonormalized copies for the rank test
    for (size_t fam = 0; fam < blocks[i].size(); ++fam) {
      const Matrix& m = blocks[i][fam];
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        Vector v = m.col(k);
        const double norm = v.norm();
        if (norm == 0.0) {
          ++rows.dropped;
          continue;
        }
        Vector w = v / norm;
        for (int pass = 0; pass < 2; ++pass)
          for (const Vector& a : accepted) w -= a.dot(w) * a;
        if (w.norm() < 1e-10) {
          ++rows.dropped;
          continue;
        }
        accepted.push_back(w / w.norm());
        for (Eigen::Index j = 0; j < v.size(); ++j)
          if (v[j] != 0.0) t.emplace_back(row, local_to_global(*domains[i], components, static_cast<int>(j)), v[j]);
        rows.domain.push_back(static_cast<int>(i));
        rows.family.push_back(static_cast<int>(fam));
        rows.mode.push_back(static_cast<int>(k));
        ++row;
      }
    }
  }
  rows.matrix.resize(row, n_fine);
  rows.matrix.setFromTriplets(t.begin(), t.end());
  rows.matrix.makeCompressed();
  return rows;
}

ProjectionRows velocity_projection(const Mesh& mesh, const VelocityMsBasis& basis, int modes) {
  std::vector<const LocalDomain*> domains;
  std::vector<std::vector<Matrix>> blocks;
  for (const auto& d : basis.domains) {
    domains.push_back(&d.domain);
    blocks.emplace_back();
    for (size_t r = 0; r < d.families.size(); ++r) {
      const SpectralBasis& fam = d.families[r];
      if (fam.modes.cols() < modes)
        throw Error("velocity basis of domain " + std::to_string(d.domain.id) + ", family " + std::to_string(r) +
                    ": " + std::to_string(modes) + " modes requested but only " + std::to_string(fam.modes.cols()) +
                    " available (S-rank " + std::to_string(fam.rank) + ")");
      blocks.back().push_back(fam.modes.leftCols(modes));
    }
  }
  return assemble_projection(6 * mesh.num_cells(), 2, domains, blocks);
}

int velocity_coarse_dofs(BasisType type, int n_domains, int modes) {
  return n_domains * ((type == BasisType::Type1 ? 1 : kDim) * modes + 1);
}

void write_velocity_eigenvalues(std::ostream& out, const VelocityMsBasis& basis) {
  out << "domain,r,k,lambda\n";
  char buf[96];
  for (const auto& d : basis.domains)
    for (size_t r = 0; r < d.families.size(); ++r) {
      const int label = basis.type == BasisType::Type1 ? 0 : static_cast<int>(r) + 1;
      const Vector& ev = d.families[r].eigenvalues;
      for (Eigen::Index k = 0; k < ev.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%d,%d,%lld,%.17g\n", d.domain.id, label, static_cast<long long>(k + 1), ev[k]);
        out << buf;
      }
    }
}

}  // namespace thinms
