#include "oracle/brute_force.hpp"
#include "support.hpp"
#include "thinms/msbasis_velocity.hpp"

#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

using namespace thinms;

namespace {

Mesh channel(double flips = 0.0) {
  ChannelParams p = fixtures::straight_channel(1.0, 0.1, 0.025);
  p.flip_fraction = flips;
  return generate_channel(p);
}

// The domain as a standalone mesh whose whole boundary carries Dirichlet data.
Mesh submesh(const Mesh& mesh, const LocalDomain& dom) {
  std::vector<std::array<int, 3>> cells;
  for (int c : dom.cells) cells.push_back(mesh.cells[c]);
  return build_mesh(mesh.nodes, cells, [](const Point&, const Point&) { return FacetMarker::Inflow; });
}

Matrix projector(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > 1e-10 * svd.singularValues()(0)) ++r;
  const Matrix u = svd.matrixU().leftCols(r);
  return u * u.transpose();
}

}  // namespace

TEST_CASE("coarse DOF counts match the reported table stubs") {
  CHECK(velocity_coarse_dofs(BasisType::Type2, 10, 20) == 410);
  CHECK(velocity_coarse_dofs(BasisType::Type1, 10, 10) == 110);
  CHECK(velocity_coarse_dofs(BasisType::Type2, 20, 20) == 820);
  CHECK(velocity_coarse_dofs(BasisType::Type2, 10, 5) == 110);
  CHECK(velocity_coarse_dofs(BasisType::Type1, 20, 20) == 420);
  CHECK(velocity_coarse_dofs(BasisType::Type2, 20, 10) == 420);
}

TEST_CASE("one snapshot per interface trace node and direction") {
  const Mesh mesh = channel();
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Structured, 1);
  for (int d = 0; d < part.n_domains; ++d) {
    const LocalDomain dom = make_local_domain(mesh, part, d);
    std::set<std::pair<int, int>> trace;
    for (int f : part.interface_facets[d]) {
      const Facet& facet = mesh.facets[f];
      const int cell = part.cell_to_domain[facet.cells[0]] == d ? facet.cells[0] : facet.cells[1];
      for (int n : facet.nodes) trace.insert({cell, n});
    }
    const VelocitySnapshotSet x = velocity_snapshots(mesh, dom, 0, 1.0, 8.0);
    const VelocitySnapshotSet pooled = velocity_snapshots(mesh, dom, -1, 1.0, 8.0);
    CHECK(x.velocity.cols() == static_cast<Eigen::Index>(trace.size()));
    CHECK(pooled.velocity.cols() == 2 * x.velocity.cols());
    CHECK(x.velocity.rows() == 6 * dom.num_cells());
    CHECK(x.pressure.rows() == dom.num_cells());
    CHECK(x.max_residual < 1e-10);
  }
}

TEST_CASE("divergence source follows the normal flux of the boundary delta") {
  const Mesh mesh = channel();
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Structured, 1);
  const LocalDomain dom = make_local_domain(mesh, part, 1);
  for (int comp : {0, 1}) {
    const VelocitySnapshotSet s = velocity_snapshots(mesh, dom, comp, 1.0, 8.0);
    for (size_t l = 0; l < s.nodes.size(); ++l) {
      // Interfaces of an interior slab are vertical: n = (+-1, 0).
      double flux = 0.0;
      for (const auto& b : dom.boundary)
        if (!b.wall && b.local_cell == s.nodes[l].local_cell &&
            (b.side.local[0] == s.nodes[l].vertex || b.side.local[1] == s.nodes[l].vertex))
          flux += 0.5 * mesh.facets[b.facet].length * (comp == 0 ? b.normal.x() : 0.0);
      if (comp == 1) CHECK(s.divergence_source[l] == 0.0);
      CHECK(s.divergence_source[l] * dom.area == doctest::Approx(flux).epsilon(1e-12));
    }
  }
}

TEST_CASE("snapshots solve the independently assembled local Stokes system") {
  const Mesh mesh = channel(0.5);
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Unstructured, 3);
  const LocalDomain dom = make_local_domain(mesh, part, 2);
  const Mesh sub = submesh(mesh, dom);
  const double mu = 0.9, penalty = 8.0;
  for (int comp : {0, 1}) {
    const VelocitySnapshotSet s = velocity_snapshots(mesh, dom, comp, mu, penalty);
    // Group trace nodes by mesh node: the sum of their snapshots is the
    // response to the continuous hat of that node restricted to Gamma_E.
    std::map<int, std::vector<int>> by_node;
    for (size_t l = 0; l < s.nodes.size(); ++l)
      by_node[mesh.cells[dom.cells[s.nodes[l].local_cell]][s.nodes[l].vertex]].push_back(static_cast<int>(l));
    int checked = 0;
    for (const auto& [node, cols] : by_node) {
      if (++checked > 6) break;
      const Point xn = mesh.nodes[node];
      // Hat of `node` on interface facets only.
      auto hat = [&](const Point& x) {
        for (const auto& b : dom.boundary) {
          if (b.wall) continue;
          const Facet& f = mesh.facets[b.facet];
          if (f.nodes[0] != node && f.nodes[1] != node) continue;
          const Point other = mesh.nodes[f.nodes[0] == node ? f.nodes[1] : f.nodes[0]];
          const Point e = other - xn;
          const double t = (x - xn).dot(e) / e.squaredNorm();
          const double off = std::abs(e.x() * (x - xn).y() - e.y() * (x - xn).x()) / e.norm();
          if (t >= -1e-12 && t <= 1 + 1e-12 && off < 1e-12) return 1.0 - t;
        }
        return 0.0;
      };
      const oracle::Flow ref = oracle::flow(sub, mu, 1.0, penalty, [&](const Point& x) {
        Point g = Point::Zero();
        g[comp] = hat(x);
        return g;
      });
      Vector u = Vector::Zero(s.velocity.rows()), p = Vector::Zero(s.pressure.rows());
      double f = 0.0;
      for (int l : cols) {
        u += s.velocity.col(l);
        p += s.pressure.col(l);
        f += s.divergence_source[l];
      }
      Vector area(dom.num_cells());
      for (int lc = 0; lc < dom.num_cells(); ++lc) area[lc] = mesh.cell_area[dom.cells[lc]];
      const Vector r_u = ref.stiffness * u + ref.divergence.transpose() * p - ref.load_velocity;
      // Every divergence row holds, including the one replaced by the pressure pin.
      const Vector r_p = ref.divergence * u - (ref.load_pressure - f * area);
      CHECK(r_u.norm() <= 1e-8 * ref.load_velocity.norm());
      // Tangential data has zero flux; scale by the largest facet length instead.
      CHECK(r_p.cwiseAbs().maxCoeff() <= 1e-10 * std::max(ref.load_pressure.cwiseAbs().maxCoeff(), mesh.h));
    }
  }
}

TEST_CASE("spectral families: ordering, orthonormality and full-span recovery") {
  const Mesh mesh = channel(0.3);
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Structured, 1);
  VelocityBasisOptions o;
  o.max_modes = 1000;
  for (BasisType type : {BasisType::Type1, BasisType::Type2}) {
    o.type = type;
    const VelocityMsBasis basis = build_velocity_basis(mesh, part, o);
    REQUIRE(basis.domains.size() == 4);
    for (const auto& d : basis.domains) {
      CHECK(d.families.size() == (type == BasisType::Type1 ? 1u : 2u));
      for (const auto& fam : d.families) {
        const Eigen::Index m = fam.modes.cols();
        CHECK(m == fam.rank);
        for (Eigen::Index k = 1; k < m; ++k) CHECK(fam.eigenvalues[k] >= fam.eigenvalues[k - 1]);
        for (Eigen::Index k = 0; k < m; ++k) CHECK(fam.eigenvalues[k] >= -1e-10 * fam.reduced_a.norm());
        const Matrix c = fam.coefficients.leftCols(m);
        CHECK((c.transpose() * fam.reduced_s * c - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-8);
        for (Eigen::Index k = 0; k < m; ++k) {
          const double lambda = fam.eigenvalues[k];
          const double res = (fam.reduced_a * c.col(k) - lambda * fam.reduced_s * c.col(k)).norm();
          CHECK(res <= 1e-8 * (fam.reduced_a.norm() + std::abs(lambda) * fam.reduced_s.norm()));
        }
        if (m == fam.snapshots.cols()) CHECK((projector(fam.modes) - projector(fam.snapshots)).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("projection rows are local to their domain") {
  const Mesh mesh = channel();
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Structured, 1);
  VelocityBasisOptions o;
  o.max_modes = 6;
  const VelocityMsBasis basis = build_velocity_basis(mesh, part, o);
  const ProjectionRows r = velocity_projection(mesh, basis, 5);
  CHECK(r.rows() == 4 * 2 * 5);
  CHECK(r.rows() + part.n_domains == velocity_coarse_dofs(BasisType::Type2, 4, 5));
  CHECK(r.matrix.cols() == 6 * mesh.num_cells());
  const SparseMatrix m = r.matrix;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const int row = static_cast<int>(it.row()), col = static_cast<int>(it.col());
      CHECK(part.cell_to_domain[col / 6] == r.domain[row]);
    }
  CHECK_THROWS_WITH_AS(velocity_projection(mesh, basis, 7), doctest::Contains("available"), Error);
}

TEST_CASE("eigenvalue CSV lists every finite eigenvalue") {
  const Mesh mesh = channel();
  const CoarsePartition part = partition_coarse(mesh, 2, PartitionMode::Structured, 1);
  VelocityBasisOptions o;
  o.max_modes = 3;
  const VelocityMsBasis basis = build_velocity_basis(mesh, part, o);
  std::ostringstream out;
  write_velocity_eigenvalues(out, basis);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "domain,r,k,lambda");
  size_t rows = 0, expected = 0;
  while (std::getline(in, line)) ++rows;
  for (const auto& d : basis.domains)
    for (const auto& f : d.families) expected += f.eigenvalues.size();
  CHECK(rows == expected);
}
