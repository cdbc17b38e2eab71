#include "thinms/dgspace.hpp"

#include <algorithm>

namespace thinms {

DofMaps build_spaces(const Mesh& mesh) { return DofMaps{mesh.num_cells()}; }

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  CellGeometry g;
  const auto& c = mesh.cells[cell];
  for (int k = 0; k < 3; ++k) g.vertices[k] = mesh.nodes[c[k]];
  g.area = mesh.cell_area[cell];
  // grad(lambda_k) = rot(edge opposite k) / (2 |K|), rotated clockwise for a CCW cell.
  for (int k = 0; k < 3; ++k) {
    Point e = g.vertices[(k + 2) % 3] - g.vertices[(k + 1) % 3];
    g.grads[k] = Point(-e.y(), e.x()) / (2.0 * g.area);
  }
  return g;
}

FacetSide facet_side(const Mesh& mesh, int facet, int side) {
  const Facet& f = mesh.facets[facet];
  FacetSide s;
  s.cell = f.cells[side];
  if (s.cell < 0) throw Error("facet side does not exist");
  s.local = {mesh.local_vertex(s.cell, f.nodes[0]), mesh.local_vertex(s.cell, f.nodes[1])};
  return s;
}

namespace {

double side_value(const Mesh& mesh, const DofMaps& dofs, const Vector& field, int facet, int side, double s) {
  FacetSide fs = facet_side(mesh, facet, side);
  auto phi = fs.shape(s);
  double v = 0.0;
  for (int k = 0; k < 3; ++k) v += phi[k] * field[dofs.concentration(fs.cell, k)];
  return v;
}

}  // namespace

Trace scalar_trace(const Mesh& mesh, const DofMaps& dofs, const Vector& field, int facet, double s) {
  Trace t;
  t.plus = side_value(mesh, dofs, field, facet, 0, s);
  if (!mesh.facets[facet].is_boundary()) t.minus = side_value(mesh, dofs, field, facet, 1, s);
  return t;
}

double evaluate_scalar(const Mesh& mesh, const DofMaps& dofs, const Vector& field, int cell, const Point& x) {
  CellGeometry g = cell_geometry(mesh, cell);
  double v = 0.0;
  for (int k = 0; k < 3; ++k) {
    double lambda = 1.0 / 3.0 + g.grads[k].dot(x - mesh.centroid(cell));
    v += lambda * field[dofs.concentration(cell, k)];
  }
  return v;
}

LocalDomain make_local_domain(const Mesh& mesh, const CoarsePartition& partition, int domain) {
  if (domain < 0 || domain >= partition.n_domains) throw Error("domain index out of range");
  LocalDomain d;
  d.id = domain;
  d.cells = partition.domain_cells[domain];
  if (d.cells.empty()) throw Error("domain " + std::to_string(domain) + " is empty");
  d.local_index.assign(mesh.num_cells(), -1);
  for (int lc = 0; lc < d.num_cells(); ++lc) d.local_index[d.cells[lc]] = lc;
  d.area = partition.domain_area[domain];

  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    int lp = d.local_index[facet.cells[0]];
    int lm = facet.is_boundary() ? -1 : d.local_index[facet.cells[1]];
    if (lp < 0 && lm < 0) continue;
    if (lp >= 0 && lm >= 0) {
      d.interior_facets.push_back(f);
      continue;
    }
    LocalBoundaryFacet b;
    b.facet = f;
    int side = lp >= 0 ? 0 : 1;
    b.local_cell = lp >= 0 ? lp : lm;
    b.side = facet_side(mesh, f, side);
    b.normal = side == 0 ? facet.normal : Point(-facet.normal);
    b.wall = facet.marker == FacetMarker::Wall;
    d.boundary.push_back(b);
  }
  return d;
}

bool in_part(const LocalBoundaryFacet& facet, BoundaryPart part) {
  switch (part) {
    case BoundaryPart::Interface: return !facet.wall;
    case BoundaryPart::Wall: return facet.wall;
    case BoundaryPart::All: return true;
  }
  return false;
}

std::vector<TraceNode> trace_nodes(const LocalDomain& domain, BoundaryPart part) {
  std::vector<TraceNode> nodes;
  for (const auto& b : domain.boundary) {
    if (!in_part(b, part)) continue;
    for (int e = 0; e < 2; ++e) {
      TraceNode node{b.local_cell, b.side.local[e]};
      if (std::find(nodes.begin(), nodes.end(), node) == nodes.end()) nodes.push_back(node);
    }
  }
  return nodes;
}

}  // namespace thinms
