#include "thinms/assembly.hpp"

#include "thinms/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace thinms {

std::string_view to_string(WallBc bc) {
  switch (bc) {
    case WallBc::Dirichlet: return "dbc";
    case WallBc::Neumann: return "nbc";
    case WallBc::Robin: return "rbc";
  }
  return "?";
}

WallBc wall_bc_from_string(std::string_view text) {
  if (text == "dbc" || text == "dirichlet") return WallBc::Dirichlet;
  if (text == "nbc" || text == "neumann") return WallBc::Neumann;
  if (text == "rbc" || text == "robin") return WallBc::Robin;
  throw Error("unknown wall boundary condition '" + std::string(text) + "'");
}

namespace kernels {

Mat3 stiffness(const CellGeometry& g, double kappa) {
  Mat3 k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k(i, j) = kappa * g.area * g.grads[i].dot(g.grads[j]);
  return k;
}

Mat3 mass(const CellGeometry& g) {
  Mat3 m = Mat3::Constant(g.area / 12.0);
  m.diagonal().setConstant(g.area / 6.0);
  return m;
}

Mat6 interior_sipg(double length, const Point& normal, const CellGeometry& gp, const FacetSide& sp,
                   const CellGeometry& gm, const FacetSide& sm, double kappa, double penalty) {
  std::array<double, 6> flux;  // {kappa grad phi . n} of each basis function
  for (int k = 0; k < 3; ++k) {
    flux[k] = 0.5 * kappa * gp.grads[k].dot(normal);
    flux[3 + k] = 0.5 * kappa * gm.grads[k].dot(normal);
  }
  const double sigma = penalty * kappa / length;
  Mat6 m = Mat6::Zero();
  const auto& rule = facet_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    auto vp = sp.shape(rule.points[q]);
    auto vm = sm.shape(rule.points[q]);
    std::array<double, 6> jump{vp[0], vp[1], vp[2], -vm[0], -vm[1], -vm[2]};
    const double w = rule.weights[q] * length;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        m(i, j) += w * (-flux[j] * jump[i] - flux[i] * jump[j] + sigma * jump[i] * jump[j]);
  }
  return m;
}

Mat3 boundary_sipg(double length, const Point& normal, const CellGeometry& g, const FacetSide& side, double kappa,
                   double penalty) {
  std::array<double, 3> flux;
  for (int k = 0; k < 3; ++k) flux[k] = kappa * g.grads[k].dot(normal);
  const double sigma = penalty * kappa / length;
  Mat3 m = Mat3::Zero();
  const auto& rule = facet_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    auto v = side.shape(rule.points[q]);
    const double w = rule.weights[q] * length;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) += w * (-flux[j] * v[i] - flux[i] * v[j] + sigma * v[i] * v[j]);
  }
  return m;
}

Mat3 boundary_nitsche_data(double length, const Point& normal, const CellGeometry& g, const FacetSide& side,
                           double kappa, double penalty) {
  const double sigma = penalty * kappa / length;
  Mat3 m = Mat3::Zero();
  const auto& rule = facet_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    auto v = side.shape(rule.points[q]);
    const double w = rule.weights[q] * length;
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) m(r, k) += w * (sigma * v[r] - kappa * g.grads[r].dot(normal)) * v[k];
  }
  return m;
}

Mat3 facet_mass(double length, const FacetSide& side) {
  Mat3 m = Mat3::Zero();
  const int a = side.local[0], b = side.local[1];
  m(a, a) = m(b, b) = length / 3.0;
  m(a, b) = m(b, a) = length / 6.0;
  return m;
}

Mat3 volume_convection(const CellGeometry& g, const std::array<Point, 3>& u) {
  Mat3 m = Mat3::Zero();
  const auto& rule = cell_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    auto phi = CellGeometry::shape(rule.points[q]);
    Point uq = phi[0] * u[0] + phi[1] * u[1] + phi[2] * u[2];
    const double w = 2.0 * g.area * rule.weights[q];
    for (int i = 0; i < 3; ++i) {
      const double adv = uq.dot(g.grads[i]);
      for (int j = 0; j < 3; ++j) m(i, j) -= w * phi[j] * adv;
    }
  }
  return m;
}

namespace {

Point trace_velocity(const FacetSide& side, const std::array<Point, 3>& u, double s) {
  auto phi = side.shape(s);
  return phi[0] * u[0] + phi[1] * u[1] + phi[2] * u[2];
}

}  // namespace

Mat6 interior_upwind(double length, const Point& normal, const FacetSide& sp, const std::array<Point, 3>& up,
                     const FacetSide& sm, const std::array<Point, 3>& um) {
  Mat6 m = Mat6::Zero();
  const auto& rule = facet_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double s = rule.points[q];
    const double un = 0.5 * (trace_velocity(sp, up, s) + trace_velocity(sm, um, s)).dot(normal);
    const double out = std::max(un, 0.0), in = std::max(-un, 0.0);
    auto vp = sp.shape(s);
    auto vm = sm.shape(s);
    std::array<double, 6> jump{vp[0], vp[1], vp[2], -vm[0], -vm[1], -vm[2]};
    std::array<double, 6> flux{out * vp[0], out * vp[1], out * vp[2], -in * vm[0], -in * vm[1], -in * vm[2]};
    const double w = rule.weights[q] * length;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m(i, j) += w * jump[i] * flux[j];
  }
  return m;
}

Mat3 boundary_outflow(double length, const Point& normal, const FacetSide& side, const std::array<Point, 3>& u) {
  Mat3 m = Mat3::Zero();
  const auto& rule = facet_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double s = rule.points[q];
    const double un = std::max(trace_velocity(side, u, s).dot(normal), 0.0);
    auto v = side.shape(s);
    const double w = rule.weights[q] * length * un;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) += w * v[i] * v[j];
  }
  return m;
}

Mat3 boundary_inflow_data(double length, const Point& normal, const FacetSide& side, const std::array<Point, 3>& u) {
  Mat3 m = Mat3::Zero();
  const auto& rule = facet_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double s = rule.points[q];
    const double un = std::max(-trace_velocity(side, u, s).dot(normal), 0.0);
    auto v = side.shape(s);
    const double w = rule.weights[q] * length * un;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) += w * v[i] * v[j];
  }
  return m;
}

}  // namespace kernels

std::array<Point, 3> cell_velocity(const DofMaps& dofs, const Vector& velocity, int cell) {
  std::array<Point, 3> u;
  for (int k = 0; k < 3; ++k)
    u[k] = Point(velocity[dofs.velocity(cell, 0, k)], velocity[dofs.velocity(cell, 1, k)]);
  return u;
}

namespace {

using kernels::Mat3;
using kernels::Mat6;

Point facet_point(const Mesh& mesh, const Facet& f, double s) {
  return (1.0 - s) * mesh.nodes[f.nodes[0]] + s * mesh.nodes[f.nodes[1]];
}

// Maps (cell, vertex) to a row/column index; cells may be global or local.
using ScalarDof = std::function<int(int cell, int vertex)>;

void add3(std::vector<Triplet>& t, const ScalarDof& dof, int cell, const Mat3& m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (m(i, j) != 0.0) t.emplace_back(dof(cell, i), dof(cell, j), m(i, j));
}

void add6(std::vector<Triplet>& t, const ScalarDof& dof, int cp, int cm, const Mat6& m) {
  std::array<int, 6> idx{dof(cp, 0), dof(cp, 1), dof(cp, 2), dof(cm, 0), dof(cm, 1), dof(cm, 2)};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (m(i, j) != 0.0) t.emplace_back(idx[i], idx[j], m(i, j));
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

// Global scalar SIPG: volume terms on every cell, interior facets, and the
// boundary facets selected by `nitsche`.
void global_sipg(const Mesh& mesh, const ScalarDof& dof, double kappa, double penalty,
                 const std::function<bool(FacetMarker)>& nitsche, std::vector<Triplet>& t) {
  std::vector<CellGeometry> geo(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    geo[c] = cell_geometry(mesh, c);
    add3(t, dof, c, kernels::stiffness(geo[c], kappa));
  }
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    if (!facet.is_boundary()) {
      FacetSide sp = facet_side(mesh, f, 0), sm = facet_side(mesh, f, 1);
      add6(t, dof, sp.cell, sm.cell,
           kernels::interior_sipg(facet.length, facet.normal, geo[sp.cell], sp, geo[sm.cell], sm, kappa, penalty));
    } else if (nitsche(facet.marker)) {
      FacetSide sp = facet_side(mesh, f, 0);
      add3(t, dof, sp.cell, kernels::boundary_sipg(facet.length, facet.normal, geo[sp.cell], sp, kappa, penalty));
    }
  }
}

// Adds int (penalty kappa / h r - kappa grad r . n) g ds on one boundary facet.
void add_nitsche_load(const Mesh& mesh, int f, const ScalarDof& dof, double kappa, double penalty,
                      const std::function<double(const Point&)>& g, Vector& load) {
  const Facet& facet = mesh.facets[f];
  FacetSide side = facet_side(mesh, f, 0);
  CellGeometry geo = cell_geometry(mesh, side.cell);
  const double sigma = penalty * kappa / facet.length;
  const auto& rule = facet_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double s = rule.points[q];
    auto v = side.shape(s);
    const double w = rule.weights[q] * facet.length * g(facet_point(mesh, facet, s));
    for (int r = 0; r < 3; ++r) load[dof(side.cell, r)] += w * (sigma * v[r] - kappa * geo.grads[r].dot(facet.normal));
  }
}

// Adds int weight(x) r ds on one boundary facet.
void add_facet_load(const Mesh& mesh, int f, const ScalarDof& dof, const std::function<double(const Point&)>& g,
                    Vector& load) {
  const Facet& facet = mesh.facets[f];
  FacetSide side = facet_side(mesh, f, 0);
  const auto& rule = facet_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double s = rule.points[q];
    auto v = side.shape(s);
    const double w = rule.weights[q] * facet.length * g(facet_point(mesh, facet, s));
    for (int r = 0; r < 3; ++r) load[dof(side.cell, r)] += w * v[r];
  }
}

SparseMatrix block_mass(const Mesh& mesh, int components, double scale) {
  std::vector<Triplet> t;
  t.reserve(9 * components * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    Mat3 m = scale * kernels::mass(cell_geometry(mesh, c));
    for (int comp = 0; comp < components; ++comp)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          t.emplace_back(3 * (components * c + comp) + i, 3 * (components * c + comp) + j, m(i, j));
  }
  const int n = 3 * components * mesh.num_cells();
  return from_triplets(n, n, t);
}

}  // namespace

SparseMatrix assemble_concentration_mass(const Mesh& mesh, const DofMaps&) { return block_mass(mesh, 1, 1.0); }

SparseMatrix assemble_velocity_mass(const Mesh& mesh, const DofMaps&, double density) {
  return block_mass(mesh, 2, density);
}

FlowOperators assemble_flow(const Mesh& mesh, const DofMaps& dofs, const FlowParams& params, const VectorFn& inflow) {
  const double mu = params.viscosity;
  FlowOperators ops;
  ops.mass = assemble_velocity_mass(mesh, dofs, params.density);

  auto not_outflow = [](FacetMarker m) { return m != FacetMarker::Outflow; };
  std::vector<Triplet> t;
  for (int comp = 0; comp < 2; ++comp) {
    ScalarDof dof = [&dofs, comp](int c, int k) { return dofs.velocity(c, comp, k); };
    global_sipg(mesh, dof, mu, params.penalty, not_outflow, t);
  }
  ops.stiffness = from_triplets(dofs.num_velocity(), dofs.num_velocity(), t);

  // B(q, u) = -sum_K int q div u + sum_E int {q} [u] . n, outflow excluded.
  t.clear();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CellGeometry g = cell_geometry(mesh, c);
    for (int comp = 0; comp < 2; ++comp)
      for (int k = 0; k < 3; ++k) t.emplace_back(dofs.pressure(c), dofs.velocity(c, comp, k), -g.area * g.grads[k][comp]);
  }
  ops.load_velocity = Vector::Zero(dofs.num_velocity());
  ops.load_pressure = Vector::Zero(dofs.num_pressure());
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    if (facet.marker == FacetMarker::Outflow) continue;
    const Point& n = facet.normal;
    if (!facet.is_boundary()) {
      FacetSide sp = facet_side(mesh, f, 0), sm = facet_side(mesh, f, 1);
      for (int q : {sp.cell, sm.cell})
        for (int comp = 0; comp < 2; ++comp)
          for (int e = 0; e < 2; ++e) {
            // int of a P1 trace basis function over the facet is length / 2.
            const double v = 0.5 * n[comp] * 0.5 * facet.length;
            t.emplace_back(dofs.pressure(q), dofs.velocity(sp.cell, comp, sp.local[e]), v);
            t.emplace_back(dofs.pressure(q), dofs.velocity(sm.cell, comp, sm.local[e]), -v);
          }
      continue;
    }
    FacetSide sp = facet_side(mesh, f, 0);
    for (int comp = 0; comp < 2; ++comp)
      for (int e = 0; e < 2; ++e)
        t.emplace_back(dofs.pressure(sp.cell), dofs.velocity(sp.cell, comp, sp.local[e]), n[comp] * 0.5 * facet.length);
    if (facet.marker != FacetMarker::Inflow) continue;
    for (int comp = 0; comp < 2; ++comp) {
      ScalarDof dof = [&dofs, comp](int c, int k) { return dofs.velocity(c, comp, k); };
      add_nitsche_load(mesh, f, dof, mu, params.penalty, [&](const Point& x) { return inflow(x)[comp]; },
                       ops.load_velocity);
    }
    const auto& rule = facet_rule();
    for (size_t q = 0; q < rule.points.size(); ++q)
      ops.load_pressure[dofs.pressure(sp.cell)] +=
          rule.weights[q] * facet.length * inflow(facet_point(mesh, facet, rule.points[q])).dot(n);
  }
  ops.divergence = from_triplets(dofs.num_pressure(), dofs.num_velocity(), t);
  return ops;
}

ConvectionOperator assemble_convection(const Mesh& mesh, const DofMaps& dofs, const Vector& velocity,
                                       const ScalarFn& inflow_value) {
  if (velocity.size() != dofs.num_velocity()) throw Error("convection: velocity has wrong size");
  ScalarDof dof = [&dofs](int c, int k) { return dofs.concentration(c, k); };
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_cells() + 36 * mesh.num_facets());
  for (int c = 0; c < mesh.num_cells(); ++c)
    add3(t, dof, c, kernels::volume_convection(cell_geometry(mesh, c), cell_velocity(dofs, velocity, c)));
  ConvectionOperator op;
  op.inflow_load = Vector::Zero(dofs.num_concentration());
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    FacetSide sp = facet_side(mesh, f, 0);
    auto up = cell_velocity(dofs, velocity, sp.cell);
    if (!facet.is_boundary()) {
      FacetSide sm = facet_side(mesh, f, 1);
      add6(t, dof, sp.cell, sm.cell,
           kernels::interior_upwind(facet.length, facet.normal, sp, up, sm, cell_velocity(dofs, velocity, sm.cell)));
      continue;
    }
    if (facet.marker == FacetMarker::Wall) continue;
    add3(t, dof, sp.cell, kernels::boundary_outflow(facet.length, facet.normal, sp, up));
    if (facet.marker == FacetMarker::Inflow) {
      const auto& rule = facet_rule();
      for (size_t q = 0; q < rule.points.size(); ++q) {
        const double s = rule.points[q];
        Point uq = Point::Zero();
        auto v = sp.shape(s);
        for (int k = 0; k < 3; ++k) uq += v[k] * up[k];
        const double in = std::max(-uq.dot(facet.normal), 0.0);
        if (in == 0.0) continue;
        const double w = rule.weights[q] * facet.length * in * inflow_value(facet_point(mesh, facet, s));
        for (int r = 0; r < 3; ++r) op.inflow_load[dof(sp.cell, r)] += w * v[r];
      }
    }
  }
  op.matrix = from_triplets(dofs.num_concentration(), dofs.num_concentration(), t);
  return op;
}

TransportOperators assemble_transport_static(const Mesh& mesh, const DofMaps& dofs, const TransportParams& p) {
  TransportOperators ops;
  ops.mass = assemble_concentration_mass(mesh, dofs);
  ScalarDof dof = [&dofs](int c, int k) { return dofs.concentration(c, k); };
  const bool dbc = p.wall == WallBc::Dirichlet;
  std::vector<Triplet> t;
  global_sipg(mesh, dof, p.diffusion, p.penalty,
              [dbc](FacetMarker m) { return m == FacetMarker::Inflow || (dbc && m == FacetMarker::Wall); }, t);
  ops.load = Vector::Zero(dofs.num_concentration());
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    if (facet.marker == FacetMarker::Inflow) {
      add_nitsche_load(mesh, f, dof, p.diffusion, p.penalty, p.inflow_value, ops.load);
    } else if (facet.marker == FacetMarker::Wall) {
      switch (p.wall) {
        case WallBc::Dirichlet:
          add_nitsche_load(mesh, f, dof, p.diffusion, p.penalty, p.wall_value, ops.load);
          break;
        case WallBc::Robin: {
          FacetSide sp = facet_side(mesh, f, 0);
          add3(t, dof, sp.cell, p.robin * kernels::facet_mass(facet.length, sp));
          add_facet_load(mesh, f, dof, [&](const Point& x) { return p.robin * p.wall_value(x); }, ops.load);
          break;
        }
        case WallBc::Neumann:
          add_facet_load(mesh, f, dof, [&](const Point&) { return -p.wall_flux; }, ops.load);
          break;
      }
    }
  }
  ops.stiffness = from_triplets(dofs.num_concentration(), dofs.num_concentration(), t);
  return ops;
}

TransportOperators assemble_transport(const Mesh& mesh, const DofMaps& dofs, const TransportParams& params,
                                      const Vector& velocity) {
  TransportOperators ops = assemble_transport_static(mesh, dofs, params);
  ConvectionOperator conv = assemble_convection(mesh, dofs, velocity, params.inflow_value);
  ops.convection = std::move(conv.matrix);
  ops.load += conv.inflow_load;
  return ops;
}

Vector assemble_source(const Mesh& mesh, const DofMaps& dofs, const ScalarFn& f) {
  Vector load = Vector::Zero(dofs.num_concentration());
  const auto& rule = cell_rule();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CellGeometry g = cell_geometry(mesh, c);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      auto phi = CellGeometry::shape(rule.points[q]);
      const double w = 2.0 * g.area * rule.weights[q] * f(g.map(rule.points[q]));
      for (int k = 0; k < 3; ++k) load[dofs.concentration(c, k)] += w * phi[k];
    }
  }
  return load;
}

namespace {

// Per-cell L2 projection onto P1 with the exact local mass inverse.
Eigen::Vector3d project_cell(const CellGeometry& g, const std::function<double(const Point&)>& f) {
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  const auto& rule = cell_rule();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    auto phi = CellGeometry::shape(rule.points[q]);
    const double w = 2.0 * g.area * rule.weights[q] * f(g.map(rule.points[q]));
    for (int k = 0; k < 3; ++k) b[k] += w * phi[k];
  }
  return kernels::mass(g).ldlt().solve(b);
}

}  // namespace

Vector project_scalar(const Mesh& mesh, const DofMaps& dofs, const ScalarFn& f) {
  Vector out(dofs.num_concentration());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    Eigen::Vector3d v = project_cell(cell_geometry(mesh, c), f);
    for (int k = 0; k < 3; ++k) out[dofs.concentration(c, k)] = v[k];
  }
  return out;
}

Vector project_vector(const Mesh& mesh, const DofMaps& dofs, const VectorFn& f) {
  Vector out(dofs.num_velocity());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CellGeometry g = cell_geometry(mesh, c);
    for (int comp = 0; comp < 2; ++comp) {
      Eigen::Vector3d v = project_cell(g, [&](const Point& x) { return f(x)[comp]; });
      for (int k = 0; k < 3; ++k) out[dofs.velocity(c, comp, k)] = v[k];
    }
  }
  return out;
}

namespace {

// Interior-facet SIPG and boundary facet mass of one domain for `components`
// stacked scalar fields.
LocalForms local_forms(const Mesh& mesh, const LocalDomain& domain, int components, double kappa, double penalty) {
  const int n = 3 * components * domain.num_cells();
  std::vector<Triplet> a, s;
  std::vector<CellGeometry> geo(domain.num_cells());
  for (int lc = 0; lc < domain.num_cells(); ++lc) geo[lc] = cell_geometry(mesh, domain.cells[lc]);
  for (int comp = 0; comp < components; ++comp) {
    ScalarDof dof = [components, comp](int lc, int k) { return 3 * (components * lc + comp) + k; };
    for (int lc = 0; lc < domain.num_cells(); ++lc) add3(a, dof, lc, kernels::stiffness(geo[lc], kappa));
    for (int f : domain.interior_facets) {
      const Facet& facet = mesh.facets[f];
      FacetSide sp = facet_side(mesh, f, 0), sm = facet_side(mesh, f, 1);
      const int lp = domain.local_index[sp.cell], lm = domain.local_index[sm.cell];
      add6(a, dof, lp, lm,
           kernels::interior_sipg(facet.length, facet.normal, geo[lp], sp, geo[lm], sm, kappa, penalty));
    }
    for (const auto& b : domain.boundary)
      add3(s, dof, b.local_cell, kernels::facet_mass(mesh.facets[b.facet].length, b.side));
  }
  return {from_triplets(n, n, a), from_triplets(n, n, s)};
}

}  // namespace

LocalForms assemble_local_velocity_forms(const Mesh& mesh, const LocalDomain& domain, double viscosity,
                                         double penalty) {
  return local_forms(mesh, domain, 2, viscosity, penalty);
}

LocalForms assemble_local_concentration_forms(const Mesh& mesh, const LocalDomain& domain, double diffusion,
                                              double penalty) {
  return local_forms(mesh, domain, 1, diffusion, penalty);
}

}  // namespace thinms
