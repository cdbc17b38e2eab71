#include "support.hpp"
#include "thinms/coarse_solver.hpp"
#include "thinms/linalg.hpp"
#include "thinms/msbasis_transport.hpp"

#include <doctest.h>

#include <numeric>

using namespace thinms;
using fixtures::scaled_diff;

namespace {

Mesh channel(double flips = 0.3) {
  ChannelParams p = fixtures::straight_channel(1.0, 0.1, 0.025);
  p.flip_fraction = flips;
  return generate_channel(p);
}

Point parabola(const Point& x) { return {4.0 * x.y() * (0.1 - x.y()) / 0.01, 0.0}; }

SparseMatrix identity(int n) {
  SparseMatrix m(n, n);
  m.setIdentity();
  return m;
}

Vector nodal_velocity(const Mesh& mesh, const VectorFn& u) {
  const DofMaps dofs = build_spaces(mesh);
  Vector v(dofs.num_velocity());
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int k = 0; k < 3; ++k)
      for (int comp = 0; comp < 2; ++comp) v[dofs.velocity(c, comp, k)] = u(mesh.nodes[mesh.cells[c][k]])[comp];
  return v;
}

std::vector<int> all_steps(int n) {
  std::vector<int> s(n);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

}  // namespace

TEST_CASE("pressure projection rows are domain indicators") {
  const Mesh mesh = channel();
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Unstructured, 4);
  const Matrix rp = Matrix(pressure_projection(part));
  REQUIRE(rp.rows() == 4);
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int d = 0; d < 4; ++d) CHECK(rp(d, c) == (part.cell_to_domain[c] == d ? 1.0 : 0.0));
}

TEST_CASE("identity projection reproduces the fine solvers") {
  const Mesh mesh = generate_channel(fixtures::straight_channel(1.0, 0.1, 0.05));
  const DofMaps dofs = build_spaces(mesh);
  const FlowOperators fine = assemble_flow(mesh, dofs, FlowParams{}, parabola);
  const CoarseFlowOperators c =
      project_flow(identity(dofs.num_velocity()), identity(dofs.num_pressure()), fine);
  CHECK(scaled_diff(c.stiffness, Matrix(fine.stiffness)) < 1e-14);
  CHECK(scaled_diff(c.mass, Matrix(fine.mass)) < 1e-14);
  CHECK(scaled_diff(c.divergence, Matrix(fine.divergence)) < 1e-14);
  CHECK(scaled_diff(c.load_velocity, fine.load_velocity) < 1e-14);
  CHECK(scaled_diff(c.load_pressure, fine.load_pressure) < 1e-14);
  const TimeGrid grid{0.5, 10};
  const Vector u0 = Vector::Zero(dofs.num_velocity());
  const FieldHistory hf = solve_flow(fine, grid, u0);
  const FieldHistory hc = solve_coarse_flow(c, grid, u0);
  CHECK(scaled_diff(hc.last(), hf.last()) < 1e-9);

  TransportParams tp;
  tp.robin = 0.2;
  tp.wall_value = constant(1.0);
  const TransportProblem prob = make_transport_problem(mesh, dofs, tp);
  const Vector c0 = Vector::Ones(dofs.num_concentration());
  const std::vector<Vector> vel = velocity_sequence(hf, grid.n_steps);
  const FieldHistory tf = solve_transport(prob, grid, c0, vel);
  const FieldHistory tc = solve_coarse_transport(prob, identity(dofs.num_concentration()), grid, c0, vel);
  REQUIRE(tc.steps == tf.steps);
  for (size_t k = 0; k < tf.values.size(); ++k) CHECK(scaled_diff(tc.values[k], tf.values[k]) < 1e-9);
}

TEST_CASE("one basis vector gives the Rayleigh quotient") {
  const Mesh mesh = fixtures::channel8(true, 0.5);
  const DofMaps dofs = build_spaces(mesh);
  const FlowOperators fine = assemble_flow(mesh, dofs, FlowParams{0.7, 1.2, 8.0}, parabola);
  Vector v(dofs.num_velocity());
  for (int i = 0; i < v.size(); ++i) v[i] = std::sin(0.7 * i + 0.1);
  const SparseMatrix ru = Matrix(v.transpose()).sparseView();
  const SparseMatrix rp = Matrix::Ones(1, dofs.num_pressure()).sparseView();
  const CoarseFlowOperators c = project_flow(ru, rp, fine);
  double a = 0.0, m = 0.0, b = 0.0;
  for (int k = 0; k < fine.stiffness.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(fine.stiffness, k); it; ++it) a += v[it.row()] * it.value() * v[it.col()];
  for (int k = 0; k < fine.mass.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(fine.mass, k); it; ++it) m += v[it.row()] * it.value() * v[it.col()];
  for (int k = 0; k < fine.divergence.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(fine.divergence, k); it; ++it) b += it.value() * v[it.col()];
  CHECK(c.stiffness(0, 0) == doctest::Approx(a).epsilon(1e-12));
  CHECK(c.mass(0, 0) == doctest::Approx(m).epsilon(1e-12));
  CHECK(c.divergence(0, 0) == doctest::Approx(b).epsilon(1e-12));
  CHECK(c.load_velocity[0] == doctest::Approx(v.dot(fine.load_velocity)).epsilon(1e-12));
}

TEST_CASE("multiscale operators are symmetric and zero data stays zero") {
  const Mesh mesh = channel();
  const DofMaps dofs = build_spaces(mesh);
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Structured, 1);
  VelocityBasisOptions o;
  o.max_modes = 6;
  const VelocityMsBasis vb = build_velocity_basis(mesh, part, o);
  const ProjectionRows ru = velocity_projection(mesh, vb, 6);
  const SparseMatrix rp = pressure_projection(part);
  const FlowOperators fine = assemble_flow(mesh, dofs, FlowParams{}, [](const Point&) { return Point(0, 0); });
  const CoarseFlowOperators c = project_flow(ru.matrix, rp, fine);
  CHECK(relative_asymmetry(c.stiffness) < 1e-12);
  CHECK(relative_asymmetry(c.mass) < 1e-12);
  const FieldHistory h = solve_coarse_flow(c, TimeGrid{1.0, 10}, Vector::Zero(ru.rows()));
  for (const Vector& u : h.values) CHECK(u.cwiseAbs().maxCoeff() == 0.0);

  // Restricting rows commutes with projecting.
  const std::vector<int> keep = rows_below(ru, 3);
  CHECK(static_cast<int>(keep.size()) == 4 * 2 * 3);
  const ProjectionRows r3 = restrict_rows(ru, keep);
  const CoarseFlowOperators direct = project_flow(r3.matrix, rp, fine);
  const CoarseFlowOperators sub = restrict_flow(c, keep);
  CHECK(scaled_diff(sub.stiffness, direct.stiffness) < 1e-14);
  CHECK(scaled_diff(sub.divergence, direct.divergence) < 1e-14);
  CHECK(scaled_diff(sub.mass, direct.mass) < 1e-14);
}

TEST_CASE("constants in the span are preserved and projected exactly") {
  const Mesh mesh = channel();
  const DofMaps dofs = build_spaces(mesh);
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Structured, 1);
  TransportBasisOptions o;
  o.wall = WallBc::Dirichlet;
  o.type = BasisType::Type1;
  o.max_modes = 1000;
  const ConcentrationMsBasis cb = build_concentration_basis(mesh, part, o);
  const ProjectionRows rc = concentration_projection(mesh, cb, 1000);
  TransportParams tp;
  tp.wall = WallBc::Dirichlet;
  tp.wall_value = constant(1.0);
  tp.inflow_value = constant(1.0);
  const TransportProblem prob = make_transport_problem(mesh, dofs, tp);
  const Vector ones = Vector::Ones(dofs.num_concentration());
  const Vector c0 = mass_projection(rc.matrix, prob.mass, ones);
  CHECK((rc.matrix.transpose() * c0 - ones).cwiseAbs().maxCoeff() < 1e-8);
  const Vector u = nodal_velocity(mesh, [](const Point& x) { return Point(1.0 + 2.0 * x.y(), 0.0); });
  const FieldHistory h = solve_coarse_transport(prob, rc.matrix, TimeGrid{0.5, 20}, c0, {u});
  for (const Vector& c : reconstruct(rc.matrix, h.values)) CHECK((c - ones).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("coarse transport residual is orthogonal to the basis") {
  const Mesh mesh = channel();
  const DofMaps dofs = build_spaces(mesh);
  const CoarsePartition part = partition_coarse(mesh, 4, PartitionMode::Structured, 1);
  TransportBasisOptions o;
  o.robin = 0.3;
  o.max_modes = 4;
  const ConcentrationMsBasis cb = build_concentration_basis(mesh, part, o);
  const ProjectionRows rc = concentration_projection(mesh, cb, 4);
  TransportParams tp;
  tp.robin = 0.3;
  tp.wall_value = constant(1.0);
  const TransportProblem prob = make_transport_problem(mesh, dofs, tp);
  const Vector u = nodal_velocity(mesh, parabola);
  const TimeGrid grid{0.4, 8};
  const Vector c0 = mass_projection(rc.matrix, prob.mass, Vector::Ones(dofs.num_concentration()));
  const FieldHistory h = solve_coarse_transport(prob, rc.matrix, grid, c0, {u}, all_steps(grid.n_steps));
  const ConvectionOperator conv = prob.convection(u);
  const SparseMatrix system = SparseMatrix(prob.mass / grid.tau()) + prob.stiffness + conv.matrix;
  Vector prev = rc.matrix.transpose() * c0;
  for (const Vector& coef : h.values) {
    const Vector c = rc.matrix.transpose() * coef;
    const Vector rhs = prob.mass * prev / grid.tau() + prob.load + conv.inflow_load;
    const Vector residual = rc.matrix * (system * c - rhs);
    CHECK(residual.norm() <= 1e-8 * (rc.matrix * rhs).norm());
    prev = c;
  }
}
