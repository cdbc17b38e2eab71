#include "thinms/coarse_solver.hpp"

#include "thinms/linalg.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace thinms {

SparseMatrix pressure_projection(const CoarsePartition& partition) {
  std::vector<Triplet> t;
  for (int c = 0; c < static_cast<int>(partition.cell_to_domain.size()); ++c)
    t.emplace_back(partition.cell_to_domain[c], c, 1.0);
  SparseMatrix r(partition.n_domains, static_cast<int>(partition.cell_to_domain.size()));
  r.setFromTriplets(t.begin(), t.end());
  r.makeCompressed();
  return r;
}

std::vector<int> rows_below(const ProjectionRows& rows, int modes) {
  std::vector<int> keep;
  for (int i = 0; i < rows.rows(); ++i)
    if (rows.mode[i] < modes) keep.push_back(i);
  return keep;
}

ProjectionRows restrict_rows(const ProjectionRows& rows, const std::vector<int>& keep) {
  ProjectionRows out;
  std::vector<int> new_index(rows.rows(), -1);
  for (size_t i = 0; i < keep.size(); ++i) {
    new_index[keep[i]] = static_cast<int>(i);
    out.domain.push_back(rows.domain[keep[i]]);
    out.family.push_back(rows.family[keep[i]]);
    out.mode.push_back(rows.mode[keep[i]]);
  }
  std::vector<Triplet> t;
  for (int k = 0; k < rows.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(rows.matrix, k); it; ++it)
      if (new_index[it.row()] >= 0) t.emplace_back(new_index[it.row()], it.col(), it.value());
  out.matrix.resize(static_cast<Eigen::Index>(keep.size()), rows.matrix.cols());
  out.matrix.setFromTriplets(t.begin(), t.end());
  out.matrix.makeCompressed();
  out.dropped = rows.dropped;
  return out;
}

namespace {

Matrix galerkin(const SparseMatrix& r, const SparseMatrix& a, const SparseMatrix& s) {
  SparseMatrix ra = r * a;
  SparseMatrix product = ra * SparseMatrix(s.transpose());
  return Matrix(product);
}

double relative_change(const Vector& a, const Vector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace

CoarseFlowOperators project_flow(const SparseMatrix& ru, const SparseMatrix& rp, const FlowOperators& fine) {
  CoarseFlowOperators ops;
  ops.mass = galerkin(ru, fine.mass, ru);
  ops.stiffness = galerkin(ru, fine.stiffness, ru);
  ops.divergence = galerkin(rp, fine.divergence, ru);
  ops.load_velocity = ru * fine.load_velocity;
  ops.load_pressure = rp * fine.load_pressure;
  return ops;
}

CoarseFlowOperators restrict_flow(const CoarseFlowOperators& ops, const std::vector<int>& rows) {
  CoarseFlowOperators out;
  out.mass = select(ops.mass, rows);
  out.stiffness = select(ops.stiffness, rows);
  out.divergence.resize(ops.divergence.rows(), static_cast<Eigen::Index>(rows.size()));
  for (size_t j = 0; j < rows.size(); ++j) out.divergence.col(j) = ops.divergence.col(rows[j]);
  out.load_velocity = select(ops.load_velocity, rows);
  out.load_pressure = ops.load_pressure;
  return out;
}

Vector mass_projection(const SparseMatrix& r, const SparseMatrix& mass, const Vector& v) {
  Matrix gram = galerkin(r, mass, r);
  Vector rhs = r * (mass * v);
  return gram.ldlt().solve(rhs);
}

FieldHistory solve_coarse_flow(const CoarseFlowOperators& ops, const TimeGrid& grid, const Vector& u0) {
  grid.validate();
  const Eigen::Index nu = ops.mass.rows(), np = ops.divergence.rows();
  if (u0.size() != nu) throw Error("solve_coarse_flow: initial state has wrong size");
  const double tau = grid.tau();
  Matrix saddle = Matrix::Zero(nu + np, nu + np);
  saddle.topLeftCorner(nu, nu) = ops.mass / tau + ops.stiffness;
  saddle.topRightCorner(nu, np) = ops.divergence.transpose();
  saddle.bottomLeftCorner(np, nu) = ops.divergence;
  Eigen::FullPivLU<Matrix> lu(saddle);
  if (!lu.isInvertible())
    throw Error("coarse flow saddle system is singular (size " + std::to_string(nu + np) + ", rank " +
                std::to_string(lu.rank()) + ")");

  FieldHistory h;
  h.initial = u0;
  Vector u = u0;
  Vector p = Vector::Zero(np);
  Vector rhs(nu + np);
  for (int step = 1; step <= grid.n_steps; ++step) {
    if (h.steady_step < 0) {
      rhs.head(nu) = ops.mass * u / tau + ops.load_velocity;
      rhs.tail(np) = ops.load_pressure;
      Vector x = lu.solve(rhs);
      const double scale = rhs.norm();
      h.max_residual = std::max(h.max_residual, (saddle * x - rhs).norm() / (scale > 0.0 ? scale : 1.0));
      Vector next = x.head(nu);
      if (step > 1 && relative_change(next, u) < kSteadyTolerance) h.steady_step = step;
      u = std::move(next);
      p = x.tail(np);
    }
    h.steps.push_back(step);
    h.values.push_back(u);
    h.pressure.push_back(p);
  }
  return h;
}

std::vector<Vector> reconstruct(const SparseMatrix& r, const std::vector<Vector>& coefficients) {
  std::vector<Vector> out;
  out.reserve(coefficients.size());
  SparseMatrix rt = r.transpose();
  for (const Vector& c : coefficients) out.push_back(rt * c);
  return out;
}

FieldHistory solve_coarse_transport(const TransportProblem& fine, const SparseMatrix& rc, const TimeGrid& grid,
                                    const Vector& c0, const std::vector<Vector>& velocity,
                                    const std::vector<int>& record) {
  grid.validate();
  if (velocity.empty()) throw Error("solve_coarse_transport: no velocity supplied");
  if (velocity.size() != 1 && static_cast<int>(velocity.size()) < grid.n_steps)
    throw Error("solve_coarse_transport: velocity history shorter than the time grid");
  const Eigen::Index n = rc.rows();
  if (c0.size() != n) throw Error("solve_coarse_transport: initial state has wrong size");
  const double tau = grid.tau();
  const std::vector<int> want = record.empty() ? reporting_indices(grid.n_steps) : record;

  const Matrix mass = galerkin(rc, fine.mass, rc);
  const Matrix base = mass / tau + galerkin(rc, fine.stiffness, rc);
  const Vector base_load = rc * fine.load;

  FieldHistory h;
  h.initial = c0;
  Eigen::PartialPivLU<Matrix> lu;
  Matrix system;
  Vector load;
  const Vector* current = nullptr;
  Vector c = c0;
  for (int step = 1; step <= grid.n_steps; ++step) {
    const Vector& u = velocity.size() == 1 ? velocity[0] : velocity[step - 1];
    if (current == nullptr || (current != &u && relative_change(u, *current) > kSteadyTolerance)) {
      ConvectionOperator conv = fine.convection(u);
      system = base + galerkin(rc, conv.matrix, rc);
      lu.compute(system);
      load = base_load + rc * conv.inflow_load;
      current = &u;
    }
    Vector rhs = mass * c / tau + load;
    if (fine.source) rhs += rc * fine.source(grid.time(step));
    c = lu.solve(rhs);
    if (!c.allFinite()) throw Error("coarse transport system is singular (size " + std::to_string(n) + ")");
    const double scale = rhs.norm();
    h.max_residual = std::max(h.max_residual, (system * c - rhs).norm() / (scale > 0.0 ? scale : 1.0));
    if (std::find(want.begin(), want.end(), step) != want.end()) {
      h.steps.push_back(step);
      h.values.push_back(c);
    }
  }
  return h;
}

}  // namespace thinms
