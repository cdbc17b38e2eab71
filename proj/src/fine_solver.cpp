#include "thinms/fine_solver.hpp"

#include "thinms/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace thinms {

void TimeGrid::validate() const {
  if (!(t_max > 0.0)) throw Error("time grid: t_max must be positive");
  if (n_steps < 1) throw Error("time grid: n_steps must be at least 1");
}

std::vector<int> reporting_indices(int n_steps) {
  std::vector<int> out;
  for (int m : {10, 20, 30, 40}) {
    int k = std::max(1, static_cast<int>(std::lround(m * n_steps / 40.0)));
    if (out.empty() || out.back() != k) out.push_back(k);
  }
  return out;
}

bool FieldHistory::has(int step) const { return std::find(steps.begin(), steps.end(), step) != steps.end(); }

const Vector& FieldHistory::at(int step) const {
  if (step == 0) return initial;
  auto it = std::find(steps.begin(), steps.end(), step);
  if (it == steps.end()) throw Error("field history has no step " + std::to_string(step));
  return values[it - steps.begin()];
}

namespace {

std::vector<int> all_steps(int n) {
  std::vector<int> s(n);
  for (int k = 0; k < n; ++k) s[k] = k + 1;
  return s;
}

double relative_change(const Vector& a, const Vector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

double relative_residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
  const double scale = b.norm();
  const double r = (a * x - b).norm();
  return scale == 0.0 ? r : r / scale;
}

}  // namespace

FieldHistory solve_flow(const FlowOperators& ops, const TimeGrid& grid, const Vector& u0,
                        const std::vector<int>& record) {
  grid.validate();
  const int nu = static_cast<int>(ops.mass.rows());
  const int np = static_cast<int>(ops.divergence.rows());
  if (u0.size() != nu) throw Error("solve_flow: initial velocity has wrong size");
  const double tau = grid.tau();

  SparseMatrix top = ops.mass / tau + ops.stiffness;
  std::vector<Triplet> t;
  t.reserve(top.nonZeros() + 2 * ops.divergence.nonZeros());
  for (int k = 0; k < top.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(top, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < ops.divergence.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(ops.divergence, k); it; ++it) {
      t.emplace_back(nu + it.row(), it.col(), it.value());
      t.emplace_back(it.col(), nu + it.row(), it.value());
    }
  SparseMatrix saddle(nu + np, nu + np);
  saddle.setFromTriplets(t.begin(), t.end());
  saddle.makeCompressed();
  SparseLu lu;
  lu.factorize(saddle, "fine flow saddle system");

  FieldHistory h;
  h.initial = u0;
  const std::vector<int> want = record.empty() ? all_steps(grid.n_steps) : record;
  Vector u = u0, p = Vector::Zero(np);
  Vector rhs(nu + np);
  for (int step = 1; step <= grid.n_steps; ++step) {
    if (h.steady_step < 0) {
      rhs.head(nu) = ops.mass * u / tau + ops.load_velocity;
      rhs.tail(np) = ops.load_pressure;
      Vector x = lu.solve(rhs);
      h.max_residual = std::max(h.max_residual, relative_residual(saddle, x, rhs));
      Vector next = x.head(nu);
      if (relative_change(next, u) < kSteadyTolerance && step > 1) h.steady_step = step;
      u = std::move(next);
      p = x.tail(np);
    }
    if (std::find(want.begin(), want.end(), step) != want.end()) {
      h.steps.push_back(step);
      h.values.push_back(u);
      h.pressure.push_back(p);
    }
  }
  return h;
}

TransportProblem make_transport_problem(const Mesh& mesh, const DofMaps& dofs, const TransportParams& params) {
  TransportOperators ops = assemble_transport_static(mesh, dofs, params);
  TransportProblem p;
  p.mass = std::move(ops.mass);
  p.stiffness = std::move(ops.stiffness);
  p.load = std::move(ops.load);
  ScalarFn inflow = params.inflow_value;
  p.convection = [&mesh, dofs, inflow](const Vector& u) { return assemble_convection(mesh, dofs, u, inflow); };
  return p;
}

FieldHistory solve_transport(const TransportProblem& problem, const TimeGrid& grid, const Vector& c0,
                             const std::vector<Vector>& velocity, const std::vector<int>& record) {
  grid.validate();
  if (velocity.empty()) throw Error("solve_transport: no velocity supplied");
  if (velocity.size() != 1 && static_cast<int>(velocity.size()) < grid.n_steps)
    throw Error("solve_transport: velocity history shorter than the time grid");
  if (c0.size() != problem.mass.rows()) throw Error("solve_transport: initial state has wrong size");
  const double tau = grid.tau();
  const std::vector<int> want = record.empty() ? reporting_indices(grid.n_steps) : record;

  FieldHistory h;
  h.initial = c0;
  SparseLu lu;
  SparseMatrix system;
  Vector conv_load;
  const Vector* current = nullptr;
  Vector c = c0;
  for (int step = 1; step <= grid.n_steps; ++step) {
    const Vector& u = velocity.size() == 1 ? velocity[0] : velocity[step - 1];
    if (current == nullptr || (current != &u && relative_change(u, *current) > kSteadyTolerance)) {
      ConvectionOperator conv = problem.convection(u);
      system = problem.mass / tau + problem.stiffness + conv.matrix;
      system.makeCompressed();
      lu.factorize(system, "fine transport system");
      conv_load = std::move(conv.inflow_load);
      current = &u;
    }
    Vector rhs = problem.mass * c / tau + problem.load + conv_load;
    if (problem.source) rhs += problem.source(grid.time(step));
    c = lu.solve(rhs);
    h.max_residual = std::max(h.max_residual, relative_residual(system, c, rhs));
    if (std::find(want.begin(), want.end(), step) != want.end()) {
      h.steps.push_back(step);
      h.values.push_back(c);
    }
  }
  return h;
}

std::vector<Vector> velocity_sequence(const FieldHistory& flow, int n_steps) {
  std::vector<Vector> out;
  out.reserve(n_steps);
  for (int k = 1; k <= n_steps; ++k) out.push_back(flow.at(k));
  return out;
}

}  // namespace thinms
