#pragma once

#include "thinms/assembly.hpp"
#include "thinms/types.hpp"

#include <functional>
#include <vector>

namespace thinms {

struct TimeGrid {
  double t_max = 1.0;
  int n_steps = 40;

  double tau() const { return t_max / n_steps; }
  double time(int step) const { return t_max * step / n_steps; }
  /// Throws unless t_max > 0 and n_steps >= 1.
  void validate() const;
};

/// Reporting steps {10, 20, 30, 40}, rescaled when n_steps != 40.
std::vector<int> reporting_indices(int n_steps);

/// Solution vectors at selected step numbers (step 0 is the initial state).
struct FieldHistory {
  Vector initial;
  std::vector<int> steps;
  std::vector<Vector> values;
  /// Flow only: pressure at the same steps.
  std::vector<Vector> pressure;
  /// Largest relative residual of any linear solve.
  double max_residual = 0.0;
  /// First step whose update was below the steady tolerance, or -1.
  int steady_step = -1;

  bool has(int step) const;
  const Vector& at(int step) const;
  const Vector& last() const { return values.back(); }
};

/// Relative update below which a field counts as steady.
inline constexpr double kSteadyTolerance = 1e-8;

/// Implicit Euler on [M/tau + A, B^T; B, 0]. The saddle matrix is factorized
/// once. Records every step when `record` is empty. Once the velocity is
/// steady the remaining steps reuse it.
FieldHistory solve_flow(const FlowOperators& ops, const TimeGrid& grid, const Vector& u0,
                        const std::vector<int>& record = {});

/// Everything the transport stepper needs besides the velocity.
struct TransportProblem {
  SparseMatrix mass;
  SparseMatrix stiffness;
  Vector load;
  /// Builds C(u) and its inflow load for a velocity-layout vector.
  std::function<ConvectionOperator(const Vector&)> convection;
  /// Optional extra right-hand side at time t (manufactured solutions).
  std::function<Vector(double)> source;
};

/// The returned convection callback keeps a reference to `mesh`.
TransportProblem make_transport_problem(const Mesh& mesh, const DofMaps& dofs, const TransportParams& params);

/// Implicit Euler on M/tau (c - c_prev) + (A + C(u^k)) c = F. `velocity[k-1]`
/// drives step k; a single vector is reused for all steps. The operator is
/// refactorized only when the velocity changes by more than kSteadyTolerance
/// relative. Records reporting_indices(n_steps) when `record` is empty.
FieldHistory solve_transport(const TransportProblem& problem, const TimeGrid& grid, const Vector& c0,
                             const std::vector<Vector>& velocity, const std::vector<int>& record = {});

/// Velocities at steps 1..n_steps of a flow history recorded at every step.
std::vector<Vector> velocity_sequence(const FieldHistory& flow, int n_steps);

}  // namespace thinms
