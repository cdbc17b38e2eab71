#pragma once

#include "thinms/assembly.hpp"
#include "thinms/fine_solver.hpp"
#include "thinms/mesh.hpp"
#include "thinms/msbasis_velocity.hpp"

#include <vector>

namespace thinms {

/// R_p: one 0/1 indicator row per domain over the fine pressure DOFs.
SparseMatrix pressure_projection(const CoarsePartition& partition);

/// Rows of `rows` whose mode index is below `modes` (interior rows carry mode 0).
std::vector<int> rows_below(const ProjectionRows& rows, int modes);
/// The listed rows of `rows` as a new projection.
ProjectionRows restrict_rows(const ProjectionRows& rows, const std::vector<int>& keep);

struct CoarseFlowOperators {
  Matrix mass;
  Matrix stiffness;
  Matrix divergence;
  Vector load_velocity;
  Vector load_pressure;
};

/// M_H = R_u M R_u^T, A_H = R_u A R_u^T, B_H = R_p B R_u^T, loads R_u l_u and R_p l_p.
CoarseFlowOperators project_flow(const SparseMatrix& ru, const SparseMatrix& rp, const FlowOperators& fine);
/// Sub-block for the listed velocity rows (all pressure rows kept).
CoarseFlowOperators restrict_flow(const CoarseFlowOperators& ops, const std::vector<int>& velocity_rows);

/// Coefficients c minimizing || R^T c - v ||_M: (R M R^T)^{-1} R M v.
Vector mass_projection(const SparseMatrix& r, const SparseMatrix& mass, const Vector& v);

/// Same stepping as solve_flow on the reduced system; values are coarse velocity
/// coefficients at every step, pressure holds the domain pressures.
FieldHistory solve_coarse_flow(const CoarseFlowOperators& ops, const TimeGrid& grid, const Vector& u0);

/// Fine-grid fields R^T x for every stored coefficient vector.
std::vector<Vector> reconstruct(const SparseMatrix& r, const std::vector<Vector>& coefficients);

/// Implicit Euler on the Galerkin projection of the fine transport problem.
/// C_H(u) = R_c C(u) R_c^T is rebuilt whenever the fine velocity changes;
/// values are coarse coefficients at `record` (reporting steps when empty).
FieldHistory solve_coarse_transport(const TransportProblem& fine, const SparseMatrix& rc, const TimeGrid& grid,
                                    const Vector& c0, const std::vector<Vector>& velocity,
                                    const std::vector<int>& record = {});

}  // namespace thinms
