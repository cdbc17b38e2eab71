#pragma once

#include "thinms/coarse_solver.hpp"
#include "thinms/config.hpp"
#include "thinms/fine_solver.hpp"
#include "thinms/msbasis_transport.hpp"
#include "thinms/msbasis_velocity.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace thinms {

/// g = (g~, 0) with g~(x) = u_in (n + 2) / n (1 - (r / r_max)^n), r = |x - x0|;
/// zero for r >= r_max.
VectorFn inflow_profile(double u_in, int exponent, const Point& center, double radius);
VectorFn inflow_profile(const ExperimentConfig& config);

enum class FieldKind { Scalar, Vector };

/// 100 ||ms - ref|| / ||ref|| in the DG L2 norm; nullopt when ||ref|| = 0.
std::optional<double> relative_l2_error(const Mesh& mesh, const Vector& ms, const Vector& ref, FieldKind kind);

/// FNV-1a over the raw bytes of the vectors, in order.
std::uint64_t hash_fields(const std::vector<const Vector*>& fields);

/// Mesh and coarse partition of an experiment.
struct Setup {
  Mesh mesh;
  CoarsePartition partition;
};

/// Reads config.mesh_file when set (using its stored partition when present),
/// otherwise generates the channel; then partitions.
Setup build_setup(const ExperimentConfig& config);

struct FineReference {
  FlowOperators flow;
  FieldHistory flow_history;  // every step
  TransportProblem transport;
  FieldHistory concentration;  // reporting steps
  std::vector<int> report_steps;
  std::uint64_t hash = 0;
  double seconds = 0.0;
};

FineReference solve_fine(const Setup& setup, const ExperimentConfig& config);

struct ReportRow {
  std::string type;     // "velocity/concentration", e.g. T2/T2
  std::string variant;
  std::string mu;       // mode count or "fine"
  int mc = 0;
  int dof_u = 0;
  int dof_c = 0;
  int dof_u_formula = 0;
  int dof_c_formula = 0;
  std::optional<double> e_u;
  std::vector<std::optional<double>> e_c;  // one per reporting step
  double seconds = 0.0;
  std::string error;  // nonempty when the row failed
  std::uint64_t fine_hash = 0;
};

struct ErrorReport {
  std::string name;
  int fine_cells = 0;
  long long fine_dof_u = 0;  // velocity plus pressure
  long long fine_dof_c = 0;
  int n_domains = 0;
  std::vector<int> report_steps;
  std::vector<ReportRow> rows;
  std::map<std::string, double> phase_seconds;
  std::uint64_t fine_hash = 0;
};

struct RunOptions {
  int threads = 1;
  /// Write CSV/VTK artifacts into config.out_dir.
  bool write_outputs = true;
  /// Progress messages; null for silence.
  std::ostream* log = nullptr;
};

/// Runs the fine reference once, builds the bases at the largest requested
/// mode counts and evaluates every (M^u, M^c) pair (plus fine-velocity rows
/// when requested). A failing row records its error; the rest still run.
ErrorReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// CSV header: type,variant,Mu,Mc,dof_u_H,dof_c_H,e_u,e_c_m10,e_c_m20,e_c_m30,e_c_m40,seconds_total.
/// With `timings` false, seconds_total is written as 0 so output is reproducible.
void write_report_csv(std::ostream& out, const ErrorReport& report, bool timings);

/// Phase timings as phase,seconds.
void write_timings_csv(std::ostream& out, const ErrorReport& report);

}  // namespace thinms
