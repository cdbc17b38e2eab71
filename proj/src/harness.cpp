#include "thinms/harness.hpp"

#include "thinms/vtk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>

namespace thinms {

VectorFn inflow_profile(double u_in, int exponent, const Point& center, double radius) {
  if (!(radius > 0.0)) throw Error("inflow profile: r_max must be positive");
  const double scale = u_in * (exponent + 2.0) / exponent;
  return [=](const Point& x) {
    const double r = (x - center).norm() / radius;
    if (r >= 1.0) return Point(0.0, 0.0);
    return Point(scale * (1.0 - std::pow(r, exponent)), 0.0);
  };
}

VectorFn inflow_profile(const ExperimentConfig& c) {
  return inflow_profile(c.u_in, c.inflow_exponent, c.geometry.inlet_center, c.geometry.inlet_radius);
}

std::optional<double> relative_l2_error(const Mesh& mesh, const Vector& ms, const Vector& ref, FieldKind kind) {
  const int comps = kind == FieldKind::Scalar ? 1 : 2;
  const Eigen::Index n = 3 * comps * mesh.num_cells();
  if (ms.size() != n || ref.size() != n) throw Error("relative_l2_error: field sizes do not match the mesh");
  double num = 0.0, den = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    kernels::Mat3 m = kernels::mass(cell_geometry(mesh, c));
    for (int comp = 0; comp < comps; ++comp) {
      const Eigen::Index o = 3 * (comps * c + comp);
      Eigen::Vector3d r = ref.segment<3>(o), e = ms.segment<3>(o) - r;
      num += e.dot(m * e);
      den += r.dot(m * r);
    }
  }
  if (!(den > 0.0)) return std::nullopt;
  return 100.0 * std::sqrt(std::max(num, 0.0) / den);
}

std::uint64_t hash_fields(const std::vector<const Vector*>& fields) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const Vector* v : fields)
    for (Eigen::Index i = 0; i < v->size(); ++i) {
      unsigned char bytes[sizeof(double)];
      const double x = (*v)[i];
      std::memcpy(bytes, &x, sizeof x);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
      }
    }
  return h;
}

Setup build_setup(const ExperimentConfig& config) {
  Setup s;
  if (!config.mesh_file.empty()) {
    std::ifstream in(config.mesh_file);
    if (!in) throw Error("cannot open mesh file " + config.mesh_file);
    MeshFile file = read_mesh(in);
    s.mesh = std::move(file.mesh);
    if (file.partition) {
      s.partition = std::move(*file.partition);
      return s;
    }
  } else {
    s.mesh = generate_channel(config.geometry);
  }
  s.partition = partition_coarse(s.mesh, config.n_domains, config.partition_mode, config.partition_seed);
  return s;
}

FineReference solve_fine(const Setup& setup, const ExperimentConfig& config) {
  Stopwatch clock;
  const Mesh& mesh = setup.mesh;
  const DofMaps dofs = build_spaces(mesh);
  FineReference f;
  f.flow = assemble_flow(mesh, dofs, config.flow, inflow_profile(config));
  f.flow_history = solve_flow(f.flow, config.time, Vector::Zero(dofs.num_velocity()));
  f.transport = make_transport_problem(mesh, dofs, config.transport_physics());
  f.report_steps = reporting_indices(config.time.n_steps);
  f.concentration = solve_transport(f.transport, config.time, project_scalar(mesh, dofs, constant(config.c0)),
                                    velocity_sequence(f.flow_history, config.time.n_steps), f.report_steps);
  std::vector<const Vector*> parts{&f.flow_history.last(), &f.flow_history.pressure.back()};
  for (const Vector& c : f.concentration.values) parts.push_back(&c);
  f.hash = hash_fields(parts);
  f.seconds = clock.lap();
  return f;
}

namespace {

struct CoarseFlowRun {
  std::string label;
  int modes = 0;  // 0 for the fine velocity
  std::vector<Vector> velocity;
  int dof_u = 0;
  std::optional<double> e_u;
  double seconds = 0.0;
  std::string error;
};

std::string format_error(const std::optional<double>& e) {
  if (!e) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", *e);
  return buf;
}

void log_line(const RunOptions& o, const std::string& msg) {
  static std::mutex m;
  if (o.log == nullptr) return;
  std::lock_guard<std::mutex> lock(m);
  *o.log << msg << std::endl;
}

void write_field_vtk(const std::string& path, const Mesh& mesh, const CoarsePartition& partition,
                     const Vector* concentration, const Vector* velocity, const Vector* pressure) {
  Vector domain(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) domain[c] = partition.cell_to_domain[c];
  VtkFields fields;
  if (concentration) fields.point_scalars.push_back({"c", concentration});
  if (velocity) fields.point_vectors.push_back({"u", velocity});
  if (pressure) fields.cell_scalars.push_back({"p", pressure});
  fields.cell_scalars.push_back({"domain", &domain});
  write_vtk(path, mesh, fields);
}

}  // namespace

ErrorReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  ErrorReport report;
  report.name = config.name;
  Stopwatch clock;

  Setup setup = build_setup(config);
  const Mesh& mesh = setup.mesh;
  const CoarsePartition& partition = setup.partition;
  const DofMaps dofs = build_spaces(mesh);
  report.phase_seconds["mesh"] = clock.lap();
  report.fine_cells = mesh.num_cells();
  report.fine_dof_u = fine_flow_dofs(mesh.num_cells(), kDim);
  report.fine_dof_c = fine_concentration_dofs(mesh.num_cells(), kDim);
  report.n_domains = partition.n_domains;
  log_line(options, "mesh: " + std::to_string(mesh.num_cells()) + " cells, h = " + std::to_string(mesh.h) + ", " +
                        std::to_string(partition.n_domains) + " domains");

  FineReference fine = solve_fine(setup, config);
  report.phase_seconds["fine"] = clock.lap();
  report.fine_hash = fine.hash;
  report.report_steps = fine.report_steps;
  const int n_steps = config.time.n_steps;
  const Vector& u_ref = fine.flow_history.last();
  log_line(options, "fine reference done in " + std::to_string(fine.seconds) + " s");

  // Velocity bases at the largest requested count; smaller counts use prefixes.
  VelocityBasisOptions vopt;
  vopt.type = config.velocity_type;
  vopt.viscosity = config.flow.viscosity;
  vopt.penalty = config.flow.penalty;
  vopt.max_modes = config.velocity_modes.back();
  vopt.threads = options.threads;
  VelocityMsBasis vbasis = build_velocity_basis(mesh, partition, vopt);
  double snap = 0.0, spec = 0.0;
  int available_u = vopt.max_modes;
  for (const auto& d : vbasis.domains) {
    snap += d.snapshot_seconds;
    spec += d.spectral_seconds;
    for (const auto& fam : d.families) available_u = std::min<int>(available_u, static_cast<int>(fam.modes.cols()));
  }
  const double velocity_basis_seconds = clock.lap();

  std::vector<CoarseFlowRun> flows;
  if (config.fine_velocity_rows) {
    CoarseFlowRun fine_run;
    fine_run.label = "fine";
    fine_run.velocity = velocity_sequence(fine.flow_history, n_steps);
    fine_run.dof_u = static_cast<int>(report.fine_dof_u);
    fine_run.e_u = 0.0;
    flows.push_back(std::move(fine_run));
  }
  {
    ProjectionRows ru_full;
    CoarseFlowOperators full;
    std::string setup_error;
    try {
      ru_full = velocity_projection(mesh, vbasis, available_u);
      full = project_flow(ru_full.matrix, pressure_projection(partition), fine.flow);
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    for (int mu : config.velocity_modes) {
      CoarseFlowRun run;
      run.label = std::to_string(mu);
      run.modes = mu;
      Stopwatch row_clock;
      try {
        if (!setup_error.empty()) throw Error(setup_error);
        if (mu > available_u)
          throw Error(std::to_string(mu) + " velocity modes requested but only " + std::to_string(available_u) +
                      " available in every family");
        std::vector<int> idx = rows_below(ru_full, mu);
        ProjectionRows ru = restrict_rows(ru_full, idx);
        CoarseFlowOperators ops = restrict_flow(full, idx);
        FieldHistory h = solve_coarse_flow(ops, config.time, Vector::Zero(ru.rows()));
        run.velocity = reconstruct(ru.matrix, h.values);
        run.dof_u = ru.rows() + partition.n_domains;
        run.e_u = relative_l2_error(mesh, run.velocity.back(), u_ref, FieldKind::Vector);
      } catch (const std::exception& e) {
        run.error = e.what();
      }
      run.seconds = row_clock.lap();
      log_line(options, "velocity M=" + run.label + ": e_u = " + format_error(run.e_u) +
                            (run.error.empty() ? "" : " (" + run.error + ")"));
      flows.push_back(std::move(run));
    }
  }
  const double coarse_flow_seconds = clock.lap();

  // Concentration bases: one for the elliptic variant, one per velocity otherwise.
  TransportBasisOptions topt;
  topt.type = config.concentration_type;
  topt.wall = config.wall;
  topt.variant = config.variant;
  topt.diffusion = config.diffusion;
  topt.robin = config.alpha;
  topt.penalty = config.penalty_c;
  topt.max_modes = config.concentration_modes.back();
  topt.threads = options.threads;
  topt.tau = config.time.tau();
  const bool per_velocity = config.variant == SnapshotVariant::TimeVelocity;
  std::vector<ConcentrationMsBasis> cbases;
  std::vector<ProjectionRows> rc_full;
  std::vector<std::string> cbasis_error;
  const int n_cbases = per_velocity ? static_cast<int>(flows.size()) : 1;
  for (int b = 0; b < n_cbases; ++b) {
    cbases.emplace_back();
    rc_full.emplace_back();
    cbasis_error.emplace_back();
    try {
      if (per_velocity) {
        if (!flows[b].error.empty()) throw Error("velocity failed: " + flows[b].error);
        topt.velocity = &flows[b].velocity.back();
      }
      cbases.back() = build_concentration_basis(mesh, partition, topt);
      for (const auto& d : cbases.back().domains) {
        snap += d.snapshot_seconds;
        spec += d.spectral_seconds;
      }
      rc_full.back() = concentration_projection(mesh, cbases.back(), topt.max_modes);
    } catch (const std::exception& e) {
      cbasis_error.back() = e.what();
    }
  }
  const double concentration_basis_seconds = clock.lap();
  report.phase_seconds["snapshots"] = snap;
  report.phase_seconds["spectral"] = spec;

  // Rows: every velocity run against every concentration count.
  const Vector c0 = project_scalar(mesh, dofs, constant(config.c0));
  struct Job {
    int flow;
    int mc;
  };
  std::vector<Job> jobs;
  for (int f = 0; f < static_cast<int>(flows.size()); ++f)
    for (int mc : config.concentration_modes) jobs.push_back({f, mc});
  report.rows.resize(jobs.size());
  const std::string type = std::string(to_string(config.velocity_type)) + "/" +
                           std::string(to_string(config.concentration_type));
  std::vector<std::vector<Vector>> last_fields(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), options.threads, [&](int j) {
    const CoarseFlowRun& flow = flows[jobs[j].flow];
    ReportRow& row = report.rows[j];
    row.type = type;
    row.variant = std::string(to_string(config.variant));
    row.mu = flow.label;
    row.mc = jobs[j].mc;
    row.dof_u = flow.dof_u;
    row.dof_u_formula = flow.modes > 0 ? velocity_coarse_dofs(config.velocity_type, partition.n_domains, flow.modes)
                                       : static_cast<int>(report.fine_dof_u);
    row.dof_c_formula = concentration_coarse_dofs(config.concentration_type, partition.n_domains, row.mc);
    row.e_u = flow.e_u;
    row.e_c.assign(fine.report_steps.size(), std::nullopt);
    row.fine_hash = fine.hash;
    Stopwatch row_clock;
    try {
      if (!flow.error.empty()) throw Error("velocity failed: " + flow.error);
      const int b = per_velocity ? jobs[j].flow : 0;
      if (!cbasis_error[b].empty()) throw Error("concentration basis failed: " + cbasis_error[b]);
      ProjectionRows rc = restrict_rows(rc_full[b], rows_below(rc_full[b], row.mc));
      row.dof_c = rc.rows();
      Vector ch0 = mass_projection(rc.matrix, fine.transport.mass, c0);
      FieldHistory h = solve_coarse_transport(fine.transport, rc.matrix, config.time, ch0, flow.velocity,
                                              fine.report_steps);
      std::vector<Vector> cms = reconstruct(rc.matrix, h.values);
      for (size_t k = 0; k < fine.report_steps.size(); ++k)
        row.e_c[k] = relative_l2_error(mesh, cms[k], fine.concentration.values[k], FieldKind::Scalar);
      last_fields[j] = std::move(cms);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    const double basis_share = velocity_basis_seconds + concentration_basis_seconds / n_cbases;
    row.seconds = row_clock.lap() + flow.seconds + basis_share;
    log_line(options, "row Mu=" + row.mu + " Mc=" + std::to_string(row.mc) + ": e_c(final) = " +
                          format_error(row.e_c.empty() ? std::nullopt : row.e_c.back()) +
                          (row.error.empty() ? "" : " (" + row.error + ")"));
  });
  report.phase_seconds["coarse"] = coarse_flow_seconds + clock.lap();
  for (const auto& row : report.rows)
    if (row.fine_hash != report.fine_hash) throw Error("fine reference changed between rows");

  if (options.write_outputs) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const std::string dir = config.out_dir + "/";
    {
      std::ofstream out(dir + "report.csv");
      write_report_csv(out, report, config.timings);
    }
    if (config.timings) {
      std::ofstream out(dir + "timings.csv");
      write_timings_csv(out, report);
    }
    if (config.write_eigenvalues) {
      std::ofstream ev(dir + "eigen_velocity.csv");
      write_velocity_eigenvalues(ev, vbasis);
      if (cbasis_error[0].empty()) {
        std::ofstream ec(dir + "eigen_concentration.csv");
        write_concentration_eigenvalues(ec, cbases[0]);
      }
    }
    if (config.write_vtk) {
      const Vector& p_ref = fine.flow_history.pressure.back();
      for (size_t k = 0; k < fine.report_steps.size(); ++k) {
        const std::string m = std::to_string(fine.report_steps[k]);
        write_field_vtk(dir + "fine_m" + m + ".vtk", mesh, partition, &fine.concentration.values[k], &u_ref, &p_ref);
      }
      // Multiscale fields of the last successful row (largest mode counts).
      for (int j = static_cast<int>(jobs.size()) - 1; j >= 0; --j) {
        if (last_fields[j].empty()) continue;
        const Vector& u_ms = flows[jobs[j].flow].velocity.back();
        for (size_t k = 0; k < last_fields[j].size(); ++k)
          write_field_vtk(dir + "ms_m" + std::to_string(fine.report_steps[k]) + ".vtk", mesh, partition,
                          &last_fields[j][k], &u_ms, nullptr);
        break;
      }
    }
  }
  return report;
}

void write_report_csv(std::ostream& out, const ErrorReport& report, bool timings) {
  out << "type,variant,Mu,Mc,dof_u_H,dof_c_H,e_u,e_c_m10,e_c_m20,e_c_m30,e_c_m40,seconds_total\n";
  char buf[64];
  for (const auto& row : report.rows) {
    out << row.type << ',' << row.variant << ',' << row.mu << ',' << row.mc << ',' << row.dof_u << ','
        << row.dof_c << ',';
    auto put = [&](const std::optional<double>& e) {
      if (!row.error.empty() || !e) {
        out << "nan";
        return;
      }
      std::snprintf(buf, sizeof buf, "%.6f", *e);
      out << buf;
    };
    put(row.e_u);
    for (size_t k = 0; k < 4; ++k) {
      out << ',';
      put(k < row.e_c.size() ? row.e_c[k] : std::nullopt);
    }
    std::snprintf(buf, sizeof buf, ",%.3f\n", timings ? row.seconds : 0.0);
    out << buf;
  }
}

void write_timings_csv(std::ostream& out, const ErrorReport& report) {
  out << "phase,seconds\n";
  char buf[64];
  for (const char* phase : {"mesh", "fine", "snapshots", "spectral", "coarse"}) {
    auto it = report.phase_seconds.find(phase);
    std::snprintf(buf, sizeof buf, "%s,%.3f\n", phase, it == report.phase_seconds.end() ? 0.0 : it->second);
    out << buf;
  }
}

}  // namespace thinms
