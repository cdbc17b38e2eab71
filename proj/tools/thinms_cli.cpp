// Command-line driver: mesh, fine, basis, coarse and run subcommands.
#include "thinms/harness.hpp"
#include "thinms/vtk.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace thinms;

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  int threads = 1;
  long long seed = -1;
  bool no_timings = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "INI experiment file");
  app->add_option("--preset", c.preset, "built-in preset name (see `thinms presets`)");
  app->add_option("--out", c.out, "output directory (overrides [output] dir)");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "overrides the partition and mesh seeds");
  app->add_flag("--no-timings", c.no_timings, "write zero timings for reproducible output");
}

ExperimentConfig resolve(const Common& c) {
  if (!c.config.empty() && !c.preset.empty()) throw Error("use either --config or --preset, not both");
  ExperimentConfig cfg = !c.config.empty() ? load_config(c.config)
                         : !c.preset.empty() ? preset(c.preset)
                                             : throw Error("one of --config or --preset is required");
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.seed >= 0) {
    cfg.partition_seed = static_cast<std::uint64_t>(c.seed);
    cfg.geometry.seed = static_cast<std::uint64_t>(c.seed);
  }
  if (c.no_timings) cfg.timings = false;
  cfg.validate();
  return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
  std::filesystem::create_directories(cfg.out_dir);
  return cfg.out_dir + "/" + file;
}

int cmd_mesh(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  Setup s = build_setup(cfg);
  const std::string path = out_path(cfg, "mesh.txt");
  std::ofstream out(path);
  write_mesh(out, s.mesh, &s.partition);
  std::cout << "wrote " << path << ": " << s.mesh.num_cells() << " cells, " << s.partition.n_domains
            << " domains, h = " << s.mesh.h << '\n';
  return 0;
}

int cmd_fine(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  Setup s = build_setup(cfg);
  FineReference f = solve_fine(s, cfg);
  std::ofstream csv(out_path(cfg, "fine_summary.csv"));
  csv << "step,time,mass_c,l2_c\n";
  SparseMatrix m = f.transport.mass;
  Vector ones = Vector::Ones(m.rows());
  for (size_t k = 0; k < f.concentration.steps.size(); ++k) {
    const Vector& c_k = f.concentration.values[k];
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.12g,%.12g\n", f.concentration.steps[k],
                  cfg.time.time(f.concentration.steps[k]), ones.dot(m * c_k), std::sqrt(c_k.dot(m * c_k)));
    csv << buf;
  }
  Vector domain(s.mesh.num_cells());
  for (int i = 0; i < s.mesh.num_cells(); ++i) domain[i] = s.partition.cell_to_domain[i];
  for (size_t k = 0; k < f.concentration.steps.size(); ++k) {
    VtkFields fields;
    fields.point_scalars.push_back({"c", &f.concentration.values[k]});
    fields.point_vectors.push_back({"u", &f.flow_history.last()});
    fields.cell_scalars.push_back({"p", &f.flow_history.pressure.back()});
    fields.cell_scalars.push_back({"domain", &domain});
    write_vtk(out_path(cfg, "fine_m" + std::to_string(f.concentration.steps[k]) + ".vtk"), s.mesh, fields);
  }
  std::printf("fine reference: %d cells, flow steady at step %d, hash %016llx, %.2f s\n", s.mesh.num_cells(),
              f.flow_history.steady_step, static_cast<unsigned long long>(f.hash), f.seconds);
  return 0;
}

int cmd_basis(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  if (cfg.variant == SnapshotVariant::TimeVelocity)
    throw Error("the basis subcommand builds elliptic concentration bases only; use `run` for time_velocity");
  Setup s = build_setup(cfg);
  VelocityBasisOptions vo;
  vo.type = cfg.velocity_type;
  vo.viscosity = cfg.flow.viscosity;
  vo.penalty = cfg.flow.penalty;
  vo.max_modes = cfg.velocity_modes.back();
  vo.threads = c.threads;
  VelocityMsBasis vb = build_velocity_basis(s.mesh, s.partition, vo);
  TransportBasisOptions to;
  to.type = cfg.concentration_type;
  to.wall = cfg.wall;
  to.diffusion = cfg.diffusion;
  to.robin = cfg.alpha;
  to.penalty = cfg.penalty_c;
  to.max_modes = cfg.concentration_modes.back();
  to.threads = c.threads;
  ConcentrationMsBasis cb = build_concentration_basis(s.mesh, s.partition, to);
  std::ofstream ev(out_path(cfg, "eigen_velocity.csv"));
  write_velocity_eigenvalues(ev, vb);
  std::ofstream ec(out_path(cfg, "eigen_concentration.csv"));
  write_concentration_eigenvalues(ec, cb);
  std::ofstream sum(out_path(cfg, "basis_summary.csv"));
  sum << "field,domain,family,snapshots,rank,modes\n";
  for (const auto& d : vb.domains)
    for (size_t r = 0; r < d.families.size(); ++r)
      sum << "u," << d.domain.id << ',' << r << ',' << d.families[r].snapshots.cols() << ',' << d.families[r].rank
          << ',' << d.families[r].modes.cols() << '\n';
  for (const auto& d : cb.domains)
    for (size_t r = 0; r < d.families.size(); ++r)
      sum << "c," << d.domain.id << ',' << d.family_ids[r] << ',' << d.families[r].snapshots.cols() << ','
          << d.families[r].rank << ',' << d.families[r].modes.cols() << '\n';
  std::cout << "wrote eigenvalue and basis summaries to " << cfg.out_dir << '\n';
  return 0;
}

int cmd_coarse(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  if (cfg.variant == SnapshotVariant::TimeVelocity)
    throw Error("the coarse subcommand supports elliptic concentration bases only; use `run`");
  Setup s = build_setup(cfg);
  const DofMaps dofs = build_spaces(s.mesh);
  FlowOperators flow = assemble_flow(s.mesh, dofs, cfg.flow, inflow_profile(cfg));
  TransportProblem transport = make_transport_problem(s.mesh, dofs, cfg.transport_physics());
  VelocityBasisOptions vo;
  vo.type = cfg.velocity_type;
  vo.viscosity = cfg.flow.viscosity;
  vo.penalty = cfg.flow.penalty;
  vo.max_modes = cfg.velocity_modes.back();
  vo.threads = c.threads;
  VelocityMsBasis vb = build_velocity_basis(s.mesh, s.partition, vo);
  TransportBasisOptions to;
  to.type = cfg.concentration_type;
  to.wall = cfg.wall;
  to.diffusion = cfg.diffusion;
  to.robin = cfg.alpha;
  to.penalty = cfg.penalty_c;
  to.max_modes = cfg.concentration_modes.back();
  to.threads = c.threads;
  ConcentrationMsBasis cb = build_concentration_basis(s.mesh, s.partition, to);
  const SparseMatrix rp = pressure_projection(s.partition);
  const Vector c0 = project_scalar(s.mesh, dofs, constant(cfg.c0));
  const std::vector<int> steps = reporting_indices(cfg.time.n_steps);

  std::ofstream csv(out_path(cfg, "coarse_summary.csv"));
  csv << "Mu,Mc,dof_u_H,dof_c_H,step,mass_c\n";
  Vector ones = Vector::Ones(dofs.num_concentration());
  for (int mu : cfg.velocity_modes) {
    ProjectionRows ru = velocity_projection(s.mesh, vb, mu);
    FieldHistory fh = solve_coarse_flow(project_flow(ru.matrix, rp, flow), cfg.time, Vector::Zero(ru.rows()));
    std::vector<Vector> u_ms = reconstruct(ru.matrix, fh.values);
    for (int mc : cfg.concentration_modes) {
      ProjectionRows rc = concentration_projection(s.mesh, cb, mc);
      Vector ch0 = mass_projection(rc.matrix, transport.mass, c0);
      FieldHistory ch = solve_coarse_transport(transport, rc.matrix, cfg.time, ch0, u_ms, steps);
      std::vector<Vector> cms = reconstruct(rc.matrix, ch.values);
      for (size_t k = 0; k < steps.size(); ++k) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.12g\n", mu, mc, ru.rows() + s.partition.n_domains,
                      rc.rows(), steps[k], ones.dot(transport.mass * cms[k]));
        csv << buf;
      }
      if (cfg.write_vtk && mu == cfg.velocity_modes.back() && mc == cfg.concentration_modes.back())
        for (size_t k = 0; k < steps.size(); ++k) {
          VtkFields fields;
          fields.point_scalars.push_back({"c", &cms[k]});
          fields.point_vectors.push_back({"u", &u_ms.back()});
          write_vtk(out_path(cfg, "ms_m" + std::to_string(steps[k]) + ".vtk"), s.mesh, fields);
        }
    }
  }
  std::cout << "wrote " << cfg.out_dir << "/coarse_summary.csv\n";
  return 0;
}

int cmd_run(const Common& c) {
  ExperimentConfig cfg = resolve(c);
  RunOptions opt;
  opt.threads = c.threads;
  opt.log = &std::cerr;
  ErrorReport report = run_experiment(cfg, opt);
  write_report_csv(std::cout, report, cfg.timings);
  int failed = 0;
  for (const auto& row : report.rows)
    if (!row.error.empty()) {
      std::cerr << "row Mu=" << row.mu << " Mc=" << row.mc << " failed: " << row.error << '\n';
      ++failed;
    }
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale DG solver for flow and transport in thin channels"};
  app.require_subcommand(1);
  Common common;
  auto* mesh = app.add_subcommand("mesh", "generate and partition the mesh; writes mesh.txt");
  auto* fine = app.add_subcommand("fine", "solve the fine reference; writes VTK and fine_summary.csv");
  auto* basis = app.add_subcommand("basis", "build multiscale bases; writes eigenvalue CSVs");
  auto* coarse = app.add_subcommand("coarse", "coarse solves without a fine reference");
  auto* run = app.add_subcommand("run", "full experiment with error report");
  for (auto* sub : {mesh, fine, basis, coarse, run}) add_common(sub, common);
  auto* presets = app.add_subcommand("presets", "list built-in presets");
  std::string show;
  auto* show_cmd = app.add_subcommand("preset", "print a built-in preset as INI");
  show_cmd->add_option("name", show)->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*presets) {
      for (const auto& n : preset_names()) std::cout << n << '\n';
      return 0;
    }
    if (*show_cmd) {
      std::cout << preset_text(show);
      return 0;
    }
    if (*mesh) return cmd_mesh(common);
    if (*fine) return cmd_fine(common);
    if (*basis) return cmd_basis(common);
    if (*coarse) return cmd_coarse(common);
    if (*run) return cmd_run(common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
