#include "support.hpp"
#include "thinms/harness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace thinms;

namespace {

// Edge-midpoint rule: exact for the quadratic integrand |f_h|^2 on P1 cells.
double l2_squared(const Mesh& mesh, const Vector& v, int components) {
  double sum = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int comp = 0; comp < components; ++comp) {
      const int base = 3 * (components * c + comp);
      for (int e = 0; e < 3; ++e) {
        const double mid = 0.5 * (v[base + e] + v[base + (e + 1) % 3]);
        sum += mesh.cell_area[c] / 3.0 * mid * mid;
      }
    }
  return sum;
}

Vector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

ExperimentConfig tiny() {
  std::istringstream in(
      "name = tiny\n[geometry]\nlength = 1\ncenterline = 0.05\nhalf_width = 0.05\ncells = 400\n"
      "inlet_y = 0.05\ninlet_radius = 0.05\n[partition]\ndomains = 2\n[time]\nt_max = 0.2\nsteps = 8\n"
      "[basis]\nvelocity_modes = 2,4\nconcentration_modes = 1,2\nfine_velocity = true\n[output]\ntimings = false\n");
  return parse_config(in);
}

}  // namespace

TEST_CASE("inflow profile values") {
  const VectorFn g = inflow_profile(1.0, 2, Point(0.0, 0.05), 0.05);
  CHECK(g(Point(0.0, 0.05)).x() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g(Point(0.0, 0.05)).y() == 0.0);
  CHECK(std::abs(g(Point(0.0, 0.0)).x()) < 1e-14);
  CHECK(g(Point(0.0, 0.11)).x() == 0.0);
  CHECK(inflow_profile(3.0, 4, Point(0, 0), 1.0)(Point(0, 0.5)).x() == doctest::Approx(3.0 * 1.5 * (1 - 0.0625)));
}

TEST_CASE("inflow mean over a 2D inlet segment is u_in (n + 2) / (n + 1)") {
  // The (n + 2) / n factor normalizes the mean over a disk; across a segment
  // the mean is (n + 2) / (n + 1), i.e. 4/3 for the parabola.
  for (int n : {1, 2, 4}) {
    const VectorFn g = inflow_profile(1.0, n, Point(0.0, 0.0), 1.0);
    const int panels = 2000;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double a = -1.0 + 2.0 * i / panels, b = a + 2.0 / panels;
      // Simpson on each panel; exact for the polynomial pieces with even n.
      sum += (b - a) / 6.0 * (g(Point(0, a)).x() + 4.0 * g(Point(0, 0.5 * (a + b))).x() + g(Point(0, b)).x());
    }
    CHECK(sum / 2.0 == doctest::Approx((n + 2.0) / (n + 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("relative L2 error") {
  const Mesh mesh = fixtures::channel8(true, 0.5);
  const Vector ref = random_vector(3 * mesh.num_cells(), 1);
  CHECK(*relative_l2_error(mesh, ref, ref, FieldKind::Scalar) == 0.0);
  CHECK(*relative_l2_error(mesh, 2.0 * ref, ref, FieldKind::Scalar) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK_FALSE(relative_l2_error(mesh, ref, Vector::Zero(ref.size()), FieldKind::Scalar).has_value());

  const Vector ms = random_vector(3 * mesh.num_cells(), 2);
  const double expected = 100.0 * std::sqrt(l2_squared(mesh, ms - ref, 1) / l2_squared(mesh, ref, 1));
  CHECK(std::abs(*relative_l2_error(mesh, ms, ref, FieldKind::Scalar) - expected) < 1e-10);

  const Vector uref = random_vector(6 * mesh.num_cells(), 3), ums = random_vector(6 * mesh.num_cells(), 4);
  const double uexp = 100.0 * std::sqrt(l2_squared(mesh, ums - uref, 2) / l2_squared(mesh, uref, 2));
  CHECK(std::abs(*relative_l2_error(mesh, ums, uref, FieldKind::Vector) - uexp) < 1e-10);
}

TEST_CASE("field hash is order and value sensitive") {
  const Vector a = random_vector(5, 1), b = random_vector(5, 2);
  CHECK(hash_fields({&a, &b}) == hash_fields({&a, &b}));
  CHECK(hash_fields({&a, &b}) != hash_fields({&b, &a}));
  Vector c = a;
  c[3] = std::nextafter(c[3], 2.0);
  CHECK(hash_fields({&c}) != hash_fields({&a}));
}

TEST_CASE("setup reads a stored mesh and partition") {
  const ExperimentConfig base = tiny();
  const Setup generated = build_setup(base);
  const auto dir = std::filesystem::temp_directory_path() / "thinms_harness_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "mesh.txt").string();
  {
    std::ofstream out(path);
    write_mesh(out, generated.mesh, &generated.partition);
  }
  ExperimentConfig from_file = base;
  from_file.mesh_file = path;
  const Setup read = build_setup(from_file);
  CHECK(read.mesh.num_cells() == generated.mesh.num_cells());
  CHECK(read.partition.cell_to_domain == generated.partition.cell_to_domain);
}

TEST_CASE("experiment report: DOF bookkeeping, shared fine reference and determinism") {
  ExperimentConfig cfg = tiny();
  RunOptions opt;
  opt.write_outputs = false;
  const ErrorReport r1 = run_experiment(cfg, opt);
  const int cells = build_setup(cfg).mesh.num_cells();
  CHECK(r1.fine_cells == cells);
  CHECK(r1.fine_dof_u == 7 * cells);
  CHECK(r1.fine_dof_c == 3 * cells);
  CHECK(r1.report_steps == std::vector<int>{2, 4, 6, 8});
  // Two velocity counts plus the fine velocity, times two concentration counts.
  REQUIRE(r1.rows.size() == 6);
  for (const auto& row : r1.rows) {
    CAPTURE(row.mu);
    CHECK(row.error.empty());
    CHECK(row.dof_c == row.dof_c_formula);
    if (row.mu != "fine") CHECK(row.dof_u == row.dof_u_formula);
    CHECK(row.fine_hash == r1.fine_hash);
    REQUIRE(row.e_c.size() == 4);
    for (const auto& e : row.e_c) CHECK((e && *e >= 0.0));
  }
  std::ostringstream csv1, csv2;
  write_report_csv(csv1, r1, false);
  write_report_csv(csv2, run_experiment(cfg, opt), false);
  CHECK(csv1.str() == csv2.str());
  CHECK(csv1.str().rfind("type,variant,Mu,Mc,dof_u_H,dof_c_H,e_u,e_c_m10,e_c_m20,e_c_m30,e_c_m40,seconds_total\n", 0) ==
        0);
}
