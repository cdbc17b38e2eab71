#include "thinms/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace thinms {

namespace {

void check(const VtkField& f, Eigen::Index expected) {
  if (f.values == nullptr || f.values->size() != expected)
    throw Error("VTK field '" + f.name + "' has wrong size");
  for (char ch : f.name)
    if (ch == ' ') throw Error("VTK field names cannot contain spaces: '" + f.name + "'");
}

}  // namespace

void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields, const std::string& title) {
  const int nc = mesh.num_cells();
  for (const auto& f : fields.point_scalars) check(f, 3 * nc);
  for (const auto& f : fields.point_vectors) check(f, 6 * nc);
  for (const auto& f : fields.cell_scalars) check(f, nc);

  char buf[128];
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 3 * nc << " double\n";
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < 3; ++k) {
      const Point& p = mesh.nodes[mesh.cells[c][k]];
      std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", p.x(), p.y());
      out << buf;
    }
  out << "CELLS " << nc << ' ' << 4 * nc << '\n';
  for (int c = 0; c < nc; ++c) out << "3 " << 3 * c << ' ' << 3 * c + 1 << ' ' << 3 * c + 2 << '\n';
  out << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) out << "5\n";

  if (!fields.point_scalars.empty() || !fields.point_vectors.empty()) {
    out << "POINT_DATA " << 3 * nc << '\n';
    for (const auto& f : fields.point_scalars) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (int i = 0; i < 3 * nc; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g\n", (*f.values)[i]);
        out << buf;
      }
    }
    for (const auto& f : fields.point_vectors) {
      out << "VECTORS " << f.name << " double\n";
      for (int c = 0; c < nc; ++c)
        for (int k = 0; k < 3; ++k) {
          std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", (*f.values)[6 * c + k], (*f.values)[6 * c + 3 + k]);
          out << buf;
        }
    }
  }
  if (!fields.cell_scalars.empty()) {
    out << "CELL_DATA " << nc << '\n';
    for (const auto& f : fields.cell_scalars) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (int c = 0; c < nc; ++c) {
        std::snprintf(buf, sizeof buf, "%.17g\n", (*f.values)[c]);
        out << buf;
      }
    }
  }
}

void write_vtk(const std::string& path, const Mesh& mesh, const VtkFields& fields) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_vtk(out, mesh, fields);
}

}  // namespace thinms
