#include "thinms/mesh.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace thinms {

namespace {

constexpr const char* kMagic = "thinms-mesh";
constexpr int kVersion = 1;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void expect_token(std::istream& in, const std::string& token) {
  std::string got;
  if (!(in >> got) || got != token) throw Error("mesh file: expected '" + token + "', got '" + got + "'");
}

template <class T>
T read_value(std::istream& in, const char* what) {
  T value;
  if (!(in >> value)) throw Error(std::string("mesh file: failed to read ") + what);
  return value;
}

}  // namespace

// Layout:
//   thinms-mesh 1
//   partition <mode|none> <n_domains>
//   nodes <N>            then N lines "x y"
//   cells <C>            then C lines "a b c"
//   facets <F>           then F lines "a b marker d+ d-"
// d+/d- are the domains of the K+/K- cells (-1 for the missing side or when
// no partition is stored).
void write_mesh(std::ostream& out, const Mesh& mesh, const CoarsePartition* partition) {
  out << kMagic << ' ' << kVersion << '\n';
  if (partition)
    out << "partition " << to_string(partition->mode) << ' ' << partition->n_domains << '\n';
  else
    out << "partition none 0\n";
  out << "nodes " << mesh.num_nodes() << '\n';
  for (const auto& p : mesh.nodes) out << format_double(p.x()) << ' ' << format_double(p.y()) << '\n';
  out << "cells " << mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "facets " << mesh.num_facets() << '\n';
  for (const auto& f : mesh.facets) {
    int dp = -1, dm = -1;
    if (partition) {
      dp = partition->cell_to_domain[f.cells[0]];
      if (!f.is_boundary()) dm = partition->cell_to_domain[f.cells[1]];
    }
    out << f.nodes[0] << ' ' << f.nodes[1] << ' ' << to_string(f.marker) << ' ' << dp << ' ' << dm << '\n';
  }
}

MeshFile read_mesh(std::istream& in) {
  expect_token(in, kMagic);
  int version = read_value<int>(in, "version");
  if (version != kVersion) throw Error("mesh file: unsupported version " + std::to_string(version));
  expect_token(in, "partition");
  auto mode_text = read_value<std::string>(in, "partition mode");
  int n_domains = read_value<int>(in, "domain count");

  expect_token(in, "nodes");
  int n_nodes = read_value<int>(in, "node count");
  std::vector<Point> nodes(n_nodes);
  for (auto& p : nodes) {
    p.x() = read_value<double>(in, "node x");
    p.y() = read_value<double>(in, "node y");
  }
  expect_token(in, "cells");
  int n_cells = read_value<int>(in, "cell count");
  std::vector<std::array<int, 3>> cells(n_cells);
  for (auto& c : cells)
    for (int& v : c) v = read_value<int>(in, "cell node");

  expect_token(in, "facets");
  int n_facets = read_value<int>(in, "facet count");
  std::vector<std::array<int, 2>> pairs(n_facets);
  std::vector<FacetMarker> markers(n_facets);
  std::vector<std::array<int, 2>> domains(n_facets);
  for (int f = 0; f < n_facets; ++f) {
    pairs[f][0] = read_value<int>(in, "facet node");
    pairs[f][1] = read_value<int>(in, "facet node");
    markers[f] = facet_marker_from_string(read_value<std::string>(in, "facet marker"));
    domains[f][0] = read_value<int>(in, "facet domain");
    domains[f][1] = read_value<int>(in, "facet domain");
  }

  // Markers are keyed by facet index since build_mesh keeps the file order.
  int cursor = 0;
  std::vector<FacetMarker> boundary_markers;
  for (int f = 0; f < n_facets; ++f)
    if (markers[f] != FacetMarker::Interior) boundary_markers.push_back(markers[f]);
  Mesh mesh = build_mesh(
      std::move(nodes), std::move(cells),
      [&](const Point&, const Point&) {
        if (cursor >= static_cast<int>(boundary_markers.size())) throw Error("mesh file: boundary marker mismatch");
        return boundary_markers[cursor++];
      },
      &pairs);
  for (int f = 0; f < n_facets; ++f)
    if (mesh.facets[f].marker != markers[f]) throw Error("mesh file: facet " + std::to_string(f) + " marker mismatch");
  validate(mesh);

  MeshFile file{std::move(mesh), std::nullopt};
  if (mode_text != "none") {
    std::vector<int> cell_to_domain(file.mesh.num_cells(), -1);
    for (int f = 0; f < n_facets; ++f) {
      const Facet& facet = file.mesh.facets[f];
      // build_mesh orders cells so that cells[0] < cells[1]; the file follows the same rule.
      cell_to_domain[facet.cells[0]] = domains[f][0];
      if (!facet.is_boundary()) cell_to_domain[facet.cells[1]] = domains[f][1];
    }
    file.partition = make_partition(file.mesh, std::move(cell_to_domain), partition_mode_from_string(mode_text));
    if (file.partition->n_domains != n_domains) throw Error("mesh file: domain count mismatch");
  }
  return file;
}

}  // namespace thinms
