#include "thinms/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

namespace thinms {

std::string_view to_string(FacetMarker marker) {
  switch (marker) {
    case FacetMarker::Interior: return "interior";
    case FacetMarker::Inflow: return "inflow";
    case FacetMarker::Outflow: return "outflow";
    case FacetMarker::Wall: return "wall";
  }
  return "interior";
}

FacetMarker facet_marker_from_string(std::string_view text) {
  if (text == "interior") return FacetMarker::Interior;
  if (text == "inflow") return FacetMarker::Inflow;
  if (text == "outflow") return FacetMarker::Outflow;
  if (text == "wall") return FacetMarker::Wall;
  throw Error("unknown facet marker '" + std::string(text) + "'");
}

Point Mesh::centroid(int cell) const {
  const auto& c = cells[cell];
  return (nodes[c[0]] + nodes[c[1]] + nodes[c[2]]) / 3.0;
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (double a : cell_area) sum += a;
  return sum;
}

int Mesh::local_vertex(int cell, int node) const {
  const auto& c = cells[cell];
  for (int k = 0; k < 3; ++k)
    if (c[k] == node) return k;
  return -1;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

}  // namespace

Mesh build_mesh(std::vector<Point> nodes, std::vector<std::array<int, 3>> cells,
                const std::function<FacetMarker(const Point&, const Point&)>& boundary_marker,
                const std::vector<std::array<int, 2>>* facet_order) {
  Mesh mesh;
  mesh.nodes = std::move(nodes);
  mesh.cells = std::move(cells);
  const int n_cells = mesh.num_cells();
  mesh.cell_area.resize(n_cells);
  mesh.cell_facets.assign(n_cells, {-1, -1, -1});

  for (int c = 0; c < n_cells; ++c) {
    auto& cell = mesh.cells[c];
    for (int v : cell)
      if (v < 0 || v >= mesh.num_nodes()) throw Error("cell " + std::to_string(c) + " references a missing node");
    double area = signed_area(mesh.nodes[cell[0]], mesh.nodes[cell[1]], mesh.nodes[cell[2]]);
    if (area <= 0.0) throw Error("cell " + std::to_string(c) + " is not counterclockwise or is degenerate");
    mesh.cell_area[c] = area;
  }

  std::unordered_map<std::uint64_t, int> facet_of_edge;
  facet_of_edge.reserve(3 * n_cells);
  if (facet_order) {
    mesh.facets.reserve(facet_order->size());
    for (const auto& pair : *facet_order) {
      auto [it, inserted] = facet_of_edge.emplace(edge_key(pair[0], pair[1]), mesh.num_facets());
      if (!inserted) throw Error("duplicate facet in facet list");
      Facet f;
      f.nodes = pair;
      f.cells = {-1, -1};
      mesh.facets.push_back(f);
    }
  }

  for (int c = 0; c < n_cells; ++c) {
    const auto& cell = mesh.cells[c];
    for (int k = 0; k < 3; ++k) {
      int a = cell[(k + 1) % 3];
      int b = cell[(k + 2) % 3];
      auto key = edge_key(a, b);
      auto it = facet_of_edge.find(key);
      int f;
      if (it == facet_of_edge.end()) {
        if (facet_order) throw Error("facet list is missing an edge of cell " + std::to_string(c));
        f = mesh.num_facets();
        facet_of_edge.emplace(key, f);
        Facet facet;
        facet.nodes = {a, b};
        mesh.facets.push_back(facet);
      } else {
        f = it->second;
      }
      Facet& facet = mesh.facets[f];
      if (facet.cells[0] < 0) {
        facet.cells[0] = c;
      } else if (facet.cells[1] < 0) {
        facet.cells[1] = c;
      } else {
        throw Error("edge shared by more than two cells");
      }
      mesh.cell_facets[c][k] = f;
    }
  }

  for (auto& facet : mesh.facets) {
    if (facet.cells[0] < 0) throw Error("facet list contains an edge that belongs to no cell");
    if (facet.cells[1] >= 0 && facet.cells[1] < facet.cells[0]) std::swap(facet.cells[0], facet.cells[1]);
    const Point& a = mesh.nodes[facet.nodes[0]];
    const Point& b = mesh.nodes[facet.nodes[1]];
    Point t = b - a;
    facet.length = t.norm();
    Point n(t.y() / facet.length, -t.x() / facet.length);
    Point mid = 0.5 * (a + b);
    if (n.dot(mid - mesh.centroid(facet.cells[0])) < 0.0) n = -n;
    facet.normal = n;
    facet.marker = facet.is_boundary() ? boundary_marker(a, b) : FacetMarker::Interior;
  }

  double area = mesh.total_area();
  mesh.h = n_cells > 0 ? std::sqrt(2.0 * area / n_cells) : 0.0;
  return mesh;
}

void validate(const Mesh& mesh) {
  std::vector<int> incidence(mesh.num_facets(), 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (!(mesh.cell_area[c] > 0.0)) throw Error("non-positive cell area");
    for (int f : mesh.cell_facets[c]) ++incidence[f];
  }
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    int expected = facet.is_boundary() ? 1 : 2;
    if (incidence[f] != expected) throw Error("facet " + std::to_string(f) + " has wrong cell adjacency");
    if (facet.is_boundary() == (facet.marker == FacetMarker::Interior))
      throw Error("facet " + std::to_string(f) + " marker does not match its boundary status");
  }
}

double ChannelParams::half_width(double x) const {
  if (profile == WallProfile::Straight) return mean_half_width;
  return mean_half_width + amplitude * std::sin(2.0 * std::numbers::pi * x / wavelength);
}

Mesh generate_channel(const ChannelParams& p) {
  if (!(p.length > 0.0) || !(p.mean_half_width > 0.0)) throw Error("channel length and half width must be positive");
  if (p.profile == WallProfile::Sinusoidal) {
    if (std::abs(p.amplitude) >= p.mean_half_width)
      throw Error("wall amplitude " + std::to_string(p.amplitude) + " pinches the channel closed (mean half width " +
                  std::to_string(p.mean_half_width) + ")");
    if (!(p.wavelength > 0.0)) throw Error("wall wavelength must be positive");
  }
  double max_width = 2.0 * (p.mean_half_width + (p.profile == WallProfile::Sinusoidal ? std::abs(p.amplitude) : 0.0));
  if (p.length < 5.0 * max_width)
    throw Error("channel is not thin: length must be at least 5x the maximum width");

  double h;
  if (p.target_cells > 0) {
    h = std::sqrt(2.0 * p.mean_half_width * p.length * 2.0 / p.target_cells);
  } else if (p.target_h > 0.0) {
    h = p.target_h;
  } else {
    throw Error("either target_cells or target_h must be set");
  }
  const int ny = std::max(2, static_cast<int>(std::lround(2.0 * p.mean_half_width / h)));
  const int nx = std::max(2, static_cast<int>(std::lround(p.length / h)));
  const double dx = p.length / nx;
  if (p.profile == WallProfile::Sinusoidal && p.wavelength < 4.0 * dx)
    throw Error("mesh size " + std::to_string(dx) + " is too coarse to resolve wall wavelength " +
                std::to_string(p.wavelength));

  std::vector<Point> nodes;
  nodes.reserve((nx + 1) * (ny + 1));
  for (int i = 0; i <= nx; ++i) {
    double x = i == nx ? p.length : i * dx;
    double hw = p.half_width(x);
    for (int j = 0; j <= ny; ++j) nodes.emplace_back(x, p.centerline + hw * (2.0 * j / ny - 1.0));
  }
  auto id = [ny](int i, int j) { return i * (ny + 1) + j; };

  std::mt19937_64 rng(p.seed);
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * nx * ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      int n00 = id(i, j), n10 = id(i + 1, j), n01 = id(i, j + 1), n11 = id(i + 1, j + 1);
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      bool flip = u < p.flip_fraction;
      if (!flip) {
        cells.push_back({n00, n10, n11});
        cells.push_back({n00, n11, n01});
      } else {
        cells.push_back({n00, n10, n01});
        cells.push_back({n10, n11, n01});
      }
    }
  }

  const double tol = 1e-12 * p.length;
  auto marker = [&](const Point& a, const Point& b) {
    if (std::abs(a.x()) < tol && std::abs(b.x()) < tol) {
      Point mid = 0.5 * (a + b);
      return (mid - p.inlet_center).norm() <= p.inlet_radius ? FacetMarker::Inflow : FacetMarker::Wall;
    }
    if (std::abs(a.x() - p.length) < tol && std::abs(b.x() - p.length) < tol) return FacetMarker::Outflow;
    return FacetMarker::Wall;
  };
  Mesh mesh = build_mesh(std::move(nodes), std::move(cells), marker);
  validate(mesh);
  return mesh;
}

}  // namespace thinms
