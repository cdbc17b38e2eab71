#include "thinms/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

namespace thinms {

std::string_view to_string(PartitionMode mode) {
  return mode == PartitionMode::Structured ? "structured" : "unstructured";
}

PartitionMode partition_mode_from_string(std::string_view text) {
  if (text == "structured") return PartitionMode::Structured;
  if (text == "unstructured") return PartitionMode::Unstructured;
  throw Error("unknown partition mode '" + std::string(text) + "'");
}

CoarsePartition make_partition(const Mesh& mesh, std::vector<int> cell_to_domain, PartitionMode mode) {
  if (static_cast<int>(cell_to_domain.size()) != mesh.num_cells()) throw Error("cell_to_domain has wrong length");
  CoarsePartition part;
  part.mode = mode;
  int n = 0;
  for (int d : cell_to_domain) {
    if (d < 0) throw Error("cell without a domain");
    n = std::max(n, d + 1);
  }
  part.n_domains = n;
  part.cell_to_domain = std::move(cell_to_domain);
  part.domain_cells.assign(n, {});
  part.interface_facets.assign(n, {});
  part.wall_facets.assign(n, {});
  part.domain_area.assign(n, 0.0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    int d = part.cell_to_domain[c];
    part.domain_cells[d].push_back(c);
    part.domain_area[d] += mesh.cell_area[c];
  }
  for (int d = 0; d < n; ++d)
    if (part.domain_cells[d].empty()) throw Error("domain " + std::to_string(d) + " is empty");

  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    int dp = part.cell_to_domain[facet.cells[0]];
    if (facet.is_boundary()) {
      if (facet.marker == FacetMarker::Wall)
        part.wall_facets[dp].push_back(f);
      else
        part.interface_facets[dp].push_back(f);
      continue;
    }
    int dm = part.cell_to_domain[facet.cells[1]];
    if (dp != dm) {
      part.interface_facets[dp].push_back(f);
      part.interface_facets[dm].push_back(f);
    }
  }
  return part;
}

namespace {

// Components of each domain, labelled per cell (component ids are local to the domain).
std::vector<int> component_labels(const Mesh& mesh, const std::vector<int>& cell_to_domain, std::vector<int>& counts,
                                  int n_domains) {
  std::vector<int> label(mesh.num_cells(), -1);
  counts.assign(n_domains, 0);
  std::vector<int> stack;
  for (int seed = 0; seed < mesh.num_cells(); ++seed) {
    if (label[seed] >= 0 || cell_to_domain[seed] < 0) continue;
    int d = cell_to_domain[seed];
    int comp = counts[d]++;
    label[seed] = comp;
    stack.push_back(seed);
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      for (int f : mesh.cell_facets[c]) {
        const Facet& facet = mesh.facets[f];
        if (facet.is_boundary()) continue;
        int other = facet.cells[0] == c ? facet.cells[1] : facet.cells[0];
        if (label[other] < 0 && cell_to_domain[other] == d) {
          label[other] = comp;
          stack.push_back(other);
        }
      }
    }
  }
  return label;
}

// Reassigns cells outside the largest component of their domain to a facet-adjacent domain.
void repair_connectivity(const Mesh& mesh, std::vector<int>& cell_to_domain, int n_domains) {
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<int> counts;
    auto label = component_labels(mesh, cell_to_domain, counts, n_domains);
    if (std::all_of(counts.begin(), counts.end(), [](int k) { return k <= 1; })) return;

    std::vector<std::vector<int>> sizes(n_domains);
    for (int d = 0; d < n_domains; ++d) sizes[d].assign(counts[d], 0);
    for (int c = 0; c < mesh.num_cells(); ++c) ++sizes[cell_to_domain[c]][label[c]];
    std::vector<int> keep(n_domains, 0);
    for (int d = 0; d < n_domains; ++d)
      keep[d] = static_cast<int>(std::max_element(sizes[d].begin(), sizes[d].end()) - sizes[d].begin());

    for (int c = 0; c < mesh.num_cells(); ++c)
      if (label[c] != keep[cell_to_domain[c]]) cell_to_domain[c] = -1;

    bool progress = true;
    while (progress) {
      progress = false;
      std::vector<int> next = cell_to_domain;
      for (int c = 0; c < mesh.num_cells(); ++c) {
        if (cell_to_domain[c] >= 0) continue;
        std::vector<int> votes(n_domains, 0);
        for (int f : mesh.cell_facets[c]) {
          const Facet& facet = mesh.facets[f];
          if (facet.is_boundary()) continue;
          int other = facet.cells[0] == c ? facet.cells[1] : facet.cells[0];
          if (cell_to_domain[other] >= 0) ++votes[cell_to_domain[other]];
        }
        auto best = std::max_element(votes.begin(), votes.end());
        if (*best > 0) {
          next[c] = static_cast<int>(best - votes.begin());
          progress = true;
        }
      }
      cell_to_domain.swap(next);
    }
    if (std::any_of(cell_to_domain.begin(), cell_to_domain.end(), [](int d) { return d < 0; }))
      throw Error("partition repair failed: cells unreachable from any domain");
  }
  std::vector<int> counts;
  component_labels(mesh, cell_to_domain, counts, n_domains);
  for (int d = 0; d < n_domains; ++d)
    if (counts[d] != 1)
      throw Error("partition repair failed: domain " + std::to_string(d) + " has " + std::to_string(counts[d]) +
                  " components");
}

double unit_random(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<int> grow_regions(const Mesh& mesh, int n_domains, std::uint64_t seed) {
  double xmin = std::numeric_limits<double>::max(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& p : mesh.nodes) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  std::mt19937_64 rng(seed);
  const double slab = (xmax - xmin) / n_domains;

  std::vector<Point> centroids(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) centroids[c] = mesh.centroid(c);

  std::vector<int> seeds;
  for (int k = 0; k < n_domains; ++k) {
    Point target(xmin + (k + 0.5 + 0.5 * (unit_random(rng) - 0.5)) * slab, ymin + unit_random(rng) * (ymax - ymin));
    int best = -1;
    double best_dist = std::numeric_limits<double>::max();
    for (int c = 0; c < mesh.num_cells(); ++c) {
      if (std::find(seeds.begin(), seeds.end(), c) != seeds.end()) continue;
      double d = (centroids[c] - target).squaredNorm();
      if (d < best_dist) {
        best_dist = d;
        best = c;
      }
    }
    seeds.push_back(best);
  }

  // Per-facet random weights make the grown interfaces rough.
  std::vector<double> weight(mesh.num_facets(), 0.0);
  for (int f = 0; f < mesh.num_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    double r = unit_random(rng);
    if (!facet.is_boundary())
      weight[f] = (centroids[facet.cells[0]] - centroids[facet.cells[1]]).norm() * (0.3 + 1.4 * r);
  }

  std::vector<double> dist(mesh.num_cells(), std::numeric_limits<double>::infinity());
  std::vector<int> owner(mesh.num_cells(), -1);
  using Entry = std::tuple<double, int, int>;  // distance, cell, domain
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (int k = 0; k < n_domains; ++k) {
    dist[seeds[k]] = 0.0;
    owner[seeds[k]] = k;
    queue.emplace(0.0, seeds[k], k);
  }
  while (!queue.empty()) {
    auto [d, c, k] = queue.top();
    queue.pop();
    if (d > dist[c] || owner[c] != k) continue;
    for (int f : mesh.cell_facets[c]) {
      const Facet& facet = mesh.facets[f];
      if (facet.is_boundary()) continue;
      int other = facet.cells[0] == c ? facet.cells[1] : facet.cells[0];
      double nd = d + weight[f];
      if (nd < dist[other]) {
        dist[other] = nd;
        owner[other] = k;
        queue.emplace(nd, other, k);
      }
    }
  }
  if (std::any_of(owner.begin(), owner.end(), [](int d) { return d < 0; }))
    throw Error("mesh is not facet-connected; region growing left cells unassigned");

  // Order domains along the channel so that domain ids increase with x.
  std::vector<double> mean_x(n_domains, 0.0);
  std::vector<int> count(n_domains, 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    mean_x[owner[c]] += centroids[c].x();
    ++count[owner[c]];
  }
  std::vector<int> order(n_domains);
  for (int k = 0; k < n_domains; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mean_x[a] / count[a] < mean_x[b] / count[b]; });
  std::vector<int> rank(n_domains);
  for (int k = 0; k < n_domains; ++k) rank[order[k]] = k;
  for (int& o : owner) o = rank[o];
  return owner;
}

}  // namespace

std::vector<int> domain_component_counts(const Mesh& mesh, const CoarsePartition& partition) {
  std::vector<int> counts;
  component_labels(mesh, partition.cell_to_domain, counts, partition.n_domains);
  return counts;
}

CoarsePartition partition_coarse(const Mesh& mesh, int n_domains, PartitionMode mode, std::uint64_t seed) {
  if (n_domains < 1) throw Error("n_domains must be at least 1");
  if (n_domains > 1 && n_domains > mesh.num_cells() / 20)
    throw Error("too many domains: at most one per 20 fine cells");

  std::vector<int> cell_to_domain(mesh.num_cells(), 0);
  if (n_domains > 1) {
    if (mode == PartitionMode::Structured) {
      double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
      for (const auto& p : mesh.nodes) {
        xmin = std::min(xmin, p.x());
        xmax = std::max(xmax, p.x());
      }
      const double slab = (xmax - xmin) / n_domains;
      for (int c = 0; c < mesh.num_cells(); ++c) {
        int d = static_cast<int>(std::floor((mesh.centroid(c).x() - xmin) / slab));
        cell_to_domain[c] = std::clamp(d, 0, n_domains - 1);
      }
    } else {
      cell_to_domain = grow_regions(mesh, n_domains, seed);
    }
    repair_connectivity(mesh, cell_to_domain, n_domains);
  }
  return make_partition(mesh, std::move(cell_to_domain), mode);
}

}  // namespace thinms
