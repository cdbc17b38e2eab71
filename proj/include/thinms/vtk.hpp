#pragma once

#include "thinms/mesh.hpp"
#include "thinms/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace thinms {

struct VtkField {
  std::string name;
  const Vector* values = nullptr;
};

/// Fields to export. Point fields use the DG layouts (concentration-layout
/// scalars, velocity-layout vectors); cell fields hold one value per cell.
struct VtkFields {
  std::vector<VtkField> point_scalars;
  std::vector<VtkField> point_vectors;
  std::vector<VtkField> cell_scalars;
};

/// Legacy ASCII unstructured grid. Every cell gets its own three points so
/// discontinuous fields are exported without averaging.
void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields, const std::string& title = "thinms");
void write_vtk(const std::string& path, const Mesh& mesh, const VtkFields& fields);

}  // namespace thinms
