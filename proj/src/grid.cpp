#include "kvwave/grid.hpp"

namespace kvwave {

GridPtr build_grid(int dim, const std::vector<double>& extents, const std::vector<int>& counts) {
  if (dim != 1 && dim != 2)
    fail(Err::ConfigInvalid, "dim must be 1 or 2, got " + std::to_string(dim));
  if (static_cast<int>(extents.size()) != dim || static_cast<int>(counts.size()) != dim)
    fail(Err::ConfigInvalid, "extents/counts must have one entry per axis");

  auto g = std::make_shared<Grid>();
  g->dim = dim;
  for (int a = 0; a < dim; ++a) {
    if (!(extents[a] > 0.0))
      fail(Err::NonPositiveExtent, "axis " + std::to_string(a) + " extent " + std::to_string(extents[a]));
    if (counts[a] < 3)
      fail(Err::TooFewNodes, "axis " + std::to_string(a) + " needs >= 3 interior nodes, got " +
                                 std::to_string(counts[a]));
    g->extent[a] = extents[a];
    g->count[a] = counts[a];
    g->spacing[a] = extents[a] / static_cast<double>(counts[a] + 1);

    g->axis_node_coords[a].resize(counts[a]);
    for (int i = 0; i < counts[a]; ++i) g->axis_node_coords[a][i] = (i + 1) * g->spacing[a];
    g->axis_face_coords[a].resize(counts[a] + 1);
    for (int j = 0; j <= counts[a]; ++j) g->axis_face_coords[a][j] = (j + 0.5) * g->spacing[a];
  }
  return g;
}

} // namespace kvwave
