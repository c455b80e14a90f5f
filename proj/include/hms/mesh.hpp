#pragma once

#include <array>
#include <vector>

#include "hms/geometry.hpp"

namespace hms {

// Conforming triangle mesh over a layered domain. Each structured cell is cut
// along its lower-left to upper-right diagonal; nodes on interfaces are shared
// by both layers so transmission continuity holds by construction.
struct Mesh {
  std::vector<Point> nodes;
  std::vector<std::array<int, 3>> tris; // CCW vertex indices
  std::vector<int> tri_layer;

  struct ExteriorEdge {
    int n0, n1;  // oriented along the boundary segment
    int tri;     // the single incident triangle
    int segment; // index into domain.exteriors
  };
  std::vector<ExteriorEdge> exterior_edges;

  struct InterfaceEdge {
    int n0, n1;
    int tri_a;   // triangle on the layer_a side of the interface
    int tri_b;   // triangle on the layer_b side
    int segment; // index into domain.interfaces
  };
  std::vector<InterfaceEdge> interface_edges;

  // layers owning each node (1 in a layer interior, 2 on an interface)
  std::vector<std::vector<int>> node_layers;

  double h_mesh = 0.0; // largest cell side, never exceeds the requested target

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_tris() const { return static_cast<int>(tris.size()); }
  // unknowns are interleaved per node: component j of node k sits at 2k+j
  int num_dofs() const { return 2 * num_nodes(); }
  int dof(int node, int comp) const { return 2 * node + comp; }

  double tri_area(int t) const;
  // constant gradients of the three nodal hat functions on triangle t
  std::array<Point, 3> tri_grads(int t) const;
};

Mesh triangulate(const LayeredDomain& domain, double h_target);

} // namespace hms
