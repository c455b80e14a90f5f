#include "hms/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hms {

namespace {

// Global axis lines: every rect bound is a line, and each gap between
// consecutive lines is subdivided to meet the target spacing. All layers then
// draw their grids from the same line set, so nodes on shared edges coincide
// bit for bit.
std::vector<double> axis_lines(std::vector<double> bounds, double h_target) {
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  std::vector<double> lines;
  lines.push_back(bounds.front());
  for (size_t k = 0; k + 1 < bounds.size(); ++k) {
    double a = bounds[k];
    double b = bounds[k + 1];
    int nsub = std::max(1, static_cast<int>(std::ceil((b - a) / h_target - 1e-12)));
    for (int i = 1; i < nsub; ++i) lines.push_back(a + (b - a) * i / nsub);
    lines.push_back(b);
  }
  return lines;
}

int line_index(const std::vector<double>& lines, double v) {
  auto it = std::lower_bound(lines.begin(), lines.end(), v);
  return static_cast<int>(it - lines.begin());
}

} // namespace

double Mesh::tri_area(int t) const {
  const auto& v = tris[t];
  const Point& a = nodes[v[0]];
  const Point& b = nodes[v[1]];
  const Point& c = nodes[v[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::array<Point, 3> Mesh::tri_grads(int t) const {
  const auto& v = tris[t];
  const Point& a = nodes[v[0]];
  const Point& b = nodes[v[1]];
  const Point& c = nodes[v[2]];
  double inv2A = 1.0 / (2.0 * tri_area(t));
  return {Point{(b.y - c.y) * inv2A, (c.x - b.x) * inv2A},
          Point{(c.y - a.y) * inv2A, (a.x - c.x) * inv2A},
          Point{(a.y - b.y) * inv2A, (b.x - a.x) * inv2A}};
}

Mesh triangulate(const LayeredDomain& domain, double h_target) {
  if (!(h_target > 0)) raise(ErrorKind::ValidationError, "mesh target size must be positive");

  std::vector<double> xb, yb;
  for (const LayerRect& r : domain.layers) {
    xb.push_back(r.x0);
    xb.push_back(r.x1);
    yb.push_back(r.y0);
    yb.push_back(r.y1);
  }
  const std::vector<double> X = axis_lines(std::move(xb), h_target);
  const std::vector<double> Y = axis_lines(std::move(yb), h_target);

  Mesh mesh;
  std::map<std::pair<int, int>, int> node_at; // (ix, iy) -> node id

  auto node = [&](int ix, int iy) {
    auto [it, inserted] = node_at.try_emplace({ix, iy}, mesh.num_nodes());
    if (inserted) {
      mesh.nodes.push_back({X[ix], Y[iy]});
      mesh.node_layers.emplace_back();
    }
    return it->second;
  };

  // cell (ix, iy) spans [X[ix], X[ix+1]] x [Y[iy], Y[iy+1]]; remember the two
  // triangles of every cell per layer for edge wiring below
  std::map<std::pair<int, int>, std::array<int, 2>> cell_tris;

  for (size_t L = 0; L < domain.layers.size(); ++L) {
    const LayerRect& r = domain.layers[L];
    int ix0 = line_index(X, r.x0), ix1 = line_index(X, r.x1);
    int iy0 = line_index(Y, r.y0), iy1 = line_index(Y, r.y1);

    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix) {
        int nd = node(ix, iy);
        auto& owners = mesh.node_layers[nd];
        if (owners.empty() || owners.back() != static_cast<int>(L))
          owners.push_back(static_cast<int>(L));
      }

    for (int iy = iy0; iy < iy1; ++iy)
      for (int ix = ix0; ix < ix1; ++ix) {
        int ll = node(ix, iy), lr = node(ix + 1, iy);
        int ur = node(ix + 1, iy + 1), ul = node(ix, iy + 1);
        int t0 = mesh.num_tris();
        mesh.tris.push_back({ll, lr, ur});
        mesh.tris.push_back({ll, ur, ul});
        mesh.tri_layer.push_back(static_cast<int>(L));
        mesh.tri_layer.push_back(static_cast<int>(L));
        cell_tris[{ix, iy}] = {t0, t0 + 1};
        mesh.h_mesh = std::max({mesh.h_mesh, X[ix + 1] - X[ix], Y[iy + 1] - Y[iy]});
      }
  }

  // walk each domain segment along its axis lines and emit mesh edges
  auto walk = [&](const AxisSegment& s, auto&& emit) {
    const std::vector<double>& along = s.vertical ? Y : X;
    int i0 = line_index(along, s.lo);
    int i1 = line_index(along, s.hi);
    int ipos = line_index(s.vertical ? X : Y, s.pos);
    for (int i = i0; i < i1; ++i) emit(ipos, i);
  };

  for (size_t si = 0; si < domain.exteriors.size(); ++si) {
    const ExteriorSegment& es = domain.exteriors[si];
    walk(es.seg, [&](int ipos, int i) {
      Mesh::ExteriorEdge e;
      e.segment = static_cast<int>(si);
      if (es.seg.vertical) {
        e.n0 = node(ipos, i);
        e.n1 = node(ipos, i + 1);
        // west edge borders the cell to its east and vice versa
        bool cell_east = es.side == Side::West;
        int cx = cell_east ? ipos : ipos - 1;
        e.tri = cell_east ? cell_tris.at({cx, i})[1] : cell_tris.at({cx, i})[0];
      } else {
        e.n0 = node(i, ipos);
        e.n1 = node(i + 1, ipos);
        bool cell_north = es.side == Side::South;
        int cy = cell_north ? ipos : ipos - 1;
        e.tri = cell_north ? cell_tris.at({i, cy})[0] : cell_tris.at({i, cy})[1];
      }
      mesh.exterior_edges.push_back(e);
    });
  }

  for (size_t si = 0; si < domain.interfaces.size(); ++si) {
    const InterfaceSegment& is = domain.interfaces[si];
    walk(is.seg, [&](int ipos, int i) {
      Mesh::InterfaceEdge e;
      e.segment = static_cast<int>(si);
      if (is.seg.vertical) {
        e.n0 = node(ipos, i);
        e.n1 = node(ipos, i + 1);
        e.tri_a = cell_tris.at({ipos - 1, i})[0]; // layer_a is the west side
        e.tri_b = cell_tris.at({ipos, i})[1];
      } else {
        e.n0 = node(i, ipos);
        e.n1 = node(i + 1, ipos);
        e.tri_a = cell_tris.at({i, ipos - 1})[1]; // layer_a is the south side
        e.tri_b = cell_tris.at({i, ipos})[0];
      }
      mesh.interface_edges.push_back(e);
    });
  }

  return mesh;
}

} // namespace hms
