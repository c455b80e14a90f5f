#include "hms/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace hms {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_point(const Point& p) {
  std::ostringstream os;
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

bool interiors_overlap(const LayerRect& a, const LayerRect& b) {
  return std::max(a.x0, b.x0) < std::min(a.x1, b.x1) &&
         std::max(a.y0, b.y0) < std::min(a.y1, b.y1);
}

// Shared edge of positive length between two layers, if any. Coordinates must
// coincide exactly; near-misses are treated as disjoint on purpose.
std::optional<InterfaceSegment> shared_edge(const std::vector<LayerRect>& layers, int ia, int ib) {
  const LayerRect& a = layers[ia];
  const LayerRect& b = layers[ib];
  // vertical contact: a west of b or b west of a
  for (auto [iw, ie] : {std::pair{ia, ib}, std::pair{ib, ia}}) {
    const LayerRect& w = layers[iw];
    const LayerRect& e = layers[ie];
    if (w.x1 == e.x0) {
      double lo = std::max(w.y0, e.y0);
      double hi = std::min(w.y1, e.y1);
      if (hi > lo)
        return InterfaceSegment{AxisSegment{true, w.x1, lo, hi}, std::min(ia, ib), std::max(ia, ib)};
    }
  }
  // horizontal contact: one layer south of the other
  for (auto [is, in] : {std::pair{ia, ib}, std::pair{ib, ia}}) {
    const LayerRect& s = layers[is];
    const LayerRect& n = layers[in];
    if (s.y1 == n.y0) {
      double lo = std::max(s.x0, n.x0);
      double hi = std::min(s.x1, n.x1);
      if (hi > lo)
        return InterfaceSegment{AxisSegment{false, s.y1, lo, hi}, std::min(ia, ib), std::max(ia, ib)};
    }
  }
  (void)a;
  (void)b;
  return std::nullopt;
}

// Quadrant coverage of a closed rect around p, bits: 0 NE, 1 NW, 2 SW, 3 SE.
// Layers with disjoint interiors produce disjoint masks, so the union's
// interior angle at p is popcount * pi/2.
unsigned quadrant_mask(const LayerRect& r, const Point& p) {
  unsigned m = 0;
  bool east = r.x0 <= p.x && p.x < r.x1;
  bool west = r.x0 < p.x && p.x <= r.x1;
  bool north = r.y0 <= p.y && p.y < r.y1;
  bool south = r.y0 < p.y && p.y <= r.y1;
  if (east && north) m |= 1u;
  if (west && north) m |= 2u;
  if (west && south) m |= 4u;
  if (east && south) m |= 8u;
  return m;
}

// A mask is contiguous when its set bits form one cyclic run of quadrants.
bool mask_contiguous(unsigned m) {
  if (m == 0 || m == 0xFu) return true;
  // rotate so that bit 0 is the start of a run
  for (int r = 0; r < 4; ++r) {
    unsigned rot = ((m >> r) | (m << (4 - r))) & 0xFu;
    if ((rot & 1u) && !(rot & 8u)) {
      // run must be 1, 11 or 111 from bit 0 without holes
      if (rot == 1u || rot == 3u || rot == 7u) return true;
    }
  }
  return false;
}

struct CornerSample {
  Point p;
  std::vector<std::pair<int, unsigned>> layer_masks; // nonzero masks only
  unsigned total_mask = 0;
};

struct DerivedGeometry {
  std::vector<InterfaceSegment> interfaces;
  std::vector<ExteriorSegment> exteriors;
  std::vector<std::pair<int, int>> overlaps;
  bool connected = true;
  std::vector<Point> cross_points;
  std::vector<CornerSample> corners; // every distinct rect corner coordinate
};

// Closed-segment intersection between two axis-parallel segments; returns a
// witness point when the closures meet.
std::optional<Point> segments_touch(const AxisSegment& u, const AxisSegment& v) {
  if (u.vertical == v.vertical) {
    if (u.pos != v.pos) return std::nullopt;
    double lo = std::max(u.lo, v.lo);
    double hi = std::min(u.hi, v.hi);
    if (lo > hi) return std::nullopt;
    return u.vertical ? Point{u.pos, lo} : Point{lo, u.pos};
  }
  const AxisSegment& ver = u.vertical ? u : v;
  const AxisSegment& hor = u.vertical ? v : u;
  if (hor.lo <= ver.pos && ver.pos <= hor.hi && ver.lo <= hor.pos && hor.pos <= ver.hi)
    return Point{ver.pos, hor.pos};
  return std::nullopt;
}

DerivedGeometry derive_geometry(const std::vector<LayerRect>& layers) {
  DerivedGeometry g;
  const int n = static_cast<int>(layers.size());

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (interiors_overlap(layers[i], layers[j])) g.overlaps.emplace_back(i, j);

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (auto s = shared_edge(layers, i, j)) g.interfaces.push_back(*s);

  // connectivity over the contact graph
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& s : g.interfaces) parent[find(s.layer_a)] = find(s.layer_b);
  // overlapping layers are also "connected"; without this a degenerate input
  // would report both overlap and disconnection for the same pair
  for (const auto& [i, j] : g.overlaps) parent[find(i)] = find(j);
  for (int i = 0; i < n; ++i)
    if (find(i) != find(0)) g.connected = false;

  // cross points: any contact between closures of distinct interfaces
  for (size_t i = 0; i < g.interfaces.size(); ++i)
    for (size_t j = i + 1; j < g.interfaces.size(); ++j)
      if (auto p = segments_touch(g.interfaces[i].seg, g.interfaces[j].seg))
        g.cross_points.push_back(*p);

  // exterior pieces: each rect edge minus the interface intervals on it
  for (int L = 0; L < n; ++L) {
    const LayerRect& r = layers[L];
    struct Edge {
      bool vertical;
      double pos, lo, hi;
      Side side;
    };
    const Edge edges[4] = {
        {false, r.y0, r.x0, r.x1, Side::South},
        {false, r.y1, r.x0, r.x1, Side::North},
        {true, r.x0, r.y0, r.y1, Side::West},
        {true, r.x1, r.y0, r.y1, Side::East},
    };
    for (const Edge& e : edges) {
      std::vector<std::pair<double, double>> holes;
      for (const auto& s : g.interfaces) {
        if (s.layer_a != L && s.layer_b != L) continue;
        if (s.seg.vertical != e.vertical || s.seg.pos != e.pos) continue;
        double lo = std::max(s.seg.lo, e.lo);
        double hi = std::min(s.seg.hi, e.hi);
        if (hi > lo) holes.emplace_back(lo, hi);
      }
      std::sort(holes.begin(), holes.end());
      double cur = e.lo;
      for (const auto& [hlo, hhi] : holes) {
        if (hlo > cur)
          g.exteriors.push_back({AxisSegment{e.vertical, e.pos, cur, hlo}, L, e.side});
        cur = std::max(cur, hhi);
      }
      if (cur < e.hi)
        g.exteriors.push_back({AxisSegment{e.vertical, e.pos, cur, e.hi}, L, e.side});
    }
  }

  // distinct rect corner coordinates with per-layer quadrant coverage
  std::map<std::pair<double, double>, CornerSample> corners;
  for (const LayerRect& r : layers) {
    for (Point p : {Point{r.x0, r.y0}, Point{r.x1, r.y0}, Point{r.x1, r.y1}, Point{r.x0, r.y1}}) {
      auto& c = corners[{p.x, p.y}];
      c.p = p;
    }
  }
  for (auto& [key, c] : corners) {
    for (int L = 0; L < n; ++L) {
      unsigned m = quadrant_mask(layers[L], c.p);
      if (m) {
        c.layer_masks.emplace_back(L, m);
        c.total_mask |= m;
      }
    }
    g.corners.push_back(c);
  }
  return g;
}

void validate_rects(const std::vector<LayerRect>& layers) {
  if (layers.empty()) raise(ErrorKind::ValidationError, "domain has no layers");
  for (size_t i = 0; i < layers.size(); ++i) {
    const LayerRect& r = layers[i];
    if (!(r.x0 < r.x1) || !(r.y0 < r.y1)) {
      std::ostringstream os;
      os << "layer " << i << " is degenerate: [" << r.x0 << ", " << r.x1 << "] x ["
         << r.y0 << ", " << r.y1 << "]";
      raise(ErrorKind::ValidationError, os.str());
    }
  }
}

} // namespace

std::optional<Side> side_from_string(const std::string& name) {
  if (name == "south") return Side::South;
  if (name == "east") return Side::East;
  if (name == "north") return Side::North;
  if (name == "west") return Side::West;
  return std::nullopt;
}

LayeredDomain build_domain(const std::vector<LayerRect>& layers) {
  validate_rects(layers);
  DerivedGeometry g = derive_geometry(layers);

  if (!g.overlaps.empty()) {
    auto [i, j] = g.overlaps.front();
    std::ostringstream os;
    os << "layers " << i << " and " << j << " overlap";
    raise(ErrorKind::OverlappingLayers, os.str());
  }
  if (!g.connected)
    raise(ErrorKind::DisconnectedDomain,
          "layer union is not edge-connected (touching at a point does not count)");
  if (!g.cross_points.empty())
    raise(ErrorKind::CrossPoint,
          "interfaces meet at " + fmt_point(g.cross_points.front()));

  LayeredDomain d;
  d.layers = layers;
  d.interfaces = std::move(g.interfaces);
  d.exteriors = std::move(g.exteriors);
  d.xmin = d.xmax = layers[0].x0;
  d.ymin = d.ymax = layers[0].y0;
  for (const LayerRect& r : layers) {
    d.xmin = std::min(d.xmin, r.x0);
    d.xmax = std::max(d.xmax, r.x1);
    d.ymin = std::min(d.ymin, r.y0);
    d.ymax = std::max(d.ymax, r.y1);
  }
  return d;
}

const ConditionResult& AdmissibilityReport::condition(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return c;
  throw std::out_of_range("no condition " + id);
}

bool AdmissibilityReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.pass; });
}

AdmissibilityReport admissibility_report(const std::vector<LayerRect>& layers) {
  validate_rects(layers);
  DerivedGeometry g = derive_geometry(layers);

  AdmissibilityReport rep;
  auto& c = rep.conditions;
  c[0].id = "i";
  c[1].id = "ii";
  c[2].id = "iii";
  c[3].id = "iv";
  c[4].id = "v";
  c[5].id = "vi";
  c[6].id = "vii";
  c[7].id = "viii";

  for (auto [i, j] : g.overlaps) {
    c[0].pass = false;
    std::ostringstream os;
    os << "layers " << i << " and " << j << " overlap";
    c[0].notes.push_back(os.str());
  }
  if (!g.connected) {
    c[0].pass = false;
    c[0].notes.push_back("union is not edge-connected");
  }

  // ii: fails only at pinch points, where the union touches itself diagonally
  for (const auto& s : g.corners) {
    if (std::popcount(s.total_mask) == 2 && !mask_contiguous(s.total_mask)) {
      c[1].pass = false;
      c[1].notes.push_back("boundary pinches at " + fmt_point(s.p));
    }
  }
  if (c[1].pass) c[1].by_construction = true;

  // iii: exterior corner angles; quadrant counting gives omega = k*pi/2
  for (const auto& s : g.corners) {
    int k = std::popcount(s.total_mask);
    if (k == 3) {
      c[2].pass = false;
      std::ostringstream os;
      os << "corner at " << fmt_point(s.p) << " opens 3*pi/2";
      c[2].notes.push_back(os.str());
    }
  }

  c[3].by_construction = true; // interfaces are straight segments

  for (const Point& p : g.cross_points) {
    c[4].pass = false;
    c[4].notes.push_back("interfaces meet at " + fmt_point(p));
  }

  c[5].by_construction = true; // polygonal boundary always flattens locally

  // vii/viii: angles of the two layers where an interface reaches the boundary
  for (const auto& s : g.interfaces) {
    for (const Point& p : {s.seg.point_lo(), s.seg.point_hi()}) {
      unsigned ma = quadrant_mask(layers[s.layer_a], p);
      unsigned mb = quadrant_mask(layers[s.layer_b], p);
      if (std::popcount(ma | mb) == 4) continue; // interior meeting point, see v
      int ka = std::popcount(ma);
      int kb = std::popcount(mb);
      std::ostringstream loc;
      loc << "interface of layers " << s.layer_a << "/" << s.layer_b << " at " << fmt_point(p);
      if (ka != kb) {
        c[6].pass = false;
        std::ostringstream os;
        os << loc.str() << ": angles " << ka << "*pi/2 vs " << kb << "*pi/2";
        c[6].notes.push_back(os.str());
      }
      if (ka + kb > 2) {
        c[7].pass = false;
        std::ostringstream os;
        os << loc.str() << ": angle sum " << (ka + kb) << "*pi/2 exceeds pi";
        c[7].notes.push_back(os.str());
      }
    }
  }
  return rep;
}

AdmissibilityReport admissibility_report(const LayeredDomain& domain) {
  return admissibility_report(domain.layers);
}

std::vector<BoundaryCorner> boundary_corners(const LayeredDomain& domain) {
  DerivedGeometry g = derive_geometry(domain.layers);
  std::vector<BoundaryCorner> out;
  for (const auto& s : g.corners) {
    int k = std::popcount(s.total_mask);
    if (k == 0 || k == 4) continue;
    bool turn = (k != 2) || !mask_contiguous(s.total_mask);

    std::optional<std::pair<int, int>> iface;
    for (const auto& is : g.interfaces) {
      for (const Point& e : {is.seg.point_lo(), is.seg.point_hi()}) {
        if (e.x == s.p.x && e.y == s.p.y) iface = {is.layer_a, is.layer_b};
      }
    }
    if (!turn && !iface) continue; // straight boundary, nothing special here

    BoundaryCorner bc;
    bc.p = s.p;
    bc.omega_total = k * (kPi / 2.0);
    for (const auto& [L, m] : s.layer_masks)
      bc.wedges.push_back({L, std::popcount(m) * (kPi / 2.0)});
    bc.interface_layers = iface;
    out.push_back(std::move(bc));
  }
  return out;
}

} // namespace hms
