#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hms/errors.hpp"

namespace hms {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Outward-normal direction of an exterior boundary piece. Boundary conditions
// are addressed by side, so every south-facing piece of a multi-layer union
// shares one climate record.
enum class Side { South, East, North, West };

inline const char* to_string(Side s) {
  switch (s) {
    case Side::South: return "south";
    case Side::East:  return "east";
    case Side::North: return "north";
    case Side::West:  return "west";
  }
  return "?";
}

std::optional<Side> side_from_string(const std::string& name);

// Axis-aligned material layer. Coordinates that are meant to coincide must
// coincide exactly; the geometry code compares doubles with == throughout and
// never applies a tolerance.
struct LayerRect {
  double x0, y0, x1, y1;
  std::string material;
};

// Axis-parallel segment: x == pos (vertical) or y == pos (horizontal),
// running over [lo, hi] in the other coordinate.
struct AxisSegment {
  bool vertical = false;
  double pos = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  Point point_lo() const { return vertical ? Point{pos, lo} : Point{lo, pos}; }
  Point point_hi() const { return vertical ? Point{pos, hi} : Point{hi, pos}; }
};

// Contact segment between two layers; transmission conditions act here.
struct InterfaceSegment {
  AxisSegment seg;
  int layer_a = -1; // smaller layer index; for vertical segments the west side,
  int layer_b = -1; // for horizontal segments the south side, is layer_a.
};

struct ExteriorSegment {
  AxisSegment seg;
  int layer = -1;
  Side side = Side::South;
};

struct LayeredDomain {
  std::vector<LayerRect> layers;
  std::vector<InterfaceSegment> interfaces;
  std::vector<ExteriorSegment> exteriors;
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
};

// Validates the layer list (interior overlaps, edge-connectivity, interface
// cross points) and derives interface and exterior segments. Throws Error with
// kind OverlappingLayers, DisconnectedDomain or CrossPoint.
LayeredDomain build_domain(const std::vector<LayerRect>& layers);

// One geometric admissibility condition. Conditions are numbered i..viii:
//   i    layers pairwise non-overlapping, union open and connected
//   ii   boundary piecewise smooth (fails only at pinch points)
//   iii  every exterior corner opens less than pi
//   iv   interfaces are smooth arcs (straight segments here)
//   v    no point is shared by two or more interface closures
//   vi   local flattening maps exist (polygonal boundary, by construction)
//   vii  where an interface hits the boundary both layer angles agree
//   viii those two angles sum to at most pi
struct ConditionResult {
  std::string id;
  bool pass = true;
  bool by_construction = false;
  std::vector<std::string> notes;
};

struct AdmissibilityReport {
  std::array<ConditionResult, 8> conditions;

  const ConditionResult& condition(const std::string& id) const;
  bool all_pass() const;
};

// Works on the raw layer list so that geometries build_domain would reject
// (checkerboards, overlapping inputs) can still be diagnosed.
AdmissibilityReport admissibility_report(const std::vector<LayerRect>& layers);
AdmissibilityReport admissibility_report(const LayeredDomain& domain);

// A non-smooth boundary point together with the wedge each incident layer
// opens there. Feeds the corner singularity analysis.
struct BoundaryCorner {
  Point p;
  double omega_total = 0.0; // interior angle of the union
  struct Wedge {
    int layer;
    double omega;
  };
  std::vector<Wedge> wedges;            // ordered by layer index
  std::optional<std::pair<int, int>> interface_layers; // set when an interface ends here
};

// Every point where the boundary turns or an interface meets it, with angles.
std::vector<BoundaryCorner> boundary_corners(const LayeredDomain& domain);

} // namespace hms
