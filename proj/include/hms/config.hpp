#pragma once

#include <map>
#include <string>
#include <vector>

#include "hms/geometry.hpp"
#include "hms/materials.hpp"
#include "hms/stepper.hpp"

namespace hms {

// Parsed run description. Loading keeps table references as file paths;
// make_setup materializes them. Paths are resolved against base_dir, the
// directory the config file came from.
struct MaterialSpec {
  std::string name;
  std::string model; // linear | kiessl | kunzel
  std::map<std::string, std::vector<double>> numbers;
  std::map<std::string, std::string> curves;   // curve.<id> = csv path
  std::map<std::string, std::string> surfaces; // surface.<id> = csv path
};

struct BoundarySpec {
  Vec2 alpha{0, 0};
  std::string climate; // csv path
};

struct CheckRanges {
  Vec2 theta{273.15, 313.15};
  Vec2 m{0.05, 0.95};
  int samples = 11;
};

struct RunConfig {
  std::vector<LayerRect> layers;       // material field = declared spec name
  std::vector<MaterialSpec> materials; // ordered by first appearance
  std::vector<Vec2> initial;                // per layer
  std::map<Side, BoundarySpec> boundaries;
  double h_target = 0.1;
  double h_t = 1.0;
  double t_end = 1.0;
  StrategyKind strategy = StrategyKind::Picard;
  StepControls controls;
  std::string output_dir = "out";
  std::vector<double> snapshots;
  std::vector<Point> probes;
  CheckRanges check;
  std::string base_dir;
};

// INI-style file: [section] headers, key = value lines, # comments. Raises
// ParseError with file:line on syntax problems, ValidationError naming the
// offending dotted key on semantic ones.
RunConfig load_config(const std::string& path);

// Writes a file load_config reads back to an equivalent config (base_dir
// aside). Values are printed round-trip exact.
void dump_config(const std::string& path, const RunConfig& cfg);

// Loads every referenced table and validates the models.
std::vector<MaterialModel> build_materials(const RunConfig& cfg);

// Fully materialized run description ready for run().
RunSetup make_setup(const RunConfig& cfg);

} // namespace hms
