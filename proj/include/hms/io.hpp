#pragma once

#include <string>

#include "hms/curves.hpp"
#include "hms/mesh.hpp"
#include "hms/mms.hpp"
#include "hms/series.hpp"
#include "hms/stepper.hpp"

namespace hms {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

void set_log_level(LogLevel lvl);
LogLevel log_level();
void log(LogLevel lvl, const std::string& msg);

// CSV inputs. Comma separated, blank lines and #-comments skipped, one
// optional non-numeric header line tolerated.

// Columns t, sigma1, sigma2.
ClimateSeries load_climate_csv(const std::string& path);

// Columns x, y; the name labels range errors.
MonotoneCurve load_curve_csv(const std::string& path, const std::string& name);

// First row: label cell then the second axis breakpoints; each further row:
// first-axis breakpoint then the values across the second axis.
Surface2 load_surface_csv(const std::string& path, const std::string& name);

// Legacy ASCII VTK of the mesh with both solution components as point data.
void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<double>& u);

// One row per step time, interleaved theta/moisture columns per probe.
void write_probe_csv(const std::string& path, const RunResult& result);

// Grid errors plus the reduced orders, as CSV with trailing comment lines.
void write_convergence_csv(const std::string& path, const ConvergenceTable& table);

} // namespace hms
