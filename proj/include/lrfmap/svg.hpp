#pragma once

#include <string>

#include "lrfmap/environment.hpp"
#include "lrfmap/mapper.hpp"

namespace lrfmap {

// Vector image of the run: true walls, map points, and the three
// trajectories (truth green, odometry red, corrected blue).
std::string render_svg(const EnvironmentModel& model, const GlobalMap& map);

void write_svg_file(const std::string& path, const EnvironmentModel& model,
                    const GlobalMap& map);

}  // namespace lrfmap
