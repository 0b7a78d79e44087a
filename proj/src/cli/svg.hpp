#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "monotone_mas/simulate.hpp"

namespace mas::cli {

/// Line plot of every component x_i(k) of every trajectory against k.
/// Each polyline is decimated to at most `max_points` vertices.
void write_trajectories_svg(std::ostream& out, const std::vector<Trajectory>& runs, const std::string& title,
                            std::size_t max_points = 2000);

}  // namespace mas::cli
