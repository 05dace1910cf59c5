#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "heisbill/billiard.hpp"
#include "heisbill/wavefront.hpp"

namespace heis {

/// Grammar: cyl:cx,cy,r | hplane:z0,side | vplane:v | band:zlo,zhi | fincyl:cx,cy,r,zlo,zhi
TableSpec parse_table(std::string_view text);
std::string format_table(const TableSpec& table);

std::vector<double> parse_reals(std::string_view text);

/// "x,y,z,a,b,c"; (b, c) is rescaled to unit length.
State parse_state(std::string_view text);

/// Shortest representation that parses back to the same double.
std::string format_shortest(double value);
/// `digits` significant digits, "C" formatting regardless of locale.
std::string format_significant(double value, int digits);

std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const std::string& text);

std::string trajectory_to_csv(const Trajectory& traj);

enum class Plane { xy, xz };
Plane parse_plane(std::string_view text);

/// 1000x1000 canvas: one path per arc, one marker per event, the table
/// boundary as reference.
std::string trajectory_to_svg(const Trajectory& traj, Plane plane = Plane::xy);

std::string wavefront_to_csv(const std::vector<WavefrontPoint>& points);
std::string wavefront_to_svg(const std::vector<WavefrontPoint>& points);

}  // namespace heis
