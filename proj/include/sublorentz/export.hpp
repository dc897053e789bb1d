// Exporters. Columns are fixed: trajectories are
// t,x0,x1,x2,x3,x4,u0,u1,u2,u3,pseudonorm,horiz_defect and point clouds are
// x2,x3,x4,alpha,p. Numbers are written with 17 significant digits so a
// round trip through text is lossless; files are written to a temporary
// sibling and renamed into place so failures leave no partial output.
#pragma once

#include <map>
#include <string>

#include "sublorentz/geodesic_engine.hpp"
#include "sublorentz/magnetic_analytic.hpp"

namespace sublorentz {

inline constexpr const char* kTrajectoryHeader =
    "t,x0,x1,x2,x3,x4,u0,u1,u2,u3,pseudonorm,horiz_defect";
inline constexpr const char* kCloudHeader = "x2,x3,x4,alpha,p";

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_cloud_csv(const std::string& path, const PointCloud& cloud);

std::string trajectory_json(const Trajectory& traj,
                            const std::map<std::string, std::string>& meta);
std::string cloud_json(const PointCloud& cloud);
void write_text_file(const std::string& path, const std::string& content);

// Orthographic projections of a cloud onto (x2,x3) and (x2,x4), one
// polyline per cyclotron-rate row. Hand-rolled minimal SVG.
void write_cloud_svg_pair(const std::string& path_x2x3,
                          const std::string& path_x2x4,
                          const PointCloud& cloud);

std::string format_g17(double v);

}  // namespace sublorentz
