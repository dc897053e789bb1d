#include "sublorentz/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sublorentz/errors.hpp"

namespace sublorentz {

namespace {

namespace fs = std::filesystem;

void atomic_write(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place at '" + path +
                "': " + ec.message());
  }
}

}  // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::string out;
  out.reserve(traj.samples.size() * 220 + 80);
  out += kTrajectoryHeader;
  out += '\n';
  for (const auto& s : traj.samples) {
    out += format_g17(s.t);
    for (int k = 0; k < 4; ++k) {
      out += ',';
      out += format_g17(s.state.position.base[k]);
    }
    out += ',';
    out += format_g17(s.state.position.fiber);
    for (int k = 0; k < 4; ++k) {
      out += ',';
      out += format_g17(s.state.velocity[k]);
    }
    out += ',';
    out += format_g17(s.pseudonorm);
    out += ',';
    out += format_g17(s.horizontality_defect);
    out += '\n';
  }
  atomic_write(path, out);
}

void write_cloud_csv(const std::string& path, const PointCloud& cloud) {
  std::string out;
  out.reserve(cloud.points.size() * 100 + 40);
  out += kCloudHeader;
  out += '\n';
  for (const auto& pt : cloud.points) {
    out += format_g17(pt.x2);
    out += ',';
    out += format_g17(pt.x3);
    out += ',';
    out += format_g17(pt.x4);
    out += ',';
    out += format_g17(pt.alpha);
    out += ',';
    out += format_g17(pt.p);
    out += '\n';
  }
  atomic_write(path, out);
}

std::string trajectory_json(const Trajectory& traj,
                            const std::map<std::string, std::string>& meta) {
  nlohmann::json j;
  j["meta"] = meta;
  j["columns"] = nlohmann::json::parse(R"(["t","x0","x1","x2","x3","x4","u0","u1","u2","u3","pseudonorm","horiz_defect"])");
  auto& points = j["points"];
  points = nlohmann::json::array();
  for (const auto& s : traj.samples) {
    nlohmann::json row = nlohmann::json::array();
    row.push_back(s.t);
    for (int k = 0; k < 4; ++k) row.push_back(s.state.position.base[k]);
    row.push_back(s.state.position.fiber);
    for (int k = 0; k < 4; ++k) row.push_back(s.state.velocity[k]);
    row.push_back(s.pseudonorm);
    row.push_back(s.horizontality_defect);
    points.push_back(std::move(row));
  }
  return j.dump();
}

std::string cloud_json(const PointCloud& cloud) {
  nlohmann::json j;
  j["meta"] = {
      {"kind", cloud.kind == CloudKind::sphere ? "sphere" : "wavefront"},
      {"s", cloud.meta.radius_s},
      {"phi", cloud.meta.phi},
      {"p_min", cloud.meta.p_min},
      {"p_max", cloud.meta.p_max},
      {"alpha_count", cloud.meta.alpha_count},
      {"p_count", cloud.meta.p_count},
  };
  j["columns"] = nlohmann::json::parse(R"(["x2","x3","x4","alpha","p"])");
  auto& points = j["points"];
  points = nlohmann::json::array();
  for (const auto& pt : cloud.points)
    points.push_back({pt.x2, pt.x3, pt.x4, pt.alpha, pt.p});
  return j.dump();
}

void write_text_file(const std::string& path, const std::string& content) {
  atomic_write(path, content);
}

namespace {

struct Range {
  double lo = 0.0, hi = 1.0;
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span() const { return hi - lo > 0 ? hi - lo : 1.0; }
};

std::string svg_projection(const PointCloud& cloud, int ax, int ay,
                           const char* label_x, const char* label_y) {
  constexpr double W = 640.0, H = 640.0, margin = 48.0;
  const auto coord = [&](const CloudPoint& p, int axis) {
    switch (axis) {
      case 0: return p.x2;
      case 1: return p.x3;
      default: return p.x4;
    }
  };
  Range rx, ry;
  for (const auto& p : cloud.points) {
    rx.include(coord(p, ax));
    ry.include(coord(p, ay));
  }
  const double sx = (W - 2 * margin) / rx.span();
  const double sy = (H - 2 * margin) / ry.span();
  const auto px = [&](double v) { return margin + (v - rx.lo) * sx; };
  const auto py = [&](double v) { return H - margin - (v - ry.lo) * sy; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes through the data origin when visible, else along the frame.
  const double x0 = (rx.lo <= 0 && 0 <= rx.hi) ? px(0.0) : margin;
  const double y0 = (ry.lo <= 0 && 0 <= ry.hi) ? py(0.0) : H - margin;
  svg << "<line x1=\"" << margin << "\" y1=\"" << y0 << "\" x2=\"" << W - margin
      << "\" y2=\"" << y0 << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << x0 << "\" y1=\"" << margin << "\" x2=\"" << x0
      << "\" y2=\"" << H - margin << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << W - margin + 4 << "\" y=\"" << y0 + 4
      << "\" font-size=\"13\">" << label_x << "</text>\n";
  svg << "<text x=\"" << x0 + 6 << "\" y=\"" << margin - 8
      << "\" font-size=\"13\">" << label_y << "</text>\n";

  const int na = cloud.meta.alpha_count, np = cloud.meta.p_count;
  for (int pi = 0; pi < np; ++pi) {
    svg << "<polyline fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"0.6\" "
           "points=\"";
    for (int ai = 0; ai < na; ++ai) {
      const auto& pt = cloud.points[static_cast<std::size_t>(ai) * np + pi];
      svg << px(coord(pt, ax)) << ',' << py(coord(pt, ay)) << ' ';
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void write_cloud_svg_pair(const std::string& path_x2x3,
                          const std::string& path_x2x4,
                          const PointCloud& cloud) {
  atomic_write(path_x2x3, svg_projection(cloud, 0, 1, "x2", "x3"));
  atomic_write(path_x2x4, svg_projection(cloud, 0, 2, "x2", "x4"));
}

}  // namespace sublorentz
