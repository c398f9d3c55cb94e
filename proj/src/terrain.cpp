#include "strider/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace strider::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* name, double value, const char* range) {
  if (!ok) {
    std::ostringstream os;
    os << "terrain: " << name << " = " << value << " outside " << range;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::string_view to_string(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::flat:
      return "flat";
    case TerrainKind::ramp:
      return "ramp";
    case TerrainKind::stairs:
      return "stairs";
    case TerrainKind::spiral_stairs:
      return "spiral_stairs";
  }
  return "flat";
}

TerrainKind parse_terrain_kind(std::string_view name) {
  if (name == "flat") return TerrainKind::flat;
  if (name == "ramp") return TerrainKind::ramp;
  if (name == "stairs") return TerrainKind::stairs;
  if (name == "spiral_stairs" || name == "spiral") return TerrainKind::spiral_stairs;
  throw std::invalid_argument("terrain: unknown kind '" + std::string(name) + "'");
}

Terrain make_terrain(TerrainKind kind, const TerrainParams& p) {
  switch (kind) {
    case TerrainKind::flat:
      break;
    case TerrainKind::ramp:
      require(p.slope_deg >= 5.0 && p.slope_deg <= 10.0, "slope_deg", p.slope_deg, "[5, 10]");
      require(p.ramp_length_m > 0.0, "ramp_length_m", p.ramp_length_m, "(0, inf)");
      require(p.plateau_length_m >= 0.0, "plateau_length_m", p.plateau_length_m, "[0, inf)");
      break;
    case TerrainKind::stairs:
      require(p.step_height_m >= 0.005 && p.step_height_m <= 0.015, "step_height_m",
              p.step_height_m, "[0.005, 0.015]");
      require(p.step_depth_m > 0.0, "step_depth_m", p.step_depth_m, "(0, inf)");
      require(p.step_count >= 1, "step_count", p.step_count, "[1, inf)");
      break;
    case TerrainKind::spiral_stairs:
      require(p.spiral_step_height_m >= 0.005 && p.spiral_step_height_m <= 0.015,
              "spiral_step_height_m", p.spiral_step_height_m, "[0.005, 0.015]");
      require(p.spiral_inner_radius_m > 0.0 && p.spiral_inner_radius_m < p.spiral_path_radius_m,
              "spiral_inner_radius_m", p.spiral_inner_radius_m, "(0, path radius)");
      require(p.spiral_outer_radius_m > p.spiral_path_radius_m, "spiral_outer_radius_m",
              p.spiral_outer_radius_m, "(path radius, inf)");
      require(p.spiral_step_angle_rad > 0.0, "spiral_step_angle_rad", p.spiral_step_angle_rad,
              "(0, inf)");
      require(p.spiral_step_count >= 1, "spiral_step_count", p.spiral_step_count, "[1, inf)");
      break;
  }
  Terrain t;
  t.kind_ = kind;
  t.params_ = p;
  t.slope_tan_ = std::tan(p.slope_deg * kPi / 180.0);
  return t;
}

double Terrain::course_angle(double x, double y) {
  double a = std::atan2(y, x);
  if (a < -1.0) a += 2.0 * kPi;
  return a;
}

double Terrain::height(double x, double y) const {
  const auto& p = params_;
  switch (kind_) {
    case TerrainKind::flat:
      return 0.0;
    case TerrainKind::ramp: {
      const double a = p.ramp_start_y_m;
      const double top = a + p.ramp_length_m;
      const double down = top + p.plateau_length_m;
      const double end = down + p.ramp_length_m;
      const double rise = p.ramp_length_m * slope_tan_;
      if (y <= a || y >= end) return 0.0;
      if (y < top) return (y - a) * slope_tan_;
      if (y <= down) return rise;
      return rise - (y - down) * slope_tan_;
    }
    case TerrainKind::stairs: {
      if (y < p.stairs_start_y_m) return 0.0;
      const double idx = std::floor((y - p.stairs_start_y_m) / p.step_depth_m);
      return p.step_height_m * std::min(idx, static_cast<double>(p.step_count));
    }
    case TerrainKind::spiral_stairs: {
      const double r = std::hypot(x, y);
      if (r < p.spiral_inner_radius_m || r > p.spiral_outer_radius_m) return 0.0;
      const double a = course_angle(x, y);
      if (a < p.spiral_start_angle_rad) return 0.0;
      const double idx = std::floor((a - p.spiral_start_angle_rad) / p.spiral_step_angle_rad);
      return p.spiral_step_height_m * std::min(idx, static_cast<double>(p.spiral_step_count));
    }
  }
  return 0.0;
}

std::array<double, 2> Terrain::gradient(double /*x*/, double y) const {
  if (kind_ != TerrainKind::ramp) return {0.0, 0.0};
  const auto& p = params_;
  const double a = p.ramp_start_y_m;
  const double top = a + p.ramp_length_m;
  const double down = top + p.plateau_length_m;
  const double end = down + p.ramp_length_m;
  if (y > a && y < top) return {0.0, slope_tan_};
  if (y > down && y < end) return {0.0, -slope_tan_};
  return {0.0, 0.0};
}

int Terrain::segment(double x, double y) const {
  const auto& p = params_;
  switch (kind_) {
    case TerrainKind::flat:
      return 0;
    case TerrainKind::ramp: {
      const double a = p.ramp_start_y_m;
      if (y <= a) return 0;
      if (y < a + p.ramp_length_m) return 1;
      if (y <= a + p.ramp_length_m + p.plateau_length_m) return 2;
      if (y < a + 2 * p.ramp_length_m + p.plateau_length_m) return 3;
      return 4;
    }
    case TerrainKind::stairs: {
      if (y < p.stairs_start_y_m) return 0;
      const double idx = std::floor((y - p.stairs_start_y_m) / p.step_depth_m);
      return 1 + static_cast<int>(std::min(idx, static_cast<double>(p.step_count)));
    }
    case TerrainKind::spiral_stairs: {
      const double r = std::hypot(x, y);
      const double a = course_angle(x, y);
      if (r < p.spiral_inner_radius_m || r > p.spiral_outer_radius_m ||
          a < p.spiral_start_angle_rad)
        return 0;
      const double idx = std::floor((a - p.spiral_start_angle_rad) / p.spiral_step_angle_rad);
      return 1 + static_cast<int>(std::min(idx, static_cast<double>(p.spiral_step_count)));
    }
  }
  return 0;
}

}  // namespace strider::sim
