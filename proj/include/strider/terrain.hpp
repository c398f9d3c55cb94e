#pragma once
// Parametric desk-scale terrains. The course runs along +y from a start zone
// around the origin; spiral stairs wind counter-clockwise about the z axis.

#include <array>
#include <string>
#include <string_view>

namespace strider::sim {

enum class TerrainKind { flat, ramp, stairs, spiral_stairs };

std::string_view to_string(TerrainKind kind);
// Throws std::invalid_argument for unknown names.
TerrainKind parse_terrain_kind(std::string_view name);

struct TerrainParams {
  // ramp: flat, incline up, plateau, incline down, flat
  double slope_deg = 10.0;
  double ramp_start_y_m = 1.2;
  double ramp_length_m = 0.5;
  double plateau_length_m = 0.5;

  // stairs: z = step_height * floor((y - y0) / step_depth), capped at step_count
  double step_height_m = 0.010;
  double step_depth_m = 0.10;
  double stairs_start_y_m = 0.8;
  int step_count = 20;

  // spiral: steps over angle inside the annulus [inner, outer]
  double spiral_step_height_m = 0.015;
  double spiral_inner_radius_m = 0.2;
  double spiral_outer_radius_m = 1.0;
  double spiral_path_radius_m = 0.6;
  double spiral_step_angle_rad = 0.1667;
  double spiral_start_angle_rad = 0.6;
  int spiral_step_count = 20;
};

class Terrain {
 public:
  Terrain() = default;

  TerrainKind kind() const { return kind_; }
  const TerrainParams& params() const { return params_; }

  double height(double x, double y) const;
  // Analytic surface gradient (dz/dx, dz/dy); treads and flats are level, so
  // only the ramp inclines are non-zero.
  std::array<double, 2> gradient(double x, double y) const;
  // Region index along the course: 0 for the start surface, increasing each
  // time the surface changes (incline, plateau, each stair tread...).
  int segment(double x, double y) const;

  // Polar angle used by the spiral layout, in [-1, 2pi - 1) so a start just
  // below the x axis has a full lap of room ahead of it.
  static double course_angle(double x, double y);

 private:
  friend Terrain make_terrain(TerrainKind kind, const TerrainParams& params);
  TerrainKind kind_ = TerrainKind::flat;
  TerrainParams params_{};
  double slope_tan_ = 0.0;
};

// Validates the parameters that apply to `kind`; slopes must lie in [5, 10]
// degrees and stair heights in [5, 15] mm. Errors name the parameter.
Terrain make_terrain(TerrainKind kind, const TerrainParams& params = {});

}  // namespace strider::sim
