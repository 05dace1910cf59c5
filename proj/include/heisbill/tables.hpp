#pragma once

#include <string>
#include <variant>
#include <vector>

#include "heisbill/geometry.hpp"

namespace heis {

struct InfiniteCylinder {
  Vector2 center{0, 0};
  double radius{1};
};

/// side = +1: the table is {z >= z0}; side = -1: the table is {z <= z0}.
struct HorizontalHalfSpace {
  double z0{0};
  int side{1};
};

/// The table is {y <= offset}.
struct VerticalHalfSpace {
  double offset{0};
};

struct HorizontalBand {
  double z_lo{0};
  double z_hi{1};
};

struct FiniteCylinder {
  Vector2 center{0, 0};
  double radius{1};
  double z_lo{0};
  double z_hi{1};
};

using TableSpec =
    std::variant<InfiniteCylinder, HorizontalHalfSpace, VerticalHalfSpace, HorizontalBand, FiniteCylinder>;

/// Throws OutOfRangeError for radius <= 0, z_lo >= z_hi or side not in {-1, +1}.
void validate(const TableSpec& table);

enum class Face { wall, bottom, top, plane };

std::string to_string(Face face);

/// One smooth boundary piece with an outward-increasing level function.
struct FaceGeometry {
  enum class Kind { wall, horizontal, vertical };
  Kind kind{Kind::wall};
  Face face{Face::wall};
  Vector2 center{0, 0};  // wall
  double radius{0};      // wall
  double level{0};       // height of a horizontal face, offset of a vertical one
  int orientation{1};    // horizontal: +1 when the outward normal is +d_z

  /// Signed distance to the face's full level set (positive outside).
  double distance(const Point3& p) const;
  /// Outward differential in the coframe {alpha, dx, dy}.
  Covector differential(const Point3& p) const;
};

std::vector<FaceGeometry> faces(const TableSpec& table);

struct BoundaryContact {
  Point3 point{Point3::Zero()};
  Face face{Face::wall};
  Covector dG{};
  bool is_corner{false};
  bool is_singular{false};
  FaceGeometry geometry{};
};

struct ContactTolerances {
  double on_boundary{1e-9};
  double corner{1e-9};
  double singular{1e-9};
};

/// Negative inside, zero on the boundary, positive outside.
double signed_distance(const TableSpec& table, const Point3& p);

BoundaryContact boundary_contact(const TableSpec& table, const Point3& p,
                                 const ContactTolerances& tol = {});

/// Points where the planar part of dG vanishes, i.e. where the boundary
/// distribution degenerates.
std::vector<Point3> singular_points(const TableSpec& table);

}  // namespace heis
