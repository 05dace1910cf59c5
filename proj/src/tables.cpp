#include "heisbill/tables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heis {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

FaceGeometry wall(const Vector2& center, double radius) {
  FaceGeometry f;
  f.kind = FaceGeometry::Kind::wall;
  f.face = Face::wall;
  f.center = center;
  f.radius = radius;
  return f;
}

FaceGeometry horizontal(double level, int orientation) {
  FaceGeometry f;
  f.kind = FaceGeometry::Kind::horizontal;
  f.face = orientation > 0 ? Face::top : Face::bottom;
  f.level = level;
  f.orientation = orientation;
  return f;
}

FaceGeometry vertical(double offset) {
  FaceGeometry f;
  f.kind = FaceGeometry::Kind::vertical;
  f.face = Face::plane;
  f.level = offset;
  return f;
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const TableSpec& table) {
  std::visit(overloaded{
                 [](const InfiniteCylinder& t) {
                   if (!(t.radius > 0) || !finite(t.radius) || !finite(t.center.x()) ||
                       !finite(t.center.y()))
                     throw OutOfRangeError("cylinder radius must be positive and finite");
                 },
                 [](const HorizontalHalfSpace& t) {
                   if (t.side != 1 && t.side != -1) throw OutOfRangeError("half-space side must be +1 or -1");
                   if (!finite(t.z0)) throw OutOfRangeError("half-space height must be finite");
                 },
                 [](const VerticalHalfSpace& t) {
                   if (!finite(t.offset)) throw OutOfRangeError("plane offset must be finite");
                 },
                 [](const HorizontalBand& t) {
                   if (!(t.z_lo < t.z_hi) || !finite(t.z_lo) || !finite(t.z_hi))
                     throw OutOfRangeError("band requires z_lo < z_hi");
                 },
                 [](const FiniteCylinder& t) {
                   if (!(t.radius > 0) || !finite(t.radius))
                     throw OutOfRangeError("cylinder radius must be positive and finite");
                   if (!(t.z_lo < t.z_hi) || !finite(t.z_lo) || !finite(t.z_hi))
                     throw OutOfRangeError("cylinder requires z_lo < z_hi");
                 },
             },
             table);
}

std::string to_string(Face face) {
  switch (face) {
    case Face::wall: return "wall";
    case Face::bottom: return "bottom";
    case Face::top: return "top";
    case Face::plane: return "plane";
  }
  return "unknown";
}

double FaceGeometry::distance(const Point3& p) const {
  switch (kind) {
    case Kind::wall: return (Vector2(p.x(), p.y()) - center).norm() - radius;
    case Kind::horizontal: return orientation * (p.z() - level);
    case Kind::vertical: return p.y() - level;
  }
  return 0;
}

Covector FaceGeometry::differential(const Point3& p) const {
  switch (kind) {
    case Kind::wall: return {0, 2 * (p.x() - center.x()), 2 * (p.y() - center.y())};
    case Kind::horizontal: {
      const double o = orientation;
      return {o, -o * p.y() / 2, o * p.x() / 2};
    }
    case Kind::vertical: return {0, 0, 1};
  }
  return {};
}

std::vector<FaceGeometry> faces(const TableSpec& table) {
  return std::visit(overloaded{
                        [](const InfiniteCylinder& t) { return std::vector{wall(t.center, t.radius)}; },
                        [](const HorizontalHalfSpace& t) { return std::vector{horizontal(t.z0, -t.side)}; },
                        [](const VerticalHalfSpace& t) { return std::vector{vertical(t.offset)}; },
                        [](const HorizontalBand& t) {
                          return std::vector{horizontal(t.z_lo, -1), horizontal(t.z_hi, 1)};
                        },
                        [](const FiniteCylinder& t) {
                          return std::vector{wall(t.center, t.radius), horizontal(t.z_lo, -1),
                                             horizontal(t.z_hi, 1)};
                        },
                    },
                    table);
}

double signed_distance(const TableSpec& table, const Point3& p) {
  if (const auto* cyl = std::get_if<FiniteCylinder>(&table)) {
    const double dw = (Vector2(p.x(), p.y()) - cyl->center).norm() - cyl->radius;
    const double dl = std::max(cyl->z_lo - p.z(), p.z() - cyl->z_hi);
    if (dw > 0 && dl > 0) return std::hypot(dw, dl);
    return std::max(dw, dl);
  }
  double d = -std::numeric_limits<double>::infinity();
  for (const auto& f : faces(table)) d = std::max(d, f.distance(p));
  return d;
}

BoundaryContact boundary_contact(const TableSpec& table, const Point3& p, const ContactTolerances& tol) {
  const double sd = signed_distance(table, p);
  if (!(std::abs(sd) < tol.on_boundary)) throw NotOnBoundaryError(sd);

  const auto fs = faces(table);
  std::size_t best = 0;
  int near = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const double d = std::abs(fs[i].distance(p));
    if (d < tol.corner) ++near;
    if (d < std::abs(fs[best].distance(p))) best = i;
  }

  BoundaryContact contact;
  contact.point = p;
  contact.geometry = fs[best];
  contact.face = fs[best].face;
  contact.dG = fs[best].differential(p);
  contact.is_corner = near >= 2;
  contact.is_singular = fs[best].kind == FaceGeometry::Kind::horizontal &&
                        std::hypot(p.x(), p.y()) < tol.singular;
  return contact;
}

std::vector<Point3> singular_points(const TableSpec& table) {
  return std::visit(overloaded{
                        [](const InfiniteCylinder&) { return std::vector<Point3>{}; },
                        [](const VerticalHalfSpace&) { return std::vector<Point3>{}; },
                        [](const HorizontalHalfSpace& t) { return std::vector<Point3>{Point3(0, 0, t.z0)}; },
                        [](const HorizontalBand& t) {
                          return std::vector<Point3>{Point3(0, 0, t.z_lo), Point3(0, 0, t.z_hi)};
                        },
                        [](const FiniteCylinder& t) {
                          if (t.center.norm() > t.radius) return std::vector<Point3>{};
                          return std::vector<Point3>{Point3(0, 0, t.z_lo), Point3(0, 0, t.z_hi)};
                        },
                    },
                    table);
}

}  // namespace heis
