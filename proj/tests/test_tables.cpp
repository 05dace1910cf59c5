#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heisbill/tables.hpp"

using namespace heis;

namespace {

constexpr double pi = std::numbers::pi;

// Coframe pairing of a covector with a tangent vector at p.
double pair(const Covector& g, const Point3& p, const Point3& w) {
  return g.a * contact_form(p, w) + g.b * w.x() + g.c * w.y();
}

}  // namespace

TEST_CASE("signed_distance") {
  CHECK(signed_distance(InfiniteCylinder{{0, 0}, 1}, Point3(0, 0, 5)) == -1);
  CHECK(signed_distance(HorizontalHalfSpace{0, 1}, Point3(3, 4, -2)) == 2);
  CHECK(signed_distance(HorizontalHalfSpace{0, -1}, Point3(3, 4, -2)) == -2);
  CHECK(signed_distance(VerticalHalfSpace{1}, Point3(0, 3, 0)) == 2);
  CHECK(signed_distance(HorizontalBand{0, 2}, Point3(7, 7, 0.5)) == -0.5);
  CHECK(signed_distance(FiniteCylinder{{0, 0}, 1, 0, 1}, Point3(1, 0, 0)) == 0);
  CHECK(signed_distance(FiniteCylinder{{0, 0}, 1, 0, 1}, Point3(0, 0, 0.5)) == -0.5);
}

TEST_CASE("corner of the finite cylinder") {
  const BoundaryContact c = boundary_contact(FiniteCylinder{{0, 0}, 1, 0, 1}, Point3(1, 0, 0));
  CHECK(c.is_corner);
  CHECK_FALSE(boundary_contact(FiniteCylinder{{0, 0}, 1, 0, 1}, Point3(1, 0, 0.5)).is_corner);
}

TEST_CASE("boundary_contact differentials") {
  const double r = 1.5;
  // Top face (table below): outward normal +d_z.
  const BoundaryContact top = boundary_contact(HorizontalHalfSpace{0, -1}, Point3(r, 0, 0));
  CHECK((top.dG.coeffs() - Eigen::Vector3d(1, 0, r / 2)).norm() < 1e-15);
  CHECK_FALSE(top.is_singular);
  // Bottom face (table above): orientation flips.
  const BoundaryContact bottom = boundary_contact(HorizontalHalfSpace{0, 1}, Point3(r, 0, 0));
  CHECK((bottom.dG.coeffs() - Eigen::Vector3d(-1, 0, -r / 2)).norm() < 1e-15);

  CHECK(boundary_contact(HorizontalHalfSpace{0, 1}, Point3(0, 0, 0)).is_singular);

  const BoundaryContact wall = boundary_contact(InfiniteCylinder{{0, 0}, 1}, Point3(1, 0, 7));
  CHECK((wall.dG.coeffs() - Eigen::Vector3d(0, 2, 0)).norm() < 1e-15);
  CHECK(wall.face == Face::wall);
}

TEST_CASE("boundary_contact rejects interior points") {
  CHECK_THROWS_AS(boundary_contact(InfiniteCylinder{{0, 0}, 1}, Point3(0.5, 0, 0)), NotOnBoundaryError);
  CHECK_THROWS_AS(boundary_contact(HorizontalBand{0, 1}, Point3(0, 0, 0.5)), NotOnBoundaryError);
}

TEST_CASE("singular_points") {
  CHECK(singular_points(InfiniteCylinder{{0, 0}, 1}).empty());
  CHECK(singular_points(VerticalHalfSpace{0}).empty());
  const auto band = singular_points(HorizontalBand{0, 3});
  REQUIRE(band.size() == 2);
  CHECK(band[0] == Point3(0, 0, 0));
  CHECK(band[1] == Point3(0, 0, 3));
  CHECK(singular_points(FiniteCylinder{{2, 0}, 1, 0, 1}).empty());
  CHECK(singular_points(FiniteCylinder{{0.5, 0}, 1, 0, 1}).size() == 2);
}

TEST_CASE("validate") {
  CHECK_THROWS_AS(validate(InfiniteCylinder{{0, 0}, 0}), OutOfRangeError);
  CHECK_THROWS_AS(validate(HorizontalBand{1, 1}), OutOfRangeError);
  CHECK_THROWS_AS(validate(HorizontalHalfSpace{0, 0}), OutOfRangeError);
  CHECK_THROWS_AS(validate(FiniteCylinder{{0, 0}, 1, 2, 1}), OutOfRangeError);
  CHECK_NOTHROW(validate(FiniteCylinder{{0, 0}, 1, 0, 1}));
}

TEST_CASE("dG annihilates the tangent space and is positive outward") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 100; ++i) {
    const double th = pi * u(rng);
    const Vector2 c(u(rng), u(rng));
    const double R = 1 + 0.5 * u(rng);
    const Point3 pw(c.x() + R * std::cos(th), c.y() + R * std::sin(th), 3 * u(rng));
    const BoundaryContact wall = boundary_contact(InfiniteCylinder{c, R}, pw);
    const Point3 tangent = u(rng) * Point3(-std::sin(th), std::cos(th), 0) + u(rng) * Point3(0, 0, 1);
    CHECK(std::abs(pair(wall.dG, pw, tangent)) < 1e-12);
    CHECK(pair(wall.dG, pw, Point3(std::cos(th), std::sin(th), 0)) > 0);

    for (int side : {1, -1}) {
      const Point3 ph(3 * u(rng), 3 * u(rng), u(rng));
      const BoundaryContact h = boundary_contact(HorizontalHalfSpace{ph.z(), side}, ph);
      CHECK(std::abs(pair(h.dG, ph, Point3(u(rng), u(rng), 0))) < 1e-12);
      CHECK(pair(h.dG, ph, Point3(0, 0, -side)) > 0);
      CHECK(h.is_singular == (h.dG.planar().norm() == 0));
    }

    const Point3 pv(3 * u(rng), u(rng), 3 * u(rng));
    const BoundaryContact v = boundary_contact(VerticalHalfSpace{pv.y()}, pv);
    CHECK(std::abs(pair(v.dG, pv, Point3(u(rng), 0, u(rng)))) < 1e-12);
    CHECK(pair(v.dG, pv, Point3(0, 1, 0)) > 0);
  }
}

TEST_CASE("faces of composite tables") {
  CHECK(faces(FiniteCylinder{{0, 0}, 1, 0, 1}).size() == 3);
  CHECK(faces(HorizontalBand{0, 1}).size() == 2);
  CHECK(to_string(Face::bottom) == "bottom");
  const BoundaryContact top = boundary_contact(HorizontalBand{0, 1}, Point3(0.5, 0, 1));
  CHECK(top.face == Face::top);
  CHECK(top.dG.a > 0);
}
