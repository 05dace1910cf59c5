#pragma once

// The Heisenberg group (R^3, ker alpha, dx^2 + dy^2) with
//   alpha = dz - 1/2 (x dy - y dx),   X = d_x - y/2 d_z,   Y = d_y + x/2 d_z.
// Covectors are written in the coframe {alpha, dx, dy}: lambda = a alpha + b dx + c dy.
// Unit states (b^2 + c^2 = 1) are arclength-parametrised normal geodesics whose
// projections turn counter-clockwise at rate a.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "heisbill/errors.hpp"
#include "heisbill/roots.hpp"

namespace heis {

template <typename Scalar>
using Vector2T = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Point3T = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
struct CovectorT {
  Scalar a{0};
  Scalar b{0};
  Scalar c{0};

  Vector2T<Scalar> planar() const { return {b, c}; }
  Eigen::Matrix<Scalar, 3, 1> coeffs() const { return {a, b, c}; }
  static CovectorT from_coeffs(const Eigen::Matrix<Scalar, 3, 1>& v) { return {v[0], v[1], v[2]}; }
};

template <typename Scalar>
CovectorT<Scalar> operator+(const CovectorT<Scalar>& l, const CovectorT<Scalar>& r) {
  return {l.a + r.a, l.b + r.b, l.c + r.c};
}
template <typename Scalar>
CovectorT<Scalar> operator-(const CovectorT<Scalar>& l, const CovectorT<Scalar>& r) {
  return {l.a - r.a, l.b - r.b, l.c - r.c};
}
template <typename Scalar>
CovectorT<Scalar> operator*(Scalar s, const CovectorT<Scalar>& m) {
  return {s * m.a, s * m.b, s * m.c};
}
template <typename Scalar>
CovectorT<Scalar> operator-(const CovectorT<Scalar>& m) {
  return {-m.a, -m.b, -m.c};
}

template <typename Scalar>
struct StateT {
  Point3T<Scalar> point{Point3T<Scalar>::Zero()};
  CovectorT<Scalar> momentum{};
};

template <typename Scalar>
struct GeodesicArcT;

template <typename Scalar>
Scalar hamiltonian(const CovectorT<Scalar>& m) {
  return (m.b * m.b + m.c * m.c) / 2;
}

template <typename Scalar>
bool is_unit(const CovectorT<Scalar>& m, Scalar tol = Scalar(1e-9)) {
  using std::abs;
  return abs(m.b * m.b + m.c * m.c - 1) <= tol;
}

template <typename Scalar>
void require_unit(const CovectorT<Scalar>& m) {
  if (!is_unit(m)) throw NotUnitError();
}

/// Rescales (b, c) to unit length, keeping a. Throws NotUnitError when the
/// planar part is (numerically) zero.
template <typename Scalar>
CovectorT<Scalar> normalized(const CovectorT<Scalar>& m, Scalar min_norm = Scalar(1e-9)) {
  using std::hypot;
  const Scalar n = hypot(m.b, m.c);
  if (!(n >= min_norm)) throw NotUnitError();
  return {m.a, m.b / n, m.c / n};
}

template <typename Scalar>
Scalar cross(const Vector2T<Scalar>& u, const Vector2T<Scalar>& v) {
  return u.x() * v.y() - u.y() * v.x();
}

template <typename Scalar>
Vector2T<Scalar> perp(const Vector2T<Scalar>& v) {
  return {-v.y(), v.x()};
}

template <typename Scalar>
Vector2T<Scalar> rotate(const Vector2T<Scalar>& v, Scalar angle) {
  using std::cos;
  using std::sin;
  const Scalar ca = cos(angle), sa = sin(angle);
  return {ca * v.x() - sa * v.y(), sa * v.x() + ca * v.y()};
}

namespace detail {

template <typename Scalar>
Scalar sinc(Scalar t) {
  using std::sin;
  return t == 0 ? Scalar(1) : sin(t) / t;
}

// (1 - cos t) / t
template <typename Scalar>
Scalar cosc(Scalar t) {
  using std::sin;
  if (t == 0) return Scalar(0);
  const Scalar s = sin(t / 2);
  return 2 * s * s / t;
}

// (t - sin t) / t^2
template <typename Scalar>
Scalar sinm(Scalar t) {
  using std::abs;
  using std::sin;
  if (abs(t) < Scalar(1e-2)) {
    const Scalar t2 = t * t;
    return t * (Scalar(1) / 6 - t2 * (Scalar(1) / 120 - t2 * (Scalar(1) / 5040 - t2 / 362880)));
  }
  return (t - sin(t)) / (t * t);
}

}  // namespace detail

/// Horizontal velocity (b, c, dz) of a state; always annihilated by alpha.
template <typename Scalar>
Point3T<Scalar> velocity(const StateT<Scalar>& s) {
  const auto& p = s.point;
  const auto& m = s.momentum;
  return {m.b, m.c, (p.x() * m.c - p.y() * m.b) / 2};
}

/// alpha evaluated on a tangent vector at p.
template <typename Scalar>
Scalar contact_form(const Point3T<Scalar>& p, const Point3T<Scalar>& v) {
  return v.z() - (p.x() * v.y() - p.y() * v.x()) / 2;
}

/// Exact Hamiltonian flow of H = (b^2 + c^2)/2 on the unit level.
template <typename Scalar>
StateT<Scalar> flow(const StateT<Scalar>& s, Scalar t) {
  using std::cos;
  using std::sin;
  require_unit(s.momentum);
  const Scalar a = s.momentum.a;
  const Vector2T<Scalar> v0 = s.momentum.planar();
  const Vector2T<Scalar> p0 = s.point.template head<2>();
  const Scalar th = a * t;
  const Vector2T<Scalar> dp = t * (detail::sinc(th) * v0 + detail::cosc(th) * perp(v0));
  const Scalar dz = (cross(p0, dp) + t * t * detail::sinm(th)) / 2;

  StateT<Scalar> out;
  out.point << p0 + dp, s.point.z() + dz;
  const Scalar ct = cos(th), st = sin(th);
  out.momentum = {a, ct * v0.x() - st * v0.y(), st * v0.x() + ct * v0.y()};
  return out;
}

template <typename Scalar>
struct GeodesicArcT {
  StateT<Scalar> start{};
  Scalar duration{0};

  StateT<Scalar> at(Scalar t) const { return flow(start, t); }
  StateT<Scalar> end() const { return flow(start, duration); }
};

template <typename Scalar>
struct ProjectedCircleT {
  Vector2T<Scalar> center;
  Scalar radius;
  Scalar angular_rate;  // signed, equals a
};

template <typename Scalar>
struct ProjectedLineT {
  Vector2T<Scalar> point;
  Vector2T<Scalar> direction;
};

template <typename Scalar>
using ProjectedPathT = std::variant<ProjectedCircleT<Scalar>, ProjectedLineT<Scalar>>;

template <typename Scalar>
ProjectedPathT<Scalar> projected_circle(const StateT<Scalar>& s) {
  using std::abs;
  require_unit(s.momentum);
  const Vector2T<Scalar> p0 = s.point.template head<2>();
  const Vector2T<Scalar> v0 = s.momentum.planar();
  const Scalar a = s.momentum.a;
  if (a == 0) return ProjectedLineT<Scalar>{p0, v0};
  return ProjectedCircleT<Scalar>{p0 + perp(v0) / a, 1 / abs(a), a};
}

/// z-displacement along the arc (the signed area swept by the projection,
/// closed through the origin).
template <typename Scalar>
Scalar delta_z(const GeodesicArcT<Scalar>& arc) {
  return arc.end().point.z() - arc.start.point.z();
}

/// The same area computed geometrically: shoelace triangle (origin, p0, p1)
/// plus the signed circular segment between chord and arc.
template <typename Scalar>
Scalar swept_area(const GeodesicArcT<Scalar>& arc) {
  using std::abs;
  using std::sin;
  const auto path = projected_circle(arc.start);
  const Vector2T<Scalar> p0 = arc.start.point.template head<2>();
  if (const auto* line = std::get_if<ProjectedLineT<Scalar>>(&path)) {
    const Vector2T<Scalar> p1 = p0 + arc.duration * line->direction;
    return cross(p0, p1) / 2;
  }
  const auto& circle = std::get<ProjectedCircleT<Scalar>>(path);
  const Scalar turn = circle.angular_rate * arc.duration;
  const Vector2T<Scalar> p1 = circle.center + rotate<Scalar>(p0 - circle.center, turn);
  const Scalar r2 = circle.radius * circle.radius;
  return cross(p0, p1) / 2 + r2 * (turn - sin(turn)) / 2;
}

namespace detail {

// Times t in (lo, hi) solving rate*t + offset == base (mod period), ascending.
template <typename Scalar>
void phase_times(Scalar rate, Scalar offset, Scalar base, Scalar period, Scalar lo, Scalar hi,
                 std::vector<Scalar>& out) {
  using std::ceil;
  using std::floor;
  if (rate == 0 || !(hi > lo)) return;
  const Scalar u0 = std::min(rate * lo, rate * hi) + offset - base;
  const Scalar u1 = std::max(rate * lo, rate * hi) + offset - base;
  const Scalar k0 = ceil(u0 / period), k1 = floor(u1 / period);
  for (Scalar k = k0; k <= k1; k += 1) {
    const Scalar t = (base - offset + k * period) / rate;
    if (t > lo && t < hi) out.push_back(t);
  }
}

}  // namespace detail

/// Critical times of z(t) along the geodesic through s, in (lo, hi), ascending.
template <typename Scalar>
std::vector<Scalar> z_critical_times(const StateT<Scalar>& s, Scalar lo, Scalar hi) {
  using std::asin;
  using std::atan2;
  std::vector<Scalar> out;
  const Scalar a = s.momentum.a;
  if (a == 0) return out;  // z is affine along lines
  const Vector2T<Scalar> v0 = s.momentum.planar();
  const Vector2T<Scalar> w = a * Vector2T<Scalar>(s.point.template head<2>()) + perp(v0);
  const Scalar wn = w.norm();
  if (wn < 1) return out;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar offset = atan2(v0.y(), v0.x()) - atan2(w.y(), w.x());
  const Scalar root = asin(-1 / wn);
  detail::phase_times<Scalar>(a, offset, root, 2 * pi, lo, hi, out);
  detail::phase_times<Scalar>(a, offset, pi - root, 2 * pi, lo, hi, out);
  std::sort(out.begin(), out.end());
  return out;
}

template <typename Scalar>
struct ZRangeT {
  Scalar min;
  Scalar max;
};

/// Exact extrema of z over [from, arc.duration].
template <typename Scalar>
ZRangeT<Scalar> arc_z_range(const GeodesicArcT<Scalar>& arc, Scalar from = 0) {
  const Scalar z0 = arc.at(from).point.z();
  const Scalar z1 = arc.end().point.z();
  ZRangeT<Scalar> r{std::min(z0, z1), std::max(z0, z1)};
  for (Scalar t : z_critical_times(arc.start, from, arc.duration)) {
    const Scalar z = arc.at(t).point.z();
    r.min = std::min(r.min, z);
    r.max = std::max(r.max, z);
  }
  return r;
}

/// Element of Heis_3 x| SO(2): rotation by theta about the z-axis followed by
/// the left translation carrying the origin to v.
template <typename Scalar>
struct SymmetryElementT {
  Point3T<Scalar> v{Point3T<Scalar>::Zero()};
  Scalar theta{0};

  static SymmetryElementT identity() { return {}; }
  static SymmetryElementT translation(const Point3T<Scalar>& v) { return {v, Scalar(0)}; }
  static SymmetryElementT rotation(Scalar theta) { return {Point3T<Scalar>::Zero(), theta}; }

  Point3T<Scalar> apply(const Point3T<Scalar>& p) const {
    const Vector2T<Scalar> q = rotate<Scalar>(p.template head<2>(), theta);
    return {q.x() + v.x(), q.y() + v.y(), p.z() + v.z() + (v.x() * q.y() - v.y() * q.x()) / 2};
  }

  /// Pushforward of a tangent vector at p.
  Point3T<Scalar> push_vector(const Point3T<Scalar>& p, const Point3T<Scalar>& w) const {
    (void)p;
    const Vector2T<Scalar> q = rotate<Scalar>(w.template head<2>(), theta);
    return {q.x(), q.y(), w.z() + (v.x() * q.y() - v.y() * q.x()) / 2};
  }

  /// alpha is invariant, so a is untouched and (b, c) rotates with the plane.
  StateT<Scalar> apply(const StateT<Scalar>& s) const {
    const Vector2T<Scalar> m = rotate<Scalar>(s.momentum.planar(), theta);
    return {apply(s.point), {s.momentum.a, m.x(), m.y()}};
  }
};

namespace detail {

template <typename Scalar>
Point3T<Scalar> heisenberg_product(const Point3T<Scalar>& u, const Point3T<Scalar>& w) {
  return {u.x() + w.x(), u.y() + w.y(), u.z() + w.z() + (u.x() * w.y() - u.y() * w.x()) / 2};
}

}  // namespace detail

/// (g * h)(p) = g(h(p)).
template <typename Scalar>
SymmetryElementT<Scalar> compose(const SymmetryElementT<Scalar>& g, const SymmetryElementT<Scalar>& h) {
  const Vector2T<Scalar> hv = rotate<Scalar>(h.v.template head<2>(), g.theta);
  const Point3T<Scalar> rotated{hv.x(), hv.y(), h.v.z()};
  return {detail::heisenberg_product(g.v, rotated), g.theta + h.theta};
}

template <typename Scalar>
SymmetryElementT<Scalar> inverse(const SymmetryElementT<Scalar>& g) {
  const Vector2T<Scalar> back = rotate<Scalar>(Vector2T<Scalar>(-g.v.x(), -g.v.y()), -g.theta);
  return {Point3T<Scalar>(back.x(), back.y(), -g.v.z()), -g.theta};
}

/// F(mu) = (mu - sin mu cos mu) / sin^2 mu, odd and increasing on (-pi, pi).
template <typename Scalar>
Scalar chord_area_ratio(Scalar mu) {
  using std::abs;
  using std::sin;
  using std::cos;
  if (abs(mu) < Scalar(1e-3)) {
    const Scalar m2 = mu * mu;
    return mu * (Scalar(2) / 3 + m2 * (Scalar(4) / 45 + m2 * Scalar(4) / 315));
  }
  const Scalar s = sin(mu);
  return (mu - s * cos(mu)) / (s * s);
}

/// Two-point geodesic problem (Dido). Branch 0 is the principal solution with
/// half-aperture |mu| < pi; branch k != 0 selects mu in sign(k) (|k| pi, (|k|+1) pi).
template <typename Scalar>
GeodesicArcT<Scalar> connect(const Point3T<Scalar>& p, const Point3T<Scalar>& q, int branch = 0,
                             Scalar tol = Scalar(1e-12)) {
  using std::abs;
  using std::sin;
  using std::sqrt;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Vector2T<Scalar> pxy = p.template head<2>();
  const Vector2T<Scalar> qxy = q.template head<2>();
  const Vector2T<Scalar> chord = qxy - pxy;
  const Scalar len = chord.norm();
  const Scalar dz = q.z() - p.z();
  const int loops = branch < 0 ? -branch : branch;

  GeodesicArcT<Scalar> arc;
  arc.start.point = p;
  if (len == 0) {
    if (dz == 0) throw DegenerateChordError();
    // Closed loops through p: loops+1 full circles of total area dz.
    const Scalar rho = sqrt(abs(dz) / (pi * (loops + 1)));
    arc.start.momentum = {(dz > 0 ? 1 : -1) / rho, 1, 0};
    arc.duration = 2 * pi * rho * (loops + 1);
    return arc;
  }

  const Scalar target = 4 * (dz - cross(pxy, qxy) / 2) / (len * len);
  Scalar mu;
  if (branch == 0) {
    mu = bisect<Scalar>([&](Scalar m) { return chord_area_ratio(m) - target; }, -pi, pi, true, tol);
  } else {
    // Work with |mu| in (k pi, (k+1) pi); F(-mu) = -F(mu).
    const Scalar want = branch > 0 ? target : -target;
    const Scalar lo = loops * pi, hi = (loops + 1) * pi;
    const Scalar mu_min = golden_section_min<Scalar>([](Scalar m) { return chord_area_ratio(m); },
                                                     lo + tol, hi - tol, tol);
    if (chord_area_ratio(mu_min) > want) {
      throw NoSolutionError("connect: no geodesic on branch " + std::to_string(branch));
    }
    const Scalar m =
        bisect<Scalar>([&](Scalar x) { return want - chord_area_ratio(x); }, lo, mu_min, true, tol);
    mu = branch > 0 ? m : -m;
  }

  const Vector2T<Scalar> unit_chord = chord / len;
  if (mu == 0) {
    arc.start.momentum = {0, unit_chord.x(), unit_chord.y()};
    arc.duration = len;
    return arc;
  }
  const Scalar s = sin(mu);
  const Scalar a = (mu > 0 ? 1 : -1) * 2 * abs(s) / len;
  Vector2T<Scalar> dir = rotate<Scalar>(unit_chord, -mu);
  if (mu * s < 0) dir = -dir;
  arc.start.momentum = {a, dir.x(), dir.y()};
  arc.duration = len * abs(mu) / abs(s);
  return arc;
}

using Point3 = Point3T<double>;
using Vector2 = Vector2T<double>;
using Covector = CovectorT<double>;
using State = StateT<double>;
using GeodesicArc = GeodesicArcT<double>;
using ProjectedCircle = ProjectedCircleT<double>;
using ProjectedLine = ProjectedLineT<double>;
using ProjectedPath = ProjectedPathT<double>;
using SymmetryElement = SymmetryElementT<double>;
using ZRange = ZRangeT<double>;

}  // namespace heis
