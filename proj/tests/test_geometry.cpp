#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "heisbill/geometry.hpp"

using namespace heis;

namespace {

constexpr double pi = std::numbers::pi;

State unit_state(double x, double y, double z, double a, double angle) {
  return {Point3(x, y, z), {a, std::cos(angle), std::sin(angle)}};
}

State random_state(std::mt19937_64& rng, double a_max) {
  std::uniform_real_distribution<double> u(-1, 1);
  return unit_state(3 * u(rng), 3 * u(rng), 3 * u(rng), a_max * u(rng), pi * u(rng));
}

double dist(const State& u, const State& v) {
  return std::max((u.point - v.point).norm(), (u.momentum.coeffs() - v.momentum.coeffs()).norm());
}

double quadrature_dz(const GeodesicArc& arc) {
  auto f = [&](double t) {
    const State s = arc.at(t);
    return (s.point.x() * s.momentum.c - s.point.y() * s.momentum.b) / 2;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, arc.duration, 20, 1e-14);
}

}  // namespace

TEST_CASE("hamiltonian") {
  CHECK(hamiltonian(Covector{5, 1, 0}) == 0.5);
  CHECK(hamiltonian(Covector{0, 0, 0}) == 0);
  CHECK(hamiltonian(Covector{-1, 0.6, 0.8}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("flow: straight line, full circle, identity") {
  const State line = flow(unit_state(0, 0, 0, 0, 0), 2.0);
  CHECK((line.point - Point3(2, 0, 0)).norm() < 1e-15);
  CHECK(line.momentum.b == 1);

  const State loop = flow(State{Point3::Zero(), {1, 1, 0}}, 2 * pi);
  CHECK((loop.point - Point3(0, 0, pi)).norm() < 1e-12);
  CHECK((loop.momentum.coeffs() - Eigen::Vector3d(1, 1, 0)).norm() < 1e-12);

  const State s = unit_state(0.3, -1, 2, 1.7, 0.4);
  CHECK(dist(flow(s, 0.0), s) == 0);
}

TEST_CASE("flow rejects non-unit momentum") {
  CHECK_THROWS_AS(flow(State{Point3::Zero(), {0, 2, 0}}, 1.0), NotUnitError);
}

TEST_CASE("flow turns counter-clockwise for positive a") {
  // Quarter period of the unit circle centred at (0, 1).
  const State q = flow(State{Point3::Zero(), {1, 1, 0}}, pi / 2);
  CHECK((q.point.head<2>() - Vector2(1, 1)).norm() < 1e-14);
  CHECK((q.momentum.planar() - Vector2(0, 1)).norm() < 1e-14);
}

TEST_CASE("group law and conservation") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 5);
  for (int i = 0; i < 200; ++i) {
    const State s = random_state(rng, 10);
    const double t1 = u(rng), t2 = u(rng);
    CHECK(dist(flow(flow(s, t1), t2), flow(s, t1 + t2)) < 1e-11);
  }
  for (int i = 0; i < 50; ++i) {
    const State s = random_state(rng, 10);
    const State e = flow(s, 1000.0);
    CHECK(std::abs(hamiltonian(e.momentum) - 0.5) < 1e-12);
    CHECK(e.momentum.a == s.momentum.a);
  }
}

TEST_CASE("flow matches high-order numerical integration") {
  namespace odeint = boost::numeric::odeint;
  using Y = std::array<double, 6>;
  auto rhs = [](const Y& s, Y& ds, double) {
    ds = {s[4], s[5], (s[0] * s[5] - s[1] * s[4]) / 2, 0, -s[3] * s[5], s[3] * s[4]};
  };
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const State s = random_state(rng, 10);
    Y y{s.point.x(), s.point.y(), s.point.z(), s.momentum.a, s.momentum.b, s.momentum.c};
    odeint::integrate_adaptive(odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_fehlberg78<Y>()), rhs, y,
                               0.0, 10.0, 1e-3);
    const State e = flow(s, 10.0);
    const State n{Point3(y[0], y[1], y[2]), {y[3], y[4], y[5]}};
    CHECK(dist(e, n) < 1e-8);
  }
}

TEST_CASE("alpha annihilates the velocity of the flow") {
  // Richardson-extrapolated central differences in long double.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 10);
  for (int i = 0; i < 100; ++i) {
    const State d = random_state(rng, 5);
    const StateT<long double> s{d.point.cast<long double>(), {d.momentum.a, d.momentum.b, d.momentum.c}};
    const long double t = u(rng), h = 1e-4L;
    auto central = [&](long double k) {
      return Point3T<long double>((flow(s, t + k).point - flow(s, t - k).point) / (2 * k));
    };
    const Point3T<long double> v = (4 * central(h / 2) - central(h)) / 3;
    CHECK(std::abs(static_cast<double>(contact_form(flow(s, t).point, v))) < 1e-10);
    CHECK(std::abs(static_cast<double>(contact_form(d.point, velocity(d)))) < 1e-15);
  }
}

TEST_CASE("long double flow agrees with double flow") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const State d = random_state(rng, 10);
    const StateT<long double> s{d.point.cast<long double>(), {d.momentum.a, d.momentum.b, d.momentum.c}};
    const StateT<long double> e = flow(s, 7.0L);
    const State f = flow(d, 7.0);
    CHECK(static_cast<double>((e.point - f.point.cast<long double>()).norm()) < 1e-12);
  }
}

TEST_CASE("projected_circle") {
  const auto c1 = std::get<ProjectedCircle>(projected_circle(State{Point3::Zero(), {1, 1, 0}}));
  CHECK((c1.center - Vector2(0, 1)).norm() < 1e-15);
  CHECK(c1.radius == 1);

  const auto l = std::get<ProjectedLine>(projected_circle(State{Point3::Zero(), {0, 0, 1}}));
  CHECK(l.point.norm() == 0);
  CHECK((l.direction - Vector2(0, 1)).norm() == 0);

  const auto c3 = std::get<ProjectedCircle>(projected_circle(State{Point3(1, 0, 0), {-2, 0, 1}}));
  CHECK(c3.radius == 0.5);
  CHECK((c3.center - Vector2(1.5, 0)).norm() < 1e-15);

  // Samples of the flow stay on the circle.
  const State s = unit_state(0.4, -0.2, 0, -3, 1.1);
  const auto c = std::get<ProjectedCircle>(projected_circle(s));
  for (int k = 0; k < 20; ++k) {
    CHECK(std::abs((flow(s, 0.3 * k).point.head<2>() - c.center).norm() - c.radius) < 1e-14);
  }
}

TEST_CASE("delta_z") {
  CHECK(delta_z(GeodesicArc{unit_state(0, 0, 0, 0, 0.7), 3.0}) == 0);
  for (double rho : {0.5, 1.0, 3.0}) {
    CHECK(delta_z(GeodesicArc{State{Point3::Zero(), {1 / rho, 1, 0}}, 2 * pi * rho}) ==
          doctest::Approx(pi * rho * rho).epsilon(1e-13));
  }
  const GeodesicArc half{unit_state(2, 1, 0, 1, 0.3), pi};
  CHECK(std::abs(delta_z(half) - quadrature_dz(half)) < 1e-12);
  CHECK(std::abs(delta_z(half) - swept_area(half)) < 1e-10);
}

TEST_CASE("delta_z against quadrature and the shoelace formula") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 10);
  for (int i = 0; i < 100; ++i) {
    const GeodesicArc arc{random_state(rng, 10), u(rng)};
    CHECK(std::abs(delta_z(arc) - quadrature_dz(arc)) < 1e-8);
    CHECK(std::abs(delta_z(arc) - swept_area(arc)) < 1e-10);
  }
}

TEST_CASE("interior loops gain pi / a^2") {
  for (double a : {0.5, 2.0, -3.0}) {
    const GeodesicArc loop{unit_state(0.1, 0.2, 0, a, 0.5), 2 * pi / std::abs(a)};
    CHECK(delta_z(loop) == doctest::Approx((a > 0 ? 1 : -1) * pi / (a * a)).epsilon(1e-12));
  }
}

TEST_CASE("symmetries") {
  const State s{Point3(1, 0, 0), {0, 1, 0}};
  CHECK(dist(SymmetryElement::identity().apply(s), s) == 0);

  const State r = SymmetryElement::rotation(pi / 2).apply(s);
  CHECK(dist(r, State{Point3(0, 1, 0), {0, 0, 1}}) < 1e-15);

  const SymmetryElement shift = SymmetryElement::translation(Point3(1, 0, 0));
  const State g = unit_state(0.2, 0.3, 0.1, 1.3, 0.9);
  for (int k = 0; k < 10; ++k) {
    const double t = 0.7 * k;
    CHECK(dist(shift.apply(flow(g, t)), flow(shift.apply(g), t)) < 1e-12);
  }
}

TEST_CASE("symmetries preserve alpha, H and commute with the flow") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  auto random_element = [&] {
    return SymmetryElement{Point3(3 * u(rng), 3 * u(rng), 3 * u(rng)), pi * u(rng)};
  };
  for (int i = 0; i < 20; ++i) {
    const SymmetryElement g = random_element();
    const Point3 p(3 * u(rng), 3 * u(rng), 3 * u(rng));
    for (const Point3& w : {Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1), Point3(u(rng), u(rng), u(rng))}) {
      CHECK(std::abs(contact_form(g.apply(p), g.push_vector(p, w)) - contact_form(p, w)) < 1e-12);
    }
    const State s = random_state(rng, 10);
    CHECK(hamiltonian(g.apply(s).momentum) == doctest::Approx(0.5).epsilon(1e-14));
    const double t = 10 * std::abs(u(rng));
    CHECK(dist(g.apply(flow(s, t)), flow(g.apply(s), t)) < 1e-11);
  }
  for (int i = 0; i < 20; ++i) {
    const SymmetryElement f = random_element(), g = random_element(), h = random_element();
    const Point3 p(u(rng), u(rng), u(rng));
    CHECK((compose(compose(f, g), h).apply(p) - compose(f, compose(g, h)).apply(p)).norm() < 1e-12);
    CHECK((compose(f, g).apply(p) - f.apply(g.apply(p))).norm() < 1e-12);
    CHECK((inverse(f).apply(f.apply(p)) - p).norm() < 1e-12);
  }
}

TEST_CASE("chord_area_ratio series matches the closed form") {
  for (double mu : {1e-3, -1e-3, 9.99e-4}) {
    const double s = std::sin(mu);
    const double closed = (mu - s * std::cos(mu)) / (s * s);
    CHECK(std::abs(chord_area_ratio(mu) - closed) < 1e-12);
  }
  CHECK(chord_area_ratio(0.0) == 0);
  double prev = chord_area_ratio(-3.1);
  for (int i = 1; i <= 1000; ++i) {
    const double v = chord_area_ratio(-3.1 + 6.2 * i / 1000);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("connect") {
  const GeodesicArc line = connect(Point3(0, 0, 0), Point3(2, 0, 0));
  CHECK(line.duration == doctest::Approx(2).epsilon(1e-12));
  CHECK(std::abs(line.start.momentum.a) < 1e-11);

  const GeodesicArc circle = connect(Point3(0, 0, 0), Point3(0, 0, pi));
  CHECK(circle.duration == doctest::Approx(2 * pi).epsilon(1e-12));
  CHECK((circle.end().point - Point3(0, 0, pi)).norm() < 1e-9);

  const GeodesicArc small = connect(Point3(0, 0, 0), Point3(2, 0, 0.1));
  CHECK(small.start.momentum.a > 0);
  CHECK(small.start.momentum.a < 1);
  CHECK((small.end().point - Point3(2, 0, 0.1)).norm() < 1e-9);

  CHECK_THROWS_AS(connect(Point3(1, 1, 1), Point3(1, 1, 1)), DegenerateChordError);
  CHECK_THROWS_AS(connect(Point3(0, 0, 0), Point3(1, 0, 0), 1), NoSolutionError);
}

TEST_CASE("connect round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const Point3 p(u(rng), u(rng), u(rng)), q(u(rng), u(rng), u(rng));
    const GeodesicArc arc = connect(p, q);
    CHECK((arc.end().point - q).norm() < 1e-9);
  }
  // Non-principal branch: two full loops plus a chord.
  const GeodesicArc loop = connect(Point3(0, 0, 0), Point3(0.1, 0, 5), 1);
  CHECK((loop.end().point - Point3(0.1, 0, 5)).norm() < 1e-9);
  CHECK(loop.duration > connect(Point3(0, 0, 0), Point3(0.1, 0, 5)).duration);
}

TEST_CASE("z critical times and range") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.5, 6);
  for (int i = 0; i < 50; ++i) {
    const GeodesicArc arc{random_state(rng, 4), u(rng)};
    const ZRange r = arc_z_range(arc);
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k <= 20000; ++k) {
      const double z = arc.at(arc.duration * k / 20000).point.z();
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
    CHECK(r.min <= lo + 1e-12);
    CHECK(r.max >= hi - 1e-12);
    CHECK(r.min > lo - 1e-6);
    CHECK(r.max < hi + 1e-6);
  }
}
