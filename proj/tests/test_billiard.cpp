#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heisbill/billiard.hpp"
#include "heisbill/orbits.hpp"

using namespace heis;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

State unit_state(const Point3& p, double a, double angle) { return {p, {a, std::cos(angle), std::sin(angle)}}; }

State random_interior_state(const TableSpec& table, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    const Point3 p(2 * u(rng), 2 * u(rng), 2 * u(rng));
    if (signed_distance(table, p) < -1e-3) return unit_state(p, 4 * u(rng), pi * u(rng));
  }
}

}  // namespace

TEST_CASE("next_event: chord along the axis") {
  const auto e = next_event(InfiniteCylinder{{0, 0}, 1}, unit_state(Point3::Zero(), 0, 0), 10);
  REQUIRE(e.has_value());
  CHECK(e->time == doctest::Approx(1).epsilon(1e-12));
  CHECK((e->contact.point - Point3(1, 0, 0)).norm() < 1e-12);
  CHECK(e->outcome.kind == ReflectionKind::non_degenerate);
}

TEST_CASE("next_event: self-reflecting arc in the band reaches the top face") {
  const double H = pi;
  const double r0 = std::sqrt(H / pi);
  const double rho = r0 / 2;
  const auto e = next_event(HorizontalBand{0, H}, State{Point3(r0, 0, 0), {1 / rho, 0, 1}}, 100);
  REQUIRE(e.has_value());
  // z gains pi rho^2 per projected loop, so H takes four loops.
  CHECK(e->time == doctest::Approx(4 * 2 * pi * rho).epsilon(1e-10));
  CHECK((e->contact.point - Point3(r0, 0, H)).norm() < 1e-9);
  CHECK(e->contact.face == Face::top);
}

TEST_CASE("next_event: no event while the arc stays interior") {
  CHECK_FALSE(next_event(HorizontalHalfSpace{0, 1}, unit_state(Point3(0, 0, 1), 0, 0), 10).has_value());
}

TEST_CASE("next_event rejects outside starts") {
  CHECK_THROWS_AS(next_event(InfiniteCylinder{{0, 0}, 1}, unit_state(Point3(2, 0, 0), 0, 0), 10),
                  StartsOutsideError);
  CHECK_THROWS_AS(run(InfiniteCylinder{{0, 0}, 1}, unit_state(Point3(2, 0, 0), 0, 0), 10, 10), StartsOutsideError);
}

TEST_CASE("run: diameter bouncing") {
  const double eps = 1e-6;
  const Trajectory t = run(InfiniteCylinder{{0, 0}, 1}, unit_state(Point3(-1 + eps, 0, 0), 0, 0), 10, inf);
  REQUIRE(t.events.size() == 10);
  CHECK(t.termination == Termination::max_bounces);
  for (std::size_t k = 0; k < t.events.size(); ++k) {
    const double x = t.events[k].contact.point.x();
    CHECK(std::abs(std::abs(x) - 1) < 1e-12);
    CHECK((x > 0) == (k % 2 == 0));
    if (k > 0) CHECK(t.arcs[k].duration == doctest::Approx(2).epsilon(1e-12));
    CHECK(t.arcs[k].start.momentum.a == 0);
  }
  CHECK(t.bounces() == 10);
}

TEST_CASE("run: band orbit closes after two bounces") {
  const BandOrbit o = build_band_orbit(pi, 1);
  CHECK(o.r0 == doctest::Approx(1).epsilon(1e-15));
  CHECK(o.rho == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(o.orbit.trajectory.events.size() == 2);
  CHECK(o.orbit.closure_error < 1e-9);
}

TEST_CASE("run: hitting the singular point") {
  // Circle through the origin, turning clockwise, so z decreases to 0 there.
  const State at_origin{Point3::Zero(), {-1, 1, 0}};
  const State start = flow(at_origin, -1.0);
  REQUIRE(start.point.z() > 0);
  const Trajectory t = run(HorizontalHalfSpace{0, 1}, start, 10, inf);
  CHECK(t.termination == Termination::singular_hit);
  REQUIRE(t.events.size() == 1);
  CHECK(t.events[0].contact.point.norm() < 1e-6);
}

TEST_CASE("run: escape, length budget and zero bounces") {
  const Trajectory esc = run(HorizontalHalfSpace{0, 1}, unit_state(Point3(0, 0, 1), 0, 0), 10, inf);
  CHECK(esc.termination == Termination::escaped);
  CHECK(esc.events.empty());

  const Trajectory budget = run(InfiniteCylinder{{0, 0}, 1}, unit_state(Point3::Zero(), 0, 0), 100, 4.5);
  CHECK(budget.termination == Termination::max_length);
  CHECK(budget.events.size() == 2);
  CHECK(budget.total_length() == doctest::Approx(4.5).epsilon(1e-12));

  const Trajectory none = run(InfiniteCylinder{{0, 0}, 1}, unit_state(Point3::Zero(), 0, 0), 0, inf);
  CHECK(none.arcs.empty());
  CHECK(none.events.empty());
}

TEST_CASE("run: corner of the finite cylinder") {
  const FiniteCylinder table{{0, 0}, 1, 0, 1};
  const State at_corner{Point3(1, 0, 0), {0, std::cos(-0.5), std::sin(-0.5)}};
  const State start = flow(at_corner, -0.5);
  REQUIRE(signed_distance(table, start.point) < 0);
  const Trajectory t = run(table, start, 10, inf);
  CHECK(t.termination == Termination::corner_hit);
  REQUIRE(t.events.size() == 1);
  CHECK(t.events[0].contact.is_corner);
  CHECK(t.bounces() == 0);
}

TEST_CASE("termination names round-trip") {
  for (Termination t : {Termination::max_bounces, Termination::max_length, Termination::corner_hit,
                        Termination::singular_hit, Termination::outer_tangency_stop, Termination::escaped}) {
    CHECK(termination_from_string(to_string(t)) == t);
  }
  CHECK(to_string(Termination::singular_hit) == "SingularHit");
}

TEST_CASE("trajectory invariants") {
  std::mt19937_64 rng(31);
  const std::vector<TableSpec> tables{InfiniteCylinder{{0.2, 0}, 1.5}, HorizontalBand{-1, 1},
                                      FiniteCylinder{{0, 0}, 1.5, -1, 1}};
  for (const TableSpec& table : tables) {
    for (int i = 0; i < 50; ++i) {
      const Trajectory t = run(table, random_interior_state(table, rng), 20, 200);
      double total = 0;
      for (const auto& arc : t.arcs) total += arc.duration;
      CHECK(t.total_length() == doctest::Approx(total).epsilon(1e-14));
      for (std::size_t k = 0; k < t.events.size(); ++k) {
        const Event& e = t.events[k];
        CHECK((t.arcs[k].end().point - e.contact.point).norm() < 1e-9);
        CHECK(e.time == t.arcs[k].duration);
        if (e.outcome.kind == ReflectionKind::non_degenerate) {
          CHECK(std::abs(hamiltonian(e.outcome.out) - 0.5) < 1e-12);
        }
        if (k + 1 < t.arcs.size()) {
          const State next = t.arcs[k + 1].start;
          CHECK((next.point - e.contact.point).norm() < 1e-10);
          CHECK((next.momentum.coeffs() - e.outcome.out.coeffs()).norm() < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("magnetic momentum is constant in vertical-wall tables") {
  std::mt19937_64 rng(32);
  const TableSpec table = InfiniteCylinder{{0, 0}, 1.5};
  for (int i = 0; i < 50; ++i) {
    const State s = random_interior_state(table, rng);
    const Trajectory t = run(table, s, 50, inf);
    for (const auto& arc : t.arcs) CHECK(arc.start.momentum.a == s.momentum.a);
  }
}

TEST_CASE("first event is the first crossing") {
  // Dense sampling finds no boundary crossing before any reported event.
  std::mt19937_64 rng(33);
  const std::vector<TableSpec> tables{InfiniteCylinder{{0.2, -0.1}, 1.5}, HorizontalHalfSpace{-0.5, 1},
                                      HorizontalHalfSpace{0.5, -1},        VerticalHalfSpace{0.7},
                                      HorizontalBand{-1, 1},               FiniteCylinder{{0.1, 0}, 1.5, -1, 1}};
  for (const TableSpec& table : tables) {
    int worst = 0;
    for (int i = 0; i < 200; ++i) {
      const Trajectory t = run(table, random_interior_state(table, rng), 3, 30);
      for (std::size_t k = 0; k < t.events.size(); ++k) {
        const GeodesicArc& arc = t.arcs[k];
        for (int j = 1; j < 10000; ++j) {
          if (signed_distance(table, arc.at(arc.duration * j / 10000).point) > 1e-9) ++worst;
        }
      }
    }
    CHECK(worst == 0);
  }
}

TEST_CASE("caustic counts") {
  const TableSpec table = InfiniteCylinder{{0, 0}, 1};
  // Launched tangent to the circle of radius 0.5 (projected radius 0.8 around it).
  const double rho = 0.8;
  const State s{Point3(-0.5, 0, 0), {1 / rho, 0, -1}};
  const Trajectory t = run(table, s, 12, inf);
  for (int c : caustic_tangency_count(t, 0.5)) CHECK(c == 1);

  const Trajectory diameter = run(table, State{Point3(-0.5, 0, 0), {0, 1, 0}}, 6, inf);
  for (int c : caustic_tangency_count(diameter, 0.5)) CHECK(c == 0);

  // Small loops hugging the wall never come near radius 0.5.
  const Trajectory small = run(table, State{Point3(0.94, 0, 0), {1 / 0.04, 0, -1}}, 6, inf);
  const auto counts = caustic_tangency_count(small, 0.5);
  CHECK_FALSE(counts.empty());
  for (int c : counts) CHECK(c == 0);

  CHECK_THROWS_AS(caustic_tangency_count(run(InfiniteCylinder{{0.5, 0}, 1}, s, 2, inf), 0.5), WrongTableError);
}

TEST_CASE("grazes are recorded without splitting arcs") {
  // Small circle touching the wall from inside: radius 0.25 centred at 0.75.
  const TableSpec table = InfiniteCylinder{{0, 0}, 1};
  const State s{Point3(0.5, 0, 0), {4, 0, -1}};
  const Trajectory t = run(table, s, 3, 10);
  CHECK(t.events.empty());
  CHECK_FALSE(t.grazes.empty());
  // The touching circle provably never crosses the wall.
  CHECK(t.termination == Termination::escaped);
}

TEST_CASE("never_hits") {
  CHECK(never_hits(HorizontalHalfSpace{0, 1}, unit_state(Point3(0, 0, 1), 0, 0)));
  CHECK_FALSE(never_hits(InfiniteCylinder{{0, 0}, 1}, unit_state(Point3(0, 0, 1), 0, 0)));
  CHECK(never_hits(InfiniteCylinder{{0, 0}, 1}, State{Point3(0.1, 0, 0), {4, 0, 1}}));
}
