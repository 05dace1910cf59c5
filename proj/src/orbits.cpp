#include "heisbill/orbits.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace heis {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

// Bounce points and momentum of the ngon/creeping construction in a cylinder
// of radius R: vertices at angles 0 and 2 phi, arc radius rho, clockwise.
State chord_arc_state(double phi, double psi, double R) {
  const double rho = R * std::sin(phi) / std::sin(psi);
  const Vector2 bisector(std::cos(phi), std::sin(phi));
  const Vector2 center = (R * std::cos(phi) - rho * std::cos(psi)) * bisector;
  const Vector2 p0(R, 0);
  const Vector2 v = -perp(Vector2((p0 - center) / rho));
  return {Point3(R, 0, 0), {-1 / rho, v.x(), v.y()}};
}

PeriodicOrbit summarize(Trajectory traj, const State& initial, std::size_t period_events) {
  PeriodicOrbit out;
  out.initial = initial;
  out.period_events = period_events;
  const State last = traj.final_state();
  out.closure_error = (last.point - initial.point).norm();
  out.momentum_error = (last.momentum.coeffs() - initial.momentum.coeffs()).norm();
  out.min_z = inf;
  out.max_z = -inf;
  for (const auto& arc : traj.arcs) {
    out.max_abs_delta_z = std::max(out.max_abs_delta_z, std::abs(delta_z(arc)));
    const ZRange zr = arc_z_range(arc);
    out.min_z = std::min(out.min_z, zr.min);
    out.max_z = std::max(out.max_z, zr.max);
  }
  out.trajectory = std::move(traj);
  return out;
}

double helix_distance(const Point3& p, double theta, double slope) {
  return (p - Point3(std::cos(theta), std::sin(theta), slope * theta)).norm();
}

}  // namespace

double ngon_closure_rhs(double psi) {
  const double s = std::sin(psi);
  return std::cos(psi) / s + (pi - psi) / (s * s);
}

double solve_ngon_psi(double phi, double tol) {
  if (!(phi > 0 && phi < pi / 2)) throw OutOfRangeError("phi must lie in (0, pi/2)");
  const double target = std::cos(phi) / std::sin(phi);
  return bisect([&](double psi) { return ngon_closure_rhs(psi) - target; }, 0.0, pi, false, tol);
}

NGonSolution ngon_solution(int n, int m) {
  if (n < 3 || m < 1 || 2 * m >= n) throw OutOfRangeError("n-gon orbits need 0 < m < n/2");
  if (std::gcd(n, m) != 1) throw NotCoprimeError(n, m);
  NGonSolution sol;
  sol.n = n;
  sol.m = m;
  sol.phi = pi * m / n;
  sol.psi = solve_ngon_psi(sol.phi);
  sol.rho = std::sin(sol.phi) / std::sin(sol.psi);
  return sol;
}

NGonOrbit build_ngon_orbit(int n, int m, double table_radius) {
  if (!(table_radius > 0) || !std::isfinite(table_radius)) throw OutOfRangeError("table radius must be positive");
  NGonOrbit out;
  out.solution = ngon_solution(n, m);
  out.radius = table_radius;
  const State initial = chord_arc_state(out.solution.phi, out.solution.psi, table_radius);
  const TableSpec table = InfiniteCylinder{Vector2(0, 0), table_radius};
  out.orbit = summarize(run(table, initial, n, inf), initial, static_cast<std::size_t>(n));
  return out;
}

BandOrbit build_band_orbit(double height, int n) {
  if (!(height > 0) || !std::isfinite(height) || n < 1) throw OutOfRangeError("band orbits need H > 0 and n >= 1");
  BandOrbit out;
  out.height = height;
  out.n = n;
  out.r0 = std::sqrt(height / (pi * n));
  out.rho = out.r0 / 2;
  // Each projected loop encloses pi rho^2 = H / (4 n).
  out.loops = 4 * n;
  const State initial{Point3(out.r0, 0, 0), {2 / out.r0, 0, 1}};
  const TableSpec table = HorizontalBand{0, height};
  out.orbit = summarize(run(table, initial, 2, inf), initial, 2);
  return out;
}

double finite_cylinder_delta_small(double psi) {
  return (3 * psi - 4 * std::sin(psi) * std::cos(psi) - std::sin(psi)) / 2;
}

double finite_cylinder_delta_large(double psi) {
  const double c = std::cos(psi);
  const double q = std::sqrt(c * (c + 1));
  return psi - c * std::sin(psi) - q + std::atan(2 * q) / 2;
}

double finite_cylinder_delta(double psi) {
  if (!(psi > 0 && psi <= pi / 2)) throw OutOfRangeError("psi must lie in (0, pi/2]");
  return psi <= pi / 3 ? finite_cylinder_delta_small(psi) : finite_cylinder_delta_large(psi);
}

double threshold_lemma525() {
  return bisect([](double psi) { return 3 * psi - 4 * std::sin(psi) * std::cos(psi) - std::sin(psi); }, 0.0,
                pi / 3, true, 1e-12);
}

FiniteCylinderOrbitSpec finite_cylinder_spec(double d, double psi, int c) {
  if (!(d > 0) || !std::isfinite(d)) throw OutOfRangeError("d must be positive");
  if (!(psi > 0 && psi < pi / 2)) throw OutOfRangeError("psi must lie in (0, pi/2)");
  if (c < 1) throw OutOfRangeError("cover count c must be at least 1");
  const double threshold = threshold_lemma525();
  if (psi < threshold) throw BelowThresholdError(psi, threshold);

  FiniteCylinderOrbitSpec spec;
  spec.d = d;
  spec.psi = psi;
  spec.c = c;
  spec.R = d * std::tan(psi / 2);
  spec.r = (spec.R * spec.R + d * d) / (2 * d);

  // One projected cycle: (2r, 0) -> (d, R) -> (d, -R) -> (2r, 0). The last arc
  // mirrors the first, so it has the same duration.
  const State start{Point3(2 * spec.r, 0, 0), {1 / spec.r, 0, 1}};
  const Trajectory legs = run(InfiniteCylinder{Vector2(d, 0), spec.R}, start, 2, inf);
  const GeodesicArc closing{legs.final_state(), legs.arcs.front().duration};
  spec.cycle_area = delta_z(legs.arcs[0]) + delta_z(legs.arcs[1]) + delta_z(closing);
  if ((closing.end().point.head<2>() - start.point.head<2>()).norm() > 1e-8)
    throw NoConvergenceError("bigon cycle does not close in projection");
  spec.H = c * spec.cycle_area;
  return spec;
}

FiniteCylinderOrbit build_finite_cylinder_bigon(double d, double psi, int c) {
  FiniteCylinderOrbit out;
  out.spec = finite_cylinder_spec(d, psi, c);
  const auto& spec = out.spec;
  const State initial{Point3(2 * spec.r, 0, 0), {1 / spec.r, 0, 1}};
  const TableSpec table = FiniteCylinder{Vector2(d, 0), spec.R, 0, spec.H};
  const std::size_t period = 4 * static_cast<std::size_t>(c) + 2;
  out.orbit = summarize(run(table, initial, static_cast<int>(period), inf), initial, period);

  std::vector<Point3> distinct;
  for (const auto& e : out.orbit.trajectory.events) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                  [&](const Point3& q) { return (q - e.contact.point).norm() < 1e-8; });
    if (!seen) distinct.push_back(e.contact.point);
  }
  out.distinct_bounce_points = distinct.size();
  return out;
}

double creeping_psi(double sigma, double phi, double tol) {
  if (!(phi > 0 && phi < pi / 2)) throw OutOfRangeError("phi must lie in (0, pi/2)");
  const double s = std::sin(phi);
  const double lhs = std::cos(phi) / s - phi * sigma / (s * s);
  if (!(lhs > 0)) throw NoSolutionError("creeping equation has no solution for these sigma, phi");
  auto rhs = [](double psi) {
    const double sp = std::sin(psi);
    return (pi - psi + sp * std::cos(psi)) / (sp * sp);
  };
  return bisect([&](double psi) { return rhs(psi) - lhs; }, 0.0, pi, false, tol);
}

State creeping_initial_state(double sigma, double phi) {
  return chord_arc_state(phi, creeping_psi(sigma, phi), 1.0);
}

std::vector<double> creeping_convergence_check(double sigma, const std::vector<double>& params) {
  std::vector<double> out;
  out.reserve(params.size());
  constexpr double window = 1.0;

  if (std::isinf(sigma) && sigma > 0) {
    for (double rho : params) {
      if (!(rho > 0 && rho <= 1)) throw OutOfRangeError("tangent circle radius must lie in (0, 1]");
      // Circles of radius rho inside the unit cylinder, tangent at (1, 0).
      // Each loop gains pi rho^2 over length 2 pi rho, so time t maps to arclength t / rho.
      const State s{Point3(1, 0, 0), {1 / rho, 0, 1}};
      const double step = std::min(window / 2000, 2 * pi * rho / 64);
      double sup = 0;
      for (double t = 0; t <= window + 1e-15; t += step) {
        sup = std::max(sup, (flow(s, t / rho).point - Point3(1, 0, t / 2)).norm());
      }
      out.push_back(sup);
    }
    return out;
  }

  if (sigma == 1) {
    // The wall circle itself, lifted: a boundary geodesic of slope 1/2 per radian.
    const State s{Point3(1, 0, 0), {1, 0, 1}};
    for (std::size_t i = 0; i < params.size(); ++i) {
      double sup = 0;
      for (int k = 0; k <= 2000; ++k) {
        const double t = window * k / 2000;
        sup = std::max(sup, helix_distance(flow(s, t).point, t, 0.5));
      }
      out.push_back(sup);
    }
    return out;
  }
  if (!(sigma < 1)) throw OutOfRangeError("creeping slope sigma must be < 1, 1, or infinite");

  const TableSpec table = InfiniteCylinder{Vector2(0, 0), 1};
  for (double phi : params) {
    const State s = creeping_initial_state(sigma, phi);
    const int segments = static_cast<int>(std::ceil(window / (2 * phi))) + 1;
    const Trajectory traj = run(table, s, segments, inf);
    // Reparametrise by angle: one segment of length L covers 2 phi radians.
    const double seg = traj.arcs.front().duration;
    const double scale = 2 * phi / seg;
    double sup = 0;
    double offset = 0;
    for (const auto& arc : traj.arcs) {
      constexpr int samples = 16;
      for (int k = 0; k <= samples; ++k) {
        const double t = arc.duration * k / samples;
        const double theta = (offset + t) * scale;
        if (theta > window) break;
        sup = std::max(sup, helix_distance(arc.at(t).point, theta, sigma / 2));
      }
      offset += arc.duration;
      if (offset * scale > window) break;
    }
    out.push_back(sup);
  }
  return out;
}

}  // namespace heis
