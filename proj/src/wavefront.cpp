#include "heisbill/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heisbill/reflection.hpp"
#include "heisbill/tables.hpp"

namespace heis {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(double value, const char* what) {
  if (!(value > 0) || !std::isfinite(value)) throw OutOfRangeError(std::string(what) + " must be positive");
}

double landing_radius(double r, double T) { return r * std::cos(T / r); }

State outgoing_state(double d, double phi) {
  return {Point3(d, 0, 0), critical_reflection(d, phi).out};
}

}  // namespace

WavefrontPoint wavefront_point(double r, double T) {
  require_positive(r, "r");
  require_positive(T, "T");
  return {r, T, r * std::abs(std::cos(T / r)), r * T / 4 + r * r / 8 * std::sin(2 * T / r)};
}

State wavefront_state(double r) {
  require_positive(r, "r");
  return {Point3(r, 0, 0), {2 / r, 0, 1}};
}

double wavefront_flow_residual(double r, double T) {
  const WavefrontPoint w = wavefront_point(r, T);
  const Point3 p = flow(wavefront_state(r), T).point;
  return std::max(std::abs(p.head<2>().norm() - w.R), std::abs(p.z() - w.z1));
}

std::vector<double> cut_locus_radii(double T, int k_max) {
  require_positive(T, "T");
  std::vector<double> radii;
  for (int k = 0; k <= k_max; ++k) radii.push_back(2 * T / ((2 * k + 1) * pi));
  return radii;
}

std::vector<WavefrontPoint> attainable_boundary(double T, int samples, double r_max) {
  require_positive(T, "T");
  if (samples < 2) throw OutOfRangeError("need at least 2 samples");
  const double r_min = 2 * T / pi;
  if (r_max <= 0) r_max = 5 * T;
  if (!(r_max > r_min)) throw OutOfRangeError("r_max must exceed the cusp radius 2T/pi");
  std::vector<WavefrontPoint> points;
  points.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double r = i == 0 ? r_min : r_min + (r_max - r_min) * i / (samples - 1);
    WavefrontPoint w = wavefront_point(r, T);
    if (i == 0) w.R = 0;  // cos(pi/2) rounds to 6e-17
    points.push_back(w);
  }
  return points;
}

bool is_graphical(const std::vector<WavefrontPoint>& points, double tol) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].R > points[i - 1].R - tol)) return false;
  }
  return true;
}

double preimage_radius(double T, double R1) {
  require_positive(T, "T");
  if (!(R1 >= 0)) throw OutOfRangeError("R1 must be nonnegative");
  const double lo = 2 * T / pi;
  if (R1 == 0) return lo;
  double hi = lo + 1;
  while (landing_radius(hi, T) < R1) hi = lo + 2 * (hi - lo);
  return bisect([&](double r) { return landing_radius(r, T) - R1; }, lo, hi, true, 0.0);
}

double boundary_height(double T, double R1) { return wavefront_point(preimage_radius(T, R1), T).z1; }

double cusp_slope(double T, double R1) {
  require_positive(R1, "R1");
  return (boundary_height(T, R1) - T * T / (2 * pi)) / R1;
}

double critical_G(double phi) {
  const double s = std::sin(phi);
  const double k = 2 * std::numbers::sqrt2 * s;
  return (phi + std::atan(k)) - (s * std::cos(phi) + k);
}

CriticalAnalysis critical_reflection(double d, double phi) {
  require_positive(d, "d");
  if (!(phi > 0 && phi < pi)) throw OutOfRangeError("phi must lie in (0, pi)");
  const double s = std::sin(phi);
  const double cot = std::cos(phi) / s;

  CriticalAnalysis c;
  c.d = d;
  c.phi = phi;
  c.a_out = 4 * s / d;
  c.r = d / (4 * s);
  c.O = Vector2(3 * d / 4, -cot * d / 4);
  c.A_plus = (phi / (s * s) - cot) * d * d / 16;
  c.p = d / std::numbers::sqrt2;
  const double k = 2 * std::numbers::sqrt2 * s;
  c.A_minus_bound = (k - std::atan(k)) * c.r * c.r;
  c.G = critical_G(phi);

  const TableSpec plane = HorizontalHalfSpace{0, 1};
  const Covector in{0, -std::cos(phi), -s};
  c.out = reflect(in, boundary_contact(plane, Point3(d, 0, 0))).out;

  const State leaving{Point3(d, 0, 0), c.out};
  const auto circle = std::get<ProjectedCircle>(projected_circle(leaving));
  c.center_residual = (circle.center - c.O).norm();
  c.radius_residual = std::abs(circle.radius - c.r);

  const Vector2 target(d / 2, 0);
  std::vector<double> times;
  const Vector2 u0 = Vector2(d, 0) - circle.center;
  const Vector2 u1 = target - circle.center;
  detail::phase_times(circle.angular_rate, std::atan2(u0.y(), u0.x()), std::atan2(u1.y(), u1.x()), 2 * pi,
                      0.0, 2 * pi / std::abs(circle.angular_rate), times);
  c.second_crossing_residual =
      times.empty() ? std::numeric_limits<double>::infinity()
                    : (flow(leaving, times.front()).point.head<2>() - target).norm();
  return c;
}

double threshold_prop522() { return bisect(critical_G, pi / 2, pi, true, 1e-12); }

ContinuationResult critical_continuation_check(double d, double phi, int loops) {
  if (loops < 1) throw OutOfRangeError("loops must be at least 1");
  const State s = outgoing_state(d, phi);
  const GeodesicArc arc{s, loops * 2 * pi / std::abs(s.momentum.a)};
  ContinuationResult res;
  res.min_z = arc_z_range(arc).min;
  res.continues = res.min_z >= -1e-9;
  return res;
}

double critical_branch_sup(double d, double phi, double window, int samples) {
  const State s = outgoing_state(d, phi);
  double sup = 0;
  for (int i = 0; i <= samples; ++i) sup = std::max(sup, flow(s, window * i / samples).point.norm());
  return sup;
}

double critical_scale_covariance(double d, double phi, double lambda) {
  require_positive(lambda, "lambda");
  const CriticalAnalysis a = critical_reflection(d, phi);
  const CriticalAnalysis b = critical_reflection(lambda * d, phi);
  const double l2 = lambda * lambda;
  double dev = 0;
  dev = std::max(dev, std::abs(b.a_out - a.a_out / lambda));
  dev = std::max(dev, std::abs(b.r - lambda * a.r));
  dev = std::max(dev, (b.O - lambda * a.O).norm());
  dev = std::max(dev, std::abs(b.A_plus - l2 * a.A_plus));
  dev = std::max(dev, std::abs(b.p - lambda * a.p));
  dev = std::max(dev, std::abs(b.A_minus_bound - l2 * a.A_minus_bound));
  dev = std::max(dev, std::abs(b.G - a.G));

  const State sa{Point3(d, 0, 0), a.out};
  const State sb{Point3(lambda * d, 0, 0), b.out};
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i * a.r;
    const Point3 pa = flow(sa, t).point;
    const Point3 pb = flow(sb, lambda * t).point;
    dev = std::max(dev, (pb - Point3(lambda * pa.x(), lambda * pa.y(), l2 * pa.z())).norm());
  }
  const ContinuationResult ca = critical_continuation_check(d, phi, 3);
  const ContinuationResult cb = critical_continuation_check(lambda * d, phi, 3);
  dev = std::max(dev, std::abs(cb.min_z - l2 * ca.min_z));
  return dev;
}

}  // namespace heis
