#pragma once

#include <vector>

#include "heisbill/billiard.hpp"

namespace heis {

/// Right-hand side cot(psi) + (pi - psi) / sin^2(psi) of the n-gon closure
/// equation; strictly decreasing from +inf to 0 on (0, pi).
double ngon_closure_rhs(double psi);

/// Unique psi in (0, pi) with cot(phi) = ngon_closure_rhs(psi). Throws
/// OutOfRangeError unless phi is in (0, pi/2).
double solve_ngon_psi(double phi, double tol = 1e-12);

struct NGonSolution {
  int n{0};
  int m{0};
  double phi{0};  // half central angle pi m / n
  double psi{0};  // half aperture of each arc
  double rho{0};  // arc radius for a unit table
};

NGonSolution ngon_solution(int n, int m);

struct PeriodicOrbit {
  Trajectory trajectory;
  State initial{};
  std::size_t period_events{0};
  double closure_error{0};   // position mismatch after one period
  double momentum_error{0};  // covector mismatch after one period
  double max_abs_delta_z{0};
  double min_z{0};
  double max_z{0};
};

struct NGonOrbit {
  PeriodicOrbit orbit;
  NGonSolution solution;
  double radius{1};
};

/// Closed orbit with vertices on the regular n-gon of the cylinder of the
/// given radius, starting at (radius, 0, 0). Requires 0 < m < n/2, gcd(n, m) = 1.
NGonOrbit build_ngon_orbit(int n, int m, double table_radius);

struct BandOrbit {
  PeriodicOrbit orbit;
  double height{0};
  int n{0};
  double r0{0};   // sqrt(H / (pi n))
  double rho{0};  // projected loop radius r0 / 2
  int loops{0};   // projected loops per segment
};

/// Two-bounce orbit between (r0, 0, 0) and (r0, 0, H) in the band [0, H].
BandOrbit build_band_orbit(double height, int n);

/// Delta / r^2 for the finite cylinder bigon. Continuous at pi/3.
double finite_cylinder_delta(double psi);
double finite_cylinder_delta_small(double psi);  // branch for psi <= pi/3
double finite_cylinder_delta_large(double psi);  // branch for psi >= pi/3

/// Root of 3 psi - 4 sin psi cos psi - sin psi on (0, pi/3).
double threshold_lemma525();

struct FiniteCylinderOrbitSpec {
  double d{0};
  double psi{0};
  int c{0};
  double R{0};
  double r{0};
  double H{0};
  double cycle_area{0};  // z gained by one projected cycle
};

FiniteCylinderOrbitSpec finite_cylinder_spec(double d, double psi, int c);

struct FiniteCylinderOrbit {
  PeriodicOrbit orbit;
  FiniteCylinderOrbitSpec spec;
  std::size_t distinct_bounce_points{0};
};

/// Periodic orbit in the cylinder over the disc of radius R centred at (d, 0),
/// between heights 0 and H = c * cycle_area. Throws BelowThresholdError when
/// psi < threshold_lemma525().
FiniteCylinderOrbit build_finite_cylinder_bigon(double d, double psi, int c);

/// Unique psi with cot(phi) - phi sigma / sin^2(phi) = (pi - psi + sin psi cos psi) / sin^2(psi).
double creeping_psi(double sigma, double phi, double tol = 1e-12);

/// State of the creeping family in the unit cylinder: consecutive bounces are
/// 2 phi apart in angle and sigma phi apart in height.
State creeping_initial_state(double sigma, double phi);

/// C0 distances to the limit curve over a unit window of the rescaled
/// parameter, one per entry of `params`.
///  sigma < 1:   params are phi; limit helix (cos t, sin t, sigma t / 2).
///  sigma == 1:  the boundary leaf itself; distances are zero up to rounding.
///  sigma = inf: params are radii rho of circles tangent to the wall;
///               limit (1, 0, t / 2).
std::vector<double> creeping_convergence_check(double sigma, const std::vector<double>& params);

}  // namespace heis
