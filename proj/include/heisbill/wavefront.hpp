#pragma once

#include <vector>

#include "heisbill/geometry.hpp"

namespace heis {

/// Endpoint after time T of the self-reflecting geodesic leaving the plane
/// z = 0 at (r, 0, 0). Its projection is the circle of diameter r through the origin.
struct WavefrontPoint {
  double r{0};
  double T{0};
  double R{0};   // landing radius r |cos(T / r)|
  double z1{0};  // landing height r T / 4 + r^2 / 8 sin(2 T / r)
};

WavefrontPoint wavefront_point(double r, double T);

/// Initial state of that geodesic.
State wavefront_state(double r);

/// |flow endpoint - formula endpoint| for one (r, T) pair.
double wavefront_flow_residual(double r, double T);

/// Radii 2T / ((2k + 1) pi), k = 0..k_max, whose geodesics reach the axis.
std::vector<double> cut_locus_radii(double T, int k_max);

/// Upper branch of the attainable-set boundary sampled on r in [2T/pi, r_max].
/// r_max <= 0 selects 5T.
std::vector<WavefrontPoint> attainable_boundary(double T, int samples, double r_max = 0);

/// True when R increases strictly along the samples (with tolerance).
bool is_graphical(const std::vector<WavefrontPoint>& points, double tol = 1e-10);

/// Start radius r >= 2T/pi whose landing radius is R1.
double preimage_radius(double T, double R1);

/// Boundary height over landing radius R1.
double boundary_height(double T, double R1);

/// Difference quotient (z1(R1) - T^2 / (2 pi)) / R1 at the cusp.
double cusp_slope(double T, double R1);

struct CriticalAnalysis {
  double d{0};
  double phi{0};
  double a_out{0};
  double r{0};
  Vector2 O{0, 0};
  double A_plus{0};
  double p{0};
  double A_minus_bound{0};
  double G{0};
  // From the simulated outgoing geodesic.
  Covector out{};
  double center_residual{0};
  double radius_residual{0};
  double second_crossing_residual{0};
};

double critical_G(double phi);

/// Reflection at (d, 0, 0) on the plane z = 0 of the straight line arriving
/// with velocity (-cos phi, -sin phi).
CriticalAnalysis critical_reflection(double d, double phi);

/// Root of G on (pi/2, pi).
double threshold_prop522();

struct ContinuationResult {
  double min_z{0};
  bool continues{false};
};

/// Follows the outgoing geodesic for `loops` projected periods.
ContinuationResult critical_continuation_check(double d, double phi, int loops);

/// sup |gamma(t)| over t in [0, window] of the outgoing geodesic.
double critical_branch_sup(double d, double phi, double window = 1.0, int samples = 4000);

/// Largest deviation from covariance under (x, y, z) -> (l x, l y, l^2 z)
/// between the analyses at (d, phi) and (l d, phi), including the flows.
double critical_scale_covariance(double d, double phi, double lambda);

}  // namespace heis
