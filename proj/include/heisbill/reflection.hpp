#pragma once

#include "heisbill/tables.hpp"

namespace heis {

enum class ReflectionKind { non_degenerate, inner_tangency, outer_tangency, singular_point };

std::string to_string(ReflectionKind kind);

struct ReflectionOutcome {
  ReflectionKind kind{ReflectionKind::non_degenerate};
  Covector in{};
  Covector out{};  // equals `in` unless kind == non_degenerate
  double s{0};     // out = in + s dG
  BoundaryContact contact{};
};

struct ReflectionOptions {
  double on_boundary_tol{1e-9};
  /// |<(b, c), (g_b, g_c)>| / |(g_b, g_c)| below this is a tangency.
  double tangency_tol{1e-10};
  /// Second derivative of the face distance along the geodesic below this
  /// magnitude falls back to a forward probe.
  double curvature_threshold{1e-10};
  double probe_step{1e-6};
};

/// Momentum jump along the line through `in` parallel to dG that preserves H.
ReflectionOutcome reflect(const Covector& in, const BoundaryContact& contact,
                          const ReflectionOptions& options = {});

/// True when the reflected momentum is the time reversal -in of the ingoing one.
bool is_self_reflecting(const Covector& in, const BoundaryContact& contact, double tol = 1e-10);

struct VariationalResult {
  Point3 boundary_point{Point3::Zero()};
  double residual{0};
  Covector momentum_in{};   // final momentum of the geodesic q1 -> p
  Covector momentum_out{};  // initial momentum of the geodesic p -> q2
  double length{0};
  int iterations{0};
};

struct OracleOptions {
  int max_iterations{200};
  double tol{1e-10};
  double initial_step{1e-2};
};

/// Minimises len(q1 -> p) + len(p -> q2) over boundary points p near the
/// seed by derivative-free search in a 2-parameter chart of the seed's face,
/// and reports how far lambda_in - lambda_out is from the span of dG at the
/// minimiser.
VariationalResult variational_reflection_oracle(const TableSpec& table, const Point3& q1,
                                                const Point3& q2, const Point3& seed_point,
                                                const OracleOptions& options = {});

}  // namespace heis
