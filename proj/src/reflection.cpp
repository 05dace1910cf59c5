#include "heisbill/reflection.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace heis {

std::string to_string(ReflectionKind kind) {
  switch (kind) {
    case ReflectionKind::non_degenerate: return "NonDegenerate";
    case ReflectionKind::inner_tangency: return "InnerTangency";
    case ReflectionKind::outer_tangency: return "OuterTangency";
    case ReflectionKind::singular_point: return "SingularPoint";
  }
  return "Unknown";
}

namespace {

// Second derivative of the face distance along the geodesic through (p, m).
double distance_second_derivative(const FaceGeometry& face, const Point3& p, const Covector& m) {
  const Vector2 v = m.planar();
  const Vector2 accel = m.a * perp(v);
  switch (face.kind) {
    case FaceGeometry::Kind::wall: {
      const Vector2 u = Vector2(p.x(), p.y()) - face.center;
      const double r = u.norm();
      const double radial = u.dot(v);
      return (v.squaredNorm() + u.dot(accel)) / r - radial * radial / (r * r * r);
    }
    case FaceGeometry::Kind::horizontal:
      return face.orientation * m.a * (p.x() * m.b + p.y() * m.c) / 2;
    case FaceGeometry::Kind::vertical:
      return accel.y();
  }
  return 0;
}

}  // namespace

ReflectionOutcome reflect(const Covector& in, const BoundaryContact& contact,
                          const ReflectionOptions& options) {
  require_unit(in);
  const double off = contact.geometry.distance(contact.point);
  if (!(std::abs(off) < options.on_boundary_tol)) throw NotOnBoundaryError(off);

  ReflectionOutcome outcome;
  outcome.in = in;
  outcome.out = in;
  outcome.contact = contact;

  const Covector& g = contact.dG;
  const double planar2 = g.b * g.b + g.c * g.c;
  if (contact.is_singular || planar2 == 0) {
    outcome.kind = ReflectionKind::singular_point;
    return outcome;
  }

  const double lin = in.b * g.b + in.c * g.c;
  if (std::abs(lin) / std::sqrt(planar2) < options.tangency_tol) {
    const double curvature = distance_second_derivative(contact.geometry, contact.point, in);
    bool inner;
    if (std::abs(curvature) > options.curvature_threshold) {
      inner = curvature < 0;
    } else {
      const State probe = flow(State{contact.point, in}, options.probe_step);
      inner = contact.geometry.distance(probe.point) < 0;
    }
    outcome.kind = inner ? ReflectionKind::inner_tangency : ReflectionKind::outer_tangency;
    return outcome;
  }

  outcome.kind = ReflectionKind::non_degenerate;
  outcome.s = -2 * lin / planar2;
  outcome.out = in + outcome.s * g;
  return outcome;
}

bool is_self_reflecting(const Covector& in, const BoundaryContact& contact, double tol) {
  const auto r = reflect(in, contact);
  if (r.kind != ReflectionKind::non_degenerate) return false;
  return (r.out.coeffs() + in.coeffs()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

struct Chart {
  FaceGeometry face;

  Point3 at(const Eigen::Vector2d& u) const {
    switch (face.kind) {
      case FaceGeometry::Kind::wall:
        return {face.center.x() + face.radius * std::cos(u[0]),
                face.center.y() + face.radius * std::sin(u[0]), u[1]};
      case FaceGeometry::Kind::horizontal: return {u[0], u[1], face.level};
      case FaceGeometry::Kind::vertical: return {u[0], face.level, u[1]};
    }
    return Point3::Zero();
  }

  Eigen::Vector2d coordinates(const Point3& p) const {
    switch (face.kind) {
      case FaceGeometry::Kind::wall:
        return {std::atan2(p.y() - face.center.y(), p.x() - face.center.x()), p.z()};
      case FaceGeometry::Kind::horizontal: return {p.x(), p.y()};
      case FaceGeometry::Kind::vertical: return {p.x(), p.z()};
    }
    return Eigen::Vector2d::Zero();
  }
};

template <typename F>
double line_minimum(F&& f, double step, double tol) {
  // Bracket a minimum of f along the line, then golden-section it.
  constexpr double grow = 1.618033988749895;
  double f0 = f(0.0);
  double h = step;
  double fh = f(h);
  if (fh > f0) {
    h = -step;
    fh = f(h);
    if (fh > f0) return golden_section_min(f, -step, step, tol);
  }
  double prev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double next = prev + (h - prev) * (1 + grow);
    const double fn = f(next);
    if (fn > fh) return golden_section_min(f, std::min(prev, next), std::max(prev, next), tol);
    prev = h;
    f0 = fh;
    h = next;
    fh = fn;
  }
  return h;
}

}  // namespace

VariationalResult variational_reflection_oracle(const TableSpec& table, const Point3& q1,
                                                const Point3& q2, const Point3& seed_point,
                                                const OracleOptions& options) {
  const auto fs = faces(table);
  std::size_t best = 0;
  for (std::size_t i = 1; i < fs.size(); ++i) {
    if (std::abs(fs[i].distance(seed_point)) < std::abs(fs[best].distance(seed_point))) best = i;
  }
  const Chart chart{fs[best]};

  auto length = [&](const Eigen::Vector2d& u) {
    const Point3 p = chart.at(u);
    try {
      return connect(q1, p, 0, 0.0).duration + connect(p, q2, 0, 0.0).duration;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Eigen::Vector2d x = chart.coordinates(seed_point);
  std::array<Eigen::Vector2d, 2> dirs{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  double fx = length(x);
  if (!std::isfinite(fx)) throw NoSolutionError("variational oracle: connect failed at the seed");

  VariationalResult result;
  bool converged = false;
  int it = 0;
  for (; it < options.max_iterations && !converged; ++it) {
    const Eigen::Vector2d start = x;
    const double f_start = fx;
    double biggest = 0;
    std::size_t biggest_dir = 0;
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const Eigen::Vector2d d = dirs[k];
      const double alpha = line_minimum([&](double t) { return length(x + t * d); },
                                        options.initial_step, options.tol);
      const double f_new = length(x + alpha * d);
      if (f_new <= fx) {
        if (fx - f_new > biggest) {
          biggest = fx - f_new;
          biggest_dir = k;
        }
        x += alpha * d;
        fx = f_new;
      }
    }
    const Eigen::Vector2d pattern = x - start;
    if (pattern.norm() > 0) {
      const Eigen::Vector2d d = pattern / pattern.norm();
      const double alpha = line_minimum([&](double t) { return length(x + t * d); },
                                        options.initial_step, options.tol);
      const double f_new = length(x + alpha * d);
      if (f_new <= fx) {
        x += alpha * d;
        fx = f_new;
      }
      dirs[biggest_dir] = d;
    }
    const double moved = (x - start).norm();
    const double gain = f_start - fx;
    converged = moved < options.tol ||
                (it > 1 && gain <= 8 * std::numeric_limits<double>::epsilon() * std::abs(fx));
  }
  if (!converged) throw NoConvergenceError("variational oracle did not converge");

  const Point3 p = chart.at(x);
  const GeodesicArc first = connect(q1, p, 0, 0.0);
  const GeodesicArc second = connect(p, q2, 0, 0.0);
  result.boundary_point = p;
  result.momentum_in = first.end().momentum;
  result.momentum_out = second.start.momentum;
  result.length = first.duration + second.duration;
  result.iterations = it;

  const Eigen::Vector3d jump = result.momentum_in.coeffs() - result.momentum_out.coeffs();
  const Eigen::Vector3d g = chart.face.differential(p).coeffs().normalized();
  result.residual = (jump - jump.dot(g) * g).norm();
  return result;
}

}  // namespace heis
