#include "heisbill/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace heis {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

double angle_of(const Vector2& v) { return std::atan2(v.y(), v.x()); }

// Times in (lo, hi) where the distance to the face is stationary. Between two
// consecutive ones the distance is monotone.
std::vector<double> critical_times(const FaceGeometry& face, const State& s, double lo, double hi) {
  std::vector<double> out;
  const double a = s.momentum.a;
  const Vector2 v0 = s.momentum.planar();
  const Vector2 p0 = s.point.head<2>();
  switch (face.kind) {
    case FaceGeometry::Kind::wall: {
      if (a == 0) {
        const double t = -(p0 - face.center).dot(v0);
        if (t > lo && t < hi) out.push_back(t);
        return out;
      }
      // (O - c) . v(t) = 0 with a (O - c) = a (p0 - c) + J v0.
      const Vector2 e = a * (p0 - face.center) + perp(v0);
      if (e.norm() == 0) return out;
      detail::phase_times(a, angle_of(v0), angle_of(e) + pi / 2, pi, lo, hi, out);
      break;
    }
    case FaceGeometry::Kind::horizontal: return z_critical_times(s, lo, hi);
    case FaceGeometry::Kind::vertical:
      if (a == 0) return out;
      detail::phase_times(a, angle_of(v0), 0.0, pi, lo, hi, out);
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Times in [lo, hi] where the projection is closest to the z-axis, with that distance.
std::vector<std::pair<double, double>> axis_approaches(const State& s, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  const double a = s.momentum.a;
  const Vector2 v0 = s.momentum.planar();
  const Vector2 p0 = s.point.head<2>();
  if (a == 0) {
    const double t = -p0.dot(v0);
    if (t >= lo && t <= hi) out.emplace_back(t, std::abs(cross(p0, v0)));
    return out;
  }
  const Vector2 center = p0 + perp(v0) / a;
  const double rho = 1 / std::abs(a);
  std::vector<double> ts;
  if (center.norm() == 0) return out;
  detail::phase_times(a, angle_of(p0 - center), angle_of(-center), 2 * pi, lo, hi, ts);
  for (double t : ts) out.emplace_back(t, std::abs(center.norm() - rho));
  return out;
}

double face_distance(const FaceGeometry& face, const State& s, double t) {
  return face.distance(flow(s, t).point);
}

struct Crossing {
  double time{inf};
  std::size_t face{0};
};

struct ScanResult {
  Crossing crossing;
  std::vector<std::pair<double, std::size_t>> grazes;
};

// First sign change from inside to outside among all faces, scanning windows
// of one projected period.
ScanResult scan(const std::vector<FaceGeometry>& faces, const State& s, double t_min, double horizon,
                const FlowOptions& options) {
  ScanResult result;
  const double a = s.momentum.a;
  double window = a != 0 ? 2 * pi / std::abs(a) : 1 + s.point.head<2>().norm();
  double lo = t_min;
  while (lo < horizon) {
    const double hi = std::min(horizon, lo + window);
    for (std::size_t k = 0; k < faces.size(); ++k) {
      const auto& face = faces[k];
      std::vector<double> nodes{lo};
      const auto crit = critical_times(face, s, lo, hi);
      nodes.insert(nodes.end(), crit.begin(), crit.end());
      nodes.push_back(hi);
      std::vector<double> f(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) f[i] = face_distance(face, s, nodes[i]);
      // A local maximum within graze_tol of the face touches it without crossing.
      auto touches = [&](std::size_t i) {
        return i > 0 && i + 1 < nodes.size() && std::abs(f[i]) < options.graze_tol && f[i - 1] < f[i] &&
               f[i + 1] < f[i];
      };
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (nodes[i] >= result.crossing.time) break;
        if (touches(i)) result.grazes.emplace_back(nodes[i], k);
        if (f[i] < 0 && f[i + 1] >= 0 && !touches(i + 1)) {
          const double root = bisect(
              [&](double t) { return face_distance(face, s, t); }, nodes[i], nodes[i + 1], true,
              options.root_tol);
          if (root < result.crossing.time) result.crossing = {root, k};
          break;
        }
      }
    }
    if (result.crossing.time < inf) break;
    lo = hi;
    if (a == 0) window *= 2;
  }
  std::erase_if(result.grazes, [&](const auto& g) { return g.first >= result.crossing.time; });
  return result;
}

double initial_rate(const FaceGeometry& face, const State& s) {
  const Vector2 v = s.momentum.planar();
  switch (face.kind) {
    case FaceGeometry::Kind::wall: {
      const Vector2 u = s.point.head<2>() - face.center;
      return u.dot(v) / u.norm();
    }
    case FaceGeometry::Kind::horizontal: return face.orientation * velocity(s).z();
    case FaceGeometry::Kind::vertical: return v.y();
  }
  return 0;
}

void require_inside(const std::vector<FaceGeometry>& faces, const TableSpec& table, const State& s,
                    const FlowOptions& options) {
  if (signed_distance(table, s.point) >= options.on_boundary_tol) throw StartsOutsideError();
  for (const auto& face : faces) {
    if (std::abs(face.distance(s.point)) < options.on_boundary_tol && initial_rate(face, s) > options.tangency_tol)
      throw StartsOutsideError();
  }
}

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_bounces: return "MaxBounces";
    case Termination::max_length: return "MaxLength";
    case Termination::corner_hit: return "CornerHit";
    case Termination::singular_hit: return "SingularHit";
    case Termination::outer_tangency_stop: return "OuterTangencyStop";
    case Termination::escaped: return "Escaped";
  }
  return "Unknown";
}

Termination termination_from_string(const std::string& s) {
  for (auto t : {Termination::max_bounces, Termination::max_length, Termination::corner_hit,
                 Termination::singular_hit, Termination::outer_tangency_stop, Termination::escaped}) {
    if (to_string(t) == s) return t;
  }
  throw ParseError("unknown termination '" + s + "'");
}

double Trajectory::total_length() const {
  double sum = 0;
  for (const auto& arc : arcs) sum += arc.duration;
  return sum;
}

State Trajectory::final_state() const {
  if (arcs.empty()) return start;
  if (arcs.size() > events.size()) return arcs.back().end();
  const Event& e = events.back();
  return {e.contact.point, e.outcome.out};
}

std::size_t Trajectory::bounces() const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const Event& e) {
    return e.outcome.kind == ReflectionKind::non_degenerate && !e.contact.is_corner;
  }));
}

std::optional<Event> next_event(const TableSpec& table, const State& s, double horizon,
                                const FlowOptions& options, std::vector<Graze>* grazes) {
  require_unit(s.momentum);
  const auto fs = faces(table);
  require_inside(fs, table, s, options);

  ReflectionOptions ropts;
  ropts.on_boundary_tol = options.on_boundary_tol;
  ropts.tangency_tol = options.tangency_tol;

  double t_min = options.liftoff;
  while (t_min < horizon) {
    const ScanResult found = scan(fs, s, t_min, horizon, options);
    if (grazes) {
      for (const auto& [t, k] : found.grazes) grazes->push_back({0, t, flow(s, t).point, fs[k].face});
    }
    if (!(found.crossing.time < inf)) return std::nullopt;

    double t = found.crossing.time;
    const FaceGeometry& face = fs[found.crossing.face];
    bool singular = false;
    if (face.kind == FaceGeometry::Kind::horizontal) {
      // z - level vanishes to third order where the projection crosses the
      // axis, so the bisected time is only accurate to ~1e-5 there.
      constexpr double window = 1e-3;
      for (const auto& [tc, dist] : axis_approaches(s, t - window, t + window)) {
        if (dist < options.singular_tol && std::abs(face_distance(face, s, tc)) < options.singular_tol) {
          t = tc;
          singular = true;
          break;
        }
      }
    }

    const State at = flow(s, t);
    Event event;
    event.time = t;
    event.contact.point = at.point;
    event.contact.geometry = face;
    event.contact.face = face.face;
    event.contact.dG = face.differential(at.point);
    for (std::size_t k = 0; k < fs.size(); ++k) {
      if (k != found.crossing.face && std::abs(fs[k].distance(at.point)) < options.corner_tol)
        event.contact.is_corner = true;
    }
    event.contact.is_singular =
        singular || (face.kind == FaceGeometry::Kind::horizontal &&
                     std::hypot(at.point.x(), at.point.y()) < options.singular_tol);
    event.outcome = reflect(at.momentum, event.contact, ropts);

    if (event.outcome.kind == ReflectionKind::inner_tangency && !event.contact.is_corner) {
      if (grazes) grazes->push_back({0, t, at.point, face.face});
      t_min = t + options.liftoff;
      continue;
    }
    return event;
  }
  return std::nullopt;
}

bool never_hits(const TableSpec& table, const State& s, double from) {
  const double a = s.momentum.a;
  const Vector2 v0 = s.momentum.planar();
  const Vector2 p0 = s.point.head<2>();
  for (const auto& face : faces(table)) {
    switch (face.kind) {
      case FaceGeometry::Kind::wall: {
        if (a == 0) return false;
        const Vector2 center = p0 + perp(v0) / a;
        if ((center - face.center).norm() + 1 / std::abs(a) - face.radius > 0) return false;
        break;
      }
      case FaceGeometry::Kind::horizontal: {
        const double drift = a == 0 ? velocity(s).z() : 1 / (2 * a);
        if (face.orientation * drift > 0) return false;
        if (a == 0) {
          if (face_distance(face, s, from) >= 0) return false;
          break;
        }
        // The distance decreases on average, so its supremum over [from, inf)
        // is attained within one period.
        const double hi = from + 2 * pi / std::abs(a);
        double fmax = std::max(face_distance(face, s, from), face_distance(face, s, hi));
        for (double t : z_critical_times(s, from, hi)) fmax = std::max(fmax, face_distance(face, s, t));
        if (fmax >= 0) return false;
        break;
      }
      case FaceGeometry::Kind::vertical: {
        if (a == 0) {
          if (v0.y() > 0 || face_distance(face, s, from) >= 0) return false;
          break;
        }
        const Vector2 center = p0 + perp(v0) / a;
        if (center.y() + 1 / std::abs(a) - face.level >= 0) return false;
        break;
      }
    }
  }
  return true;
}

Trajectory run(const TableSpec& table, const State& s, int max_bounces, double max_length,
               const FlowOptions& options) {
  validate(table);
  require_unit(s.momentum);
  if (max_bounces < 0 || !(max_length >= 0)) throw OutOfRangeError("max_bounces and max_length must be nonnegative");
  require_inside(faces(table), table, s, options);

  Trajectory traj;
  traj.table = table;
  traj.start = s;
  State cur = s;
  double used = 0;
  int bounces = 0;
  if (max_bounces == 0) {
    traj.termination = Termination::max_bounces;
    return traj;
  }
  for (;;) {
    const double remaining = max_length - used;
    if (std::isinf(remaining) && never_hits(table, cur, 0)) {
      traj.termination = Termination::escaped;
      return traj;
    }
    std::vector<Graze> grazes;
    const auto event = next_event(table, cur, remaining, options, &grazes);
    for (auto& g : grazes) {
      g.arc = traj.arcs.size();
      traj.grazes.push_back(g);
    }
    if (!event) {
      traj.arcs.push_back({cur, remaining});
      traj.termination = never_hits(table, cur, remaining) ? Termination::escaped : Termination::max_length;
      return traj;
    }
    traj.arcs.push_back({cur, event->time});
    traj.events.push_back(*event);
    used += event->time;

    if (event->contact.is_corner) {
      traj.termination = Termination::corner_hit;
      return traj;
    }
    switch (event->outcome.kind) {
      case ReflectionKind::singular_point: traj.termination = Termination::singular_hit; return traj;
      case ReflectionKind::outer_tangency: traj.termination = Termination::outer_tangency_stop; return traj;
      case ReflectionKind::inner_tangency:
      case ReflectionKind::non_degenerate: break;
    }
    cur = {event->contact.point, event->outcome.out};
    if (++bounces >= max_bounces) {
      traj.termination = Termination::max_bounces;
      return traj;
    }
  }
}

std::vector<int> caustic_tangency_count(const Trajectory& traj, double inner_radius, double tol) {
  const auto* cyl = std::get_if<InfiniteCylinder>(&traj.table);
  if (!cyl || cyl->center.norm() > 1e-12)
    throw WrongTableError("caustic counts need an origin-centred infinite cylinder");
  std::vector<int> counts;
  for (std::size_t k = 1; k < traj.events.size() && k < traj.arcs.size(); ++k) {
    const GeodesicArc& arc = traj.arcs[k];
    const double a = arc.start.momentum.a;
    const Vector2 p0 = arc.start.point.head<2>();
    const Vector2 v0 = arc.start.momentum.planar();
    const double slack = 1e-12 * std::max(1.0, arc.duration);
    int count = 0;
    if (a == 0) {
      const double t = -p0.dot(v0);
      if (std::abs(std::abs(cross(p0, v0)) - inner_radius) < tol && t >= -slack && t <= arc.duration + slack)
        ++count;
    } else {
      const Vector2 center = p0 + perp(v0) / a;
      const double rho = 1 / std::abs(a);
      const double o = center.norm();
      double target = std::numeric_limits<double>::quiet_NaN();
      if (o > 0 && (std::abs(o - (rho + inner_radius)) < tol || std::abs(o - (rho - inner_radius)) < tol)) {
        target = angle_of(-center);
      } else if (o > 0 && std::abs(o - (inner_radius - rho)) < tol) {
        target = angle_of(center);
      }
      if (!std::isnan(target)) {
        std::vector<double> ts;
        detail::phase_times(a, angle_of(p0 - center), target, 2 * pi, -slack, arc.duration + slack, ts);
        count = static_cast<int>(ts.size());
      }
    }
    counts.push_back(count);
  }
  return counts;
}

}  // namespace heis
