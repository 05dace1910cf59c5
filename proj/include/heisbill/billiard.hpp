#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heisbill/reflection.hpp"
#include "heisbill/tables.hpp"

namespace heis {

struct FlowOptions {
  double root_tol{1e-12};
  double on_boundary_tol{1e-9};
  double corner_tol{1e-9};
  /// Search for the next event starts this far along a fresh arc.
  double liftoff{1e-10};
  double singular_tol{1e-9};
  double tangency_tol{1e-10};
  /// Local maxima of a face distance within this band below zero count as grazes.
  double graze_tol{1e-10};
};

struct Event {
  double time{0};  // arclength along the arc that ends here
  BoundaryContact contact{};
  ReflectionOutcome outcome{};
};

/// Inner tangency with a face; the arc is not split there.
struct Graze {
  std::size_t arc{0};
  double time{0};
  Point3 point{Point3::Zero()};
  Face face{Face::wall};
};

enum class Termination { max_bounces, max_length, corner_hit, singular_hit, outer_tangency_stop, escaped };

std::string to_string(Termination t);
Termination termination_from_string(const std::string& s);

/// arcs[k] ends at events[k]. A trailing arc without event is present when the
/// run stopped on the length budget.
struct Trajectory {
  TableSpec table{};
  State start{};
  std::vector<GeodesicArc> arcs;
  std::vector<Event> events;
  std::vector<Graze> grazes;
  Termination termination{Termination::max_bounces};

  double total_length() const;
  /// State after the last arc, reflected if the last arc ended in a bounce.
  State final_state() const;
  /// Number of non-degenerate reflections.
  std::size_t bounces() const;
};

/// First boundary event of the geodesic through s within (0, horizon].
/// Inner tangencies met on the way are appended to `grazes` when given.
std::optional<Event> next_event(const TableSpec& table, const State& s, double horizon,
                                const FlowOptions& options = {}, std::vector<Graze>* grazes = nullptr);

Trajectory run(const TableSpec& table, const State& s, int max_bounces, double max_length,
               const FlowOptions& options = {});

/// True when the geodesic through s never meets any face after time `from`.
bool never_hits(const TableSpec& table, const State& s, double from = 0);

/// Tangencies of each inter-reflection arc with the centred circle of the given
/// radius. Only valid for trajectories in an origin-centred infinite cylinder.
std::vector<int> caustic_tangency_count(const Trajectory& traj, double inner_radius, double tol = 1e-10);

}  // namespace heis
