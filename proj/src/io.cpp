#include "heisbill/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace heis {

namespace {

using json = nlohmann::ordered_json;

constexpr double canvas = 1000;
constexpr double margin = 50;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_real(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("not a number: '" + std::string(s) + "'");
  return value;
}

std::string csv(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += format_shortest(v);
  }
  return out;
}

Face face_from_string(const std::string& s) {
  for (auto f : {Face::wall, Face::bottom, Face::top, Face::plane}) {
    if (to_string(f) == s) return f;
  }
  throw ParseError("unknown face '" + s + "'");
}

ReflectionKind kind_from_string(const std::string& s) {
  for (auto k : {ReflectionKind::non_degenerate, ReflectionKind::inner_tangency, ReflectionKind::outer_tangency,
                 ReflectionKind::singular_point}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError("unknown event kind '" + s + "'");
}

std::string event_kind(const Event& e) { return e.contact.is_corner ? "Corner" : to_string(e.outcome.kind); }

// Maps data coordinates onto the canvas with a common scale and y pointing up.
struct Viewport {
  double x0{-1}, x1{1}, y0{-1}, y1{1};
  double scale{1};

  void include(double x, double y) {
    if (!seeded) {
      x0 = x1 = x;
      y0 = y1 = y;
      seeded = true;
      return;
    }
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }

  void finish() {
    if (!seeded) {
      x0 = y0 = -1;
      x1 = y1 = 1;
    }
    double w = x1 - x0, h = y1 - y0;
    const double span = std::max({w, h, 1e-12});
    x0 -= 0.05 * span;
    x1 += 0.05 * span;
    y0 -= 0.05 * span;
    y1 += 0.05 * span;
    w = x1 - x0;
    h = y1 - y0;
    scale = (canvas - 2 * margin) / std::max(w, h);
    pad_x = (canvas - 2 * margin - w * scale) / 2;
    pad_y = (canvas - 2 * margin - h * scale) / 2;
  }

  double X(double x) const { return margin + pad_x + (x - x0) * scale; }
  double Y(double y) const { return canvas - margin - pad_y - (y - y0) * scale; }

  bool seeded{false};
  double pad_x{0}, pad_y{0};
};

std::string num(double v) { return format_significant(v, 9); }

Vector2 project(const Point3& p, Plane plane) {
  return plane == Plane::xy ? Vector2(p.x(), p.y()) : Vector2(p.x(), p.z());
}

std::string sampled_path(const GeodesicArc& arc, Plane plane, const Viewport& vp) {
  constexpr int samples = 64;
  std::string d;
  for (int i = 0; i <= samples; ++i) {
    const Vector2 q = project(arc.at(arc.duration * i / samples).point, plane);
    d += (i == 0 ? "M " : " L ") + num(vp.X(q.x())) + " " + num(vp.Y(q.y()));
  }
  return d;
}

std::string circular_path(const GeodesicArc& arc, const Viewport& vp) {
  const Vector2 p0 = arc.start.point.head<2>();
  std::string d = "M " + num(vp.X(p0.x())) + " " + num(vp.Y(p0.y()));
  const double a = arc.start.momentum.a;
  if (arc.duration == 0) return d;
  if (a == 0) {
    const Vector2 p1 = arc.end().point.head<2>();
    return d + " L " + num(vp.X(p1.x())) + " " + num(vp.Y(p1.y()));
  }
  const double turn = std::abs(a) * arc.duration;
  const int pieces = std::max(1, static_cast<int>(std::ceil(turn / std::numbers::pi - 1e-12)));
  const std::string radius = num(vp.scale / std::abs(a));
  // The y flip reverses orientation: counter-clockwise data arcs use sweep 0.
  const char* sweep = a > 0 ? "0" : "1";
  for (int i = 1; i <= pieces; ++i) {
    const Vector2 q = arc.at(arc.duration * i / pieces).point.head<2>();
    d += " A " + radius + " " + radius + " 0 0 " + sweep + " " + num(vp.X(q.x())) + " " + num(vp.Y(q.y()));
  }
  return d;
}

std::string line(double x1, double y1, double x2, double y2, const std::string& cls) {
  return "<line class=\"" + cls + "\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
         num(y2) + "\"/>\n";
}

std::string svg_open() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n"
         "<style>.boundary{fill:none;stroke:#888;stroke-width:1.5}.arc{fill:none;stroke:#1f4e9c;stroke-width:1}"
         ".bounce{fill:#c0392b}.axis{stroke:#000;stroke-width:1}.curve{fill:none;stroke:#1f4e9c;stroke-width:1.5}"
         "</style>\n";
}

std::string boundary_svg(const TableSpec& table, Plane plane, const Viewport& vp) {
  const double left = vp.X(vp.x0), right = vp.X(vp.x1), bottom = vp.Y(vp.y0), top = vp.Y(vp.y1);
  auto hline = [&](double y) { return line(left, vp.Y(y), right, vp.Y(y), "boundary"); };
  auto vline = [&](double x) { return line(vp.X(x), bottom, vp.X(x), top, "boundary"); };
  auto frame = [&] {
    return "<rect class=\"boundary\" x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(right - left) +
           "\" height=\"" + num(bottom - top) + "\"/>\n";
  };
  auto disc = [&](const Vector2& c, double r) {
    return "<circle class=\"boundary\" cx=\"" + num(vp.X(c.x())) + "\" cy=\"" + num(vp.Y(c.y())) + "\" r=\"" +
           num(r * vp.scale) + "\"/>\n";
  };
  return std::visit(
      overloaded{
          [&](const InfiniteCylinder& t) {
            if (plane == Plane::xy) return disc(t.center, t.radius);
            return vline(t.center.x() - t.radius) + vline(t.center.x() + t.radius);
          },
          [&](const FiniteCylinder& t) {
            if (plane == Plane::xy) return disc(t.center, t.radius);
            const double x = vp.X(t.center.x() - t.radius), y = vp.Y(t.z_hi);
            return "<rect class=\"boundary\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
                   num(2 * t.radius * vp.scale) + "\" height=\"" + num((t.z_hi - t.z_lo) * vp.scale) + "\"/>\n";
          },
          [&](const HorizontalHalfSpace& t) { return plane == Plane::xy ? frame() : hline(t.z0); },
          [&](const HorizontalBand& t) { return plane == Plane::xy ? frame() : hline(t.z_lo) + hline(t.z_hi); },
          [&](const VerticalHalfSpace& t) { return plane == Plane::xy ? hline(t.offset) : frame(); },
      },
      table);
}

}  // namespace

std::string format_shortest(double value) {
  if (value == 0) value = 0;  // drop the sign of -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_significant(double value, int digits) {
  if (std::abs(value) < 1e-300) value = 0;
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  std::string out(buf, ptr);
  return out == "-0" ? "0" : out;
}

std::vector<double> parse_reals(std::string_view text) {
  std::vector<double> values;
  while (true) {
    const auto comma = text.find(',');
    values.push_back(parse_real(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return values;
}

TableSpec parse_table(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("table spec needs 'kind:params'");
  const std::string kind(text.substr(0, colon));
  const auto v = parse_reals(text.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (v.size() != n) throw ParseError(kind + " expects " + std::to_string(n) + " parameters");
  };
  TableSpec table;
  if (kind == "cyl") {
    need(3);
    table = InfiniteCylinder{Vector2(v[0], v[1]), v[2]};
  } else if (kind == "hplane") {
    need(2);
    if (v[1] != 1 && v[1] != -1) throw ParseError("hplane side must be +1 or -1");
    table = HorizontalHalfSpace{v[0], static_cast<int>(v[1])};
  } else if (kind == "vplane") {
    need(1);
    table = VerticalHalfSpace{v[0]};
  } else if (kind == "band") {
    need(2);
    table = HorizontalBand{v[0], v[1]};
  } else if (kind == "fincyl") {
    need(5);
    table = FiniteCylinder{Vector2(v[0], v[1]), v[2], v[3], v[4]};
  } else {
    throw ParseError("unknown table kind '" + kind + "'");
  }
  try {
    validate(table);
  } catch (const OutOfRangeError& e) {
    throw ParseError(e.what());
  }
  return table;
}

std::string format_table(const TableSpec& table) {
  return std::visit(overloaded{
                        [](const InfiniteCylinder& t) {
                          return "cyl:" + csv({t.center.x(), t.center.y(), t.radius});
                        },
                        [](const HorizontalHalfSpace& t) {
                          return "hplane:" + format_shortest(t.z0) + (t.side > 0 ? ",+1" : ",-1");
                        },
                        [](const VerticalHalfSpace& t) { return "vplane:" + format_shortest(t.offset); },
                        [](const HorizontalBand& t) { return "band:" + csv({t.z_lo, t.z_hi}); },
                        [](const FiniteCylinder& t) {
                          return "fincyl:" + csv({t.center.x(), t.center.y(), t.radius, t.z_lo, t.z_hi});
                        },
                    },
                    table);
}

State parse_state(std::string_view text) {
  const auto v = parse_reals(text);
  if (v.size() != 6) throw ParseError("start expects x,y,z,a,b,c");
  for (double x : v) {
    if (!std::isfinite(x)) throw ParseError("start values must be finite");
  }
  const double n = std::hypot(v[4], v[5]);
  if (!(n >= 1e-9)) throw ParseError("planar momentum (b, c) is zero");
  return {Point3(v[0], v[1], v[2]), {v[3], v[4] / n, v[5] / n}};
}

std::string trajectory_to_json(const Trajectory& traj) {
  json j;
  j["table"] = format_table(traj.table);
  j["arcs"] = json::array();
  for (const auto& arc : traj.arcs) {
    const auto& p = arc.start.point;
    const auto& m = arc.start.momentum;
    j["arcs"].push_back({{"start", {{"x", p.x()}, {"y", p.y()}, {"z", p.z()}, {"a", m.a}, {"b", m.b}, {"c", m.c}}},
                         {"duration", arc.duration}});
  }
  j["events"] = json::array();
  for (const auto& e : traj.events) {
    const auto& p = e.contact.point;
    j["events"].push_back({{"time", e.time},
                           {"point", {{"x", p.x()}, {"y", p.y()}, {"z", p.z()}}},
                           {"face", to_string(e.contact.face)},
                           {"kind", event_kind(e)},
                           {"s", e.outcome.s}});
  }
  j["termination"] = to_string(traj.termination);
  j["total_length"] = traj.total_length();
  return j.dump(2) + "\n";
}

Trajectory trajectory_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Trajectory traj;
    traj.table = parse_table(j.at("table").get<std::string>());
    for (const auto& a : j.at("arcs")) {
      const auto& s = a.at("start");
      GeodesicArc arc;
      arc.start.point = Point3(s.at("x").get<double>(), s.at("y").get<double>(), s.at("z").get<double>());
      arc.start.momentum = {s.at("a").get<double>(), s.at("b").get<double>(), s.at("c").get<double>()};
      arc.duration = a.at("duration").get<double>();
      traj.arcs.push_back(arc);
    }
    const auto fs = faces(traj.table);
    for (const auto& e : j.at("events")) {
      Event ev;
      ev.time = e.at("time").get<double>();
      const auto& p = e.at("point");
      ev.contact.point = Point3(p.at("x").get<double>(), p.at("y").get<double>(), p.at("z").get<double>());
      ev.contact.face = face_from_string(e.at("face").get<std::string>());
      const auto it = std::find_if(fs.begin(), fs.end(), [&](const FaceGeometry& f) { return f.face == ev.contact.face; });
      if (it == fs.end()) throw ParseError("face does not belong to the table");
      ev.contact.geometry = *it;
      ev.contact.dG = it->differential(ev.contact.point);
      const std::string kind = e.at("kind").get<std::string>();
      ev.contact.is_corner = kind == "Corner";
      ev.outcome.kind = ev.contact.is_corner ? ReflectionKind::non_degenerate : kind_from_string(kind);
      ev.outcome.s = e.at("s").get<double>();
      ev.contact.is_singular = ev.outcome.kind == ReflectionKind::singular_point;
      const std::size_t k = traj.events.size();
      if (k < traj.arcs.size()) ev.outcome.in = traj.arcs[k].end().momentum;
      ev.outcome.out = ev.outcome.in + ev.outcome.s * ev.contact.dG;
      ev.outcome.contact = ev.contact;
      traj.events.push_back(ev);
    }
    traj.termination = termination_from_string(j.at("termination").get<std::string>());
    if (!traj.arcs.empty()) traj.start = traj.arcs.front().start;
    return traj;
  } catch (const json::exception& e) {
    throw ParseError(std::string("trajectory JSON: ") + e.what());
  }
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "record,index,time,x,y,z,a,b,c,face,kind\n";
  for (std::size_t k = 0; k < traj.arcs.size(); ++k) {
    const auto& arc = traj.arcs[k];
    const auto& p = arc.start.point;
    const auto& m = arc.start.momentum;
    out << "arc," << k << ',' << csv({arc.duration, p.x(), p.y(), p.z(), m.a, m.b, m.c}) << ",,\n";
  }
  for (std::size_t k = 0; k < traj.events.size(); ++k) {
    const auto& e = traj.events[k];
    const auto& p = e.contact.point;
    const auto& m = e.outcome.out;
    out << "event," << k << ',' << csv({e.time, p.x(), p.y(), p.z(), m.a, m.b, m.c}) << ','
        << to_string(e.contact.face) << ',' << event_kind(e) << '\n';
  }
  return out.str();
}

Plane parse_plane(std::string_view text) {
  if (text == "xy") return Plane::xy;
  if (text == "xz") return Plane::xz;
  throw ParseError("plane must be xy or xz");
}

std::string trajectory_to_svg(const Trajectory& traj, Plane plane) {
  Viewport vp;
  for (const auto& arc : traj.arcs) {
    for (int i = 0; i <= 64; ++i) {
      const Vector2 q = project(arc.at(arc.duration * i / 64).point, plane);
      vp.include(q.x(), q.y());
    }
  }
  std::visit(overloaded{
                 [&](const InfiniteCylinder& t) {
                   vp.include(t.center.x() - t.radius, plane == Plane::xy ? t.center.y() - t.radius : 0);
                   vp.include(t.center.x() + t.radius, plane == Plane::xy ? t.center.y() + t.radius : 0);
                 },
                 [&](const FiniteCylinder& t) {
                   vp.include(t.center.x() - t.radius, plane == Plane::xy ? t.center.y() - t.radius : t.z_lo);
                   vp.include(t.center.x() + t.radius, plane == Plane::xy ? t.center.y() + t.radius : t.z_hi);
                 },
                 [&](const HorizontalHalfSpace& t) {
                   if (plane == Plane::xz) vp.include(0, t.z0);
                   else vp.include(0, 0);
                 },
                 [&](const HorizontalBand& t) {
                   if (plane == Plane::xz) {
                     vp.include(0, t.z_lo);
                     vp.include(0, t.z_hi);
                   } else {
                     vp.include(0, 0);
                   }
                 },
                 [&](const VerticalHalfSpace& t) {
                   if (plane == Plane::xy) vp.include(0, t.offset);
                 },
             },
             traj.table);
  vp.finish();

  std::string out = svg_open();
  out += boundary_svg(traj.table, plane, vp);
  for (const auto& arc : traj.arcs) {
    const std::string d = plane == Plane::xy ? circular_path(arc, vp) : sampled_path(arc, plane, vp);
    out += "<path class=\"arc\" d=\"" + d + "\"/>\n";
  }
  for (const auto& e : traj.events) {
    const Vector2 q = project(e.contact.point, plane);
    out += "<circle class=\"bounce\" cx=\"" + num(vp.X(q.x())) + "\" cy=\"" + num(vp.Y(q.y())) + "\" r=\"4\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string wavefront_to_csv(const std::vector<WavefrontPoint>& points) {
  std::string out = "r,R,z1\n";
  for (const auto& w : points) out += csv({w.r, w.R, w.z1}) + "\n";
  return out;
}

std::string wavefront_to_svg(const std::vector<WavefrontPoint>& points) {
  Viewport vp;
  vp.include(0, 0);
  for (const auto& w : points) vp.include(w.R, w.z1);
  vp.finish();
  std::string out = svg_open();
  const double ox = vp.X(0), oy = vp.Y(0);
  out += line(vp.X(vp.x0), oy, vp.X(vp.x1), oy, "axis");
  out += line(ox, vp.Y(vp.y0), ox, vp.Y(vp.y1), "axis");
  out += "<text class=\"label\" x=\"" + num(vp.X(vp.x1) - 20) + "\" y=\"" + num(oy + 20) + "\">R</text>\n";
  out += "<text class=\"label\" x=\"" + num(ox + 8) + "\" y=\"" + num(vp.Y(vp.y1) + 16) + "\">z</text>\n";
  std::string pts;
  for (const auto& w : points) {
    if (!pts.empty()) pts += ' ';
    pts += num(vp.X(w.R)) + "," + num(vp.Y(w.z1));
  }
  out += "<polyline class=\"curve\" points=\"" + pts + "\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace heis
