// heisbill: simulate and analyse billiards in the Heisenberg group.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "heisbill/billiard.hpp"
#include "heisbill/io.hpp"
#include "heisbill/orbits.hpp"
#include "heisbill/wavefront.hpp"

namespace {

constexpr int exit_domain = 2;
constexpr int exit_usage = 1;

struct Output {
  std::string path{"-"};
  std::string format{"json"};
  std::string plane{"xy"};
};

heis::FlowOptions flow_options() {
  heis::FlowOptions opts;
  if (const char* tol = std::getenv("HEIS_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(tol, &end);
    if (end == tol || *end != '\0' || !(v > 0)) throw heis::ParseError("HEIS_TOL must be a positive number");
    opts.root_tol = v;
  }
  return opts;
}

void write_atomic(const std::string& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const std::string tmp = path + ".tmp" + std::to_string(counter++);
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
  }
  std::filesystem::rename(tmp, path);
}

void emit(const Output& out, const std::string& content) {
  if (out.path == "-") {
    std::cout << content;
  } else {
    write_atomic(out.path, content);
  }
}

std::string render(const heis::Trajectory& traj, const Output& out) {
  if (out.format == "json") return heis::trajectory_to_json(traj);
  if (out.format == "csv") return heis::trajectory_to_csv(traj);
  return heis::trajectory_to_svg(traj, heis::parse_plane(out.plane));
}

std::string fixed10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

bool strict_failure(heis::Termination t) {
  return t == heis::Termination::singular_hit || t == heis::Termination::corner_hit ||
         t == heis::Termination::outer_tangency_stop;
}

void add_output_options(CLI::App* cmd, Output& out) {
  cmd->add_option("-o,--output", out.path, "Output file, '-' for stdout");
  cmd->add_option("--format", out.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  cmd->add_option("--plane", out.plane, "Projection plane for svg")->check(CLI::IsMember({"xy", "xz"}));
}

void report_orbit(const heis::PeriodicOrbit& orbit, const Output& out, bool write) {
  std::cout << "events: " << orbit.trajectory.events.size() << "\n"
            << "closure_error: " << heis::format_significant(orbit.closure_error, 6) << "\n"
            << "momentum_error: " << heis::format_significant(orbit.momentum_error, 6) << "\n"
            << "termination: " << heis::to_string(orbit.trajectory.termination) << "\n";
  if (write) emit(out, render(orbit.trajectory, out));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-Riemannian billiards in the Heisenberg group"};
  app.require_subcommand(1);

  // simulate
  Output sim_out;
  std::string table_text, start_text;
  int max_bounces = 100;
  double max_length = 1e3;
  bool strict = false;
  auto* simulate = app.add_subcommand("simulate", "Run a trajectory from a start state");
  simulate->add_option("--table", table_text, "Table spec, e.g. cyl:0,0,1")->required();
  simulate->add_option("--start", start_text, "x,y,z,a,b,c")->required();
  simulate->add_option("--max-bounces", max_bounces)->check(CLI::NonNegativeNumber);
  simulate->add_option("--max-length", max_length)->check(CLI::NonNegativeNumber);
  simulate->add_flag("--strict", strict, "Exit 2 on singular, corner or outer-tangency stops");
  add_output_options(simulate, sim_out);

  // periodic
  Output per_out;
  auto* periodic = app.add_subcommand("periodic", "Construct a periodic orbit");
  periodic->require_subcommand(1);
  int ngon_n = 0, ngon_m = 0;
  double ngon_radius = 1;
  auto* ngon = periodic->add_subcommand("ngon", "n-gon orbit in the infinite cylinder");
  ngon->add_option("--n", ngon_n)->required();
  ngon->add_option("--m", ngon_m)->required();
  ngon->add_option("--radius", ngon_radius);
  double band_height = 0;
  int band_n = 1;
  auto* band = periodic->add_subcommand("band", "Two-bounce orbit in a horizontal band");
  band->add_option("--height", band_height)->required();
  band->add_option("--n", band_n);
  double fc_d = 1, fc_psi = 0;
  int fc_c = 1;
  auto* fincyl = periodic->add_subcommand("fincyl", "Bigon orbit in the finite cylinder");
  fincyl->add_option("--d", fc_d);
  fincyl->add_option("--psi", fc_psi)->required();
  fincyl->add_option("--c", fc_c);
  for (auto* cmd : {ngon, band, fincyl}) add_output_options(cmd, per_out);

  // threshold
  std::string threshold_name;
  auto* threshold = app.add_subcommand("threshold", "Print a numerical threshold");
  threshold->add_option("name", threshold_name, "prop522 or lemma525")
      ->required()
      ->check(CLI::IsMember({"prop522", "lemma525"}));

  // wavefront
  double wf_T = 1, wf_rmax = 0;
  int wf_samples = 100;
  std::string wf_format = "csv", wf_output = "-";
  auto* wavefront = app.add_subcommand("wavefront", "Attainable-set boundary of the horizontal plane");
  wavefront->add_option("--T", wf_T)->required();
  wavefront->add_option("--samples", wf_samples);
  wavefront->add_option("--r-max", wf_rmax, "Largest start radius (default 5T)");
  wavefront->add_option("--format", wf_format)->check(CLI::IsMember({"csv", "svg"}));
  wavefront->add_option("-o,--output", wf_output);

  // export-svg
  std::string svg_input, svg_plane = "xy", svg_output = "-";
  auto* export_svg = app.add_subcommand("export-svg", "Render a trajectory JSON file as SVG");
  export_svg->add_option("input", svg_input)->required();
  export_svg->add_option("--plane", svg_plane)->check(CLI::IsMember({"xy", "xz"}));
  export_svg->add_option("-o,--output", svg_output);

  // sweep
  std::string sweep_param = "a", sweep_dir = ".", sweep_format = "json";
  double sweep_from = 0, sweep_to = 1;
  int sweep_steps = 2, jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a family of trajectories varying one start coordinate");
  sweep->add_option("--table", table_text)->required();
  sweep->add_option("--start", start_text)->required();
  sweep->add_option("--vary", sweep_param)->check(CLI::IsMember({"x", "y", "z", "a", "b", "c"}));
  sweep->add_option("--from", sweep_from);
  sweep->add_option("--to", sweep_to);
  sweep->add_option("--steps", sweep_steps)->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  sweep->add_option("--max-bounces", max_bounces)->check(CLI::NonNegativeNumber);
  sweep->add_option("--max-length", max_length)->check(CLI::NonNegativeNumber);
  sweep->add_option("--outdir", sweep_dir);
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"json", "csv", "svg"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  }

  try {
    const heis::FlowOptions opts = flow_options();

    if (*simulate) {
      const auto table = heis::parse_table(table_text);
      const auto start = heis::parse_state(start_text);
      const auto traj = heis::run(table, start, max_bounces, max_length, opts);
      emit(sim_out, render(traj, sim_out));
      std::cerr << "termination: " << heis::to_string(traj.termination) << "\n";
      return strict && strict_failure(traj.termination) ? exit_domain : 0;
    }

    if (*periodic) {
      const bool write = per_out.path != "-";
      if (*ngon) {
        const auto orbit = heis::build_ngon_orbit(ngon_n, ngon_m, ngon_radius);
        std::cout << "psi: " << fixed10(orbit.solution.psi) << "\n"
                  << "rho: " << fixed10(orbit.solution.rho * ngon_radius) << "\n";
        report_orbit(orbit.orbit, per_out, write);
      } else if (*band) {
        const auto orbit = heis::build_band_orbit(band_height, band_n);
        std::cout << "r0: " << fixed10(orbit.r0) << "\n"
                  << "loops: " << orbit.loops << "\n";
        report_orbit(orbit.orbit, per_out, write);
      } else {
        const auto orbit = heis::build_finite_cylinder_bigon(fc_d, fc_psi, fc_c);
        std::cout << "R: " << fixed10(orbit.spec.R) << "\n"
                  << "r: " << fixed10(orbit.spec.r) << "\n"
                  << "H: " << fixed10(orbit.spec.H) << "\n"
                  << "distinct_bounce_points: " << orbit.distinct_bounce_points << "\n";
        report_orbit(orbit.orbit, per_out, write);
      }
      return 0;
    }

    if (*threshold) {
      const double v = threshold_name == "prop522" ? heis::threshold_prop522() : heis::threshold_lemma525();
      std::cout << fixed10(v) << "\n";
      return 0;
    }

    if (*wavefront) {
      const auto points = heis::attainable_boundary(wf_T, wf_samples, wf_rmax);
      const std::string text = wf_format == "csv" ? heis::wavefront_to_csv(points) : heis::wavefront_to_svg(points);
      emit({wf_output, wf_format, "xy"}, text);
      return 0;
    }

    if (*export_svg) {
      std::ifstream in(svg_input, std::ios::binary);
      if (!in) throw heis::ParseError("cannot read " + svg_input);
      std::stringstream buf;
      buf << in.rdbuf();
      const auto traj = heis::trajectory_from_json(buf.str());
      emit({svg_output, "svg", svg_plane}, heis::trajectory_to_svg(traj, heis::parse_plane(svg_plane)));
      return 0;
    }

    if (*sweep) {
      const auto table = heis::parse_table(table_text);
      const auto base = heis::parse_reals(start_text);
      if (base.size() != 6) throw heis::ParseError("start expects x,y,z,a,b,c");
      const std::string names = "xyzabc";
      const auto slot = names.find(sweep_param[0]);
      std::filesystem::create_directories(sweep_dir);

      std::vector<std::string> lines(static_cast<std::size_t>(sweep_steps));
      std::atomic<int> next{0};
      std::mutex error_mutex;
      std::string first_error;
      auto worker = [&] {
        for (int i = next++; i < sweep_steps; i = next++) {
          const double value =
              sweep_steps == 1 ? sweep_from : sweep_from + (sweep_to - sweep_from) * i / (sweep_steps - 1);
          auto v = base;
          v[slot] = value;
          char name[32];
          std::snprintf(name, sizeof name, "run_%04d.%s", i, sweep_format.c_str());
          std::string line = std::to_string(i) + "," + heis::format_shortest(value) + ",";
          try {
            std::string spec;
            for (std::size_t k = 0; k < v.size(); ++k) spec += (k ? "," : "") + heis::format_shortest(v[k]);
            const auto traj = heis::run(table, heis::parse_state(spec), max_bounces, max_length, opts);
            write_atomic((std::filesystem::path(sweep_dir) / name).string(),
                         render(traj, {"", sweep_format, "xy"}));
            line += heis::to_string(traj.termination) + "," + std::to_string(traj.events.size()) + "," +
                    heis::format_shortest(traj.total_length());
          } catch (const heis::Error& e) {
            line += std::string("Error,0,0");
            std::lock_guard lock(error_mutex);
            if (first_error.empty()) first_error = e.what();
          }
          lines[static_cast<std::size_t>(i)] = line;
        }
      };
      std::vector<std::thread> pool;
      for (int j = 0; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      std::cout << "index,value,termination,events,total_length\n";
      for (const auto& l : lines) std::cout << l << "\n";
      if (!first_error.empty()) {
        std::cerr << "error: " << first_error << "\n";
        return exit_domain;
      }
      return 0;
    }
  } catch (const heis::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const heis::BelowThresholdError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "threshold: " << fixed10(e.threshold) << "\n";
    return exit_domain;
  } catch (const heis::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_domain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return 0;
}
