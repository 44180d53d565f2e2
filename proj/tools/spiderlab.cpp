// spiderlab command line: workspace geometry, Morse censuses, configuration
// space counts, trapping/robust domains, control solutions, gradient flow.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "spiderlab/spiderlab.hpp"

using ordered_json = nlohmann::ordered_json;
using namespace spider;

namespace {

constexpr int exit_config_error = 2;
constexpr int exit_domain_error = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  SpiderSpec spec;
  std::optional<Weights> weights;
  std::optional<ChargeTriple> charges;
};

int line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::array<double, 3> number_or_triple(const ordered_json& j, const std::string& field) {
  if (j.is_number()) {
    double v = j.get<double>();
    return {v, v, v};
  }
  if (j.is_array() && j.size() == 3 && j[0].is_number() && j[1].is_number() && j[2].is_number())
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  throw ConfigError("field '" + field + "' must be a number or an array of 3 numbers");
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("parse failure at line " + std::to_string(line_of_offset(text, e.byte)) +
                      ": " + e.what());
  }

  if (!j.contains("feet") || !j["feet"].is_array() || j["feet"].size() != 3)
    throw ConfigError("field 'feet' must be an array of 3 [x, y] pairs");
  Point feet[3];
  for (int i = 0; i < 3; ++i) {
    const auto& f = j["feet"][i];
    if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number())
      throw ConfigError("field 'feet[" + std::to_string(i) + "]' must be an [x, y] pair");
    feet[i] = {f[0].get<double>(), f[1].get<double>()};
  }
  if (!j.contains("thigh")) throw ConfigError("field 'thigh' is required");
  if (!j.contains("shin")) throw ConfigError("field 'shin' is required");
  auto thigh = number_or_triple(j["thigh"], "thigh");
  auto shin = number_or_triple(j["shin"], "shin");

  Config cfg;
  cfg.spec.feet = {feet[0], feet[1], feet[2]};
  static const char* leg_names[3] = {"A", "B", "C"};
  for (int i = 0; i < 3; ++i) {
    cfg.spec.legs[i] = {thigh[i], shin[i]};
    if (!(shin[i] > 0.0))
      throw ConfigError("leg " + std::to_string(i + 1) + " (foot " + leg_names[i] +
                        "): shin (" + std::to_string(shin[i]) + ") must be positive");
    if (!(thigh[i] > shin[i]))
      throw ConfigError("leg " + std::to_string(i + 1) + " (foot " + leg_names[i] +
                        "): thigh (" + std::to_string(thigh[i]) + ") must be greater than shin (" +
                        std::to_string(shin[i]) + ")");
  }
  if (cfg.spec.feet.degenerate()) throw ConfigError("field 'feet': triangle is degenerate");

  if (j.contains("weights")) {
    auto w = number_or_triple(j["weights"], "weights");
    cfg.weights = Weights{w[0], w[1], w[2]};
  }
  if (j.contains("charges")) {
    auto q = number_or_triple(j["charges"], "charges");
    cfg.charges = ChargeTriple{q[0], q[1], q[2]};
  }
  return cfg;
}

ordered_json point_json(Point p) { return ordered_json::array({p.x, p.y}); }

ordered_json spec_json(const SpiderSpec& s) {
  ordered_json j;
  j["feet"] = {point_json(s.feet.a), point_json(s.feet.b), point_json(s.feet.c)};
  j["thigh"] = {s.legs[0].thigh, s.legs[1].thigh, s.legs[2].thigh};
  j["shin"] = {s.legs[0].shin, s.legs[1].shin, s.legs[2].shin};
  return j;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot write " + path);
}

void emit_report(const std::string& out_dir, const std::string& name, const ordered_json& j) {
  std::string text = j.dump(2) + "\n";
  atomic_write(out_dir + "/" + name, text);
  std::cout << text;
}

Point parse_point(const std::string& s, const std::string& flag) {
  size_t comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError(flag + " expects 'x,y'");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError(flag + " expects 'x,y' with numeric coordinates");
  }
}

int env_grid_n(int fallback) {
  if (const char* v = std::getenv("SPIDERLAB_GRID_N")) {
    int n = std::atoi(v);
    if (n > 8) return n;
  }
  return fallback;
}

const char* kind_name(CriticalKind k) {
  switch (k) {
    case CriticalKind::interior: return "interior";
    case CriticalKind::boundary: return "boundary";
    default: return "corner";
  }
}

const char* cell_name(CellChange c) {
  switch (c) {
    case CellChange::cell0: return "0-cell";
    case CellChange::cell1: return "1-cell";
    default: return "none";
  }
}

ordered_json census_json(const MorseCensus& mc, const std::string& potential) {
  ordered_json j;
  j["potential"] = potential;
  j["mu"] = {mc.mu0, mc.mu1, mc.mu2};
  j["euler"] = mc.euler;
  ordered_json pts = ordered_json::array();
  for (const CriticalPoint& cp : mc.points) {
    ordered_json p;
    p["location"] = point_json(cp.location);
    p["kind"] = kind_name(cp.kind);
    p["index"] = cp.index;
    p["value"] = cp.value;
    p["cell"] = cell_name(cp.cell);
    pts.push_back(p);
  }
  j["critical_points"] = pts;
  return j;
}

struct PotentialChoice {
  std::string name = "hooke";
  Weights weights;
  ChargeTriple charges;
};

PotentialChoice resolve_potential(const std::string& name, const Config& cfg) {
  PotentialChoice pc;
  pc.name = name;
  if (name == "weighted") {
    if (!cfg.weights) throw ConfigError("potential 'weighted' requires a 'weights' field");
    pc.weights = *cfg.weights;
    if (!(pc.weights.alpha > 0 && pc.weights.beta > 0 && pc.weights.gamma > 0))
      throw ConfigError("field 'weights': all weights must be strictly positive");
  } else if (name == "coulomb") {
    if (!cfg.charges) throw ConfigError("potential 'coulomb' requires a 'charges' field");
    pc.charges = *cfg.charges;
  } else if (name != "hooke") {
    throw ConfigError("unknown potential '" + name + "'");
  }
  return pc;
}

template <class Fn>
auto with_potential(const PotentialChoice& pc, const Triangle& tri, Fn&& fn) {
  if (pc.name == "hooke") return fn(Hooke{tri});
  if (pc.name == "weighted") return fn(WeightedHooke{tri, pc.weights});
  return fn(Coulomb{tri, pc.charges});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tripod spider workspaces, potentials and robust control"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  app.add_option("--config", config_path, "Spider config JSON")->required();
  app.add_option("--out", out_dir, "Output directory");

  auto* cmd_workspace = app.add_subcommand("workspace", "Workspace arcs, corners, topology");

  std::string census_potential = "hooke";
  auto* cmd_census = app.add_subcommand("census", "Morse census on the workspace");
  cmd_census->add_option("--potential", census_potential, "hooke|weighted|coulomb");

  auto* cmd_cspace = app.add_subcommand("cspace", "Configuration-space census (Hooke lift)");

  int trap_resolution = 0;
  auto* cmd_trap = app.add_subcommand("trap", "Coulomb trapping domain of the feet triangle");
  cmd_trap->add_option("--resolution", trap_resolution, "Sample grid resolution");

  std::string control_target, control_mode = "hooke";
  auto* cmd_control = app.add_subcommand("control", "Inverse control for a target point");
  cmd_control->add_option("--target", control_target, "Target point 'x,y'")->required();
  cmd_control->add_option("--mode", control_mode, "hooke|coulomb");

  std::string flow_start, flow_potential = "hooke";
  double flow_step = 1e-3;
  long flow_max_steps = 200000;
  auto* cmd_flow = app.add_subcommand("flow", "Gradient flow with boundary sliding");
  cmd_flow->add_option("--start", flow_start, "Start point 'x,y'")->required();
  cmd_flow->add_option("--potential", flow_potential, "hooke|weighted|coulomb");
  cmd_flow->add_option("--step", flow_step, "Descent step length");
  cmd_flow->add_option("--max-steps", flow_max_steps, "Step budget");

  auto* cmd_equilibria = app.add_subcommand("equilibria", "Coulomb equilibria of the charges");

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg = load_config(config_path);
    MorseOptions morse_opt;
    morse_opt.seed_grid = env_grid_n(morse_opt.seed_grid);

    try {
      if (cmd_workspace->parsed()) {
        Workspace w = build_workspace(cfg.spec);
        ordered_json j;
        j["spec"] = spec_json(cfg.spec);
        auto [b0, b1] = w.betti();
        j["betti"] = {b0, b1};
        ordered_json arcs = ordered_json::array();
        for (int id : w.outer_arcs()) {
          const BoundaryArc& a = w.arcs[id];
          const ConstraintCircle& c = w.circles[a.circle];
          ordered_json aj;
          aj["foot"] = c.foot;
          aj["kind"] = c.kind == CircleKind::outer ? "outer" : "inner";
          aj["center"] = point_json(c.center);
          aj["radius"] = c.radius;
          aj["theta0"] = a.theta0;
          aj["theta1"] = a.theta1;
          arcs.push_back(aj);
        }
        j["outer_arcs"] = arcs;
        ordered_json holes = ordered_json::array();
        for (int ci : w.hole_circles()) {
          ordered_json hj;
          hj["foot"] = w.circles[ci].foot;
          hj["center"] = point_json(w.circles[ci].center);
          hj["radius"] = w.circles[ci].radius;
          holes.push_back(hj);
        }
        j["hole_circles"] = holes;
        ordered_json corners = ordered_json::array();
        for (const Corner& c : w.corners) corners.push_back(point_json(c.at));
        j["corners"] = corners;
        atomic_write(out_dir + "/workspace.svg", svg::render_workspace(w));
        emit_report(out_dir, "workspace.json", j);
      } else if (cmd_census->parsed()) {
        PotentialChoice pc = resolve_potential(census_potential, cfg);
        Workspace w = build_workspace(cfg.spec);
        MorseCensus mc = with_potential(
            pc, cfg.spec.feet, [&](auto pot) { return census(pot, w, morse_opt); });
        std::string field = with_potential(
            pc, cfg.spec.feet, [&](auto pot) { return svg::render_field(pot, w, mc.points); });
        atomic_write(out_dir + "/census.svg", field);
        emit_report(out_dir, "census.json", census_json(mc, pc.name));
      } else if (cmd_cspace->parsed()) {
        Workspace w = build_workspace(cfg.spec);
        CspaceCensus cc = lift_census(Hooke{cfg.spec.feet}, w, morse_opt);
        ordered_json j;
        j["minima"] = cc.minima;
        j["saddles"] = cc.saddles;
        j["maxima"] = cc.maxima;
        j["euler"] = cc.euler;
        j["genus"] = cc.genus;
        emit_report(out_dir, "cspace.json", j);
      } else if (cmd_trap->parsed()) {
        int res = trap_resolution > 0 ? trap_resolution : env_grid_n(128);
        Region region = trapping_domain(cfg.spec.feet, res);
        std::string csv = "x,y,h\n";
        for (Point p : region.sample)
          csv += svg::fmt(p.x) + "," + svg::fmt(p.y) + "," +
                 svg::fmt(trapping_hessian(p, cfg.spec.feet)) + "\n";
        atomic_write(out_dir + "/trap.csv", csv);
        atomic_write(out_dir + "/trap.svg", svg::render_region(region, cfg.spec.feet));
        ordered_json j;
        j["samples"] = static_cast<long>(region.sample.size());
        j["resolution"] = region.resolution;
        j["empty"] = region.empty();
        j["contains_incenter"] = region.member(cfg.spec.feet.centroid());
        emit_report(out_dir, "trap.json", j);
      } else if (cmd_control->parsed()) {
        Point target = parse_point(control_target, "--target");
        ControlSolution sol;
        if (control_mode == "hooke")
          sol = hooke_weights_for(target, cfg.spec.feet);
        else if (control_mode == "coulomb")
          sol = coulomb_charges_for(target, cfg.spec);
        else
          throw ConfigError("unknown control mode '" + control_mode + "'");
        ordered_json j;
        j["mode"] = control_mode;
        j["parameters"] = {sol.parameters[0], sol.parameters[1], sol.parameters[2]};
        j["target"] = point_json(sol.target);
        j["certificate"] = sol.certificate == Certificate::target_is_unique_minimum
                               ? "TargetIsUniqueMinimum"
                               : "TargetIsTrappedMinimum";
        j["residual"] = sol.residual;
        emit_report(out_dir, "control.json", j);
      } else if (cmd_flow->parsed()) {
        Point start = parse_point(flow_start, "--start");
        PotentialChoice pc = resolve_potential(flow_potential, cfg);
        Workspace w = build_workspace(cfg.spec);
        FlowOptions fopt;
        fopt.step = flow_step;
        fopt.max_steps = flow_max_steps;
        Trajectory t = with_potential(
            pc, cfg.spec.feet, [&](auto pot) { return gradient_flow(pot, start, w, fopt); });
        std::string csv = "index,x,y,tag\n";
        for (size_t i = 0; i < t.points.size(); ++i) {
          std::string tag = i == 0 ? "start"
                            : t.segments[i - 1].kind == SegmentKind::free_step
                                ? "free"
                                : "sliding:" + std::to_string(t.segments[i - 1].circle);
          csv += std::to_string(i) + "," + svg::fmt(t.points[i].x) + "," + svg::fmt(t.points[i].y) +
                 "," + tag + "\n";
        }
        atomic_write(out_dir + "/flow.csv", csv);
        atomic_write(out_dir + "/flow.svg", svg::render_trajectory(w, t));
        ordered_json j;
        j["potential"] = pc.name;
        j["start"] = point_json(start);
        j["terminal"] = point_json(t.terminal);
        j["status"] = t.status == FlowStatus::converged        ? "Converged"
                      : t.status == FlowStatus::stalled_at_saddle ? "StalledAtSaddle"
                                                                  : "MaxStepsReached";
        j["steps"] = static_cast<long>(t.segments.size());
        ordered_json ph = ordered_json::array();
        for (const Segment& s : phases(t))
          ph.push_back(s.kind == SegmentKind::free_step ? "free"
                                                        : "sliding:" + std::to_string(s.circle));
        j["phases"] = ph;
        emit_report(out_dir, "flow.json", j);
      } else if (cmd_equilibria->parsed()) {
        if (!cfg.charges) throw ConfigError("equilibria requires a 'charges' field");
        EquilibriaOptions eopt;
        eopt.grid_n = env_grid_n(eopt.grid_n);
        auto eqs = equilibria(cfg.spec.feet, *cfg.charges, std::nullopt, eopt);
        ordered_json j;
        j["charges"] = {cfg.charges->q1, cfg.charges->q2, cfg.charges->q3};
        j["count"] = static_cast<long>(eqs.size());
        ordered_json list = ordered_json::array();
        for (const Equilibrium& e : eqs) {
          ordered_json ej;
          ej["location"] = point_json(e.location);
          ej["index"] = e.index;
          ej["residual"] = e.residual;
          if (e.degenerate) ej["degenerate"] = true;
          list.push_back(ej);
        }
        j["equilibria"] = list;
        emit_report(out_dir, "equilibria.json", j);
      }
    } catch (const Error& e) {
      ordered_json j;
      j["error"] = e.name();
      j["detail"] = e.what();
      std::string sub = app.get_subcommands().front()->get_name();
      emit_report(out_dir, sub + ".json", j);
      return exit_domain_error;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
