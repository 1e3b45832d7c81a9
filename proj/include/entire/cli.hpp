#pragma once

// Command-line front end. Exit codes: 0 success, 1 a checked condition
// failed (a JSON failure report is printed), 2 usage or input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entire/curve.hpp"
#include "entire/domain.hpp"
#include "entire/funcspec.hpp"
#include "entire/io.hpp"
#include "entire/modulus.hpp"
#include "entire/orbits.hpp"
#include "entire/raster.hpp"
#include "entire/scenarios.hpp"
#include "entire/surround.hpp"

namespace entire::cli {

inline constexpr const char* kOutDirEnv = "ENTIRE_OUT_DIR";

// Usage or malformed input (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

// A real number written as a constant expression; `pi` is accepted.
inline double parse_real(const std::string& text) {
  std::string s;
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text.compare(k, 2, "pi") == 0) {
      s += "(3.141592653589793)";
      ++k;
    } else {
      s += text[k];
    }
  }
  try {
    const FunctionExpression e = parse(s);
    if (!expr::is_constant(e.root()) || e.root()->value.imag() != 0.0) throw UsageError("not a real constant: " + text);
    return e.root()->value.real();
  } catch (const SyntaxError&) {
    throw UsageError("cannot read number '" + text + "'");
  } catch (const NonEntireError&) {
    throw UsageError("cannot read number '" + text + "'");
  }
}

inline std::vector<double> parse_reals(const std::string& text, char sep = ',') {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) v.push_back(parse_real(item));
  return v;
}

inline cplx parse_complex(const std::string& text) {
  const auto v = parse_reals(text);
  if (v.size() != 2) throw UsageError("expected re,im but got '" + text + "'");
  return {v[0], v[1]};
}

inline Rect parse_rect(const std::string& text) {
  const auto v = parse_reals(text);
  if (v.size() != 4) throw UsageError("expected x_min,x_max,y_min,y_max but got '" + text + "'");
  return {v[0], v[1], v[2], v[3]};
}

// disc:cx,cy,r | rect:x0,x1,y0,y1 | union:x0,x1,y0,y1;x0,x1,y0,y1[;...]
// An optional "@label" suffix names the domain.
inline DomainSpec parse_domain(const std::string& text) {
  std::string body = text, label;
  if (const auto at = text.find('@'); at != std::string::npos) {
    body = text.substr(0, at);
    label = text.substr(at + 1);
  }
  const auto colon = body.find(':');
  if (colon == std::string::npos) throw UsageError("domain needs a kind prefix: '" + text + "'");
  const std::string kind = body.substr(0, colon), args = body.substr(colon + 1);
  try {
    if (kind == "disc") {
      const auto v = parse_reals(args);
      if (v.size() != 3) throw UsageError("disc needs cx,cy,r");
      return DomainSpec::disc({v[0], v[1]}, v[2], label.empty() ? text : label);
    }
    if (kind == "rect") {
      const Rect r = parse_rect(args);
      return DomainSpec::rect(r.x_min, r.x_max, r.y_min, r.y_max, label.empty() ? text : label);
    }
    if (kind == "union") {
      std::vector<Rect> rects;
      std::stringstream ss(args);
      std::string item;
      while (std::getline(ss, item, ';')) rects.push_back(parse_rect(item));
      return DomainSpec::rect_union(std::move(rects), label.empty() ? text : label);
    }
  } catch (const DegenerateDomain& e) {
    throw UsageError(std::string("invalid domain '") + text + "': " + e.what());
  }
  throw UsageError("unknown domain kind '" + kind + "'");
}

inline PointClass parse_class(const std::string& s) {
  if (s == "unbounded" || s == "UNBOUNDED_SUSPECT") return PointClass::UnboundedSuspect;
  if (s == "bounded" || s == "BOUNDED_SUSPECT") return PointClass::BoundedSuspect;
  if (s == "undecided" || s == "UNDECIDED") return PointClass::Undecided;
  throw UsageError("unknown class '" + s + "' (unbounded, bounded, undecided)");
}

// Append key=value lines of the config file as --key value, skipping keys
// already given on the command line.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      path = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k) + 2);
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) args.push_back(flag + "=" + value);
  }
  return args;
}

struct Context {
  std::filesystem::path out_dir;
  std::ostream& out;
  std::ostream& err;

  void emit(const std::string& name, const std::string& bytes) const { io::write_atomic(out_dir / name, bytes); }
};

inline int fail_report(const Context& ctx, const std::string& command, const io::json& details) {
  io::json j = {{"status", "failed"}, {"command", command}, {"details", details}};
  ctx.err << io::dump(j);
  return 1;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);

  CLI::App app{"Numerical exploration of unbounded-orbit sets of entire functions"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_dir_flag;
  app.add_option("--out-dir", out_dir_flag, "Directory for emitted files (default: $ENTIRE_OUT_DIR or .)");
  app.add_option("--config", "key=value file; command-line flags take precedence");

  std::string fsrc;
  ModulusOptions mod_opts;
  OrbitPolicy policy;
  SequenceCheckOptions seq_opts;

  auto add_function = [&](CLI::App* sub) {
    sub->add_option("--f", fsrc, "Entire function of z, e.g. \"cos(z)+z\"")->required();
  };
  auto add_modulus = [&](CLI::App* sub) {
    sub->add_option("--n-coarse", mod_opts.n_coarse, "Coarse angular samples")->capture_default_str();
    sub->add_option("--tol", mod_opts.tol, "Angular bracket width ending refinement")->capture_default_str();
  };
  auto add_policy = [&](CLI::App* sub) {
    sub->add_option("--budget", policy.budget, "Maximum iterations")->capture_default_str();
    sub->add_option("--escape-radius", policy.escape_radius, "Escape radius")->capture_default_str();
    sub->add_option("--cycle-tol", policy.cycle_tol, "Near-return tolerance")->capture_default_str();
    sub->add_option("--cycle-window", policy.cycle_window, "Points searched for near-returns")->capture_default_str();
  };
  auto add_sequence = [&](CLI::App* sub) {
    sub->add_option("--density", seq_opts.density, "Boundary samples per unit length")->capture_default_str();
    sub->add_option("--probe-grid", seq_opts.probe_grid, "Probe lattice size per axis")->capture_default_str();
    sub->add_option("--max-step-fraction", seq_opts.max_step_fraction,
                    "Absolute image chord bound as a fraction of the target diameter")
        ->capture_default_str();
    sub->add_option("--relative-step", seq_opts.relative_step,
                    "Image chords may grow to this fraction of their distance from the target")
        ->capture_default_str();
    sub->add_option("--max-points", seq_opts.max_points, "Image refinement point budget")->capture_default_str();
    sub->add_option("--epsilon", seq_opts.epsilon_fraction,
                    "Contact/closure tolerance as a fraction of the domain diameter")
        ->capture_default_str();
  };

  auto* parse_check = app.add_subcommand("parse-check", "Validate an expression and print its canonical form");
  add_function(parse_check);

  double radius = 1.0;
  auto* minmod = app.add_subcommand("minmod", "Minimum and maximum modulus on |z| = r");
  add_function(minmod);
  minmod->add_option("--r", radius, "Circle radius")->required();
  add_modulus(minmod);

  MinModIterationOptions iter_opts;
  std::string expect_verdict;
  auto* minmod_iterate = app.add_subcommand("minmod-iterate", "Iterate r -> m(r) and report divergence evidence");
  add_function(minmod_iterate);
  minmod_iterate->add_option("--r", radius, "Starting radius r0")->required();
  minmod_iterate->add_option("--n-max", iter_opts.n_max, "Maximum iterations")->capture_default_str();
  minmod_iterate->add_option("--blow-up", iter_opts.blow_up, "Divergence threshold")->capture_default_str();
  minmod_iterate->add_option("--expect", expect_verdict, "Fail unless the verdict is DIVERGES/NOT_DIVERGING/UNDECIDED");
  add_modulus(minmod_iterate);

  std::size_t count = 4;
  bool check_discs = false;
  auto* disc_seq = app.add_subcommand("disc-seq", "Discs of radius m^n(r0) and, optionally, their surround check");
  add_function(disc_seq);
  disc_seq->add_option("--r", radius, "Starting radius r0")->required();
  disc_seq->add_option("--count", count, "Number of discs")->capture_default_str();
  disc_seq->add_flag("--check-surround", check_discs, "Also check that f(boundary D'_n) surrounds D'_{n+1}");
  add_modulus(disc_seq);
  add_sequence(disc_seq);

  std::vector<std::string> domain_texts;
  std::string expect_bool = "true";
  auto* surround_check = app.add_subcommand("surround-check", "Check that f(boundary D_n) surrounds D_{n+1}");
  add_function(surround_check);
  surround_check->add_option("--domain", domain_texts, "Domain, repeat in order (disc:cx,cy,r | rect:... | union:...)")
      ->required();
  surround_check->add_option("--expect", expect_bool, "Expected verdict (true/false)")->capture_default_str();
  add_sequence(surround_check);

  auto* spl_check = app.add_subcommand("spl-check", "Check the strongly polynomial-like conditions on D_n");
  add_function(spl_check);
  spl_check->add_option("--domain", domain_texts, "Domain, repeat in order")->required();
  spl_check->add_option("--expect", expect_bool, "Expected verdict (true/false)")->capture_default_str();
  add_sequence(spl_check);

  std::string z0_text;
  bool keep_trace = false;
  auto* orbit = app.add_subcommand("orbit", "Iterate one orbit");
  add_function(orbit);
  orbit->add_option("--z0", z0_text, "Starting point re,im")->required();
  orbit->add_flag("--trace", keep_trace, "Write the orbit trace CSV");
  add_policy(orbit);

  std::string region_text;
  FixedPointOptions fp_opts;
  auto* fixed_points = app.add_subcommand("fixed-points", "Locate and classify fixed points in a region");
  add_function(fixed_points);
  fixed_points->add_option("--region", region_text, "Region (disc:... | rect:... | union:...)")->required();
  fixed_points->add_option("--seeds", fp_opts.seeds_per_axis, "Newton seeds per axis")->capture_default_str();
  fixed_points->add_option("--newton-tol", fp_opts.newton_tol, "Residual tolerance")->capture_default_str();
  fixed_points->add_option("--max-newton", fp_opts.max_newton, "Newton iterations per seed")->capture_default_str();

  std::string window_text = "-2,2,-2,2", name = "render";
  int nx = 256, ny = 256;
  unsigned threads = 0;
  bool overlay = false;
  auto* render = app.add_subcommand("render", "Classify a pixel grid and write PPM + classification raster");
  add_function(render);
  render->add_option("--window", window_text, "x_min,x_max,y_min,y_max")->capture_default_str();
  render->add_option("--nx", nx, "Columns")->capture_default_str();
  render->add_option("--ny", ny, "Rows")->capture_default_str();
  render->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  render->add_option("--name", name, "Base name of the emitted files")->capture_default_str();
  render->add_flag("--overlay", overlay, "Paint boundary pixels of the unbounded class red");
  add_policy(render);

  std::string input = "render_classification.pgm", target_text = "unbounded";
  int connectivity = 4;
  std::size_t min_edge = 0;
  auto* components = app.add_subcommand("components", "Connected-component census of a classification raster");
  components->add_option("--input", input, "Classification raster written by render")->capture_default_str();
  components->add_option("--target", target_text, "unbounded | bounded | undecided")->capture_default_str();
  components->add_option("--connectivity", connectivity, "4 or 8")->capture_default_str();
  components->add_option("--min-edge-components", min_edge, "Fail unless this many components touch the window edge")
      ->capture_default_str();

  std::string center_text = "0,0", radii_text;
  auto* sw_probe = app.add_subcommand("sw-probe", "Spider's-web evidence on the largest component");
  sw_probe->add_option("--input", input, "Classification raster written by render")->capture_default_str();
  sw_probe->add_option("--target", target_text, "unbounded | bounded | undecided")->capture_default_str();
  sw_probe->add_option("--connectivity", connectivity, "4 or 8")->capture_default_str();
  sw_probe->add_option("--center", center_text, "Centre re,im")->capture_default_str();
  sw_probe->add_option("--radii", radii_text, "Increasing radii r1,r2,...")->required();
  sw_probe->add_option("--expect", expect_bool, "Expected verdict (true/false)");

  std::string scenario_name;
  auto* scenario = app.add_subcommand("scenario", "Run a built-in suite: ex51, ex52, sinz");
  scenario->add_option("name", scenario_name, "Scenario name")->required();
  add_sequence(scenario);

  try {
    args = merge_config(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return 2;
  }

  std::filesystem::path out_dir = ".";
  if (!out_dir_flag.empty()) {
    out_dir = out_dir_flag;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    out_dir = env;
  }
  Context ctx{out_dir, out, err};

  auto expected_bool = [&]() {
    if (expect_bool == "true") return true;
    if (expect_bool == "false") return false;
    throw UsageError("--expect takes true or false");
  };

  try {
    if (parse_check->parsed()) {
      const FunctionExpression f = parse(fsrc);
      io::json j = {{"source", fsrc},
                    {"valid", true},
                    {"canonical", f.print()},
                    {"derivative", f.derivative().print()},
                    {"value_at_0", io::to_json(f(0.0))}};
      out << io::dump(j);
      return 0;
    }
    if (minmod->parsed()) {
      const FunctionExpression f = parse(fsrc);
      io::json j = {{"function", fsrc},
                    {"min", io::to_json(min_modulus(f, radius, mod_opts))},
                    {"max", io::to_json(max_modulus(f, radius, mod_opts))}};
      ctx.emit("minmod.json", io::dump(j));
      out << io::dump(j);
      return 0;
    }
    if (minmod_iterate->parsed()) {
      const FunctionExpression f = parse(fsrc);
      iter_opts.modulus = mod_opts;
      const auto rep = iterate_min_modulus(f, radius, iter_opts);
      io::json j = io::to_json(rep);
      j["function"] = fsrc;
      ctx.emit("minmod_sequence.csv", io::sequence_csv(rep.sequence));
      ctx.emit("minmod_report.json", io::dump(j));
      out << io::sequence_csv(rep.sequence);
      if (!expect_verdict.empty() && expect_verdict != to_string(rep.verdict))
        return fail_report(ctx, "minmod-iterate", {{"expected", expect_verdict}, {"verdict", to_string(rep.verdict)}});
      return 0;
    }
    if (disc_seq->parsed()) {
      const FunctionExpression f = parse(fsrc);
      const DiscSequence seq = derive_disc_sequence(f, radius, count, mod_opts);
      io::json discs = io::json::array();
      for (const auto& d : seq.discs) discs.push_back(io::to_json(d));
      io::json j = {{"function", fsrc}, {"discs", discs}, {"iteration", io::to_json(seq.report)}};
      std::vector<double> radii;
      for (const auto& d : seq.discs) radii.push_back(std::get<Disc>(d.shape()).radius);
      bool ok = true;
      if (check_discs) {
        if (seq.discs.size() < 2) throw UsageError("surround check needs at least two discs");
        const Theorem31Report t = check_theorem31(f, seq.discs, seq_opts);
        j["surround"] = io::to_json(t);
        ok = t.condition_a;
      }
      ctx.emit("disc_sequence.csv", io::sequence_csv(radii, "radius"));
      ctx.emit("disc_sequence.json", io::dump(j));
      out << io::dump(j);
      if (!ok) return fail_report(ctx, "disc-seq", {{"surround", false}});
      return 0;
    }
    if (surround_check->parsed() || spl_check->parsed()) {
      const bool spl = spl_check->parsed();
      const FunctionExpression f = parse(fsrc);
      std::vector<DomainSpec> domains;
      for (const auto& t : domain_texts) domains.push_back(parse_domain(t));
      if (domains.size() < 2) throw UsageError("give at least two --domain values");
      const bool want = expected_bool();
      io::json j;
      bool verdict = false;
      std::vector<const SampledCurve*> bs, ims;
      Theorem31Report t;
      SplReport s;
      if (spl) {
        s = check_spl(f, domains, seq_opts);
        verdict = s.condition_i && s.condition_iii;
        j = io::to_json(s);
        for (const auto& c : s.checks) {
          bs.push_back(&c.own.curves.boundary);
          ims.push_back(&c.own.curves.image);
        }
      } else {
        t = check_theorem31(f, domains, seq_opts);
        verdict = t.verdict();
        j = io::to_json(t);
        for (const auto& p : t.pairs) {
          bs.push_back(&p.curves.boundary);
          ims.push_back(&p.curves.image);
        }
      }
      j["function"] = fsrc;
      const std::string stem = spl ? "spl" : "surround";
      ctx.emit(stem + "_boundaries.csv", io::curves_csv(bs));
      ctx.emit(stem + "_images.csv", io::curves_csv(ims));
      ctx.emit(stem + "_report.json", io::dump(j));
      if (verdict != want)
        return fail_report(ctx, spl ? "spl-check" : "surround-check", {{"expected", want}, {"verdict", verdict}});
      out << io::dump(j);
      return 0;
    }
    if (orbit->parsed()) {
      const FunctionExpression f = parse(fsrc);
      const cplx z0 = parse_complex(z0_text);
      const OrbitVerdict v = iterate_orbit(f, z0, policy, keep_trace);
      io::json j = io::to_json(v, policy);
      j["function"] = fsrc;
      j["z0"] = io::to_json(z0);
      if (keep_trace) ctx.emit("orbit_trace.csv", io::trace_csv(v.trace));
      ctx.emit("orbit.json", io::dump(j));
      out << io::dump(j);
      return 0;
    }
    if (fixed_points->parsed()) {
      const FunctionExpression f = parse(fsrc);
      const DomainSpec region = parse_domain(region_text);
      const auto fps = find_fixed_points(f, region, fp_opts);
      io::json j = {{"function", fsrc}, {"region", io::to_json(region)}, {"fixed_points", io::to_json(fps)}};
      ctx.emit("fixed_points.json", io::dump(j));
      out << io::dump(j);
      return 0;
    }
    if (render->parsed()) {
      const FunctionExpression f = parse(fsrc);
      GridSpec g{parse_rect(window_text), nx, ny};
      g.validate();
      const PixelClassification pc = classify_grid(f, g, policy, threads);
      const PixelMask mask = boundary_pixels(pc, PointClass::UnboundedSuspect);
      std::size_t counts[3] = {0, 0, 0};
      for (PointClass c : pc.classes) ++counts[static_cast<int>(c)];
      io::json j = {{"function", fsrc},
                    {"grid", io::to_json(g)},
                    {"policy", io::to_json(policy)},
                    {"counts",
                     {{"UNBOUNDED_SUSPECT", counts[0]}, {"BOUNDED_SUSPECT", counts[1]}, {"UNDECIDED", counts[2]}}},
                    {"boundary_pixels", mask.count()},
                    {"files", {name + ".ppm", name + "_classification.pgm"}}};
      ctx.emit(name + ".ppm", render_ppm(pc, overlay ? &mask : nullptr));
      ctx.emit(name + "_classification.pgm", io::write_classification(pc));
      ctx.emit(name + ".json", io::dump(j));
      out << io::dump(j);
      return 0;
    }
    if (components->parsed() || sw_probe->parsed()) {
      std::filesystem::path in_path = input;
      if (in_path.is_relative() && !std::filesystem::exists(in_path)) in_path = out_dir / input;
      const PixelClassification pc = io::read_classification(io::read_file(in_path));
      const ComponentLabeling lab = label_components(pc, parse_class(target_text), connectivity);
      if (components->parsed()) {
        io::json j = io::to_json(lab);
        ctx.emit("census.json", io::dump(j));
        out << io::dump(j);
        if (j["edge_touching_components"].get<std::size_t>() < min_edge)
          return fail_report(ctx, "components", {{"min_edge_components", min_edge},
                                                 {"edge_touching_components", j["edge_touching_components"]}});
        return 0;
      }
      const SpidersWebReport rep = spiders_web_probe(lab, parse_complex(center_text), parse_reals(radii_text));
      io::json j = io::to_json(rep);
      ctx.emit("sw_probe.json", io::dump(j));
      out << io::dump(j);
      if (!expect_bool.empty() && sw_probe->count("--expect") > 0 && rep.verdict != expected_bool())
        return fail_report(ctx, "sw-probe", {{"expected", expected_bool()}, {"verdict", rep.verdict}});
      return 0;
    }
    if (scenario->parsed()) {
      const Scenario* sc = find_scenario(scenario_name);
      if (!sc) throw UsageError("unknown scenario '" + scenario_name + "' (ex51, ex52, sinz)");
      ScenarioOptions so;
      so.sequence = seq_opts;
      const ScenarioResult res = run_scenario(*sc, so);
      for (const auto& [file, bytes] : res.files) ctx.emit(file, bytes);
      if (!res.passed()) {
        io::json failed = io::json::array();
        for (const auto& c : res.checks)
          if (!c.passed) failed.push_back(c.name);
        return fail_report(ctx, "scenario " + scenario_name, {{"failed_checks", failed}});
      }
      io::json summary = {{"scenario", res.name}, {"passed", true}, {"checks", io::json::array()}};
      for (const auto& c : res.checks) summary["checks"].push_back({{"name", c.name}, {"passed", c.passed}});
      out << io::dump(summary);
      return 0;
    }
  } catch (const SyntaxError& e) {
    err << io::dump({{"error", "syntax"}, {"message", e.what()}, {"position", e.position()}, {"expected", e.expected()}});
    return 2;
  } catch (const NonEntireError& e) {
    err << io::dump({{"error", "non_entire"}, {"message", e.what()}, {"position", e.position()}});
    return 2;
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const InvalidRadius& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const RadiusOutsideWindow& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const DegenerateDomain& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace entire::cli
