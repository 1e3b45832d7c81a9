#pragma once

// Built-in scenarios: the exponential example whose minimum modulus does not
// diverge but whose boundary images nest (ex51), the strongly
// polynomial-like cos z + z (ex52), and the sin z disconnection (sinz).

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "entire/curve.hpp"
#include "entire/domain.hpp"
#include "entire/funcspec.hpp"
#include "entire/io.hpp"
#include "entire/modulus.hpp"
#include "entire/orbits.hpp"
#include "entire/raster.hpp"
#include "entire/surround.hpp"

namespace entire {

struct Scenario {
  std::string name;
  std::string title;
  std::string function_source;
  std::function<std::vector<DomainSpec>(int first, int last)> domains;
  int n_first = 0, n_last = 0;
  OrbitPolicy policy;
  GridSpec grid;
  std::vector<std::string> expected_checks;
};

struct ScenarioCheck {
  std::string name;
  bool passed = false;
  io::json detail;
};

struct ScenarioResult {
  std::string name;
  std::vector<ScenarioCheck> checks;
  io::json records = io::json::object();  // values reported but not asserted
  std::map<std::string, std::string> files;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ScenarioCheck& c) { return c.passed; });
  }

  io::json report() const {
    io::json checks_json = io::json::array();
    for (const auto& c : checks) checks_json.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    io::json file_list = io::json::array();
    for (const auto& [k, v] : files) file_list.push_back(k);
    return {{"scenario", name}, {"passed", passed()}, {"checks", checks_json}, {"records", records}, {"files", file_list}};
  }
};

// D_n = (0, 4n pi) x (-4n pi, 4n pi) joined with (-n pi, 0] x (-n pi, n pi).
inline DomainSpec ex51_domain(int n) {
  const double pi = std::numbers::pi;
  return DomainSpec::rect_union({{0.0, 4 * n * pi, -4 * n * pi, 4 * n * pi}, {-n * pi, 0.0, -n * pi, n * pi}},
                                "D_" + std::to_string(n));
}

// D_n = (-(2n + 11/4) pi, (2n + 9/4) pi) x (-2(n+1) pi, 2(n+1) pi).
inline DomainSpec ex52_domain(int n) {
  const double pi = std::numbers::pi;
  return DomainSpec::rect(-(2 * n + 2.75) * pi, (2 * n + 2.25) * pi, -2 * (n + 1) * pi, 2 * (n + 1) * pi,
                          "D_" + std::to_string(n));
}

inline std::vector<DomainSpec> domain_range(const std::function<DomainSpec(int)>& make, int first, int last) {
  std::vector<DomainSpec> out;
  for (int n = first; n <= last; ++n) out.push_back(make(n));
  return out;
}

inline const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> registry = [] {
    const double pi = std::numbers::pi;
    std::vector<Scenario> s;
    s.push_back({"ex51",
                 "-10 z exp(-z) - z/2: minimum modulus does not diverge, yet boundary images of D_n surround D_{n+1}",
                 "-10*z*exp(-z)-0.5*z",
                 [](int a, int b) { return domain_range(ex51_domain, a, b); },
                 2,
                 6,
                 OrbitPolicy{},
                 GridSpec{{-10.0, 30.0, -20.0, 20.0}, 200, 200},
                 {"section_a_bound", "section_b_image", "endpoint_values", "nested_surround", "minmod_not_diverging"}});
    s.push_back({"ex52",
                 "cos z + z: strongly polynomial-like with fixed points (k + 1/2) pi",
                 "cos(z)+z",
                 [](int a, int b) { return domain_range(ex52_domain, a, b); },
                 0,
                 3,
                 OrbitPolicy{},
                 GridSpec{{0.0, 4 * pi, -1.0, 1.0}, 128, 64},
                 {"annulus_bound", "spl", "fixed_points", "real_axis_convergence"}});
    s.push_back({"sinz",
                 "sin z: the real line lies in K(f) and separates the unbounded-orbit set",
                 "sin(z)",
                 [](int a, int b) {
                   std::vector<DomainSpec> d;
                   for (int n = a; n <= b; ++n) d.push_back(DomainSpec::disc(0.0, n, "disc_" + std::to_string(n)));
                   return d;
                 },
                 1,
                 3,
                 OrbitPolicy{200, 1e6, 1e-9, 32},
                 GridSpec{{-10.0, 10.0, -5.0, 5.0}, 400, 200},
                 {"real_axis_bounded", "disconnection_census", "no_spiders_web", "minmod_not_diverging",
                  "disc_surround_fails"}});
    return s;
  }();
  return registry;
}

inline const Scenario* find_scenario(const std::string& name) {
  for (const auto& s : scenarios())
    if (s.name == name) return &s;
  return nullptr;
}

struct ScenarioOptions {
  SequenceCheckOptions sequence;
  unsigned threads = 0;
};

namespace detail {

inline std::string curves_from(const std::vector<PairCheck>& pairs, bool images) {
  std::vector<const SampledCurve*> cs;
  for (const auto& p : pairs) cs.push_back(images ? &p.curves.image : &p.curves.boundary);
  return io::curves_csv(cs);
}

inline ScenarioResult run_ex51(const Scenario& sc, const ScenarioOptions& opts) {
  const double pi = std::numbers::pi;
  const FunctionExpression f = parse(sc.function_source);
  ScenarioResult res;
  res.name = sc.name;

  {  // right side of D_2: |f(z) + z/2| stays below 1e-3
    const int n = 2, samples = 2001;
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
      const cplx z(4 * n * pi, -4 * n * pi + 8.0 * n * pi * k / (samples - 1));
      worst = std::max(worst, std::abs(f(z) + 0.5 * z));
    }
    res.checks.push_back({"section_a_bound", worst < 1e-3, {{"n", n}, {"samples", samples}, {"max_deviation", worst}}});
  }
  {  // top side of D_2 maps into Re w <= 0, Im w < -2n pi
    const int n = 2, samples = 2001;
    double max_re = -1e300, max_im = -1e300;
    for (int k = 0; k < samples; ++k) {
      const cplx w = f(cplx(4.0 * n * pi * k / (samples - 1), 4 * n * pi));
      max_re = std::max(max_re, w.real());
      max_im = std::max(max_im, w.imag());
    }
    const bool ok = max_re <= 1e-9 * 4 * n * pi && max_im < -2 * n * pi;
    res.checks.push_back({"section_b_image", ok, {{"n", n}, {"max_re", max_re}, {"max_im", max_im}}});
  }
  {
    io::json rows = io::json::array();
    bool ok = true;
    for (int n = 1; n <= 5; ++n) {
      const cplx w = f(cplx(0.0, 4 * n * pi));
      const cplx expect(0.0, -42.0 * n * pi);
      const double rel = std::abs(w - expect) / std::abs(expect);
      ok = ok && rel <= 1e-9;
      rows.push_back({{"n", n}, {"value", io::to_json(w)}, {"relative_error", rel}});
    }
    res.checks.push_back({"endpoint_values", ok, rows});
  }
  {  // f(n pi i): +(19/2) n pi i for odd n, -(21/2) n pi i for even n
    io::json rows = io::json::array();
    for (int n = 1; n <= 5; ++n) {
      const cplx w = f(cplx(0.0, n * pi));
      rows.push_back({{"n", n}, {"value", io::to_json(w)}, {"imag_over_n_pi", w.imag() / (n * pi)}});
    }
    res.records["section_c_lower_endpoint"] = rows;
  }
  const auto domains = sc.domains(sc.n_first, sc.n_last);
  const Theorem31Report t = check_theorem31(f, domains, opts.sequence);
  res.checks.push_back({"nested_surround", t.verdict(), io::to_json(t)});
  {
    io::json rows = io::json::array();
    bool ok = true;
    for (int r0 = 1; r0 <= 50; ++r0) {
      MinModIterationOptions mo;
      mo.n_max = 50;
      mo.blow_up = 1e50;
      const auto rep = iterate_min_modulus(f, r0, mo);
      ok = ok && rep.verdict != MinModVerdict::Diverges;
      rows.push_back({{"r0", r0}, {"verdict", to_string(rep.verdict)}, {"steps", rep.sequence.size() - 1},
                      {"last", rep.sequence.back()}});
    }
    res.checks.push_back({"minmod_not_diverging", ok, rows});
  }
  res.files["ex51_boundaries.csv"] = curves_from(t.pairs, false);
  res.files["ex51_images.csv"] = curves_from(t.pairs, true);
  return res;
}

inline ScenarioResult run_ex52(const Scenario& sc, const ScenarioOptions& opts) {
  const double pi = std::numbers::pi;
  const FunctionExpression f = parse(sc.function_source);
  ScenarioResult res;
  res.name = sc.name;
  {  // horizontal sides map into the annulus around radius e^{2(n+1)pi}/2
    io::json rows = io::json::array();
    bool ok = true;
    for (int n = 0; n <= 3; ++n) {
      const double x0 = -(2 * n + 2.75) * pi, x1 = (2 * n + 2.25) * pi, y = 2 * (n + 1) * pi;
      const double centre = 0.5 * std::exp(y), half = 4 * (n + 1) * pi;
      double lo = 1e300, hi = 0.0;
      const int samples = 4001;
      for (int k = 0; k < samples; ++k) {
        const double x = x0 + (x1 - x0) * k / (samples - 1);
        for (double s : {1.0, -1.0}) {
          const double m = std::abs(f(cplx(x, s * y)));
          lo = std::min(lo, m);
          hi = std::max(hi, m);
        }
      }
      const bool in = lo >= (centre - half) * (1 - 1e-6) && hi <= (centre + half) * (1 + 1e-6);
      ok = ok && in;
      rows.push_back({{"n", n}, {"min_modulus", lo}, {"max_modulus", hi}, {"inner", centre - half},
                      {"outer", centre + half}, {"inside", in}});
    }
    res.checks.push_back({"annulus_bound", ok, rows});
  }
  const auto domains = sc.domains(sc.n_first, sc.n_last);
  const SplReport spl = check_spl(f, domains, opts.sequence);
  res.checks.push_back({"spl", spl.condition_i && spl.condition_iii, io::to_json(spl)});
  {
    const auto fps = find_fixed_points(f, DomainSpec::rect(0.0, 4 * pi, -1.0, 1.0));
    bool ok = fps.size() == 4;
    for (std::size_t k = 0; ok && k < 4; ++k) {
      const double want = (k + 0.5) * pi;
      const bool even = k % 2 == 0;
      ok = std::abs(fps[k].location - want) <= 1e-8 && std::abs(fps[k].multiplier - (even ? 0.0 : 2.0)) <= 1e-8 &&
           fps[k].kind == (even ? FixedPointClass::Superattracting : FixedPointClass::Repelling);
    }
    res.checks.push_back({"fixed_points", ok, io::to_json(fps)});
  }
  {  // real seeds converge to the nearest superattracting fixed point (k even)
    OrbitPolicy p{500, 1e6, 1e-12, 32};
    int good = 0, total = 0;
    for (int k = 1; k <= 100; ++k) {
      const double x = 2 * pi * k / 101.0;
      if (std::abs(x - pi / 2) < 1e-6 || std::abs(x - 1.5 * pi) < 1e-6) continue;
      ++total;
      const double nearest = 2 * pi * std::round((x - pi / 2) / (2 * pi)) + pi / 2;
      const OrbitVerdict v = iterate_orbit(f, x, p, true);
      if (std::abs(v.trace.back() - nearest) <= 1e-6) ++good;
    }
    res.checks.push_back({"real_axis_convergence", good == total, {{"seeds", total}, {"converged", good}}});
  }
  {
    std::vector<const SampledCurve*> b, im;
    for (const auto& c : spl.checks) {
      b.push_back(&c.own.curves.boundary);
      im.push_back(&c.own.curves.image);
    }
    res.files["ex52_boundaries.csv"] = io::curves_csv(b);
    res.files["ex52_images.csv"] = io::curves_csv(im);
  }
  return res;
}

inline ScenarioResult run_sinz(const Scenario& sc, const ScenarioOptions& opts) {
  const FunctionExpression f = parse(sc.function_source);
  ScenarioResult res;
  res.name = sc.name;
  const GridSpec& g = sc.grid;
  const PixelClassification pc = classify_grid(f, g, sc.policy, opts.threads);
  {
    std::size_t rows = 0, bad = 0;
    for (int j = 0; j < g.ny; ++j) {
      if (std::abs(g.center(0, j).imag()) > 0.5 * g.dy() * (1 + 1e-9)) continue;
      ++rows;
      for (int i = 0; i < g.nx; ++i) bad += pc.at(i, j) != PointClass::BoundedSuspect;
    }
    res.checks.push_back({"real_axis_bounded", rows > 0 && bad == 0, {{"rows_checked", rows}, {"violations", bad}}});
  }
  const ComponentLabeling lab = label_components(pc, PointClass::UnboundedSuspect, 4);
  std::size_t edge = 0;
  for (const auto& c : lab.census) edge += c.touches_window_edge ? 1 : 0;
  res.checks.push_back({"disconnection_census", lab.census.size() >= 2 && edge >= 2,
                        {{"components", lab.census.size()}, {"edge_touching_components", edge}}});
  const SpidersWebReport sw = spiders_web_probe(lab, 0.0, {1.0, 2.0, 4.0});
  res.checks.push_back({"no_spiders_web", !sw.verdict, io::to_json(sw)});
  {
    const auto rep = iterate_min_modulus(f, 1.0);
    res.checks.push_back({"minmod_not_diverging", rep.verdict == MinModVerdict::NotDiverging, io::to_json(rep)});
  }
  const Theorem31Report t = check_theorem31(f, sc.domains(sc.n_first, sc.n_last), opts.sequence);
  res.checks.push_back({"disc_surround_fails", !t.condition_a, io::to_json(t)});
  const PixelMask overlay = boundary_pixels(pc, PointClass::UnboundedSuspect);
  res.files["sinz_render.ppm"] = render_ppm(pc, &overlay);
  res.files["sinz_classification.pgm"] = io::write_classification(pc);
  res.files["sinz_census.json"] = io::dump(io::to_json(lab));
  return res;
}

}  // namespace detail

inline ScenarioResult run_scenario(const Scenario& sc, const ScenarioOptions& opts = {}) {
  ScenarioResult r;
  if (sc.name == "ex51") r = detail::run_ex51(sc, opts);
  else if (sc.name == "ex52") r = detail::run_ex52(sc, opts);
  else if (sc.name == "sinz") r = detail::run_sinz(sc, opts);
  else throw InvalidArgument("no runner for scenario " + sc.name);
  r.files[sc.name + "_report.json"] = io::dump(r.report());
  return r;
}

}  // namespace entire
