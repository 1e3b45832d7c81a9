#pragma once

// File emission: atomic writes, CSV with round-trip number formatting, JSON
// views of the reports, and the classification raster file.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entire/curve.hpp"
#include "entire/domain.hpp"
#include "entire/errors.hpp"
#include "entire/modulus.hpp"
#include "entire/orbits.hpp"
#include "entire/raster.hpp"
#include "entire/surround.hpp"

namespace entire::io {

using json = nlohmann::ordered_json;

// 17 significant digits, '.' decimal separator, independent of locale.
inline std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

inline constexpr const char* kEol = "\r\n";

// Write to a temporary sibling and rename over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// `n,m_n` rows.
inline std::string sequence_csv(const std::vector<double>& seq, const char* value_name = "m_n") {
  std::string s = std::string("n,") + value_name + kEol;
  for (std::size_t k = 0; k < seq.size(); ++k) s += std::to_string(k) + "," + fmt(seq[k]) + kEol;
  return s;
}

// `re,im` rows; one blank line between curves. Closed curves repeat their
// first point at the end.
inline std::string curves_csv(const std::vector<const SampledCurve*>& curves) {
  std::string s = std::string("re,im") + kEol;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (c > 0) s += kEol;
    const auto& pts = curves[c]->points;
    for (cplx p : pts) s += fmt(p.real()) + "," + fmt(p.imag()) + kEol;
    if (curves[c]->closed && !pts.empty()) s += fmt(pts.front().real()) + "," + fmt(pts.front().imag()) + kEol;
  }
  return s;
}

// `n,re,im` rows.
inline std::string trace_csv(const std::vector<cplx>& trace) {
  std::string s = std::string("n,re,im") + kEol;
  for (std::size_t k = 0; k < trace.size(); ++k)
    s += std::to_string(k) + "," + fmt(trace[k].real()) + "," + fmt(trace[k].imag()) + kEol;
  return s;
}

inline double finite(double v) {
  if (std::isnan(v)) return 0.0;
  if (std::isinf(v)) return v > 0 ? std::numeric_limits<double>::max() : -std::numeric_limits<double>::max();
  return v;
}

inline json to_json(cplx z) { return {{"re", finite(z.real())}, {"im", finite(z.imag())}}; }

inline json to_json(const Rect& r) {
  return {{"x_min", r.x_min}, {"x_max", r.x_max}, {"y_min", r.y_min}, {"y_max", r.y_max}};
}

inline json to_json(const DomainSpec& d) {
  json j;
  j["label"] = d.label();
  if (const auto* disc = std::get_if<Disc>(&d.shape())) {
    j["shape"] = "disc";
    j["center"] = to_json(disc->center);
    j["radius"] = disc->radius;
  } else if (const auto* r = std::get_if<Rect>(&d.shape())) {
    j["shape"] = "rect";
    j["rect"] = to_json(*r);
  } else {
    j["shape"] = "rect_union";
    json rs = json::array();
    for (const auto& r : std::get<RectUnion>(d.shape()).rects) rs.push_back(to_json(r));
    j["rects"] = rs;
  }
  return j;
}

inline json to_json(const RadialExtremum& e) {
  return {{"radius", e.radius},
          {"value", finite(e.value)},
          {"arg", e.arg_extremum},
          {"samples_used", e.samples_used},
          {"refined", e.refined}};
}

inline json to_json(const MinModIterationReport& r) {
  json seq = json::array();
  for (double v : r.sequence) seq.push_back(finite(v));
  json w = {{"index", r.witness.index}, {"reason", r.witness.reason}};
  w["earlier_index"] = r.witness.earlier_index ? json(*r.witness.earlier_index) : json(nullptr);
  return {{"r0", r.r0}, {"sequence", seq}, {"verdict", to_string(r.verdict)}, {"witness", w}, {"note", r.note}};
}

inline json to_json(const SurroundReport& r) {
  json probes = json::array();
  for (const auto& pw : r.winding_values) {
    json p = {{"probe", to_json(pw.probe)}};
    p["winding"] = pw.winding ? json(*pw.winding) : json(nullptr);
    if (!pw.error.empty()) p["error"] = pw.error;
    probes.push_back(p);
  }
  return {{"verdict", r.verdict},      {"min_distance", finite(r.min_distance)},
          {"inflate", r.inflate},      {"probes_tested", r.probes_tested},
          {"winding_values", probes},  {"reason", r.reason}};
}

inline json to_json(const PairCheck& p) {
  return {{"index", p.index},
          {"from", p.from_label},
          {"to", p.to_label},
          {"boundary_points", p.curves.boundary.size()},
          {"image_points", p.image_points},
          {"budget_hit", p.budget_hit},
          {"error", p.error},
          {"surround", to_json(p.report)}};
}

inline json to_json(const Theorem31Report& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) pairs.push_back(to_json(p));
  return {{"kind", "nested_surround"},
          {"verdict", r.verdict()},
          {"condition_a", r.condition_a},
          {"condition_b_proxy", r.condition_b_proxy},
          {"inradii", r.inradii},
          {"pairs", pairs},
          {"horizon_note", r.horizon_note}};
}

inline json to_json(const SplReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j = {{"index", c.index}, {"label", c.label}, {"own_closure", to_json(c.own)}};
    j["closure_nested_in_next"] = c.closure_nested ? json(*c.closure_nested) : json(nullptr);
    checks.push_back(j);
  }
  return {{"kind", "strongly_polynomial_like"},
          {"verdict", r.verdict()},
          {"condition_i", r.condition_i},
          {"condition_ii_proxy", r.condition_ii_proxy},
          {"condition_iii", r.condition_iii},
          {"inradii", r.inradii},
          {"checks", checks},
          {"horizon_note", r.horizon_note}};
}

inline json to_json(const OrbitPolicy& p) {
  return {{"budget", p.budget}, {"escape_radius", p.escape_radius}, {"cycle_tol", p.cycle_tol},
          {"cycle_window", p.cycle_window}};
}

inline json to_json(const OrbitVerdict& v, const OrbitPolicy& policy) {
  json j = {{"kind", to_string(v.kind)}, {"class", to_string(classify_verdict(v, policy))}, {"step", v.step}};
  switch (v.kind) {
    case OrbitOutcome::Escaped: j["modulus"] = finite(v.modulus); break;
    case OrbitOutcome::CycleLocked:
      j["period"] = v.period;
      j["representative"] = to_json(v.representative);
      break;
    case OrbitOutcome::BudgetExhausted: j["max_modulus"] = finite(v.modulus); break;
  }
  j["policy"] = to_json(policy);
  return j;
}

inline json to_json(const std::vector<FixedPointRecord>& fps) {
  json arr = json::array();
  for (const auto& r : fps)
    arr.push_back({{"location", to_json(r.location)},
                   {"multiplier", to_json(r.multiplier)},
                   {"class", to_string(r.kind)},
                   {"residual", r.residual}});
  return arr;
}

inline json to_json(const GridSpec& g) {
  return {{"window", to_json(g.window)}, {"nx", g.nx}, {"ny", g.ny}, {"aspect_distortion", g.aspect_distortion()}};
}

inline json to_json(const ComponentLabeling& l) {
  json census = json::array();
  for (const auto& c : l.census) {
    const cplx lo = l.grid.center(c.i_min, c.j_max), hi = l.grid.center(c.i_max, c.j_min);
    census.push_back({{"id", c.id},
                      {"pixels", c.pixels},
                      {"bbox_pixels", {{"i_min", c.i_min}, {"i_max", c.i_max}, {"j_min", c.j_min}, {"j_max", c.j_max}}},
                      {"bbox", {{"x_min", lo.real()}, {"x_max", hi.real()}, {"y_min", lo.imag()}, {"y_max", hi.imag()}}},
                      {"touches_window_edge", c.touches_window_edge}});
  }
  std::size_t edge = 0;
  for (const auto& c : l.census) edge += c.touches_window_edge ? 1 : 0;
  return {{"grid", to_json(l.grid)},
          {"target", to_string(l.target)},
          {"connectivity", l.connectivity},
          {"components", l.census.size()},
          {"edge_touching_components", edge},
          {"census", census}};
}

inline json to_json(const SpidersWebReport& r) {
  json radii = json::array();
  for (const auto& e : r.radii)
    radii.push_back({{"radius", e.radius},
                     {"surrounded", e.surrounded},
                     {"enclosed_pixels", e.enclosed_pixels},
                     {"ring_pixels", e.ring_pixels}});
  return {{"component_id", r.component_id},
          {"component_pixels", r.component_pixels},
          {"verdict", r.verdict},
          {"radii", radii},
          {"note", r.note}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Classification raster: binary PGM (P5, maxval 2) with the window and the
// orbit policy in header comments. Byte values: 0 unbounded-suspect,
// 1 bounded-suspect, 2 undecided.
inline std::string write_classification(const PixelClassification& c) {
  const GridSpec& g = c.grid;
  std::string s = "P5\n# entire-classification\n# window " + fmt(g.window.x_min) + " " + fmt(g.window.x_max) + " " +
                  fmt(g.window.y_min) + " " + fmt(g.window.y_max) + "\n# policy " + std::to_string(c.policy.budget) +
                  " " + fmt(c.policy.escape_radius) + " " + fmt(c.policy.cycle_tol) + " " +
                  std::to_string(c.policy.cycle_window) + "\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) +
                  "\n2\n";
  for (PointClass p : c.classes) s.push_back(static_cast<char>(p));
  return s;
}

inline PixelClassification read_classification(const std::string& bytes) {
  std::size_t pos = 0;
  auto line = [&] {
    const std::size_t e = bytes.find('\n', pos);
    if (e == std::string::npos) throw Error("truncated classification header");
    std::string l = bytes.substr(pos, e - pos);
    pos = e + 1;
    return l;
  };
  if (line() != "P5") throw Error("classification file must be a P5 PGM");
  if (line() != "# entire-classification") throw Error("not a classification raster");
  PixelClassification c;
  {
    std::istringstream ss(line());
    std::string hash, key;
    ss >> hash >> key >> c.grid.window.x_min >> c.grid.window.x_max >> c.grid.window.y_min >> c.grid.window.y_max;
    if (!ss || key != "window") throw Error("classification header lacks the window");
  }
  {
    std::istringstream ss(line());
    std::string hash, key;
    ss >> hash >> key >> c.policy.budget >> c.policy.escape_radius >> c.policy.cycle_tol >> c.policy.cycle_window;
    if (!ss || key != "policy") throw Error("classification header lacks the policy");
  }
  {
    std::istringstream ss(line());
    ss >> c.grid.nx >> c.grid.ny;
    if (!ss) throw Error("classification header lacks dimensions");
  }
  if (line() != "2") throw Error("classification maxval must be 2");
  c.grid.validate();
  if (bytes.size() - pos != c.grid.size()) throw Error("classification payload size mismatch");
  c.classes.resize(c.grid.size());
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    const auto b = static_cast<unsigned char>(bytes[pos + k]);
    if (b > 2) throw Error("classification byte out of range");
    c.classes[k] = static_cast<PointClass>(b);
  }
  return c;
}

}  // namespace entire::io
