#pragma once

// "Surrounds" tests for image curves and the two domain-sequence criteria:
// boundary images surrounding the next domain (nested exhaustion criterion)
// and boundary images surrounding their own closure (strongly
// polynomial-like criterion).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "entire/curve.hpp"
#include "entire/domain.hpp"
#include "entire/funcspec.hpp"

namespace entire {

inline constexpr const char* kFiniteHorizonNote =
    "conditions quantified over all n are checked only on the supplied finite family of domains";

struct ProbeWinding {
  cplx probe;
  std::optional<int> winding;  // empty when the winding number could not be computed
  std::string error;
};

struct SurroundReport {
  bool verdict = false;
  // Signed clearance of the curve from the domain: positive distance when
  // disjoint from the closure, minus the penetration depth otherwise.
  double min_distance = 0.0;
  double inflate = 0.0;  // verdict needs min_distance > inflate
  std::vector<ProbeWinding> winding_values;
  std::size_t probes_tested = 0;
  std::string reason;
};

struct SurroundOptions {
  // Positive: the curve must stay this far from the closure. Negative: the
  // curve may touch the (open) domain to within |inflate|.
  double inflate = 0.0;
  int max_contact_depth = 24;
};

// Lattice of cell centres over the bounding box, clipped to the open domain;
// falls back to one interior point.
inline std::vector<cplx> probe_lattice(const DomainSpec& domain, int probe_grid) {
  std::vector<cplx> probes;
  const Rect box = domain.bounding_box();
  for (int j = 0; j < probe_grid; ++j)
    for (int i = 0; i < probe_grid; ++i) {
      const cplx p(box.x_min + (i + 0.5) * box.width() / probe_grid, box.y_min + (j + 0.5) * box.height() / probe_grid);
      if (domain.contains(p)) probes.push_back(p);
    }
  if (probes.empty()) probes.push_back(domain.interior_point());
  return probes;
}

namespace detail {

inline double refined_clearance(const SampledCurve& curve, const DomainSpec& domain, double ta, double tb, cplx a,
                                cplx b, double inflate, int depth) {
  const double c = domain.segment_clearance(a, b);
  if (c > inflate || depth <= 0 || !curve.generator) return c;
  // A sample of the true curve already violates: the contact is genuine.
  if (domain.signed_distance(a) <= inflate || domain.signed_distance(b) <= inflate) return c;
  const double tm = 0.5 * (ta + tb);
  const cplx m = curve.at(tm);
  return std::min(refined_clearance(curve, domain, ta, tm, a, m, inflate, depth - 1),
                  refined_clearance(curve, domain, tm, tb, m, b, inflate, depth - 1));
}

}  // namespace detail

inline double curve_clearance(const SampledCurve& curve, const DomainSpec& domain, const SurroundOptions& opts) {
  const std::size_t n = curve.points.size();
  const bool refinable = curve.generator && curve.params.size() == n;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = curve.points[k], b = curve.points[(k + 1) % n];
    if (!refinable) {
      best = std::min(best, domain.segment_clearance(a, b));
      continue;
    }
    const double ta = curve.params[k];
    double tb = k + 1 < n ? curve.params[k + 1] : curve.params[0] + 1.0;
    if (tb < ta) tb += 1.0;
    best = std::min(best, detail::refined_clearance(curve, domain, ta, tb, a, b, opts.inflate, opts.max_contact_depth));
  }
  return best;
}

// Does the closed curve surround the domain? True iff the curve keeps clear
// of the domain and has the same non-zero winding number about every probe.
inline SurroundReport surrounds(const SampledCurve& curve, const DomainSpec& domain, int probe_grid,
                                const SurroundOptions& opts = {}) {
  if (!curve.closed) throw InvalidArgument("surrounds needs a closed curve");
  if (probe_grid < 1) throw InvalidArgument("probe_grid must be >= 1");
  SurroundReport rep;
  rep.inflate = opts.inflate;
  rep.min_distance = curve_clearance(curve, domain, opts);
  const double min_clear = 1e-12 * std::max(1.0, domain.diameter());
  const auto probes = probe_lattice(domain, probe_grid);
  for (cplx p : probes) {
    ProbeWinding pw{p, std::nullopt, {}};
    try {
      pw.winding = winding_number(curve, p, min_clear);
    } catch (const Error& e) {
      pw.error = e.what();
    }
    rep.winding_values.push_back(std::move(pw));
  }
  rep.probes_tested = probes.size();

  bool windings_ok = true;
  for (const auto& pw : rep.winding_values) {
    if (!pw.winding || *pw.winding == 0 || *pw.winding != *rep.winding_values.front().winding) windings_ok = false;
  }
  const bool clear = rep.min_distance > opts.inflate;
  rep.verdict = clear && windings_ok && !curve.overflowed;
  if (curve.overflowed) {
    rep.reason = "image curve overflowed";
  } else if (!clear) {
    rep.reason = "curve meets the domain";
  } else if (!windings_ok) {
    rep.reason = "probe winding numbers are zero, missing or disagree";
  }
  return rep;
}

struct SequenceCheckOptions {
  double density = 4.0;               // boundary samples per unit length
  int probe_grid = 5;
  double max_step_fraction = 1e-3;    // absolute chord bound, as a fraction of the target diameter
  double relative_step = 0.25;
  std::size_t max_points = 2'000'000;
  double epsilon_fraction = 1e-9;     // contact / closure tolerance, as a fraction of the diameter
};

struct CurvePair {
  SampledCurve boundary;
  SampledCurve image;
};

struct PairCheck {
  std::size_t index = 0;  // position of D_n in the supplied family
  std::string from_label, to_label;
  SurroundReport report;
  std::size_t image_points = 0;
  bool budget_hit = false;
  std::string error;
  CurvePair curves;
};

namespace detail {

inline CurvePair boundary_and_image(const FunctionExpression& f, const DomainSpec& source, const DomainSpec& target,
                                    const SequenceCheckOptions& opts, bool& budget_hit) {
  CurvePair cp;
  cp.boundary = boundary(source, opts.density);
  ImageCurveOptions io;
  io.max_step = opts.max_step_fraction * target.diameter();
  io.max_points = opts.max_points;
  io.target = target;
  io.relative_step = opts.relative_step;
  try {
    cp.image = image_curve(f, cp.boundary, io);
  } catch (const RefinementBudgetExceeded& e) {
    cp.image = e.partial();
    budget_hit = true;
  }
  return cp;
}

inline std::vector<double> inradii_about_origin(const std::vector<DomainSpec>& domains) {
  std::vector<double> r;
  for (const auto& d : domains) r.push_back(d.inradius_about(0.0));
  return r;
}

inline bool strictly_increasing_positive(const std::vector<double>& v) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] > 0.0)) return false;
    if (k > 0 && !(v[k] > v[k - 1])) return false;
  }
  return true;
}

}  // namespace detail

struct Theorem31Report {
  std::vector<PairCheck> pairs;     // f(boundary of D_n) against D_{n+1}
  std::vector<double> inradii;      // inradius about 0 of each D_n
  bool condition_a = false;
  bool condition_b_proxy = false;   // inradii positive and strictly increasing
  std::string horizon_note = kFiniteHorizonNote;

  bool verdict() const { return condition_a && condition_b_proxy; }
};

// For each consecutive pair: does f(boundary D_n) surround D_{n+1}? D_{n+1}
// is open, so the image may touch its boundary within the contact tolerance.
inline Theorem31Report check_theorem31(const FunctionExpression& f, const std::vector<DomainSpec>& domains,
                                       const SequenceCheckOptions& opts = {}) {
  if (domains.size() < 2) throw InvalidArgument("need at least two domains");
  Theorem31Report rep;
  rep.condition_a = true;
  for (std::size_t n = 0; n + 1 < domains.size(); ++n) {
    PairCheck pc;
    pc.index = n;
    pc.from_label = domains[n].label();
    pc.to_label = domains[n + 1].label();
    try {
      pc.curves = detail::boundary_and_image(f, domains[n], domains[n + 1], opts, pc.budget_hit);
      pc.image_points = pc.curves.image.size();
      SurroundOptions so;
      so.inflate = -opts.epsilon_fraction * domains[n + 1].diameter();
      pc.report = surrounds(pc.curves.image, domains[n + 1], opts.probe_grid, so);
      if (pc.budget_hit) {
        pc.report.verdict = false;
        pc.report.reason = "image refinement hit the point budget";
      }
    } catch (const Error& e) {
      pc.error = e.what();
      pc.report.verdict = false;
      pc.report.reason = e.what();
    }
    rep.condition_a = rep.condition_a && pc.report.verdict;
    rep.pairs.push_back(std::move(pc));
  }
  rep.inradii = detail::inradii_about_origin(domains);
  rep.condition_b_proxy = detail::strictly_increasing_positive(rep.inradii);
  return rep;
}

struct SplIndexCheck {
  std::size_t index = 0;
  std::string label;
  PairCheck own;                       // f(boundary D_n) against the closure of D_n
  std::optional<bool> closure_nested;  // closure of D_n inside D_{n+1}; empty for the last domain
};

struct SplReport {
  std::vector<SplIndexCheck> checks;
  std::vector<double> inradii;
  bool condition_i = false;
  bool condition_ii_proxy = false;
  bool condition_iii = false;
  std::string horizon_note = kFiniteHorizonNote;

  bool verdict() const { return condition_i && condition_ii_proxy && condition_iii; }
};

// Strongly polynomial-like criterion: f(boundary D_n) surrounds the closure of
// D_n, closures nest into the next domain, and the domains exhaust the plane
// (inradius growth as the finite proxy).
inline SplReport check_spl(const FunctionExpression& f, const std::vector<DomainSpec>& domains,
                           const SequenceCheckOptions& opts = {}) {
  if (domains.size() < 2) throw InvalidArgument("need at least two domains");
  SplReport rep;
  rep.condition_i = true;
  rep.condition_iii = true;
  for (std::size_t n = 0; n < domains.size(); ++n) {
    SplIndexCheck c;
    c.index = n;
    c.label = domains[n].label();
    c.own.index = n;
    c.own.from_label = c.own.to_label = domains[n].label();
    try {
      c.own.curves = detail::boundary_and_image(f, domains[n], domains[n], opts, c.own.budget_hit);
      c.own.image_points = c.own.curves.image.size();
      SurroundOptions so;
      so.inflate = opts.epsilon_fraction * domains[n].diameter();
      c.own.report = surrounds(c.own.curves.image, domains[n], opts.probe_grid, so);
      if (c.own.budget_hit) {
        c.own.report.verdict = false;
        c.own.report.reason = "image refinement hit the point budget";
      }
    } catch (const Error& e) {
      c.own.error = e.what();
      c.own.report.verdict = false;
      c.own.report.reason = e.what();
    }
    rep.condition_i = rep.condition_i && c.own.report.verdict;
    if (n + 1 < domains.size()) {
      c.closure_nested = domains[n].closure_within(domains[n + 1]);
      rep.condition_iii = rep.condition_iii && *c.closure_nested;
    }
    rep.checks.push_back(std::move(c));
  }
  rep.inradii = detail::inradii_about_origin(domains);
  rep.condition_ii_proxy = detail::strictly_increasing_positive(rep.inradii);
  return rep;
}

}  // namespace entire
