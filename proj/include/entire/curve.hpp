#pragma once

// Closed plane curves as ordered samples plus an optional generator that maps
// the boundary parameter t in [0, 1) to a point, used to refine between
// samples.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <vector>

#include "entire/domain.hpp"
#include "entire/errors.hpp"
#include "entire/funcspec.hpp"

namespace entire {

using CurveGenerator = std::function<cplx(double)>;

struct SampledCurve {
  std::vector<cplx> points;
  bool closed = true;
  std::vector<double> params;                        // source boundary parameter per point
  std::shared_ptr<const CurveGenerator> generator;   // t in [0, 1), periodic
  bool budget_hit = false;
  bool overflowed = false;

  std::size_t size() const noexcept { return points.size(); }

  // Point at parameter t, wrapping t into [0, 1).
  cplx at(double t) const { return (*generator)(t - std::floor(t)); }
};

class RefinementBudgetExceeded : public Error {
 public:
  explicit RefinementBudgetExceeded(SampledCurve partial)
      : Error("image curve refinement hit the point budget (" + std::to_string(partial.size()) + " points)"),
        partial_(std::move(partial)) {}
  const SampledCurve& partial() const noexcept { return partial_; }

 private:
  SampledCurve partial_;
};

namespace detail {

// Generator that walks a closed polygon at constant speed.
inline std::shared_ptr<const CurveGenerator> polygon_generator(std::vector<cplx> vertices) {
  std::vector<double> cum{0.0};
  for (std::size_t k = 0; k < vertices.size(); ++k)
    cum.push_back(cum.back() + std::abs(vertices[(k + 1) % vertices.size()] - vertices[k]));
  return std::make_shared<const CurveGenerator>([v = std::move(vertices), cum = std::move(cum)](double t) {
    const double s = t * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - cum.begin()) - 1));
    if (k >= v.size()) k = v.size() - 1;
    const double len = cum[k + 1] - cum[k];
    const double u = len > 0.0 ? (s - cum[k]) / len : 0.0;
    return v[k] + u * (v[(k + 1) % v.size()] - v[k]);
  });
}

}  // namespace detail

// Positively oriented closed sampling of the domain boundary with about
// `density` points per unit length (at least one sample per polygon edge).
inline SampledCurve boundary(const DomainSpec& domain, double density) {
  if (!(density > 0.0) || !std::isfinite(density)) throw InvalidArgument("boundary density must be positive");
  SampledCurve c;
  if (const auto* d = std::get_if<Disc>(&domain.shape())) {
    const double circumference = 2.0 * std::numbers::pi * d->radius;
    const auto n = static_cast<std::size_t>(std::max(3.0, std::ceil(circumference * density)));
    const cplx center = d->center;
    const double r = d->radius;
    c.generator = std::make_shared<const CurveGenerator>([center, r](double t) {
      const double a = 2.0 * std::numbers::pi * t;
      return center + cplx(r * std::cos(a), r * std::sin(a));
    });
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(n);
      c.params.push_back(t);
      c.points.push_back((*c.generator)(t));
    }
    return c;
  }
  const auto poly = domain.outline();
  const double total = domain.perimeter();
  double walked = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const cplx a = poly[k], b = poly[(k + 1) % poly.size()];
    const double len = std::abs(b - a);
    const auto segs = static_cast<std::size_t>(std::max(1.0, std::ceil(len * density)));
    for (std::size_t j = 0; j < segs; ++j) {
      const double u = static_cast<double>(j) / static_cast<double>(segs);
      c.points.push_back(a + u * (b - a));
      c.params.push_back((walked + u * len) / total);
    }
    walked += len;
  }
  c.generator = detail::polygon_generator(poly);
  return c;
}

struct ImageCurveOptions {
  double max_step = 0.05;                  // absolute chord length accepted anywhere
  std::size_t max_points = 2'000'000;
  std::optional<DomainSpec> target;        // when set, chords may also grow with distance to it
  double relative_step = 0.25;             // ... up to relative_step * distance
};

// Image of a closed curve under f, refined by bisection in the source
// parameter until every chord (and its midpoint deviation) is short.
inline SampledCurve image_curve(const FunctionExpression& f, const SampledCurve& curve,
                                const ImageCurveOptions& opts = {}) {
  if (curve.points.empty()) throw InvalidArgument("image_curve needs a non-empty curve");
  if (!(opts.max_step > 0.0)) throw InvalidArgument("max_step must be positive");
  std::shared_ptr<const CurveGenerator> source = curve.generator;
  std::vector<double> params = curve.params;
  if (!source || params.size() != curve.points.size()) {
    source = detail::polygon_generator(curve.points);
    params.clear();
    for (std::size_t k = 0; k < curve.points.size(); ++k)
      params.push_back(static_cast<double>(k) / static_cast<double>(curve.points.size()));
  }
  bool overflowed = false;
  auto image_at = [&](double t) {
    const Evaluation e = f.evaluate((*source)(t - std::floor(t)));
    overflowed = overflowed || e.overflowed;
    return e.value;
  };
  auto clearance = [&](cplx w) {
    if (!opts.target) return 0.0;
    return std::max(0.0, opts.target->signed_distance(w));
  };

  SampledCurve out;
  out.closed = true;
  struct Segment {
    double ta, tb;
    cplx wa, wb;
  };
  const std::size_t n = params.size();
  std::vector<cplx> images(n);
  for (std::size_t k = 0; k < n; ++k) images[k] = image_at(params[k]);
  std::vector<Segment> stack;
  for (std::size_t k = 0; k < n; ++k) {
    const double ta = params[k];
    const double tb = k + 1 < n ? params[k + 1] : params[0] + 1.0;
    stack.push_back({ta, tb, images[k], images[(k + 1) % n]});
    while (!stack.empty()) {
      const Segment s = stack.back();
      stack.pop_back();
      if (out.points.size() >= opts.max_points) {
        out.budget_hit = true;
        out.points.push_back(s.wa);
        out.params.push_back(s.ta - std::floor(s.ta));
        continue;
      }
      const double tm = 0.5 * (s.ta + s.tb);
      const cplx wm = image_at(tm);
      const double thr = std::max(opts.max_step, opts.relative_step * std::min(clearance(s.wa), clearance(s.wb)));
      const bool short_chord = std::abs(s.wb - s.wa) <= thr && std::abs(wm - 0.5 * (s.wa + s.wb)) <= thr;
      if (short_chord || s.tb - s.ta < 1e-13) {
        out.points.push_back(s.wa);
        out.params.push_back(s.ta - std::floor(s.ta));
        out.points.push_back(wm);
        out.params.push_back(tm - std::floor(tm));
      } else {
        stack.push_back({tm, s.tb, wm, s.wb});
        stack.push_back({s.ta, tm, s.wa, wm});
      }
    }
  }
  // Consecutive samples must be distinct.
  SampledCurve dedup;
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    if (!dedup.points.empty() && dedup.points.back() == out.points[k]) continue;
    dedup.points.push_back(out.points[k]);
    dedup.params.push_back(out.params[k]);
  }
  while (dedup.points.size() > 1 && dedup.points.back() == dedup.points.front()) {
    dedup.points.pop_back();
    dedup.params.pop_back();
  }
  dedup.closed = true;
  dedup.budget_hit = out.budget_hit;
  dedup.overflowed = overflowed;
  dedup.generator = std::make_shared<const CurveGenerator>([f, source](double t) { return f(( *source)(t)); });
  if (dedup.budget_hit) throw RefinementBudgetExceeded(std::move(dedup));
  return dedup;
}

// Winding number of a closed curve about w: the sum of argument increments
// between consecutive samples over 2 pi. Increments larger than pi/2 are
// refined through the curve generator first.
inline double winding_sum(const SampledCurve& curve, cplx w, double min_clearance) {
  if (curve.points.size() < 2) throw InvalidArgument("winding number needs at least two samples");
  double nearest = std::numeric_limits<double>::infinity();
  for (cplx p : curve.points) nearest = std::min(nearest, std::abs(p - w));
  if (nearest < min_clearance) throw CurveTooClose(nearest, min_clearance);
  const bool refinable = curve.generator && curve.params.size() == curve.points.size();
  constexpr double kMaxIncrement = std::numbers::pi / 2.0;
  auto increment = [&](cplx a, cplx b) { return std::arg((b - w) / (a - w)); };

  double total = 0.0;
  const std::size_t n = curve.points.size();
  struct Segment {
    double ta, tb;
    cplx a, b;
    int depth;
  };
  std::vector<Segment> stack;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = curve.points[k], b = curve.points[(k + 1) % n];
    const double da = increment(a, b);
    if (std::abs(da) <= kMaxIncrement || !refinable) {
      // Without a generator the polyline is the curve, and a straight chord
      // subtends exactly its principal angle.
      total += da;
      continue;
    }
    const double ta = curve.params[k];
    const double tb = k + 1 < n ? curve.params[k + 1] : curve.params[0] + 1.0;
    stack.push_back({ta, tb < ta ? tb + 1.0 : tb, a, b, 0});
    while (!stack.empty()) {
      const Segment s = stack.back();
      stack.pop_back();
      const double d = increment(s.a, s.b);
      if (std::abs(d) <= kMaxIncrement) {
        total += d;
        continue;
      }
      if (s.depth >= 48) throw AliasingUnresolved("argument increment stays above pi/2 after refinement");
      const double tm = 0.5 * (s.ta + s.tb);
      const cplx m = curve.at(tm);
      if (std::abs(m - w) < min_clearance) throw CurveTooClose(std::abs(m - w), min_clearance);
      stack.push_back({tm, s.tb, m, s.b, s.depth + 1});
      stack.push_back({s.ta, tm, s.a, m, s.depth + 1});
    }
  }
  return total / (2.0 * std::numbers::pi);
}

inline int winding_number(const SampledCurve& curve, cplx w, double min_clearance) {
  const double s = winding_sum(curve, w, min_clearance);
  const double rounded = std::round(s);
  if (std::abs(s - rounded) >= 0.05) throw AliasingUnresolved("winding sum is not close to an integer");
  return static_cast<int>(rounded);
}

}  // namespace entire
