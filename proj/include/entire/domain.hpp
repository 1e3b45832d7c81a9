#pragma once

// Bounded simply connected plane domains: open discs, open rectangles and
// unions of rectangles whose contact graph is a tree.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "entire/errors.hpp"

namespace entire {

using cplx = std::complex<double>;

struct Disc {
  cplx center;
  double radius;
};

struct Rect {
  double x_min, x_max, y_min, y_max;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  cplx center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
};

// Union of closed rectangles; the domain is the interior of that union.
// `outline` is the counter-clockwise boundary polygon with collinear vertices
// merged.
struct RectUnion {
  std::vector<Rect> rects;
  std::vector<cplx> outline;
};

namespace geom {

inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

inline double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

inline double point_rect_distance(cplx p, const Rect& r) {
  const double dx = std::max({r.x_min - p.real(), 0.0, p.real() - r.x_max});
  const double dy = std::max({r.y_min - p.imag(), 0.0, p.imag() - r.y_max});
  return std::hypot(dx, dy);
}

// Liang-Barsky: does segment [a,b] meet the closed rectangle?
inline bool segment_meets_rect(cplx a, cplx b, const Rect& r) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.real() - a.real(), dy = b.imag() - a.imag();
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.real() - r.x_min, r.x_max - a.real(), a.imag() - r.y_min, r.y_max - a.imag()};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
    } else {
      const double t = q[k] / p[k];
      if (p[k] < 0.0) {
        t0 = std::max(t0, t);
      } else {
        t1 = std::min(t1, t);
      }
      if (t0 > t1) return false;
    }
  }
  return true;
}

inline double segment_rect_distance(cplx a, cplx b, const Rect& r) {
  if (segment_meets_rect(a, b, r)) return 0.0;
  double d = std::min(point_rect_distance(a, r), point_rect_distance(b, r));
  const cplx corners[4] = {{r.x_min, r.y_min}, {r.x_max, r.y_min}, {r.x_max, r.y_max}, {r.x_min, r.y_max}};
  for (cplx c : corners) d = std::min(d, point_segment_distance(c, a, b));
  return d;
}

// Largest value over the segment of the depth min(x-x0, x1-x, y-y0, y1-y);
// the depth is concave along the segment so the maximum sits at an endpoint
// or where two of the affine pieces cross.
inline double max_rect_depth_on_segment(cplx a, cplx b, const Rect& r) {
  const cplx d = b - a;
  const double slope[4] = {d.real(), -d.real(), d.imag(), -d.imag()};
  const double icpt[4] = {a.real() - r.x_min, r.x_max - a.real(), a.imag() - r.y_min, r.y_max - a.imag()};
  auto depth_at = [&](double t) {
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) m = std::min(m, icpt[k] + slope[k] * t);
    return m;
  };
  double best = std::max(depth_at(0.0), depth_at(1.0));
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) {
      const double ds = slope[j] - slope[k];
      if (ds == 0.0) continue;
      const double t = (icpt[k] - icpt[j]) / ds;
      if (t > 0.0 && t < 1.0) best = std::max(best, depth_at(t));
    }
  return best;
}

// Proper or touching intersection of two segments.
inline bool segments_touch(cplx a, cplx b, cplx c, cplx d) {
  auto orient = [](cplx p, cplx q, cplx r) {
    const double v = cross(q - p, r - p);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](cplx p, cplx q, cplx r) {
    return std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
           std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
  };
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Winding number of a closed polygon about p (p not on the polygon).
inline int polygon_winding(const std::vector<cplx>& poly, cplx p) {
  int w = 0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const cplx a = poly[k], b = poly[(k + 1) % poly.size()];
    if (a.imag() <= p.imag()) {
      if (b.imag() > p.imag() && cross(b - a, p - a) > 0.0) ++w;
    } else if (b.imag() <= p.imag() && cross(b - a, p - a) < 0.0) {
      --w;
    }
  }
  return w;
}

inline double polygon_signed_area(const std::vector<cplx>& poly) {
  double s = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) s += cross(poly[k], poly[(k + 1) % poly.size()]);
  return 0.5 * s;
}

// Counter-clockwise outline of a union of closed rectangles, traced on the
// grid of all rectangle coordinates. Throws if the union has holes or pinch
// points (the outline is then not a single simple loop).
inline std::vector<cplx> trace_union_outline(const std::vector<Rect>& rects) {
  std::vector<double> xs, ys;
  for (const auto& r : rects) {
    xs.insert(xs.end(), {r.x_min, r.x_max});
    ys.insert(ys.end(), {r.y_min, r.y_max});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const std::size_t nx = xs.size() - 1, ny = ys.size() - 1;
  std::vector<char> filled(nx * ny, 0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double cx = 0.5 * (xs[i] + xs[i + 1]), cy = 0.5 * (ys[j] + ys[j + 1]);
      for (const auto& r : rects)
        if (cx > r.x_min && cx < r.x_max && cy > r.y_min && cy < r.y_max) filled[i * ny + j] = 1;
    }
  auto is_filled = [&](long i, long j) {
    return i >= 0 && j >= 0 && i < static_cast<long>(nx) && j < static_cast<long>(ny) && filled[i * ny + j];
  };
  // Directed unit edges keyed by their start lattice vertex (i, j).
  using Vertex = std::pair<long, long>;
  std::multimap<Vertex, Vertex> edges;
  for (long i = 0; i < static_cast<long>(nx); ++i)
    for (long j = 0; j < static_cast<long>(ny); ++j) {
      if (!is_filled(i, j)) continue;
      if (!is_filled(i, j - 1)) edges.insert({{i, j}, {i + 1, j}});
      if (!is_filled(i + 1, j)) edges.insert({{i + 1, j}, {i + 1, j + 1}});
      if (!is_filled(i, j + 1)) edges.insert({{i + 1, j + 1}, {i, j + 1}});
      if (!is_filled(i - 1, j)) edges.insert({{i, j + 1}, {i, j}});
    }
  for (auto it = edges.begin(); it != edges.end(); ++it)
    if (edges.count(it->first) > 1) throw DegenerateDomain("rectangle union has a pinch point");
  const std::size_t total = edges.size();
  std::vector<Vertex> loop;
  Vertex v = edges.begin()->first;
  const Vertex start = v;
  do {
    loop.push_back(v);
    auto it = edges.find(v);
    if (it == edges.end()) throw DegenerateDomain("rectangle union outline is not closed");
    v = it->second;
  } while (v != start && loop.size() <= total);
  if (loop.size() != total) throw DegenerateDomain("rectangle union is not simply connected");
  std::vector<cplx> pts;
  for (const auto& [i, j] : loop) pts.emplace_back(xs[i], ys[j]);
  // Drop vertices lying on a straight run.
  std::vector<cplx> out;
  const std::size_t n = pts.size();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx prev = pts[(k + n - 1) % n], cur = pts[k], next = pts[(k + 1) % n];
    if (cross(cur - prev, next - cur) != 0.0) out.push_back(cur);
  }
  return out;
}

}  // namespace geom

class DomainSpec {
 public:
  using Shape = std::variant<Disc, Rect, RectUnion>;

  static DomainSpec disc(cplx center, double radius, std::string label = {}) {
    if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(center.real()) || !std::isfinite(center.imag()))
      throw DegenerateDomain("disc radius must be finite and positive");
    return DomainSpec(Disc{center, radius}, std::move(label));
  }

  static DomainSpec rect(double x_min, double x_max, double y_min, double y_max, std::string label = {}) {
    check_rect({x_min, x_max, y_min, y_max});
    return DomainSpec(Rect{x_min, x_max, y_min, y_max}, std::move(label));
  }

  // Rectangles must be connected through contacts of positive length (shared
  // area or a shared edge segment), and the graph of all closure contacts,
  // point contacts included, must be a tree. Such a union is simply connected.
  static DomainSpec rect_union(std::vector<Rect> rects, std::string label = {}) {
    if (rects.empty()) throw DegenerateDomain("rectangle union is empty");
    for (const auto& r : rects) check_rect(r);
    const std::size_t n = rects.size();
    std::size_t contacts = 0;
    std::vector<std::size_t> parent(n);
    for (std::size_t k = 0; k < n; ++k) parent[k] = k;
    auto find = [&](std::size_t k) {
      while (parent[k] != k) k = parent[k] = parent[parent[k]];
      return k;
    };
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const Rect& p = rects[a];
        const Rect& q = rects[b];
        const double ox = std::min(p.x_max, q.x_max) - std::max(p.x_min, q.x_min);
        const double oy = std::min(p.y_max, q.y_max) - std::max(p.y_min, q.y_min);
        if (ox < 0.0 || oy < 0.0) continue;
        ++contacts;
        if (ox == 0.0 && oy == 0.0) throw DegenerateDomain("rectangles touch at a single point");
        parent[find(a)] = find(b);
      }
    for (std::size_t k = 1; k < n; ++k)
      if (find(k) != find(0)) throw DegenerateDomain("rectangle union is not connected");
    if (contacts != n - 1) throw DegenerateDomain("rectangle contact graph has a cycle");
    RectUnion u{std::move(rects), {}};
    u.outline = geom::trace_union_outline(u.rects);
    return DomainSpec(std::move(u), std::move(label));
  }

  const Shape& shape() const noexcept { return shape_; }
  const std::string& label() const noexcept { return label_; }

  // Axis-aligned bounding box of the closure.
  Rect bounding_box() const {
    return std::visit(
        [](const auto& s) -> Rect {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Disc>) {
            return {s.center.real() - s.radius, s.center.real() + s.radius, s.center.imag() - s.radius,
                    s.center.imag() + s.radius};
          } else if constexpr (std::is_same_v<T, Rect>) {
            return s;
          } else {
            Rect b = s.rects.front();
            for (const auto& r : s.rects)
              b = {std::min(b.x_min, r.x_min), std::max(b.x_max, r.x_max), std::min(b.y_min, r.y_min),
                   std::max(b.y_max, r.y_max)};
            return b;
          }
        },
        shape_);
  }

  double diameter() const {
    if (const auto* d = std::get_if<Disc>(&shape_)) return 2.0 * d->radius;
    const Rect b = bounding_box();
    return std::hypot(b.width(), b.height());
  }

  // Counter-clockwise boundary polygon (empty for a disc).
  std::vector<cplx> outline() const {
    if (const auto* r = std::get_if<Rect>(&shape_))
      return {{r->x_min, r->y_min}, {r->x_max, r->y_min}, {r->x_max, r->y_max}, {r->x_min, r->y_max}};
    if (const auto* u = std::get_if<RectUnion>(&shape_)) return u->outline;
    return {};
  }

  // Membership in the open domain.
  bool contains(cplx p) const {
    if (const auto* d = std::get_if<Disc>(&shape_)) return std::abs(p - d->center) < d->radius;
    if (const auto* r = std::get_if<Rect>(&shape_))
      return p.real() > r->x_min && p.real() < r->x_max && p.imag() > r->y_min && p.imag() < r->y_max;
    const auto& u = std::get<RectUnion>(shape_);
    for (std::size_t k = 0; k < u.outline.size(); ++k)
      if (geom::point_segment_distance(p, u.outline[k], u.outline[(k + 1) % u.outline.size()]) == 0.0) return false;
    return geom::polygon_winding(u.outline, p) != 0;
  }

  // Distance to the boundary, positive outside the closure, negative inside.
  double signed_distance(cplx p) const {
    if (const auto* d = std::get_if<Disc>(&shape_)) return std::abs(p - d->center) - d->radius;
    const auto poly = outline();
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < poly.size(); ++k)
      d = std::min(d, geom::point_segment_distance(p, poly[k], poly[(k + 1) % poly.size()]));
    return contains(p) ? -d : d;
  }

  // Signed clearance of the segment [a,b] from the domain: the distance to the
  // closure when the segment misses it, otherwise minus the deepest
  // penetration (for unions, the deepest penetration into a single member
  // rectangle).
  double segment_clearance(cplx a, cplx b) const {
    if (const auto* d = std::get_if<Disc>(&shape_))
      return geom::point_segment_distance(d->center, a, b) - d->radius;
    const std::vector<Rect>* members = nullptr;
    std::vector<Rect> single;
    if (const auto* r = std::get_if<Rect>(&shape_)) {
      single.push_back(*r);
      members = &single;
    } else {
      members = &std::get<RectUnion>(shape_).rects;
    }
    double dist = std::numeric_limits<double>::infinity();
    double depth = -std::numeric_limits<double>::infinity();
    bool meets = false;
    for (const auto& r : *members) {
      if (geom::segment_meets_rect(a, b, r)) {
        meets = true;
        depth = std::max(depth, geom::max_rect_depth_on_segment(a, b, r));
      } else {
        dist = std::min(dist, geom::segment_rect_distance(a, b, r));
      }
    }
    if (meets) return -std::max(depth, 0.0);
    return dist;
  }

  // Radius of the largest disc about `p` inside the domain (0 if p is outside).
  double inradius_about(cplx p) const {
    const double s = signed_distance(p);
    return s < 0.0 ? -s : 0.0;
  }

  // Some point of the open domain.
  cplx interior_point() const {
    if (const auto* d = std::get_if<Disc>(&shape_)) return d->center;
    if (const auto* r = std::get_if<Rect>(&shape_)) return r->center();
    return std::get<RectUnion>(shape_).rects.front().center();
  }

  // Is the closure of this domain inside the open domain `outer`?
  bool closure_within(const DomainSpec& outer) const {
    if (const auto* d = std::get_if<Disc>(&shape_)) {
      if (const auto* od = std::get_if<Disc>(&outer.shape_))
        return std::abs(d->center - od->center) + d->radius < od->radius;
      return outer.contains(d->center) && -outer.signed_distance(d->center) > d->radius;
    }
    const auto poly = outline();
    if (const auto* od = std::get_if<Disc>(&outer.shape_)) {
      for (cplx v : poly)
        if (!(std::abs(v - od->center) < od->radius)) return false;
      return true;
    }
    if (std::holds_alternative<Rect>(outer.shape_)) {
      for (cplx v : poly)
        if (!outer.contains(v)) return false;
      return true;
    }
    // Polygon in polygon: no boundary contact and one vertex inside.
    const auto outer_poly = outer.outline();
    for (std::size_t a = 0; a < poly.size(); ++a)
      for (std::size_t b = 0; b < outer_poly.size(); ++b)
        if (geom::segments_touch(poly[a], poly[(a + 1) % poly.size()], outer_poly[b],
                                 outer_poly[(b + 1) % outer_poly.size()]))
          return false;
    return outer.contains(poly.front());
  }

  // Length of the boundary.
  double perimeter() const {
    if (const auto* d = std::get_if<Disc>(&shape_)) return 2.0 * std::numbers::pi * d->radius;
    const auto poly = outline();
    double s = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) s += std::abs(poly[(k + 1) % poly.size()] - poly[k]);
    return s;
  }

 private:
  DomainSpec(Shape s, std::string label) : shape_(std::move(s)), label_(std::move(label)) {}

  static void check_rect(const Rect& r) {
    if (!(r.x_min < r.x_max) || !(r.y_min < r.y_max) || !std::isfinite(r.x_min) || !std::isfinite(r.x_max) ||
        !std::isfinite(r.y_min) || !std::isfinite(r.y_max))
      throw DegenerateDomain("rectangle needs finite bounds with x_min < x_max and y_min < y_max");
  }

  Shape shape_;
  std::string label_;
};

}  // namespace entire
