#pragma once

// Pixel pictures of I+(f) and K(f): per-pixel orbit classification,
// union-find component census, boundary pixels approximating J(f), and a
// spider's-web probe on the census.

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "entire/domain.hpp"
#include "entire/errors.hpp"
#include "entire/funcspec.hpp"
#include "entire/orbits.hpp"

namespace entire {

// Pixel (i, j) has column i (left to right) and row j (top to bottom); its
// centre is the centre of the corresponding cell of the window.
struct GridSpec {
  Rect window;
  int nx = 2, ny = 2;

  void validate() const {
    if (nx < 2 || ny < 2) throw InvalidArgument("grid needs nx, ny >= 2");
    if (!(window.x_min < window.x_max) || !(window.y_min < window.y_max))
      throw InvalidArgument("window needs x_min < x_max and y_min < y_max");
  }
  double dx() const { return window.width() / nx; }
  double dy() const { return window.height() / ny; }
  cplx center(int i, int j) const {
    return {window.x_min + (i + 0.5) * dx(), window.y_max - (j + 0.5) * dy()};
  }
  // Pixel width over pixel height; 1 means square pixels.
  double aspect_distortion() const { return dx() / dy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

struct PixelClassification {
  GridSpec grid;
  std::vector<PointClass> classes;  // row-major, grid.size() entries
  OrbitPolicy policy;

  PointClass at(int i, int j) const { return classes[grid.index(i, j)]; }
};

// Classify every pixel centre. Rows are split across `threads` workers
// (0 = hardware concurrency); the result does not depend on the split.
inline PixelClassification classify_grid(const FunctionExpression& f, const GridSpec& grid, const OrbitPolicy& policy,
                                         unsigned threads = 0) {
  grid.validate();
  policy.validate();
  PixelClassification pc{grid, std::vector<PointClass>(grid.size(), PointClass::Undecided), policy};
  auto work = [&](int row_begin, int row_end) {
    for (int j = row_begin; j < row_end; ++j)
      for (int i = 0; i < grid.nx; ++i) pc.classes[grid.index(i, j)] = classify_point(f, grid.center(i, j), policy);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.ny));
  if (threads <= 1) {
    work(0, grid.ny);
    return pc;
  }
  std::vector<std::jthread> pool;
  const int chunk = (grid.ny + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (int b = 0; b < grid.ny; b += chunk) pool.emplace_back(work, b, std::min(grid.ny, b + chunk));
  return pc;
}

struct ComponentInfo {
  int id = 0;
  std::size_t pixels = 0;
  int i_min = 0, i_max = 0, j_min = 0, j_max = 0;  // bounding box in pixel indices
  bool touches_window_edge = false;                 // candidate unbounded component
};

struct ComponentLabeling {
  GridSpec grid;
  PointClass target = PointClass::UnboundedSuspect;
  int connectivity = 4;
  std::vector<int> labels;            // 0 = not in the target class
  std::vector<ComponentInfo> census;  // sorted by size, largest first; ties by id

  int at(int i, int j) const { return labels[grid.index(i, j)]; }
};

// Union-find labelling of the target-class pixels. Component ids follow the
// row-major order of each component's first pixel.
inline ComponentLabeling label_components(const PixelClassification& c, PointClass target, int connectivity = 4) {
  if (connectivity != 4 && connectivity != 8) throw InvalidArgument("connectivity must be 4 or 8");
  const GridSpec& g = c.grid;
  const std::size_t n = g.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t k) {
    while (parent[k] != k) k = parent[k] = parent[parent[k]];
    return k;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  auto in_target = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < g.nx && j < g.ny && c.classes[g.index(i, j)] == target;
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!in_target(i, j)) continue;
      const std::size_t k = g.index(i, j);
      if (in_target(i - 1, j)) unite(k, g.index(i - 1, j));
      if (in_target(i, j - 1)) unite(k, g.index(i, j - 1));
      if (connectivity == 8) {
        if (in_target(i - 1, j - 1)) unite(k, g.index(i - 1, j - 1));
        if (in_target(i + 1, j - 1)) unite(k, g.index(i + 1, j - 1));
      }
    }
  ComponentLabeling out;
  out.grid = g;
  out.target = target;
  out.connectivity = connectivity;
  out.labels.assign(n, 0);
  std::vector<int> root_id(n, 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!in_target(i, j)) continue;
      const std::size_t k = g.index(i, j);
      const std::size_t r = find(k);
      if (root_id[r] == 0) {
        root_id[r] = static_cast<int>(out.census.size()) + 1;
        out.census.push_back({root_id[r], 0, i, i, j, j, false});
      }
      const int id = root_id[r];
      out.labels[k] = id;
      ComponentInfo& info = out.census[id - 1];
      ++info.pixels;
      info.i_min = std::min(info.i_min, i);
      info.i_max = std::max(info.i_max, i);
      info.j_min = std::min(info.j_min, j);
      info.j_max = std::max(info.j_max, j);
      if (i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) info.touches_window_edge = true;
    }
  std::stable_sort(out.census.begin(), out.census.end(),
                   [](const ComponentInfo& a, const ComponentInfo& b) { return a.pixels > b.pixels; });
  return out;
}

struct PixelMask {
  GridSpec grid;
  std::vector<unsigned char> bits;

  bool at(int i, int j) const { return bits[grid.index(i, j)] != 0; }
  std::size_t count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }
};

// Target-class pixels with at least one 4-neighbour of another class.
inline PixelMask boundary_pixels(const PixelClassification& c, PointClass target) {
  const GridSpec& g = c.grid;
  PixelMask m{g, std::vector<unsigned char>(g.size(), 0)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (c.at(i, j) != target) continue;
      const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int a = i + di[k], b = j + dj[k];
        if (a < 0 || b < 0 || a >= g.nx || b >= g.ny) continue;
        if (c.at(a, b) != target) {
          m.bits[g.index(i, j)] = 1;
          break;
        }
      }
    }
  return m;
}

struct RadiusEvidence {
  double radius = 0.0;
  bool surrounded = false;        // a 4-connected loop of the component encloses the centre beyond `radius`
  std::size_t enclosed_pixels = 0;
  std::size_t ring_pixels = 0;    // component pixels bordering the enclosed region
};

struct SpidersWebReport {
  int component_id = 0;
  std::size_t component_pixels = 0;
  std::vector<RadiusEvidence> radii;
  bool verdict = false;
  std::string note = "pixel-level evidence only; a finite picture cannot establish a spider's web";
};

// For each radius: does the largest component contain a pixel loop around
// `center` staying at distance >= radius? Equivalently (digital Jordan
// duality, 4-connected loop vs 8-connected complement) a breadth-first fill
// from the pixels within `radius`, through pixels not in the component's
// part outside the radius, never reaches the window edge.
inline SpidersWebReport spiders_web_probe(const ComponentLabeling& l, cplx center, const std::vector<double>& radii) {
  const GridSpec& g = l.grid;
  const double reach = std::min({center.real() - g.window.x_min, g.window.x_max - center.real(),
                                 center.imag() - g.window.y_min, g.window.y_max - center.imag()});
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !(radii[k] < reach))
      throw RadiusOutsideWindow("radius " + std::to_string(radii[k]) + " does not fit in the window around the centre");
    if (k > 0 && !(radii[k] > radii[k - 1])) throw InvalidArgument("radii must be strictly increasing");
  }
  SpidersWebReport rep;
  if (l.census.empty()) return rep;
  rep.component_id = l.census.front().id;
  rep.component_pixels = l.census.front().pixels;
  rep.verdict = true;
  // Pixel nearest to the centre, used if no pixel centre lies within radius.
  const int ci = std::clamp(static_cast<int>(std::floor((center.real() - g.window.x_min) / g.dx())), 0, g.nx - 1);
  const int cj = std::clamp(static_cast<int>(std::floor((g.window.y_max - center.imag()) / g.dy())), 0, g.ny - 1);
  for (double r : radii) {
    RadiusEvidence ev;
    ev.radius = r;
    std::vector<unsigned char> wall(g.size(), 0), seen(g.size(), 0);
    std::deque<std::pair<int, int>> queue;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double d = std::abs(g.center(i, j) - center);
        if (d >= r && l.at(i, j) == rep.component_id) wall[g.index(i, j)] = 1;
        if (d < r) {
          seen[g.index(i, j)] = 1;
          queue.emplace_back(i, j);
        }
      }
    if (queue.empty() && !wall[g.index(ci, cj)]) {
      seen[g.index(ci, cj)] = 1;
      queue.emplace_back(ci, cj);
    }
    bool escaped = queue.empty();
    while (!queue.empty()) {
      const auto [i, j] = queue.front();
      queue.pop_front();
      ++ev.enclosed_pixels;
      if (i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) escaped = true;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= g.nx || b >= g.ny) continue;
          const std::size_t k = g.index(a, b);
          if (seen[k] || wall[k]) continue;
          seen[k] = 1;
          queue.emplace_back(a, b);
        }
    }
    if (!escaped) {
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          if (!wall[g.index(i, j)]) continue;
          bool borders = false;
          for (int dj = -1; dj <= 1 && !borders; ++dj)
            for (int di = -1; di <= 1 && !borders; ++di) {
              const int a = i + di, b = j + dj;
              if (a >= 0 && b >= 0 && a < g.nx && b < g.ny && seen[g.index(a, b)]) borders = true;
            }
          if (borders) ++ev.ring_pixels;
        }
    }
    ev.surrounded = !escaped;
    rep.verdict = rep.verdict && ev.surrounded;
    rep.radii.push_back(ev);
  }
  return rep;
}

// Binary PPM (P6, maxval 255). Palette: unbounded white, bounded black,
// undecided grey, overlay pixels red.
inline std::string render_ppm(const PixelClassification& c, const PixelMask* overlay = nullptr) {
  const GridSpec& g = c.grid;
  std::string out = "P6\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n255\n";
  out.reserve(out.size() + 3 * g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      unsigned char rgb[3];
      if (overlay && overlay->at(i, j)) {
        rgb[0] = 255, rgb[1] = 0, rgb[2] = 0;
      } else {
        switch (c.at(i, j)) {
          case PointClass::UnboundedSuspect: rgb[0] = rgb[1] = rgb[2] = 255; break;
          case PointClass::BoundedSuspect: rgb[0] = rgb[1] = rgb[2] = 0; break;
          case PointClass::Undecided: rgb[0] = rgb[1] = rgb[2] = 128; break;
        }
      }
      out.append(reinterpret_cast<const char*>(rgb), 3);
    }
  return out;
}

}  // namespace entire
