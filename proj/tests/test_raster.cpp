#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "entire/raster.hpp"
#include "oracles.hpp"

using namespace entire;

namespace {
constexpr double pi = std::numbers::pi;

PixelClassification from_mask(const std::vector<unsigned char>& mask, int nx, int ny) {
  PixelClassification pc;
  pc.grid = {{0.0, static_cast<double>(nx), 0.0, static_cast<double>(ny)}, nx, ny};
  for (unsigned char m : mask) pc.classes.push_back(m ? PointClass::UnboundedSuspect : PointClass::BoundedSuspect);
  return pc;
}

PixelClassification from_predicate(const GridSpec& g, const std::function<bool(cplx)>& inside) {
  PixelClassification pc;
  pc.grid = g;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      pc.classes.push_back(inside(g.center(i, j)) ? PointClass::UnboundedSuspect : PointClass::BoundedSuspect);
  return pc;
}

// 4-connected digital loop tracing the boundary of a random blob of cells.
std::vector<unsigned char> random_loop(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> coord(3, n - 4);
  const int x0 = coord(rng), y0 = coord(rng);
  int x1 = coord(rng), y1 = coord(rng);
  if (std::abs(x1 - x0) < 2) x1 = x0 + (x0 < n / 2 ? 3 : -3);
  if (std::abs(y1 - y0) < 2) y1 = y0 + (y0 < n / 2 ? 3 : -3);
  const int a = std::min(x0, x1), b = std::max(x0, x1), c = std::min(y0, y1), d = std::max(y0, y1);
  std::vector<unsigned char> m(n * n, 0);
  for (int i = a; i <= b; ++i) m[c * n + i] = m[d * n + i] = 1;
  for (int j = c; j <= d; ++j) m[j * n + a] = m[j * n + b] = 1;
  // Dent one side inward to make the loop non-convex.
  if (b - a >= 4 && d - c >= 4) {
    const int mid = (a + b) / 2;
    m[c * n + mid] = 0;
    m[(c + 1) * n + mid - 1] = m[(c + 1) * n + mid] = m[(c + 1) * n + mid + 1] = 1;
    m[c * n + mid - 1] = m[c * n + mid + 1] = 1;
  }
  return m;
}
}  // namespace

TEST_CASE("grid geometry", "[raster]") {
  const GridSpec g{{-2, 2, -1, 1}, 4, 2};
  CHECK(g.center(0, 0) == cplx(-1.5, 0.5));
  CHECK(g.center(3, 1) == cplx(1.5, -0.5));
  CHECK(g.aspect_distortion() == 1.0);
  CHECK(GridSpec{{0, 4, 0, 1}, 2, 2}.aspect_distortion() == 4.0);
  CHECK_THROWS_AS((GridSpec{{0, 1, 0, 1}, 1, 5}.validate()), InvalidArgument);
  CHECK_THROWS_AS((GridSpec{{1, 0, 0, 1}, 5, 5}.validate()), InvalidArgument);
}

TEST_CASE("classifying grids", "[raster]") {
  SECTION("z^2 on [-2, 2]^2") {
    const GridSpec g{{-2, 2, -2, 2}, 64, 64};
    const auto pc = classify_grid(parse("z^2"), g, {});
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double r = std::abs(g.center(i, j));
        if (r > 1.0) CHECK(pc.at(i, j) == PointClass::UnboundedSuspect);
        if (r < 1.0) CHECK(pc.at(i, j) == PointClass::BoundedSuspect);
      }
  }
  SECTION("cos z + z near pi/2") {
    const GridSpec g{{0, 2 * pi, -1, 1}, 128, 64};
    const auto pc = classify_grid(parse("cos(z)+z"), g, {});
    int checked = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (std::abs(g.center(i, j) - pi / 2) < 0.3) {
          CHECK(pc.at(i, j) == PointClass::BoundedSuspect);
          ++checked;
        }
    CHECK(checked > 20);
  }
  SECTION("serial and threaded runs agree") {
    const GridSpec g{{-10, 10, -5, 5}, 120, 60};
    const auto f = parse("sin(z)");
    const auto a = classify_grid(f, g, {}, 1);
    const auto b = classify_grid(f, g, {}, 4);
    const auto c = classify_grid(f, g, {}, 7);
    CHECK(a.classes == b.classes);
    CHECK(a.classes == c.classes);
  }
}

TEST_CASE("component labelling", "[raster]") {
  SECTION("two blobs") {
    std::vector<unsigned char> m(10 * 6, 0);
    for (int j = 1; j < 3; ++j)
      for (int i = 1; i < 4; ++i) m[j * 10 + i] = 1;
    for (int j = 3; j < 6; ++j)
      for (int i = 6; i < 10; ++i) m[j * 10 + i] = 1;
    const auto l = label_components(from_mask(m, 10, 6), PointClass::UnboundedSuspect);
    REQUIRE(l.census.size() == 2);
    CHECK(l.census[0].pixels == 12);
    CHECK(l.census[0].id == 2);
    CHECK(l.census[0].touches_window_edge);
    CHECK(l.census[1].pixels == 6);
    CHECK(l.census[1].id == 1);
    CHECK_FALSE(l.census[1].touches_window_edge);
    CHECK(l.census[1].i_min == 1);
    CHECK(l.census[1].i_max == 3);
    CHECK(l.census[1].j_min == 1);
    CHECK(l.census[1].j_max == 2);
  }
  SECTION("diagonal neighbours join only under 8-connectivity") {
    const std::vector<unsigned char> m = {1, 0, 0, 1};
    CHECK(label_components(from_mask(m, 2, 2), PointClass::UnboundedSuspect, 4).census.size() == 2);
    CHECK(label_components(from_mask(m, 2, 2), PointClass::UnboundedSuspect, 8).census.size() == 1);
  }
  SECTION("a single-class grid is one component") {
    const auto l = label_components(from_mask(std::vector<unsigned char>(30, 1), 6, 5), PointClass::UnboundedSuspect);
    REQUIRE(l.census.size() == 1);
    CHECK(l.census[0].pixels == 30);
  }
  SECTION("undecided pixels belong to neither census") {
    auto pc = from_mask({1, 1, 1, 0, 0, 0}, 3, 2);
    pc.classes[1] = PointClass::Undecided;
    CHECK(label_components(pc, PointClass::UnboundedSuspect).census.size() == 2);
    CHECK(label_components(pc, PointClass::BoundedSuspect).census.size() == 1);
  }
  CHECK_THROWS_AS(label_components(from_mask({1, 1, 1, 1}, 2, 2), PointClass::UnboundedSuspect, 6),
                  InvalidArgument);
}

TEST_CASE("labelling agrees with flood fill", "[raster][oracle]") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(2, 32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int nx = size(rng), ny = size(rng);
    const double density = 0.2 + 0.6 * u(rng);
    std::vector<unsigned char> m(nx * ny);
    for (auto& v : m) v = u(rng) < density;
    for (int conn : {4, 8}) {
      INFO("mask " << t << " " << nx << "x" << ny << " connectivity " << conn);
      const auto l = label_components(from_mask(m, nx, ny), PointClass::UnboundedSuspect, conn);
      const auto want = oracle::flood_label(m, nx, ny, conn);
      CHECK(l.labels == want.labels);
      REQUIRE(l.census.size() == want.sizes.size());
      for (const auto& c : l.census) {
        CHECK(c.pixels == want.sizes[c.id - 1]);
        CHECK(c.touches_window_edge == want.touches_edge[c.id - 1]);
      }
      for (std::size_t k = 1; k < l.census.size(); ++k) CHECK(l.census[k - 1].pixels >= l.census[k].pixels);
    }
  }
}

TEST_CASE("digital loops separate inside from outside", "[raster][property]") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 50; ++t) {
    const int n = 24;
    const auto m = random_loop(rng, n);
    const auto pc = from_mask(m, n, n);
    REQUIRE(label_components(pc, PointClass::UnboundedSuspect, 4).census.size() == 1);
    const auto complement = label_components(pc, PointClass::BoundedSuspect, 8);
    CHECK(complement.census.size() == 2);
  }
}

TEST_CASE("boundary pixels", "[raster]") {
  SECTION("z^2 approximates the unit circle") {
    const GridSpec g{{-2, 2, -2, 2}, 128, 128};
    const auto mask = boundary_pixels(classify_grid(parse("z^2"), g, {}), PointClass::UnboundedSuspect);
    const double diag = std::hypot(g.dx(), g.dy());
    CHECK(mask.count() > 0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (mask.at(i, j)) CHECK(std::abs(std::abs(g.center(i, j)) - 1.0) <= 2 * diag);
  }
  SECTION("a single-class grid has none") {
    CHECK(boundary_pixels(from_mask(std::vector<unsigned char>(16, 1), 4, 4), PointClass::UnboundedSuspect).count() ==
          0);
  }
  SECTION("sin z: boundary pixels border the bounded region around the real axis") {
    // Pixels of the unbounded class that touch the bounded component holding the axis.
    auto bordering = [](int nx) {
      const GridSpec g{{-10, 10, -5, 5}, nx, nx / 2};
      const auto pc = classify_grid(parse("sin(z)"), g, {});
      const auto mask = boundary_pixels(pc, PointClass::UnboundedSuspect);
      const auto bounded = label_components(pc, PointClass::BoundedSuspect, 8);
      const int axis = bounded.at(g.nx / 2, g.ny / 2);
      int count = 0;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          if (!mask.at(i, j)) continue;
          const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
          for (int k = 0; k < 4; ++k) {
            const int a = i + di[k], b = j + dj[k];
            if (a >= 0 && b >= 0 && a < g.nx && b < g.ny && bounded.at(a, b) == axis) {
              ++count;
              break;
            }
          }
        }
      return std::pair{axis, count};
    };
    const auto [axis, count] = bordering(200);
    CHECK(axis != 0);
    CHECK(count > 0);
    const auto [fine_axis, fine_count] = bordering(400);  // finer classification agrees
    CHECK(fine_axis != 0);
    CHECK(fine_count > 0);
  }
}

TEST_CASE("spider's web probe", "[raster]") {
  const GridSpec g{{-4, 4, -4, 4}, 160, 160};
  SECTION("an annulus around the centre") {
    const auto pc = from_predicate(g, [](cplx z) { return std::abs(z) > 2.5 && std::abs(z) < 3.2; });
    const auto rep = spiders_web_probe(label_components(pc, PointClass::UnboundedSuspect), 0.0, {1.0, 2.0});
    CHECK(rep.verdict);
    for (const auto& ev : rep.radii) {
      CHECK(ev.surrounded);
      CHECK(ev.ring_pixels > 0);
    }
  }
  SECTION("the annulus does not help beyond its outer radius") {
    const auto pc = from_predicate(g, [](cplx z) { return std::abs(z) > 2.5 && std::abs(z) < 3.2; });
    const auto rep = spiders_web_probe(label_components(pc, PointClass::UnboundedSuspect), 0.0, {1.0, 3.5});
    CHECK_FALSE(rep.verdict);
    CHECK(rep.radii[0].surrounded);
    CHECK_FALSE(rep.radii[1].surrounded);
  }
  SECTION("a full grid") {
    const auto pc = from_predicate(g, [](cplx) { return true; });
    CHECK(spiders_web_probe(label_components(pc, PointClass::UnboundedSuspect), 0.0, {1.0, 2.0, 3.0}).verdict);
  }
  SECTION("sin z: the real axis blocks every loop") {
    const GridSpec gs{{-10, 10, -5, 5}, 400, 200};
    const auto pc = classify_grid(parse("sin(z)"), gs, {});
    const auto rep = spiders_web_probe(label_components(pc, PointClass::UnboundedSuspect), 0.0, {1.0, 2.0, 4.0});
    CHECK_FALSE(rep.verdict);
  }
  SECTION("errors") {
    const auto l = label_components(from_predicate(g, [](cplx) { return true; }), PointClass::UnboundedSuspect);
    CHECK_THROWS_AS(spiders_web_probe(l, 0.0, {5.0}), RadiusOutsideWindow);
    CHECK_THROWS_AS(spiders_web_probe(l, 0.0, {-1.0}), RadiusOutsideWindow);
    CHECK_THROWS_AS(spiders_web_probe(l, 0.0, {2.0, 1.0}), InvalidArgument);
  }
}

TEST_CASE("PPM output", "[raster]") {
  auto pc = from_mask({1, 0, 1, 0}, 2, 2);
  pc.classes[2] = PointClass::Undecided;
  PixelMask overlay{pc.grid, {0, 0, 0, 1}};
  const std::string ppm = render_ppm(pc, &overlay);
  const std::string header = "P6\n2 2\n255\n";
  REQUIRE(ppm.size() == header.size() + 12);
  CHECK(ppm.substr(0, header.size()) == header);
  const auto* px = reinterpret_cast<const unsigned char*>(ppm.data() + header.size());
  const unsigned char want[12] = {255, 255, 255, 0, 0, 0, 128, 128, 128, 255, 0, 0};
  for (int k = 0; k < 12; ++k) CHECK(px[k] == want[k]);
}

TEST_CASE("sin z component count as resolution doubles", "[raster][report]") {
  // Reported only; the count is not required to be monotone.
  for (int nx : {100, 200, 400}) {
    const GridSpec g{{-10, 10, -5, 5}, nx, nx / 2};
    const auto l = label_components(classify_grid(parse("sin(z)"), g, {}), PointClass::UnboundedSuspect);
    UNSCOPED_INFO("nx=" << nx << " components=" << l.census.size());
    CHECK(l.census.size() >= 2);
  }
}
