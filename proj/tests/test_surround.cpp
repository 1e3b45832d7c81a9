#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "entire/scenarios.hpp"
#include "entire/surround.hpp"
#include "oracles.hpp"
#include "root_oracle.hpp"

using namespace entire;

namespace {
constexpr double pi = std::numbers::pi;

SampledCurve polyline(std::vector<cplx> pts) {
  SampledCurve c;
  c.points = std::move(pts);
  return c;
}

SampledCurve circle(cplx c, double r, int n) {
  std::vector<cplx> pts;
  for (int k = 0; k < n; ++k) pts.push_back(c + std::polar(r, 2.0 * pi * k / n));
  return polyline(pts);
}

bool same_vertex_cycle(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t shift = 0; shift < a.size(); ++shift) {
    bool ok = true;
    for (std::size_t k = 0; k < a.size() && ok; ++k) ok = std::abs(a[(k + shift) % a.size()] - b[k]) < tol;
    if (ok) return true;
  }
  return false;
}
}  // namespace

TEST_CASE("domain construction validates its input", "[domain]") {
  CHECK_THROWS_AS(DomainSpec::disc(0.0, 0.0), DegenerateDomain);
  CHECK_THROWS_AS(DomainSpec::disc(0.0, -1.0), DegenerateDomain);
  CHECK_THROWS_AS(DomainSpec::rect(1, 0, 0, 1), DegenerateDomain);
  CHECK_THROWS_AS(DomainSpec::rect(0, 1, 0, 0), DegenerateDomain);
  SECTION("unions") {
    CHECK_THROWS_AS(DomainSpec::rect_union({}), DegenerateDomain);
    CHECK_THROWS_AS(DomainSpec::rect_union({{0, 1, 0, 1}, {2, 3, 0, 1}}), DegenerateDomain);
    CHECK_THROWS_AS(DomainSpec::rect_union({{0, 1, 0, 1}, {1, 2, 1, 2}}), DegenerateDomain);
    // Four bars around a hole: the contact graph is a cycle.
    CHECK_THROWS_AS(DomainSpec::rect_union({{0, 3, 0, 1}, {2, 3, 0, 3}, {0, 3, 2, 3}, {0, 1, 0, 3}}),
                    DegenerateDomain);
    CHECK_NOTHROW(DomainSpec::rect_union({{0, 2, 0, 2}, {1, 3, 1, 3}}));
    CHECK_NOTHROW(DomainSpec::rect_union({{0, 1, 0, 1}, {1, 2, 0, 1}}));
  }
}

TEST_CASE("domain geometry", "[domain]") {
  const auto d2 = ex51_domain(2);
  SECTION("outline of the two-rectangle domain for n = 2") {
    std::vector<cplx> want = {{0, 8}, {8, 8}, {8, -8}, {0, -8}, {0, -2}, {-2, -2}, {-2, 2}, {0, 2}};
    for (auto& v : want) v *= pi;
    std::reverse(want.begin(), want.end());  // listed clockwise; outlines run counter-clockwise
    const auto got = d2.outline();
    CHECK(same_vertex_cycle(got, want, 1e-12));
    CHECK(geom::polygon_signed_area(got) > 0.0);
  }
  SECTION("membership of the open set") {
    CHECK(d2.contains({1.0, 0.0}));
    CHECK(d2.contains({-1.0, 0.0}));
    CHECK(d2.contains({0.0, 0.0}));
    CHECK(d2.contains({0.0, 5.0}));  // shared edge of the two rectangles
    CHECK_FALSE(d2.contains({0.0, 7.0}));  // left side of the large rectangle only
    CHECK_FALSE(d2.contains({-1.0, 7.0}));
    CHECK_FALSE(d2.contains({8 * pi, 0.0}));
    CHECK_FALSE(d2.contains({30.0, 0.0}));
  }
  SECTION("signed distance and inradius") {
    const auto r = DomainSpec::rect(0, 4, 0, 2);
    CHECK(r.signed_distance({2, 1}) == Catch::Approx(-1.0));
    CHECK(r.signed_distance({6, 1}) == Catch::Approx(2.0));
    CHECK(d2.inradius_about(0.0) == Catch::Approx(2 * pi));
    CHECK(DomainSpec::disc({1, 0}, 3).inradius_about(0.0) == Catch::Approx(2.0));
  }
  SECTION("closure containment") {
    CHECK(DomainSpec::disc(0.0, 1).closure_within(DomainSpec::disc(0.0, 2)));
    CHECK_FALSE(DomainSpec::disc(0.0, 2).closure_within(DomainSpec::disc(0.0, 2)));
    CHECK(DomainSpec::rect(0, 1, 0, 1).closure_within(DomainSpec::rect(-1, 2, -1, 2)));
    CHECK_FALSE(DomainSpec::rect(0, 1, 0, 1).closure_within(DomainSpec::rect(0, 2, -1, 2)));
    // The left side of the large rectangle reaches beyond the small one of the next domain.
    CHECK_FALSE(ex51_domain(2).closure_within(ex51_domain(3)));
    CHECK(ex52_domain(0).closure_within(ex52_domain(1)));
  }
}

TEST_CASE("boundary sampling", "[curve]") {
  SECTION("unit disc at density 10") {
    const auto c = boundary(DomainSpec::disc(0.0, 1.0), 10.0);
    CHECK(c.size() >= 62);
    CHECK(c.closed);
    for (cplx p : c.points) CHECK(std::abs(std::abs(p) - 1.0) < 1e-15);
    CHECK(geom::polygon_signed_area(c.points) > 0.0);
    CHECK(winding_number(c, 0.0, 1e-9) == 1);
  }
  SECTION("unit square at density 1 is its four corners") {
    const auto c = boundary(DomainSpec::rect(0, 1, 0, 1), 1.0);
    REQUIRE(c.size() == 4);
    CHECK(same_vertex_cycle(c.points, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 1e-15));
  }
  SECTION("consecutive samples are distinct") {
    const auto c = boundary(ex51_domain(3), 2.0);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(c.points[k] != c.points[(k + 1) % c.size()]);
  }
  CHECK_THROWS_AS(boundary(DomainSpec::disc(0.0, 1.0), 0.0), InvalidArgument);
}

TEST_CASE("image curves", "[curve]") {
  const auto unit = boundary(DomainSpec::disc(0.0, 1.0), 10.0);
  SECTION("identity keeps the curve") {
    const auto img = image_curve(parse("z"), unit);
    for (cplx p : img.points) CHECK(std::abs(std::abs(p) - 1.0) < 1e-15);
    CHECK(winding_number(img, 0.0, 1e-9) == 1);
  }
  SECTION("squaring wraps the unit circle twice") {
    const auto img = image_curve(parse("z^2"), unit);
    for (cplx p : img.points) CHECK(std::abs(std::abs(p) - 1.0) < 1e-14);
    CHECK(winding_number(img, 0.0, 1e-9) == 2);
    for (std::size_t k = 0; k < img.size(); ++k) {
      CHECK(img.points[k] != img.points[(k + 1) % img.size()]);
      CHECK(std::abs(img.points[k] - img.points[(k + 1) % img.size()]) <= 0.05 + 1e-12);
    }
  }
  SECTION("top side of D_2 maps left of the axis and below -4 pi") {
    const auto f = parse("-10*z*exp(-z)-0.5*z");
    for (int k = 0; k <= 4000; ++k) {
      const cplx z(8 * pi * k / 4000.0, 8 * pi);
      const cplx w = f(z);
      CHECK(w.real() <= 1e-12 * std::abs(w));
      CHECK(w.imag() < -4 * pi);
    }
  }
  SECTION("point budget") {
    ImageCurveOptions o;
    o.max_step = 1e-6;
    o.max_points = 500;
    try {
      image_curve(parse("z^2"), unit, o);
      FAIL("expected the budget to run out");
    } catch (const RefinementBudgetExceeded& e) {
      CHECK(e.partial().budget_hit);
      CHECK(e.partial().size() > 0);
    }
  }
}

TEST_CASE("winding numbers", "[curve]") {
  const auto c = circle(0.0, 1.0, 64);
  CHECK(winding_number(c, 0.0, 1e-9) == 1);
  CHECK(winding_number(c, 2.0, 1e-9) == 0);
  CHECK_THROWS_AS(winding_number(c, 1.0, 1e-9), CurveTooClose);
  CHECK_THROWS_AS(winding_number(c, cplx(0.999, 0.0), 0.01), CurveTooClose);
  SECTION("a coarse curve with a generator is refined") {
    auto coarse = boundary(DomainSpec::disc(0.0, 1.0), 0.4);  // three samples
    REQUIRE(coarse.size() == 3);
    // Six image samples a third of a turn apart: every increment needs refinement.
    const auto img = image_curve(parse("z^2"), coarse, {.max_step = 10.0});
    REQUIRE(img.size() == 6);
    CHECK(winding_number(img, 0.0, 1e-9) == 2);
  }
}

TEST_CASE("winding numbers count polynomial roots", "[curve][oracle]") {
  for (const auto& wc : oracle::winding_cases(50)) {
    INFO(oracle::polynomial_source(wc.coeffs) << " rect " << wc.x0 << "," << wc.x1 << "," << wc.y0 << "," << wc.y1
                                              << " w " << wc.w);
    const auto p = parse(oracle::polynomial_source(wc.coeffs));
    ImageCurveOptions o;
    o.target = DomainSpec::disc(wc.w, 1e-9);
    const auto img = image_curve(p, boundary(DomainSpec::rect(wc.x0, wc.x1, wc.y0, wc.y1), 20.0), o);
    CHECK(winding_number(img, wc.w, 1e-12) == wc.expected);
  }
}

TEST_CASE("winding number symmetries", "[curve][property]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto f = parse("z^3-z+0.25");
  const auto img = image_curve(f, boundary(DomainSpec::rect(-1.5, 1.5, -1.2, 1.3), 20.0), {.max_step = 0.01});
  const SampledCurve fwd = polyline(img.points);
  std::vector<cplx> rev_pts(img.points.rbegin(), img.points.rend());
  const SampledCurve rev = polyline(rev_pts);
  for (int k = 0; k < 40; ++k) {
    const cplx w(u(rng), u(rng));
    const cplx shift(u(rng) * 10, u(rng) * 10);
    int base = 0;
    try {
      base = winding_number(fwd, w, 1e-3);
    } catch (const CurveTooClose&) {
      continue;
    }
    CHECK(winding_number(rev, w, 1e-3) == -base);
    std::vector<cplx> moved = img.points;
    for (auto& p : moved) p += shift;
    CHECK(winding_number(polyline(moved), w + shift, 1e-3) == base);
  }
}

TEST_CASE("surrounding", "[surround]") {
  SECTION("circle of radius 2 around the unit disc") {
    const auto rep = surrounds(circle(0.0, 2.0, 256), DomainSpec::disc(0.0, 1.0), 5);
    CHECK(rep.verdict);
    CHECK(rep.min_distance == Catch::Approx(1.0).epsilon(1e-3));
    CHECK(rep.probes_tested >= 1);
    for (const auto& pw : rep.winding_values) CHECK(pw.winding == 1);
  }
  SECTION("circle of radius 2 far from the disc") {
    const auto rep = surrounds(circle(0.0, 2.0, 256), DomainSpec::disc(5.0, 1.0), 5);
    CHECK_FALSE(rep.verdict);
    for (const auto& pw : rep.winding_values) CHECK(pw.winding == 0);
  }
  SECTION("a curve crossing the domain") {
    const auto rep = surrounds(circle(0.0, 1.0, 256), DomainSpec::disc(1.0, 0.5), 5);
    CHECK_FALSE(rep.verdict);
    CHECK(rep.min_distance < 0.0);
  }
  SECTION("disagreeing windings fail") {
    // A figure-eight winds +1 around one lobe and -1 around the other.
    std::vector<cplx> eight;
    for (int k = 0; k < 400; ++k) {
      const double t = 2 * pi * k / 400;
      eight.push_back({3 * std::sin(t), 1.5 * std::sin(2 * t)});
    }
    const auto rep = surrounds(polyline(eight), DomainSpec::rect(-2.5, 2.5, -0.3, 0.3), 4);
    CHECK_FALSE(rep.verdict);
  }
  CHECK(probe_lattice(DomainSpec::rect(0, 1, 0, 1), 5).size() == 25);
  CHECK(probe_lattice(DomainSpec::disc(0.0, 1.0), 1).size() == 1);
}

TEST_CASE("nested surround checks", "[surround]") {
  SECTION("the two-rectangle family, n = 2..5") {
    const auto rep = check_theorem31(parse("-10*z*exp(-z)-0.5*z"), domain_range(ex51_domain, 2, 5));
    CHECK(rep.condition_a);
    CHECK(rep.condition_b_proxy);
    REQUIRE(rep.pairs.size() == 3);
    REQUIRE(rep.inradii.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(rep.inradii[k] == Catch::Approx((k + 2) * pi));
    for (const auto& p : rep.pairs) {
      CHECK(p.report.verdict);
      CHECK(p.report.min_distance > 0.0);
    }
    CHECK_FALSE(rep.horizon_note.empty());
  }
  SECTION("sin z on discs 1, 2, 3") {
    const auto rep = check_theorem31(parse("sin(z)"),
                                     {DomainSpec::disc(0.0, 1), DomainSpec::disc(0.0, 2), DomainSpec::disc(0.0, 3)});
    CHECK_FALSE(rep.condition_a);
    // The image of the unit circle crosses [-1, 1], which lies inside the disc of radius 2.
    const auto img = image_curve(parse("sin(z)"), boundary(DomainSpec::disc(0.0, 1.0), 10.0));
    CHECK(std::any_of(img.points.begin(), img.points.end(), [](cplx w) { return std::abs(w) < 2.0; }));
  }
  SECTION("z^2 on discs 2, 4, 16") {
    const auto rep = check_theorem31(parse("z^2"),
                                     {DomainSpec::disc(0.0, 2), DomainSpec::disc(0.0, 4), DomainSpec::disc(0.0, 16)});
    CHECK(rep.verdict());
  }
  CHECK_THROWS_AS(check_theorem31(parse("z"), {DomainSpec::disc(0.0, 1)}), InvalidArgument);
}

TEST_CASE("strongly polynomial-like checks", "[surround]") {
  SECTION("cos z + z on D_0..D_3") {
    const auto rep = check_spl(parse("cos(z)+z"), domain_range(ex52_domain, 0, 3));
    CHECK(rep.condition_i);
    CHECK(rep.condition_iii);
    CHECK(rep.condition_ii_proxy);
    REQUIRE(rep.checks.size() == 4);
    for (const auto& c : rep.checks) CHECK(c.own.report.verdict);
  }
  SECTION("sin z on discs 1, 2, 3") {
    const auto rep = check_spl(parse("sin(z)"),
                               {DomainSpec::disc(0.0, 1), DomainSpec::disc(0.0, 2), DomainSpec::disc(0.0, 3)});
    CHECK_FALSE(rep.condition_i);
  }
  SECTION("z^2 on discs 2, 8, 128") {
    const auto rep = check_spl(parse("z^2"),
                               {DomainSpec::disc(0.0, 2), DomainSpec::disc(0.0, 8), DomainSpec::disc(0.0, 128)});
    CHECK(rep.condition_i);
    CHECK(rep.condition_iii);
  }
}

TEST_CASE("two-rectangle family: the right side maps close to -z/2", "[surround][property]") {
  const auto f = parse("-10*z*exp(-z)-0.5*z");
  double worst = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const cplx z(8 * pi, -8 * pi + 16 * pi * k / 2000.0);
    worst = std::max(worst, std::abs(f(z) + 0.5 * z));
  }
  CHECK(worst < 1e-3);
  CHECK(40 * pi * std::sqrt(2.0) * std::exp(-4 * pi) < 1e-3);
}

TEST_CASE("cos z + z: horizontal sides map into the annulus", "[surround][property]") {
  const auto f = parse("cos(z)+z");
  for (int n = 0; n <= 3; ++n) {
    const double centre = 0.5 * std::exp(2 * (n + 1) * pi), half = 4 * (n + 1) * pi;
    const double x0 = -(2 * n + 2.75) * pi, x1 = (2 * n + 2.25) * pi, y = 2 * (n + 1) * pi;
    for (int k = 0; k <= 1000; ++k) {
      const double x = x0 + (x1 - x0) * k / 1000.0;
      for (double s : {-1.0, 1.0}) {
        const double m = std::abs(f({x, s * y}));
        CHECK(m > (centre - half) * (1 - 1e-6));
        CHECK(m < (centre + half) * (1 + 1e-6));
      }
    }
  }
}
