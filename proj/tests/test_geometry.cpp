#include <doctest.h>

#include <cmath>
#include <random>

#include "rsslink/geometry.hpp"
#include "rsslink/simulate.hpp"

using namespace rsslink;

namespace {

LinkGeometry make_link(Point2D tx, Point2D rx) {
  return LinkGeometry(tx, rx, ieee802154_channels(1));
}

// Independent oracle: dense scan of the boundary parameterization.
double brute_force_delta(const LinkGeometry& link, const HumanEllipse& e, int n) {
  const Point2D u = link.direction();
  const LinkFrame cf = link_frame(link, e.center);
  const double side = cf.perp > 0.0 ? 1.0 : -1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * i / n;
    const Point2D p = e.boundary(t);
    if (side * cross(u, p - link.tx()) <= 0.0) continue;
    best = std::min(best, excess_path_length(link, p));
  }
  return best;
}

}  // namespace

TEST_CASE("link geometry validation") {
  CHECK_THROWS_AS(make_link({0, 0}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(LinkGeometry({0, 0}, {1, 0}, {{1, 0.12}, {1, 0.13}}), std::invalid_argument);
  CHECK_THROWS_AS(LinkGeometry({0, 0}, {1, 0}, {{1, -0.12}}), std::invalid_argument);
  const auto link = make_link({0, 0}, {3, 0});
  CHECK(link.los_distance() == doctest::Approx(3.0));
}

TEST_CASE("excess path length") {
  const auto link = make_link({0, 0}, {3, 0});

  SUBCASE("zero on the LoS segment") {
    CHECK(excess_path_length(link, {1.5, 0.0}) == doctest::Approx(0.0));
    CHECK(excess_path_length(link, {0.0, 0.0}) == doctest::Approx(0.0));
  }
  SUBCASE("hand-evaluated off-axis point") {
    CHECK(excess_path_length(link, {1.5, 1.0}) ==
          doctest::Approx(2.0 * std::sqrt(1.5 * 1.5 + 1.0) - 3.0).epsilon(1e-12));
  }
  SUBCASE("collinear exterior point") {
    CHECK(excess_path_length(link, {-1.0, 0.0}) == doctest::Approx(2.0));
  }
  SUBCASE("zero iff on segment") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 4.0);
    for (int i = 0; i < 1000; ++i) {
      const Point2D p{u(rng), u(rng)};
      const double d = excess_path_length(link, p);
      const bool on_segment =
          std::abs(p.y) < 1e-12 && p.x >= 0.0 && p.x <= 3.0;
      if (on_segment) {
        CHECK(d == doctest::Approx(0.0));
      } else {
        CHECK(d > 0.0);
      }
    }
  }
}

TEST_CASE("fresnel radius") {
  CHECK(fresnel_radius(1, 0.1229, 1.5, 1.5) == doctest::Approx(0.30361).epsilon(1e-4));
  // sqrt(n) scaling
  CHECK(fresnel_radius(4, 0.1229, 1.5, 1.5) ==
        doctest::Approx(2.0 * fresnel_radius(1, 0.1229, 1.5, 1.5)));
  // vanishes at the transceiver
  CHECK(fresnel_radius(1, 0.1229, 1e-9, 3.0) < 1e-4);
  CHECK_THROWS_AS(fresnel_radius(0, 0.1, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fresnel_radius(1, -0.1, 1.0, 1.0), std::invalid_argument);

  SUBCASE("symmetric and maximal at the midpoint") {
    const double total = 3.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, total - 0.1);
    const double mid = fresnel_radius(1, 0.12, total / 2, total / 2);
    for (int i = 0; i < 200; ++i) {
      const double d = u(rng);
      CHECK(fresnel_radius(1, 0.12, d, total - d) ==
            doctest::Approx(fresnel_radius(1, 0.12, total - d, d)));
      CHECK(fresnel_radius(1, 0.12, d, total - d) <= mid + 1e-12);
    }
  }
}

TEST_CASE("reflection point") {
  const auto link = make_link({0, 0}, {3, 0});

  SUBCASE("circle on the perpendicular bisector") {
    HumanEllipse e;
    e.center = {1.5, 0.8};
    e.a_semi_minor = e.b_semi_major = 0.2;
    const auto sol = reflection_point(link, e);
    // By symmetry the reflection point is on the bisector.
    CHECK(sol.point.x == doctest::Approx(1.5).epsilon(1e-6));
    const double expected = 2.0 * std::sqrt(1.5 * 1.5 + 0.6 * 0.6) - 3.0;
    CHECK(sol.excess_path == doctest::Approx(expected).epsilon(1e-9));
    // Point lies on the boundary.
    const double dx = (sol.point.x - e.center.x) / e.a_semi_minor;
    const double dy = (sol.point.y - e.center.y) / e.b_semi_major;
    CHECK(dx * dx + dy * dy == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("matches brute-force boundary search") {
    HumanEllipse e;
    e.a_semi_minor = e.b_semi_major = 0.2;
    e.center = {1.5, 0.5};
    const auto sol = reflection_point(link, e);
    CHECK(std::abs(sol.excess_path - brute_force_delta(link, e, 1000000)) < 1e-6);
  }

  SUBCASE("minimum over random boundary points") {
    HumanEllipse e;
    e.center = {1.0, -0.7};
    e.a_semi_minor = 0.11;
    e.b_semi_major = 0.2;
    const auto sol = reflection_point(link, e);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI);
    const Point2D u = link.direction();
    int checked = 0;
    while (checked < 1000) {
      const Point2D q = e.boundary(ut(rng));
      if (cross(u, q - link.tx()) >= 0.0) continue;  // wrong side of the line
      ++checked;
      CHECK(sol.excess_path <= excess_path_length(link, q) + 1e-12);
    }
  }

  SUBCASE("far-field growth") {
    HumanEllipse e;
    e.a_semi_minor = e.b_semi_major = 0.2;
    double prev = 0.0;
    for (double yc = 1.0; yc < 60.0; yc *= 2.0) {
      e.center = {1.5, yc};
      const auto sol = reflection_point(link, e);
      CHECK(sol.excess_path > prev);
      prev = sol.excess_path;
    }
    // delta ~ 2|y_c| - d_los for large |y_c|
    CHECK(prev > 2.0 * 30.0 - 3.0 - 1.0);
  }

  SUBCASE("continuity in the ellipse center") {
    HumanEllipse e;
    e.a_semi_minor = 0.11;
    e.b_semi_major = 0.2;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(0.2, 2.8), uy(0.3, 1.5);
    for (int i = 0; i < 50; ++i) {
      e.center = {ux(rng), uy(rng)};
      const double d0 = reflection_point(link, e).excess_path;
      e.center.x += 1e-6;
      const double d1 = reflection_point(link, e).excess_path;
      CHECK(std::abs(d1 - d0) < 1e-4);
    }
  }

  SUBCASE("grazing angle convention") {
    HumanEllipse e;
    e.a_semi_minor = e.b_semi_major = 0.2;
    e.center = {1.5, 0.5};
    const auto sol = reflection_point(link, e);
    CHECK(sol.grazing_angle >= 0.0);
    CHECK(sol.grazing_angle <= M_PI / 2.0);
    // Moving the circle far away pushes the geometry toward normal incidence
    // of the bisector; near the link the angle is shallower.
    e.center = {1.5, 10.0};
    CHECK(reflection_point(link, e).grazing_angle > sol.grazing_angle);
  }

  SUBCASE("degenerate center on the LoS line") {
    HumanEllipse e;
    e.a_semi_minor = e.b_semi_major = 0.2;
    e.center = {4.0, 0.0};
    CHECK_THROWS_AS(reflection_point(link, e), degenerate_geometry_error);
  }

  SUBCASE("orientation rotates the boundary") {
    HumanEllipse e;
    e.a_semi_minor = 0.11;
    e.b_semi_major = 0.2;
    e.center = {1.0, 0.6};
    const double d0 = reflection_point(link, e).excess_path;
    e.orientation = M_PI / 2.0;
    const double d90 = reflection_point(link, e).excess_path;
    // Rotating by 90 degrees swaps the axes: nearest approach differs.
    CHECK(d0 != doctest::Approx(d90).epsilon(1e-6));
    CHECK(d90 == doctest::Approx(brute_force_delta(link, e, 1000000)).epsilon(1e-4));
  }
}

TEST_CASE("link frame") {
  const auto link = make_link({0, 0}, {0, 3});
  const LinkFrame f = link_frame(link, {-0.5, 1.0});
  CHECK(f.along == doctest::Approx(1.0));
  CHECK(f.perp == doctest::Approx(0.5));  // left of TX->RX
}
