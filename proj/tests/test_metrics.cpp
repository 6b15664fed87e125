#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rsslink/metrics.hpp"

using namespace rsslink;

TEST_CASE("coordinate mae and error std") {
  const std::vector<Point2D> truth{{0, 0}, {1, 1}, {2, 0}};
  const std::vector<Point2D> est{{0.1, -0.2}, {0.9, 1.0}, {2.3, 0.4}};
  const auto [ex, ey] = mae(truth, est);
  CHECK(ex == doctest::Approx((0.1 + 0.1 + 0.3) / 3.0).epsilon(1e-12));
  CHECK(ey == doctest::Approx((0.2 + 0.0 + 0.4) / 3.0).epsilon(1e-12));

  const auto [sx, sy] = error_std(truth, est);
  // Population std of {0.1, 0.1, 0.3} and {0.2, 0.0, 0.4}.
  CHECK(sx == doctest::Approx(std::sqrt(2.0) / 15.0).epsilon(1e-9));
  CHECK(sy == doctest::Approx(std::sqrt(0.08 / 3.0)).epsilon(1e-9));

  CHECK_THROWS_AS(mae(truth, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(mae({}, {}), std::invalid_argument);

  SUBCASE("perfect estimates") {
    const auto [zx, zy] = mae(truth, truth);
    CHECK(zx == doctest::Approx(0.0));
    CHECK(zy == doctest::Approx(0.0));
  }
}

TEST_CASE("particle ratio") {
  HumanEllipse e;
  e.a_semi_minor = 0.11;
  e.b_semi_major = 0.2;
  e.center = {1.0, 1.0};

  SUBCASE("hand count") {
    // 2 of 4 inside (axis-aligned: |dx| <= 0.11, |dy| <= 0.2 on the axes).
    std::vector<Point2D> pts{{1.0, 1.0}, {1.05, 1.1}, {1.2, 1.0}, {1.0, 1.35}};
    CHECK(particle_ratio({pts}, {e}) == doctest::Approx(50.0));
  }
  SUBCASE("aggregates across steps") {
    std::vector<Point2D> all_in{{1.0, 1.0}, {1.0, 1.05}};
    std::vector<Point2D> all_out{{5.0, 5.0}, {6.0, 6.0}};
    CHECK(particle_ratio({all_in, all_out}, {e, e}) == doctest::Approx(50.0));
  }
  SUBCASE("orientation matters") {
    HumanEllipse rot = e;
    rot.orientation = M_PI / 2.0;  // minor axis now along y
    const Point2D p{1.0, 1.15};    // inside unrotated (dy < 0.2), outside rotated
    CHECK(particle_ratio({{p}}, {e}) == doctest::Approx(100.0));
    CHECK(particle_ratio({{p}}, {rot}) == doctest::Approx(0.0));
  }
  SUBCASE("rigid-motion invariance") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    std::vector<Point2D> pts;
    for (int i = 0; i < 500; ++i) pts.push_back({1.0 + u(rng), 1.0 + u(rng)});
    const double base = particle_ratio({pts}, {e});

    const double th = 0.7;
    const Point2D shift{3.0, -2.0};
    auto rotate = [&](Point2D p) {
      return Point2D{p.x * std::cos(th) - p.y * std::sin(th) + shift.x,
                     p.x * std::sin(th) + p.y * std::cos(th) + shift.y};
    };
    std::vector<Point2D> moved;
    for (const auto& p : pts) moved.push_back(rotate(p));
    HumanEllipse me = e;
    me.center = rotate(e.center);
    me.orientation = e.orientation + th;
    CHECK(particle_ratio({moved}, {me}) == doctest::Approx(base).epsilon(1e-12));
  }
  SUBCASE("misaligned histories throw") {
    CHECK_THROWS_AS(particle_ratio({{Point2D{0, 0}}}, {}), std::invalid_argument);
  }
  SUBCASE("empty history yields zero") {
    CHECK(particle_ratio({}, {}) == doctest::Approx(0.0));
  }
}

TEST_CASE("enhancement over the weakest model") {
  const auto out = enhancement({50.0, 60.0, 75.0});
  REQUIRE(out.size() == 3);
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(20.0));
  CHECK(out[2] == doctest::Approx(50.0));
  CHECK_THROWS_AS(enhancement({}), std::invalid_argument);
  // Order-independent of which entry is the minimum.
  const auto swapped = enhancement({75.0, 50.0, 60.0});
  CHECK(swapped[0] == doctest::Approx(50.0));
  CHECK(swapped[1] == doctest::Approx(0.0));
}

TEST_CASE("residual rms about zero") {
  // Residuals {0.4, -0.3, 0.2}: rms = sqrt(0.29 / 3).
  CHECK(residual_sigma({0.5, -0.2, 0.3}, {0.1, 0.1, 0.1}) ==
        doctest::Approx(std::sqrt(0.29 / 3.0)).epsilon(1e-12));
  // A constant bias is not removed.
  CHECK(residual_sigma({1.0, 1.0}, {0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(residual_sigma({1.0}, {1.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(residual_sigma({1.0}, {}), std::invalid_argument);
}

TEST_CASE("sensitivity area") {
  // Ellipse with foci at the transceivers: a = (d + delta)/2, c = d/2.
  SUBCASE("hand values for a 3 m link") {
    CHECK(sensitivity_area(3.0, 0.50) == doctest::Approx(4.955).epsilon(2e-3));
    CHECK(sensitivity_area(3.0, 0.15) == doctest::Approx(2.376).epsilon(2e-3));
    CHECK(sensitivity_area(3.0, 0.06) == doctest::Approx(1.449).epsilon(2e-3));
  }
  SUBCASE("monotone in both arguments") {
    double prev = 0.0;
    for (double delta = 0.05; delta < 1.0; delta += 0.05) {
      const double a = sensitivity_area(3.0, delta);
      CHECK(a > prev);
      prev = a;
    }
    CHECK(sensitivity_area(4.0, 0.5) > sensitivity_area(3.0, 0.5));
  }
  SUBCASE("small-delta asymptotics") {
    // b ~ sqrt(d delta / 2) so area ~ pi (d/2) sqrt(d delta / 2).
    const double d = 3.0, delta = 1e-6;
    const double approx = M_PI * (d / 2.0) * std::sqrt(d * delta / 2.0);
    CHECK(sensitivity_area(d, delta) == doctest::Approx(approx).epsilon(1e-3));
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(sensitivity_area(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sensitivity_area(3.0, -0.1), std::invalid_argument);
  }
}

TEST_CASE("track report json round trip") {
  TrackReport r;
  r.eps_x = 0.062;
  r.eps_y = 0.138;
  r.sigma_x = 0.021;
  r.sigma_y = 0.044;
  r.eps_pct = 41.5;
  r.eps_r = 12.7;
  r.sensitivity_area = 4.955;
  r.diverged = true;
  const auto s = TrackReport::from_json(r.to_json());
  CHECK(s.eps_x == r.eps_x);
  CHECK(s.eps_y == r.eps_y);
  CHECK(s.sigma_x == r.sigma_x);
  CHECK(s.sigma_y == r.sigma_y);
  CHECK(s.eps_pct == r.eps_pct);
  CHECK(s.eps_r == r.eps_r);
  CHECK(s.sensitivity_area == r.sensitivity_area);
  CHECK(s.diverged == r.diverged);
  CHECK_THROWS(TrackReport::from_json("{}"));
}

TEST_CASE("report table") {
  TrackReport a;
  a.eps_x = 0.062;
  a.eps_pct = 41.5;
  TrackReport b;
  b.eps_x = 0.1;
  const auto text = report_table({{"three-state", a}, {"exponential", b}});
  CHECK(text.find("three-state") != std::string::npos);
  CHECK(text.find("exponential") != std::string::npos);
  CHECK(text.find("6.20") != std::string::npos);   // eps_x in cm
  CHECK(text.find("41.50") != std::string::npos);  // particle percentage
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + rule + 2 rows
}
