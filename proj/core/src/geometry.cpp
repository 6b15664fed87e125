#include "rsslink/geometry.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace rsslink {

LinkGeometry::LinkGeometry(Point2D tx, Point2D rx, std::vector<Channel> channels)
    : tx_(tx), rx_(rx), d_los_(distance(tx, rx)), channels_(std::move(channels)) {
  if (!std::isfinite(tx_.x) || !std::isfinite(tx_.y) || !std::isfinite(rx_.x) ||
      !std::isfinite(rx_.y)) {
    throw std::invalid_argument("link endpoints must be finite");
  }
  if (d_los_ <= 0.0) {
    throw std::invalid_argument("TX and RX must not coincide");
  }
  std::set<int> seen;
  for (const auto& c : channels_) {
    if (c.wavelength_m <= 0.0) {
      throw std::invalid_argument("channel wavelength must be positive");
    }
    if (!seen.insert(c.index).second) {
      throw std::invalid_argument("duplicate channel index");
    }
  }
}

LinkFrame link_frame(const LinkGeometry& link, Point2D p) {
  const Point2D u = link.direction();
  const Point2D d = p - link.tx();
  return {dot(u, d), cross(u, d)};
}

void HumanEllipse::validate() const {
  if (!(a_semi_minor > 0.0) || !(a_semi_minor <= b_semi_major)) {
    throw std::invalid_argument("require 0 < A <= B");
  }
  if (psi0 < 0.0 || psi0 > 1.0) throw std::invalid_argument("psi0 in [0,1]");
  if (eps_r < 1.0) throw std::invalid_argument("eps_r >= 1");
  if (rho < 0.0) throw std::invalid_argument("rho >= 0");
  if (!(eta > 0.0)) throw std::invalid_argument("eta > 0");
}

Point2D HumanEllipse::boundary(double t) const {
  const double ex = a_semi_minor * std::cos(t);
  const double ey = b_semi_major * std::sin(t);
  const double co = std::cos(orientation), si = std::sin(orientation);
  return {center.x + co * ex - si * ey, center.y + si * ex + co * ey};
}

Point2D HumanEllipse::tangent(double t) const {
  const double ex = -a_semi_minor * std::sin(t);
  const double ey = b_semi_major * std::cos(t);
  const double co = std::cos(orientation), si = std::sin(orientation);
  Point2D v{co * ex - si * ey, si * ex + co * ey};
  const double n = norm(v);
  return {v.x / n, v.y / n};
}

bool HumanEllipse::contains(Point2D p) const {
  const Point2D d = p - center;
  const double co = std::cos(orientation), si = std::sin(orientation);
  const double lx = co * d.x + si * d.y;
  const double ly = -si * d.x + co * d.y;
  const double qa = lx / a_semi_minor;
  const double qb = ly / b_semi_major;
  return qa * qa + qb * qb <= 1.0;
}

double excess_path_length(const LinkGeometry& link, Point2D p) {
  const double d = distance(link.tx(), p) + distance(link.rx(), p) - link.los_distance();
  return std::max(d, 0.0);
}

double fresnel_radius(int n, double lambda_c, double d_tx, double d_rx) {
  if (n <= 0 || lambda_c <= 0.0 || d_tx <= 0.0 || d_rx <= 0.0) {
    throw std::invalid_argument("fresnel_radius: all arguments must be positive");
  }
  return std::sqrt(n * lambda_c * d_tx * d_rx / (d_tx + d_rx));
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

}  // namespace

ReflectionSolution reflection_point(const LinkGeometry& link,
                                    const HumanEllipse& ellipse,
                                    const ReflectionSearchOptions& opts) {
  const LinkFrame cf = link_frame(link, ellipse.center);
  const double tol_line = 1e-9 * std::max(1.0, link.los_distance());
  if (std::abs(cf.perp) < tol_line) {
    throw degenerate_geometry_error("ellipse center lies on the LoS line");
  }
  const double side = cf.perp > 0.0 ? 1.0 : -1.0;
  const Point2D u = link.direction();
  const Point2D tx = link.tx();

  auto same_side = [&](Point2D p) { return side * cross(u, p - tx) > 0.0; };
  auto delta = [&](double t) {
    const Point2D p = ellipse.boundary(t);
    if (!same_side(p)) return std::numeric_limits<double>::infinity();
    return excess_path_length(link, p);
  };

  // Coarse scan over the boundary parameter.
  const int n = std::max(8, opts.coarse_samples);
  const double dt = kTwoPi / n;
  double best_t = 0.0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    const double v = delta(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  if (!std::isfinite(best_v)) {
    throw degenerate_geometry_error("no boundary point on the center side of the LoS");
  }

  // Golden-section refinement within the bracketing grid cells.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_t - dt;
  double hi = best_t + dt;
  // Parameter tolerance mapped from the metric tolerance.
  const double tol_t = opts.tolerance / std::max(ellipse.a_semi_minor, ellipse.b_semi_major);
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = delta(c), fd = delta(d);
  while (hi - lo > tol_t) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = delta(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = delta(d);
    }
  }
  double t_min = 0.5 * (lo + hi);
  if (!std::isfinite(delta(t_min))) t_min = best_t;

  ReflectionSolution sol;
  sol.point = ellipse.boundary(t_min);
  sol.excess_path = excess_path_length(link, sol.point);
  const Point2D inc = sol.point - tx;
  const Point2D tan = ellipse.tangent(t_min);
  const double c_ang = std::abs(dot(inc, tan)) / norm(inc);
  sol.grazing_angle = std::acos(std::clamp(c_ang, 0.0, 1.0));
  return sol;
}

}  // namespace rsslink
