#include "rsslink/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsslink {

BenchmarkParams BenchmarkParams::exponential() {
  return {Kind::Exponential, -16.77, 0.026, 0.0, 1.0};
}

BenchmarkParams BenchmarkParams::exponential_rayleigh() {
  return {Kind::ExponentialRayleigh, -15.77, 0.065, 142.71, 0.010};
}

double fresnel_reflection_coeff(double theta_i, double eps_r) {
  const double s = std::sin(theta_i);
  const double c = std::cos(theta_i);
  const double root = std::sqrt(eps_r - c * c);
  if (s + root == 0.0) return 0.0;  // eps_r = 1 at grazing incidence
  return (s - root) / (s + root);
}

double amplitude_ratio(double psi0, double psi_perp, double d_los, double delta_r,
                       double eta) {
  return psi0 * psi_perp * std::pow(d_los / (d_los + delta_r), eta / 2.0);
}

double reflection_gain_from(double psi_signed, double phi_r) {
  // Eq. assumes 0 < psi < 1; a negative amplitude ratio is equivalent to a
  // pi phase offset.
  double psi = psi_signed;
  if (psi < 0.0) {
    psi = -psi;
    phi_r += M_PI;
  }
  return 10.0 * std::log10(psi * psi + 2.0 * psi * std::cos(phi_r) + 1.0);
}

double reflection_gain(const LinkGeometry& link, const HumanEllipse& ellipse,
                       double lambda_c, const ReflectionSearchOptions& opts) {
  const ReflectionSolution sol = reflection_point(link, ellipse, opts);
  const double psi_perp = fresnel_reflection_coeff(sol.grazing_angle, ellipse.eps_r);
  const double psi = amplitude_ratio(ellipse.psi0, psi_perp, link.los_distance(),
                                     sol.excess_path, ellipse.eta);
  const double phi_r = 2.0 * M_PI * sol.excess_path / lambda_c;
  return reflection_gain_from(psi, phi_r);
}

double ellipse_projection(const HumanEllipse& ellipse, double omega, double x_prime) {
  const double A = ellipse.a_semi_minor;
  const double B = ellipse.b_semi_major;
  const double co = std::cos(omega), si = std::sin(omega);
  const double a2 = A * A * co * co + B * B * si * si;
  const double x2 = x_prime * x_prime;
  if (x2 > a2) return 0.0;
  return 2.0 * ellipse.rho * A * B / a2 * std::sqrt(a2 - x2);
}

double shadowing_gain(const LinkGeometry& link, const HumanEllipse& ellipse,
                      double lambda_c) {
  const LinkFrame f = link_frame(link, ellipse.center);
  if (f.along <= 0.0 || f.along >= link.los_distance()) {
    throw std::domain_error("shadowing_gain: center does not project onto the open LoS segment");
  }
  const double d1 = fresnel_radius(1, lambda_c, f.along, link.los_distance() - f.along);
  const double kappa = ellipse.a_semi_minor / d1;
  return -kappa * ellipse_projection(ellipse, 0.0, f.perp);
}

double three_state_gain(const LinkGeometry& link, const HumanEllipse& ellipse,
                        double lambda_c, LinkState state,
                        const ReflectionSearchOptions& opts) {
  switch (state) {
    case LinkState::NonFading:
      return 0.0;
    case LinkState::Reflection:
      return reflection_gain(link, ellipse, lambda_c, opts);
    case LinkState::Shadowing:
      return shadowing_gain(link, ellipse, lambda_c);
  }
  return 0.0;
}

double exponential_gain(double delta, const BenchmarkParams& params) {
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  return params.phi1 * std::exp(-delta / params.lambda1);
}

double exponential_rayleigh_gain(double delta, const BenchmarkParams& params) {
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  return params.phi1 * std::exp(-delta / params.lambda1) +
         params.phi2 * delta * std::exp(-delta * delta / params.lambda2);
}

double benchmark_gain(double delta, const BenchmarkParams& params) {
  return params.kind == BenchmarkParams::Kind::Exponential
             ? exponential_gain(delta, params)
             : exponential_rayleigh_gain(delta, params);
}

LinkState geometric_state(const LinkGeometry& link, Point2D center,
                          double shadow_half_width) {
  const LinkFrame f = link_frame(link, center);
  if (std::abs(f.perp) <= shadow_half_width && f.along > 0.0 &&
      f.along < link.los_distance()) {
    return LinkState::Shadowing;
  }
  return LinkState::Reflection;
}

void GainPredictor::predict(Point2D center, std::vector<double>& out) const {
  HumanEllipse e = ellipse;
  e.center = center;
  const auto& channels = link->channels();
  if (geometric_state(*link, center, shadow.a_semi_minor) == LinkState::Shadowing) {
    HumanEllipse s = shadow;
    s.center = center;
    for (const auto& ch : channels) out.push_back(shadowing_gain(*link, s, ch.wavelength_m));
    return;
  }
  double psi = 0.0;
  double delta_r = 0.0;
  try {
    const ReflectionSolution sol = reflection_point(*link, e, opts);
    const double psi_perp = fresnel_reflection_coeff(sol.grazing_angle, e.eps_r);
    psi = amplitude_ratio(e.psi0, psi_perp, link->los_distance(), sol.excess_path, e.eta);
    delta_r = sol.excess_path;
  } catch (const degenerate_geometry_error&) {
    // Center on the LoS line but outside the segment: head-on reflection.
    delta_r = excess_path_length(*link, center);
    const double psi_perp = fresnel_reflection_coeff(M_PI / 2.0, e.eps_r);
    psi = amplitude_ratio(e.psi0, psi_perp, link->los_distance(), delta_r, e.eta);
  }
  for (const auto& ch : channels) {
    out.push_back(reflection_gain_from(psi, 2.0 * M_PI * delta_r / ch.wavelength_m));
  }
}

}  // namespace rsslink
