#ifndef RSSLINK_PROPAGATION_HPP
#define RSSLINK_PROPAGATION_HPP

#include "rsslink/geometry.hpp"

namespace rsslink {

/// Temporal state of the propagation channel.
enum class LinkState { NonFading = 0, Reflection = 1, Shadowing = 2 };

/// Empirical benchmark gain models fitted in earlier literature.
struct BenchmarkParams {
  enum class Kind { Exponential, ExponentialRayleigh };
  Kind kind{Kind::Exponential};
  double phi1{0.0};      // dB, amplitude of the exponential term
  double lambda1{1.0};   // m, decay constant of the exponential term
  double phi2{0.0};      // dB/m, amplitude of the Rayleigh term
  double lambda2{1.0};   // m^2, decay constant of the Rayleigh term

  static BenchmarkParams exponential();           // -16.77 e^(-d/0.026)
  static BenchmarkParams exponential_rayleigh();  // -15.77 e^(-d/0.065) + 142.71 d e^(-d^2/0.010)
};

/// Fresnel coefficient for perpendicular E-field polarization at a dielectric
/// boundary; theta_i is the grazing angle. In [-1, 0] for eps_r >= 1.
double fresnel_reflection_coeff(double theta_i, double eps_r);

/// Amplitude of the reflected component relative to the LoS component,
/// including the excess path loss (d_los/(d_los+delta_r))^(eta/2).
double amplitude_ratio(double psi0, double psi_perp, double d_los, double delta_r,
                       double eta);

/// Reflection gain from precomputed amplitude ratio and phase.
double reflection_gain_from(double psi, double phi_r);

/// Single-bounce reflection model: gain in dB relative to the LoS signal.
double reflection_gain(const LinkGeometry& link, const HumanEllipse& ellipse,
                       double lambda_c, const ReflectionSearchOptions& opts = {});

/// Radon projection of the uniform attenuation ellipse along direction omega,
/// evaluated at offset x'. Zero outside |x'| <= a(omega).
double ellipse_projection(const HumanEllipse& ellipse, double omega, double x_prime);

/// Shadowing model: -kappa * P_0(x') with kappa = A/d_1 evaluated at the foot
/// of the person's perpendicular projection onto the LoS. The person center
/// must project onto the open LoS segment.
double shadowing_gain(const LinkGeometry& link, const HumanEllipse& ellipse,
                      double lambda_c);

/// Three-state gain: 0 (s1), reflection (s2) or shadowing (s3).
double three_state_gain(const LinkGeometry& link, const HumanEllipse& ellipse,
                        double lambda_c, LinkState state,
                        const ReflectionSearchOptions& opts = {});

double exponential_gain(double delta, const BenchmarkParams& params);
double exponential_rayleigh_gain(double delta, const BenchmarkParams& params);
double benchmark_gain(double delta, const BenchmarkParams& params);

/// State implied by the geometry alone: shadowing when the center is within
/// the shadow support of the open LoS segment, reflection otherwise. Used by
/// the tracker's weight function where an HMM estimate is not meaningful.
LinkState geometric_state(const LinkGeometry& link, Point2D center,
                          double shadow_half_width);

/// Per-link predicted observation for a hypothesized person position,
/// well defined everywhere in the plane. `shadow` carries the shadowing
/// model's own half-width (A = 0.2 m by default), `ellipse` the tracking
/// ellipse used for reflection.
struct GainPredictor {
  const LinkGeometry* link{nullptr};
  HumanEllipse ellipse;   // reflection model ellipse (A = 0.11 m)
  HumanEllipse shadow;    // shadowing model ellipse (A = 0.20 m)
  ReflectionSearchOptions opts{64, 1e-5};

  /// Gains for all channels of the link, appended to `out`.
  void predict(Point2D center, std::vector<double>& out) const;
};

}  // namespace rsslink

#endif
